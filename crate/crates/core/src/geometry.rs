//! Convexity in a direction (Royster–Ziegler functional) and subordination
//! of `z/f` to `(1 - z)(1 - lambda z)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::holomorphic::Holomorphic;
use crate::membership::{SamplingPlan, POLE_THRESHOLD};
use crate::tps::TruncatedSeries;
use crate::zoo::scalars::re_n_boundary;
use crate::zoo::AnalyticMap;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("f has a pole on the circle at z = {z}")]
    PoleOnCircle { z: Complex64 },
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("{name} = {value} is outside its domain")]
    Domain { name: &'static str, value: f64 },
}

/// `P(z) = e^{i(mu - gamma)} (1 - 2 z e^{-i mu} cos nu + z^2 e^{-2 i mu}) phi'(z)`.
pub fn rz_functional(phi: &dyn Holomorphic, mu: f64, nu: f64, gamma: f64, z: Complex64) -> Complex64 {
    let e = Complex64::from_polar(1.0, -mu);
    let poly = 1.0 - 2.0 * z * e * nu.cos() + z * z * e * e;
    Complex64::from_polar(1.0, mu - gamma) * poly * phi.derivative(z)
}

/// `(mu, nu)` search: `mu_points` angles in `[0, 2 pi)`, `nu_points` angles
/// spanning `[0, pi]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchGrid {
    pub mu_points: usize,
    pub nu_points: usize,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            mu_points: 128,
            nu_points: 65,
        }
    }
}

impl SearchGrid {
    pub fn mu(&self, j: usize) -> f64 {
        TAU * j as f64 / self.mu_points as f64
    }

    pub fn nu(&self, k: usize) -> f64 {
        if self.nu_points <= 1 {
            return 0.0;
        }
        PI * k as f64 / (self.nu_points - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateStatus {
    Certified,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCertificate {
    pub gamma: f64,
    pub mu: f64,
    pub nu: f64,
    /// Grid minimum of `Re P` for the reported `(mu, nu)`.
    pub min_re: f64,
    pub argmin: Complex64,
    pub re_p0: f64,
    pub tolerance: f64,
    pub grid: SamplingPlan,
    pub search: SearchGrid,
    pub status: CertificateStatus,
    pub note: String,
}

struct MuScan {
    /// First `nu` index passing, or the best one.
    nu_index: usize,
    min_re: f64,
    argmin: usize,
    certified: bool,
}

/// Searches `(mu, nu)` in row-major order (mu outer) and returns the first
/// pair whose grid minimum of `Re P` is at least `-tolerance` with
/// `Re P(0) > 0`; otherwise the pair with the largest minimum, `FAILED`.
pub fn certify_direction(
    phi: &dyn Holomorphic,
    gamma: f64,
    plan: &SamplingPlan,
    search: &SearchGrid,
    tolerance: f64,
) -> ConvexityCertificate {
    let points = plan.points();
    // Re P = Re(e^{i(mu-g)} phi') + Re(e^{-i(mu+g)} z^2 phi') - cos(nu) 2 Re(e^{-ig} z phi')
    let d: Vec<Complex64> = points.iter().map(|&z| phi.derivative(z)).collect();
    let rot = Complex64::from_polar(1.0, -gamma);
    let b: Vec<f64> = points.iter().zip(&d).map(|(&z, &dz)| 2.0 * (rot * z * dz).re).collect();
    let d0 = phi.derivative(Complex64::new(0.0, 0.0));

    let scans: Vec<MuScan> = (0..search.mu_points)
        .into_par_iter()
        .map(|j| {
            let mu = search.mu(j);
            let alpha = Complex64::from_polar(1.0, mu - gamma);
            let kappa = Complex64::from_polar(1.0, -mu - gamma);
            let a: Vec<f64> = points
                .iter()
                .zip(&d)
                .map(|(&z, &dz)| (alpha * dz).re + (kappa * z * z * dz).re)
                .collect();
            let re_p0_positive = (alpha * d0).re > 0.0;
            let mut best = MuScan {
                nu_index: 0,
                min_re: f64::NEG_INFINITY,
                argmin: 0,
                certified: false,
            };
            for k in 0..search.nu_points {
                let cn = search.nu(k).cos();
                let (mut m, mut at) = (f64::INFINITY, 0);
                for (i, (&ai, &bi)) in a.iter().zip(&b).enumerate() {
                    let v = ai - cn * bi;
                    if v < m {
                        m = v;
                        at = i;
                    }
                }
                if re_p0_positive && m >= -tolerance {
                    return MuScan {
                        nu_index: k,
                        min_re: m,
                        argmin: at,
                        certified: true,
                    };
                }
                if m > best.min_re {
                    best = MuScan {
                        nu_index: k,
                        min_re: m,
                        argmin: at,
                        certified: false,
                    };
                }
            }
            best
        })
        .collect();

    let (j, scan) = scans
        .iter()
        .enumerate()
        .find(|(_, s)| s.certified)
        .or_else(|| {
            scans
                .iter()
                .enumerate()
                .fold(None, |acc: Option<(usize, &MuScan)>, (j, s)| match acc {
                    Some((_, b)) if b.min_re >= s.min_re => acc,
                    _ => Some((j, s)),
                })
        })
        .expect("search grid is non-empty");
    let (mu, nu) = (search.mu(j), search.nu(scan.nu_index));
    let status = if scan.certified {
        CertificateStatus::Certified
    } else {
        CertificateStatus::Failed
    };
    ConvexityCertificate {
        gamma,
        mu,
        nu,
        min_re: scan.min_re,
        argmin: points[scan.argmin],
        re_p0: rz_functional(phi, mu, nu, gamma, Complex64::new(0.0, 0.0)).re,
        tolerance,
        grid: plan.clone(),
        search: *search,
        status,
        note: match status {
            CertificateStatus::Certified => "Re P >= -tolerance on the grid".into(),
            CertificateStatus::Failed => "no certificate found at resolution".into(),
        },
    }
}

/// Certificates for the certified directions among `gammas` equally spaced
/// angles in `[0, pi)`.
pub fn scan_directions(
    phi: &dyn Holomorphic,
    gammas: usize,
    plan: &SamplingPlan,
    search: &SearchGrid,
    tolerance: f64,
) -> Vec<ConvexityCertificate> {
    (0..gammas)
        .map(|i| PI * i as f64 / gammas as f64)
        .map(|g| certify_direction(phi, g, plan, search, tolerance))
        .filter(|c| c.status == CertificateStatus::Certified)
        .collect()
}

/// `(1 - lp)(1 + 4lp + l^2p^2 + (1 + lp)^2 x - 2lp x^2) / |1 + lp s^2|^4`
/// with `|s| = 1`, `x = Re(s^2)`, so `|1 + lp s^2|^2 = 1 + 2lp x + (lp)^2`.
pub fn convexity_quotient(lambda: f64, p: f64, x: f64) -> f64 {
    let lp = lambda * p;
    if 1.0 - lp == 0.0 {
        return 0.0;
    }
    let num = (1.0 - lp) * (1.0 + 4.0 * lp + lp * lp + (1.0 + lp).powi(2) * x - 2.0 * lp * x * x);
    let den = 1.0 + 2.0 * lp * x + lp * lp;
    num / (den * den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryChecks {
    pub lambda: f64,
    pub re_n_min: f64,
    pub re_n_argmin: f64,
    /// Analytic lower bound `(1 - lambda)^3` for `Re N`.
    pub re_n_bound: f64,
    pub quotient_min: f64,
    pub quotient_argmin: (f64, f64),
}

/// Grid minima of `Re N(e^{i theta})` over `n_theta` angles and of
/// [`convexity_quotient`] over `n_p x n_x` points of `(0, 1] x [-1, 1]`.
pub fn boundary_re_checks(
    lambda: f64,
    n_theta: usize,
    n_p: usize,
    n_x: usize,
) -> Result<BoundaryChecks, GeometryError> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(GeometryError::Domain {
            name: "lambda",
            value: lambda,
        });
    }
    let (mut re_n_min, mut re_n_argmin) = (f64::INFINITY, 0.0);
    for k in 0..n_theta.max(1) {
        let theta = TAU * k as f64 / n_theta.max(1) as f64;
        let v = re_n_boundary(lambda, theta).map_err(|_| GeometryError::Domain {
            name: "lambda",
            value: lambda,
        })?;
        if v < re_n_min {
            re_n_min = v;
            re_n_argmin = theta;
        }
    }
    let (mut qmin, mut qarg) = (f64::INFINITY, (0.0, 0.0));
    for i in 1..=n_p.max(1) {
        let p = i as f64 / n_p.max(1) as f64;
        for k in 0..n_x.max(2) {
            let x = -1.0 + 2.0 * k as f64 / (n_x.max(2) - 1) as f64;
            let v = convexity_quotient(lambda, p, x);
            if v < qmin {
                qmin = v;
                qarg = (p, x);
            }
        }
    }
    Ok(BoundaryChecks {
        lambda,
        re_n_min,
        re_n_argmin,
        re_n_bound: (1.0 - lambda).powi(3),
        quotient_min: qmin,
        quotient_argmin: qarg,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SubordinationStatus {
    Subordinate,
    NotSubordinate,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubordinationWitness {
    SchwarzSeries { series: TruncatedSeries },
    ModulusExcess { z: Complex64, modulus: f64 },
    BranchPoint { z: Complex64 },
    ContainmentViolation { z: Complex64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinationVerdict {
    pub lambda: f64,
    pub status: SubordinationStatus,
    pub witness: Option<SubordinationWitness>,
    pub max_abs_psi: f64,
    pub arg_max_psi: Complex64,
    /// Largest of the pointwise and series residuals of
    /// `(1 - psi)(1 - lambda psi) - z/f`.
    pub residual: f64,
    /// Largest gap between tracked values and the series of `psi` on the
    /// plan radii `<= 0.5`; a large gap means branch tracking went astray.
    pub series_gap: f64,
    pub diagnostics: Vec<String>,
}

/// Radial step of the branch tracking.
pub const TRACK_STEP: f64 = 1.0 / 1024.0;
/// `|disc|` below this flags a possible branch point.
pub const BRANCH_THRESHOLD: f64 = 1e-10;
const DOUBLE_ZERO_SLOPE: f64 = 1e-4;
const MODULUS_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-8;
const SERIES_GAP_TOL: f64 = 1e-6;

struct RayTrack {
    max_abs: f64,
    arg_max: Complex64,
    residual: f64,
    branch: Option<Complex64>,
    series_gap: f64,
    /// Tracked values at the plan radii, innermost first.
    samples: Vec<Complex64>,
}

fn track_ray(
    f: &AnalyticMap,
    lambda: f64,
    t: f64,
    radii: &[f64],
    check_radii: &[f64],
    plan_radii: &[f64],
    psi_series: &TruncatedSeries,
) -> RayTrack {
    let unit = Complex64::from_polar(1.0, t);
    let mut out = RayTrack {
        max_abs: 0.0,
        arg_max: Complex64::new(0.0, 0.0),
        residual: 0.0,
        branch: None,
        series_gap: 0.0,
        samples: Vec::with_capacity(plan_radii.len()),
    };
    let mut prev = Complex64::new(0.0, 0.0);
    let l1 = 1.0 + lambda;
    for &r in radii {
        let z = unit * r;
        let q = f.inverse(z);
        let disc = l1 * l1 - 4.0 * lambda * (1.0 - q);
        if disc.norm() < BRANCH_THRESHOLD
            && (4.0 * lambda * f.inverse_derivative(z)).norm() >= DOUBLE_ZERO_SLOPE
            && out.branch.is_none()
        {
            out.branch = Some(z);
        }
        let s = disc.sqrt();
        let (c1, c2) = ((l1 - s) / (2.0 * lambda), (l1 + s) / (2.0 * lambda));
        let psi = if (c1 - prev).norm() <= (c2 - prev).norm() {
            c1
        } else {
            c2
        };
        prev = psi;
        let m = psi.norm();
        if m > out.max_abs {
            out.max_abs = m;
            out.arg_max = z;
        }
        let res = ((1.0 - psi) * (1.0 - lambda * psi) - q).norm();
        out.residual = out.residual.max(res);
        if check_radii.contains(&r) {
            out.series_gap = out.series_gap.max((psi - psi_series.eval(z)).norm());
        }
        if plan_radii.contains(&r) {
            out.samples.push(psi);
        }
    }
    out
}

fn track_radii(plan: &SamplingPlan) -> Vec<f64> {
    let r_max = plan.r_max();
    let mut radii: Vec<f64> = (1..)
        .map(|k| k as f64 * TRACK_STEP)
        .take_while(|&r| r < r_max)
        .chain(plan.radii.iter().copied())
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

fn check_lambda(lambda: f64) -> Result<(), GeometryError> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(GeometryError::Domain {
            name: "lambda",
            value: lambda,
        })
    }
}

/// Branch-tracked values of `psi` at the plan grid points, in the order of
/// [`SamplingPlan::points`].
pub fn tracked_psi(f: &AnalyticMap, lambda: f64, plan: &SamplingPlan) -> Result<Vec<Complex64>, GeometryError> {
    check_lambda(lambda)?;
    let radii = track_radii(plan);
    let psi_series = schwarz_series(f, lambda);
    let tracks: Vec<RayTrack> = (0..plan.angles_per_circle)
        .into_par_iter()
        .map(|k| track_ray(f, lambda, plan.angle(k), &radii, &[], &plan.radii, &psi_series))
        .collect();
    let mut out = Vec::with_capacity(plan.len());
    for i in 0..plan.radii.len() {
        out.extend(tracks.iter().map(|t| t.samples[i]));
    }
    Ok(out)
}

/// Series of the root `psi` with `psi(0) = 0` of
/// `lambda psi^2 - (1 + lambda) psi + 1 - z/f = 0`.
pub fn schwarz_series(f: &AnalyticMap, lambda: f64) -> TruncatedSeries {
    let q = f.inverse_series();
    let n = q.order();
    let l1 = Complex64::new(1.0 + lambda, 0.0);
    let one_minus_q = TruncatedSeries::one(n).sub(q).expect("same order");
    let disc = TruncatedSeries::constant(n, l1 * l1)
        .sub(&one_minus_q.scale(Complex64::new(4.0 * lambda, 0.0)))
        .expect("same order");
    let root = disc.sqrt().expect("disc(0) = (1 + lambda)^2");
    TruncatedSeries::constant(n, l1)
        .sub(&root)
        .expect("same order")
        .scale(Complex64::new(0.5 / lambda, 0.0))
}

/// Recovers `psi` with `z/f = (1 - psi)(1 - lambda psi)` along every ray of
/// `plan` (step [`TRACK_STEP`], branch by continuity from `psi(0) = 0`) and
/// classifies subordination. Witness priority: branch point, modulus excess,
/// containment violation of `z/f` on `|z| = 0.9` in the target curve.
pub fn schwarz_recover(
    f: &AnalyticMap,
    lambda: f64,
    plan: &SamplingPlan,
) -> Result<SubordinationVerdict, GeometryError> {
    check_lambda(lambda)?;
    let radii = track_radii(plan);
    let check_radii: Vec<f64> = plan.radii.iter().copied().filter(|&r| r <= 0.5).collect();

    let psi_series = schwarz_series(f, lambda);
    let tracks: Vec<RayTrack> = (0..plan.angles_per_circle)
        .into_par_iter()
        .map(|k| track_ray(f, lambda, plan.angle(k), &radii, &check_radii, &[], &psi_series))
        .collect();

    let mut verdict = SubordinationVerdict {
        lambda,
        status: SubordinationStatus::Undecided,
        witness: None,
        max_abs_psi: 0.0,
        arg_max_psi: Complex64::new(0.0, 0.0),
        residual: 0.0,
        series_gap: 0.0,
        diagnostics: Vec::new(),
    };
    let mut branch = None;
    for tr in &tracks {
        if tr.max_abs > verdict.max_abs_psi {
            verdict.max_abs_psi = tr.max_abs;
            verdict.arg_max_psi = tr.arg_max;
        }
        verdict.residual = verdict.residual.max(tr.residual);
        verdict.series_gap = verdict.series_gap.max(tr.series_gap);
        if branch.is_none() {
            branch = tr.branch;
        }
    }
    let recomposed = TruncatedSeries::one(psi_series.order())
        .sub(&psi_series)
        .and_then(|a| {
            a.mul(&TruncatedSeries::one(psi_series.order()).sub(&psi_series.scale(Complex64::new(lambda, 0.0)))?)
        })
        .and_then(|p| p.max_abs_diff(f.inverse_series()))
        .expect("same order");
    verdict.residual = verdict.residual.max(recomposed);

    if let Some(z) = branch {
        verdict.status = SubordinationStatus::NotSubordinate;
        verdict.witness = Some(SubordinationWitness::BranchPoint { z });
        return Ok(verdict);
    }
    if verdict.series_gap > SERIES_GAP_TOL {
        verdict.diagnostics.push(format!(
            "branch tracking disagrees with the series of psi by {:e} on |z| <= 0.5",
            verdict.series_gap
        ));
        return Ok(verdict);
    }
    if verdict.max_abs_psi > 1.0 + MODULUS_TOL {
        verdict.status = SubordinationStatus::NotSubordinate;
        verdict.witness = Some(SubordinationWitness::ModulusExcess {
            z: verdict.arg_max_psi,
            modulus: verdict.max_abs_psi,
        });
        return Ok(verdict);
    }
    if let Some(z) = containment_violation(f, lambda, 0.9, 1024, 4096)? {
        verdict.status = SubordinationStatus::NotSubordinate;
        verdict.witness = Some(SubordinationWitness::ContainmentViolation { z });
        return Ok(verdict);
    }
    if verdict.residual <= RESIDUAL_TOL {
        verdict.status = SubordinationStatus::Subordinate;
        verdict.witness = Some(SubordinationWitness::SchwarzSeries { series: psi_series });
    } else {
        verdict.diagnostics.push(format!(
            "composition residual {:e} above {RESIDUAL_TOL:e}",
            verdict.residual
        ));
    }
    Ok(verdict)
}

/// Target curve `(1 - e^{it})(1 - lambda e^{it})`, `n` points.
pub fn target_curve(lambda: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let e = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
            (1.0 - e) * (1.0 - lambda * e)
        })
        .collect()
}

/// First sample `z` on `|z| = r` whose `z/f(z)` lies outside the target curve.
pub fn containment_violation(
    f: &AnalyticMap,
    lambda: f64,
    r: f64,
    samples: usize,
    curve_points: usize,
) -> Result<Option<Complex64>, GeometryError> {
    let curve = target_curve(lambda, curve_points);
    for k in 0..samples {
        let z = Complex64::from_polar(r, TAU * k as f64 / samples as f64);
        if winding_containment(&curve, f.inverse(z))? == Containment::Outside {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// `n` image points `f(r e^{it_k})`, `t_k = 2 pi k / n`; the polyline closes
/// from the last point back to the first.
pub fn boundary_curve(f: &AnalyticMap, r: f64, n: usize) -> Result<Vec<Complex64>, GeometryError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(GeometryError::Domain { name: "r", value: r });
    }
    if n < 3 {
        return Err(GeometryError::DegenerateCurve(format!("{n} points")));
    }
    (0..n)
        .map(|k| {
            let z = Complex64::from_polar(r, TAU * k as f64 / n as f64);
            if f.inverse(z).norm() < POLE_THRESHOLD {
                Err(GeometryError::PoleOnCircle { z })
            } else {
                Ok(f.value(z))
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Containment {
    Inside,
    Outside,
    OnBoundary,
}

/// Point-in-closed-polyline test by winding number.
pub fn winding_containment(curve: &[Complex64], w: Complex64) -> Result<Containment, GeometryError> {
    if curve.len() < 3 {
        return Err(GeometryError::DegenerateCurve(format!("{} points", curve.len())));
    }
    if curve.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::DegenerateCurve("non-finite vertex".into()));
    }
    let mut total = 0.0;
    for (i, &a) in curve.iter().enumerate() {
        let b = curve[(i + 1) % curve.len()];
        if segment_distance(a, b, w) < 1e-9 {
            return Ok(Containment::OnBoundary);
        }
        total += ((b - w) / (a - w)).arg();
    }
    let winding = (total / TAU).round();
    Ok(if winding == 0.0 {
        Containment::Outside
    } else {
        Containment::Inside
    })
}

fn segment_distance(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = (((w - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (w - (a + ab * t)).norm()
}
