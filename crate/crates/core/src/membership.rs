//! The defining functional `U_f(z) = (z/f)^2 f' - 1 = z/f - z (z/f)' - 1`,
//! its supremum over polar grids, class verdicts and boundary probes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::holomorphic::Holomorphic;
use crate::tps::TruncatedSeries;
use crate::zoo::{AnalyticMap, BlaschkeSpec};

/// `|z/f(z)|` below this marks a pole of `f`.
pub const POLE_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MembershipError {
    #[error("f has a pole at z = {z} (|z/f| = {modulus:e})")]
    Singular { z: Complex64, modulus: f64 },
    #[error("non-finite value of U_f at z = {z}")]
    NonFinite { z: Complex64 },
    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),
    #[error("lambda = {0} is outside (0, 1]")]
    Lambda(f64),
}

/// Deterministic polar grid: `angles_per_circle` equally spaced angles
/// starting at 0 on each circle of `radii`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub radii: Vec<f64>,
    pub angles_per_circle: usize,
    pub tolerance: f64,
}

impl Default for SamplingPlan {
    /// 20 dyadic circles `r_j = 1 - 2^{-j}` with 4096 angles each.
    fn default() -> Self {
        Self::dyadic(20, 4096, 1e-9).expect("default plan is valid")
    }
}

impl SamplingPlan {
    pub fn new(radii: Vec<f64>, angles_per_circle: usize, tolerance: f64) -> Result<Self, MembershipError> {
        if radii.is_empty() {
            return Err(MembershipError::InvalidPlan("no radii".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(MembershipError::InvalidPlan("radii must lie in (0, 1)".into()));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(MembershipError::InvalidPlan("radii must increase strictly".into()));
        }
        if angles_per_circle < 64 {
            return Err(MembershipError::InvalidPlan(format!(
                "need at least 64 angles per circle, got {angles_per_circle}"
            )));
        }
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(MembershipError::InvalidPlan("tolerance must be finite and >= 0".into()));
        }
        Ok(Self {
            radii,
            angles_per_circle,
            tolerance,
        })
    }

    /// Radii `1 - 2^{-j}` for `j = 1..=count`.
    pub fn dyadic(count: usize, angles_per_circle: usize, tolerance: f64) -> Result<Self, MembershipError> {
        let radii = (1..=count).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect();
        Self::new(radii, angles_per_circle, tolerance)
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("non-empty")
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.angles_per_circle as f64
    }

    pub fn point(&self, radius_index: usize, k: usize) -> Complex64 {
        Complex64::from_polar(self.radii[radius_index], self.angle(k))
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles_per_circle
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points, circle by circle.
    pub fn points(&self) -> Vec<Complex64> {
        (0..self.radii.len())
            .flat_map(|i| (0..self.angles_per_circle).map(move |k| (i, k)))
            .map(|(i, k)| self.point(i, k))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    In,
    Out,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSup {
    pub r: f64,
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub function: String,
    /// Level the verdict was taken against; `None` for a bare supremum.
    pub level: Option<f64>,
    pub sup_estimate: f64,
    pub arg_max: Complex64,
    pub per_circle_sup: Vec<CircleSup>,
    pub verdict: Verdict,
    /// `level - boundary_extrapolation` (zero without a level).
    pub margin: f64,
    /// Grid point with `|U_f| >= level` backing an `OUT` verdict.
    pub witness: Option<Complex64>,
    /// Order `p` of the zero of `U_f` at the origin, from its series.
    pub zero_order: Option<usize>,
    /// `max_r sup_{|z|=r} |U_f| / r^p`, a Schwarz-lemma extrapolation of the
    /// supremum to the unit circle.
    pub boundary_extrapolation: f64,
    /// Geometric estimate of the `U_f` series tail beyond the truncation.
    pub tail_estimate: f64,
    pub skipped_points: Vec<Complex64>,
    pub angles_per_circle: usize,
}

/// `U_f(z)` from the closed form of `z/f` and its derivative.
pub fn u_functional(f: &AnalyticMap, z: Complex64) -> Result<Complex64, MembershipError> {
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let q = f.inverse(z);
    if q.norm() < POLE_THRESHOLD {
        return Err(MembershipError::Singular { z, modulus: q.norm() });
    }
    let u = q - z * f.inverse_derivative(z) - 1.0;
    if !u.is_finite() {
        return Err(MembershipError::NonFinite { z });
    }
    Ok(u)
}

/// Series of `U_f = q - z q' - 1` from the inverse series `q` of `f`.
pub fn u_series(f: &AnalyticMap) -> TruncatedSeries {
    let q = f.inverse_series();
    let one = Complex64::new(1.0, 0.0);
    let u = TruncatedSeries::linear_combine(q, &q.euler(), one, -one).expect("same order");
    TruncatedSeries::linear_combine(&u, &TruncatedSeries::one(q.order()), one, -one).expect("same order")
}

struct CircleScan {
    sup: f64,
    arg_max: Complex64,
    skipped: Vec<Complex64>,
}

fn scan_circle(f: &AnalyticMap, plan: &SamplingPlan, i: usize) -> Result<CircleScan, MembershipError> {
    let mut out = CircleScan {
        sup: -1.0,
        arg_max: plan.point(i, 0),
        skipped: Vec::new(),
    };
    for k in 0..plan.angles_per_circle {
        let z = plan.point(i, k);
        match u_functional(f, z) {
            Ok(u) => {
                let m = u.norm();
                if m > out.sup {
                    out.sup = m;
                    out.arg_max = z;
                }
            }
            Err(MembershipError::Singular { .. }) => out.skipped.push(z),
            Err(e) => return Err(e),
        }
    }
    out.sup = out.sup.max(0.0);
    Ok(out)
}

/// Grid supremum of `|U_f|`. Poles of `f` on the grid are skipped and listed
/// in the report; non-finite values abort with the offending point.
pub fn sup_abs_u(f: &AnalyticMap, plan: &SamplingPlan) -> Result<MembershipReport, MembershipError> {
    let circles: Vec<CircleScan> = (0..plan.radii.len())
        .into_par_iter()
        .map(|i| scan_circle(f, plan, i))
        .collect::<Result<_, _>>()?;

    let series = u_series(f);
    let zero_order = series.valuation(1e-13);
    let mut report = MembershipReport {
        function: f.name.clone(),
        level: None,
        sup_estimate: 0.0,
        arg_max: Complex64::new(0.0, 0.0),
        per_circle_sup: Vec::with_capacity(circles.len()),
        verdict: Verdict::Undecided,
        margin: 0.0,
        witness: None,
        zero_order,
        boundary_extrapolation: 0.0,
        tail_estimate: series.tail_estimate(),
        skipped_points: Vec::new(),
        angles_per_circle: plan.angles_per_circle,
    };
    for (scan, &r) in circles.into_iter().zip(&plan.radii) {
        if scan.sup > report.sup_estimate {
            report.sup_estimate = scan.sup;
            report.arg_max = scan.arg_max;
        }
        if let Some(p) = zero_order {
            report.boundary_extrapolation = report.boundary_extrapolation.max(scan.sup / r.powi(p as i32));
        }
        report.per_circle_sup.push(CircleSup { r, sup: scan.sup });
        report.skipped_points.extend(scan.skipped);
    }
    Ok(report)
}

/// Class verdict for `|U_f| < lambda` on the grid.
///
/// `OUT` needs a grid point with `|U_f| >= lambda`. `IN` needs the grid
/// supremum below `lambda - tol`, the Schwarz extrapolation
/// `max_r M(r)/r^p <= lambda + tol`, and the grid supremum plus the series
/// tail estimate below `lambda`. Anything else is `UNDECIDED`. `IN` is a
/// statement at the grid resolution, not a proof.
pub fn membership_verdict(
    f: &AnalyticMap,
    lambda: f64,
    plan: &SamplingPlan,
) -> Result<MembershipReport, MembershipError> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(MembershipError::Lambda(lambda));
    }
    let mut report = sup_abs_u(f, plan)?;
    let tol = plan.tolerance;
    report.level = Some(lambda);
    report.margin = lambda - report.boundary_extrapolation;
    report.verdict = if report.sup_estimate >= lambda {
        report.witness = Some(report.arg_max);
        Verdict::Out
    } else if report.sup_estimate < lambda - tol
        && report.boundary_extrapolation <= lambda + tol
        && report.sup_estimate + report.tail_estimate < lambda
    {
        Verdict::In
    } else {
        Verdict::Undecided
    };
    Ok(report)
}

/// `|-(1+l)(phi - z phi') + l phi (phi - 2 z phi')|`: the modulus of `U_f`
/// for `f/z = 1/((1 - phi)(1 - l phi))`.
pub fn l_phi(phi: &dyn Holomorphic, lambda: f64, z: Complex64) -> f64 {
    let p = phi.value(z);
    let dp = phi.derivative(z);
    (-(1.0 + lambda) * (p - z * dp) + lambda * p * (p - 2.0 * z * dp)).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JuliaConfig {
    /// Estimates above this while still growing classify as divergent.
    pub ceiling: f64,
    /// Number of trailing steps inspected.
    pub window: usize,
    /// Relative change below which the sequence counts as stabilized.
    pub rel_tol: f64,
    /// Divergence by trend: growth per unit of `log2(1/(1-r))` that stays
    /// above this fraction of its value at the start of the window.
    pub trend_ratio: f64,
}

impl Default for JuliaConfig {
    fn default() -> Self {
        Self {
            ceiling: 1e6,
            window: 5,
            rel_tol: 1e-3,
            trend_ratio: 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum JuliaLimit {
    Finite { q: f64 },
    Divergent,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaEstimate {
    pub r: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaReport {
    pub zeta: Complex64,
    pub estimates: Vec<JuliaEstimate>,
    pub classification: JuliaLimit,
}

/// Dyadic radii `1 - 2^{-j}`, `j = 1..=count`.
pub fn dyadic_radii(count: usize) -> Vec<f64> {
    (1..=count).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
}

/// Radial Julia quotients `(1 - |phi(r zeta)|)/(1 - r)`.
///
/// A finite angular derivative makes the quotients settle (relative change
/// below `rel_tol` across the window). An infinite one shows up either as
/// values beyond `ceiling`, or as growth per unit of `log2(1/(1-r))` that
/// does not decay across the window.
pub fn julia_quotient(phi: &dyn Holomorphic, zeta: Complex64, radii: &[f64], config: &JuliaConfig) -> JuliaReport {
    let zeta = zeta / zeta.norm();
    let estimates: Vec<JuliaEstimate> = radii
        .iter()
        .map(|&r| JuliaEstimate {
            r,
            q: phi.one_minus_modulus(zeta * r) / (1.0 - r),
        })
        .collect();
    let classification = classify_julia(&estimates, config);
    JuliaReport {
        zeta,
        estimates,
        classification,
    }
}

fn classify_julia(est: &[JuliaEstimate], config: &JuliaConfig) -> JuliaLimit {
    let w = config.window;
    if est.len() < w + 1 || est.iter().any(|e| !e.q.is_finite()) {
        return JuliaLimit::Undecided;
    }
    let tail = &est[est.len() - w - 1..];
    let growing = tail.windows(2).all(|p| p[1].q > p[0].q);
    let last = tail[w].q;
    if last > config.ceiling && growing {
        return JuliaLimit::Divergent;
    }
    let settled = tail
        .windows(2)
        .all(|p| (p[1].q - p[0].q).abs() <= config.rel_tol * p[1].q.abs());
    if settled {
        return JuliaLimit::Finite { q: last };
    }
    let depth = |r: f64| -(1.0 - r).log2();
    let slopes: Vec<f64> = tail
        .windows(2)
        .map(|p| (p[1].q - p[0].q) / (depth(p[1].r) - depth(p[0].r)))
        .collect();
    if growing && slopes.iter().all(|&s| s >= config.trend_ratio * slopes[0]) {
        return JuliaLimit::Divergent;
    }
    JuliaLimit::Undecided
}

/// Partial sums of `G(B, zeta) = sum (1 - |a_n|)/|zeta - a_n|^2`.
pub fn blaschke_gsum(spec: &BlaschkeSpec, zeta: Complex64, terms: usize) -> Vec<f64> {
    spec.gsum(zeta, terms)
}
