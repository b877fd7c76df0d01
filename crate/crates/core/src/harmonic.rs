//! Harmonic maps `F = H + conj(G)` with `H` in `U_2(lambda)` (no `z^2` term)
//! and dilatation `omega_F = G'/H'`, plus the two close-to-convexity
//! certificates.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::holomorphic::Holomorphic;
use crate::membership::SamplingPlan;
use crate::tps::TruncatedSeries;
use crate::zoo::scalars::{a_bound, b_bound};
use crate::zoo::{AnalyticMap, SchwarzCandidate, ZooError};

/// `|a2|` above this means `H` is not in `U_2(lambda)`.
const A2_TOL: f64 = 1e-14;
/// Arcsin arguments in `(1, 1 + ARCSIN_SLACK]` are clamped, beyond it fail.
const ARCSIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmonicError {
    #[error("H is not in U_2: a2 = {a2}")]
    NotInU2 { a2: Complex64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("lambda = {lambda} is outside the range of {theorem:?}")]
    Range { theorem: Theorem, lambda: f64 },
    #[error("arcsin argument {value} exceeds 1")]
    ArcsinDomain { value: f64 },
    #[error(transparent)]
    Zoo(#[from] ZooError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Theorem {
    /// Bound `(1 - 2l - l^2)/(1 + l)^2`, `0 < l <= sqrt 2 - 1`.
    T42,
    /// Bound `sqrt((1 - l^2)(1 - 4 l^2)^2)`, `0 < l <= 1/2`.
    T43,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicMap {
    pub h: AnalyticMap,
    pub g_series: TruncatedSeries,
    pub dilatation: SchwarzCandidate,
    pub lambda: f64,
}

/// `G = \int_0^z omega_F H'` as a series; `H` must have `a2 = 0` and
/// `omega_F(0) = 0`, `|omega_F| <= 1`.
pub fn build_harmonic(h: AnalyticMap, dilatation: SchwarzCandidate) -> Result<HarmonicMap, HarmonicError> {
    if h.a2.norm() > A2_TOL {
        return Err(HarmonicError::NotInU2 { a2: h.a2 });
    }
    let w0 = dilatation.value(Complex64::new(0.0, 0.0)).norm();
    if w0 > 1e-14 {
        return Err(HarmonicError::Hypothesis(format!("omega_F(0) = {w0:e}, expected 0")));
    }
    dilatation
        .validate_bound()
        .map_err(|e| HarmonicError::Hypothesis(e.to_string()))?;
    let order = h.order();
    let g_series = dilatation
        .series(order)
        .mul(&h_prime_series(&h))
        .expect("same order")
        .integrate0();
    let lambda = h.lambda;
    Ok(HarmonicMap {
        h,
        g_series,
        dilatation,
        lambda,
    })
}

/// Series of `H'` from the series `s` of `H/z`: `(z s)' = s + z s'`.
fn h_prime_series(h: &AnalyticMap) -> TruncatedSeries {
    let s = h.series();
    s.add(&s.euler()).expect("same order")
}

impl HarmonicMap {
    /// `H(z) + conj(G(z))`, with `G` from its series.
    pub fn value(&self, z: Complex64) -> Complex64 {
        self.h.value(z) + self.g_series.eval(z).conj()
    }

    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        self.h.derivative(z)
    }

    /// `G' = omega_F H'`.
    pub fn g_prime(&self, z: Complex64) -> Complex64 {
        self.dilatation.value(z) * self.h.derivative(z)
    }
}

/// `J_F = |H'|^2 - |G'|^2`.
pub fn jacobian(f: &HarmonicMap, z: Complex64) -> f64 {
    f.h_prime(z).norm_sqr() - f.g_prime(z).norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HarmonicStatus {
    Certified,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicCertificate {
    pub theorem: Theorem,
    pub lambda: f64,
    pub bound_used: f64,
    pub sup_dilatation: f64,
    /// Smallest pointwise margin of the theorem's inequality on the grid.
    pub grid_min_margin: f64,
    /// Smallest `M - A(r, lambda)` on the grid (`T42` only).
    pub chain_min: Option<f64>,
    pub min_jacobian: f64,
    pub clamp_events: usize,
    pub tolerance: f64,
    pub status: HarmonicStatus,
    pub notes: Vec<String>,
}

struct PointEval {
    z: Complex64,
    omega_abs: f64,
    jac: f64,
    /// `z H'/H`.
    k: Complex64,
}

fn evaluate_grid(f: &HarmonicMap, plan: &SamplingPlan) -> Vec<PointEval> {
    (0..plan.radii.len())
        .into_par_iter()
        .flat_map_iter(|i| (0..plan.angles_per_circle).map(move |k| plan.point(i, k)))
        .map(|z| {
            // z H'/H = (q - z q')/q = (1 + U_H)/q
            let q = f.h.inverse(z);
            PointEval {
                z,
                omega_abs: f.dilatation.value(z).norm(),
                jac: jacobian(f, z),
                k: (q - z * f.h.inverse_derivative(z)) / q,
            }
        })
        .collect()
}

fn check_range(theorem: Theorem, lambda: f64) -> Result<(), HarmonicError> {
    let hi = match theorem {
        Theorem::T42 => std::f64::consts::SQRT_2 - 1.0,
        Theorem::T43 => 0.5,
    };
    if lambda > 0.0 && lambda <= hi + 1e-15 {
        Ok(())
    } else {
        Err(HarmonicError::Range { theorem, lambda })
    }
}

/// Checks `sup |omega_F| <= (1 - 2l - l^2)/(1 + l)^2 + tol`, then
/// `Re{zH'/H} > |omega_F zH'/H|` and `M >= A(|z|, l)` on the grid, where
/// `M = Re{zH'/H} / |zH'/H|`.
pub fn certify_t42(f: &HarmonicMap, plan: &SamplingPlan) -> Result<HarmonicCertificate, HarmonicError> {
    let lambda = f.lambda;
    check_range(Theorem::T42, lambda)?;
    let tol = plan.tolerance;
    let bound = a_bound(1.0, lambda)?.max(0.0);
    let evals = evaluate_grid(f, plan);
    let mut sup = 0.0f64;
    let mut margin = f64::INFINITY;
    let mut chain = f64::INFINITY;
    let mut min_jac = f64::INFINITY;
    for e in &evals {
        sup = sup.max(e.omega_abs);
        min_jac = min_jac.min(e.jac);
        margin = margin.min(e.k.re - e.omega_abs * e.k.norm());
        let m = e.k.re / e.k.norm();
        chain = chain.min(m - a_bound(e.z.norm(), lambda)?);
    }
    let mut notes = vec!["starlikeness of H for lambda <= sqrt(2) - 1 is assumed, not re-verified".to_string()];
    let hypothesis = sup <= bound + tol;
    if !hypothesis {
        notes.push(format!("sup |omega_F| = {sup} exceeds the bound {bound}"));
        if margin >= -tol {
            notes.push("pointwise inequality holds, but the theorem only licenses the bound".into());
        }
    }
    let certified = hypothesis && margin >= -tol && chain >= -tol && min_jac > 0.0;
    if min_jac <= 0.0 {
        notes.push(format!("Jacobian {min_jac:e} is not positive on the grid"));
    }
    Ok(HarmonicCertificate {
        theorem: Theorem::T42,
        lambda,
        bound_used: bound,
        sup_dilatation: sup,
        grid_min_margin: margin,
        chain_min: Some(chain),
        min_jacobian: min_jac,
        clamp_events: 0,
        tolerance: tol,
        status: if certified {
            HarmonicStatus::Certified
        } else {
            HarmonicStatus::Failed
        },
        notes,
    })
}

fn clamped_asin(x: f64, clamps: &mut usize) -> Result<f64, HarmonicError> {
    if x > 1.0 + ARCSIN_SLACK {
        return Err(HarmonicError::ArcsinDomain { value: x });
    }
    if x > 1.0 {
        *clamps += 1;
        return Ok(FRAC_PI_2);
    }
    Ok(x.max(0.0).asin())
}

/// Checks `sup |omega_F| <= sqrt((1 - l^2)(1 - 4l^2)^2) + tol`, then
/// `arcsin|omega_F(z)| + 3 arcsin(l |z|^2) <= pi/2 + tol` on the grid.
pub fn certify_t43(f: &HarmonicMap, plan: &SamplingPlan) -> Result<HarmonicCertificate, HarmonicError> {
    let lambda = f.lambda;
    check_range(Theorem::T43, lambda)?;
    let tol = plan.tolerance;
    let bound = b_bound(1.0, lambda)?;
    let evals = evaluate_grid(f, plan);
    let mut sup = 0.0f64;
    let mut margin = f64::INFINITY;
    let mut min_jac = f64::INFINITY;
    let mut clamps = 0;
    for e in &evals {
        sup = sup.max(e.omega_abs);
        min_jac = min_jac.min(e.jac);
        let lhs = clamped_asin(e.omega_abs, &mut clamps)? + 3.0 * clamped_asin(lambda * e.z.norm_sqr(), &mut clamps)?;
        margin = margin.min(FRAC_PI_2 - lhs);
    }
    let mut notes = vec![
        "the bound is applied on the whole disk; the radius-dependent B(r, lambda) is only used pointwise".to_string(),
    ];
    if clamps > 0 {
        notes.push(format!("{clamps} arcsin arguments clamped to 1"));
    }
    let hypothesis = sup <= bound + tol;
    if !hypothesis {
        notes.push(format!("sup |omega_F| = {sup} exceeds the bound {bound}"));
        if margin >= -tol {
            notes.push("pointwise inequality holds, but the theorem only licenses the bound".into());
        }
    }
    let certified = hypothesis && margin >= -tol && min_jac > 0.0;
    if min_jac <= 0.0 {
        notes.push(format!("Jacobian {min_jac:e} is not positive on the grid"));
    }
    Ok(HarmonicCertificate {
        theorem: Theorem::T43,
        lambda,
        bound_used: bound,
        sup_dilatation: sup,
        grid_min_margin: margin,
        chain_min: None,
        min_jacobian: min_jac,
        clamp_events: clamps,
        tolerance: tol,
        status: if certified {
            HarmonicStatus::Certified
        } else {
            HarmonicStatus::Failed
        },
        notes,
    })
}
