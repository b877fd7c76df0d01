use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ZooError;
use crate::holomorphic::Holomorphic;
use crate::tps::TruncatedSeries;

/// Where a bounded analytic function enters a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchwarzRole {
    /// Integrand in `z/f = 1 - a2 z + lambda z \int_0^z omega`.
    Omega,
    /// `omega1` in `z/f = 1 - a2 z + lambda omega1`, with a double zero at 0.
    Omega1,
    /// Subordinating function, vanishing at 0.
    Phi,
    /// Dilatation `G'/H'` of a harmonic map, vanishing at 0.
    Dilatation,
}

/// Closed forms supported for Schwarz-type functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaForm {
    /// `sum_n c_n z^n` with dense coefficients.
    Polynomial { coeffs: Vec<Complex64> },
    /// `(z + a) / (1 + a z)` for real `a` in `[0, 1)`.
    Mobius { a: f64 },
    /// Only a series is known; evaluation sums the truncated polynomial.
    Series { series: TruncatedSeries },
}

/// `a` below this uses the Maclaurin series for the primitive of the
/// Mobius integrand instead of the logarithmic closed form.
const MOBIUS_LOG_SWITCH: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzCandidate {
    pub role: SchwarzRole,
    pub form: OmegaForm,
}

impl SchwarzCandidate {
    /// Builds and checks the role-specific normalization at the origin.
    pub fn new(role: SchwarzRole, form: OmegaForm) -> Result<Self, ZooError> {
        if let OmegaForm::Mobius { a } = form {
            if !(0.0..1.0).contains(&a) {
                return Err(ZooError::Domain {
                    name: "mobius a",
                    value: a,
                });
            }
        }
        let cand = Self { role, form };
        let at0 = cand.value(Complex64::new(0.0, 0.0)).norm();
        match role {
            SchwarzRole::Omega => {}
            SchwarzRole::Phi | SchwarzRole::Dilatation => {
                if at0 > 1e-14 {
                    return Err(ZooError::NotZeroAtOrigin { role, modulus: at0 });
                }
            }
            SchwarzRole::Omega1 => {
                let d0 = cand.derivative(Complex64::new(0.0, 0.0)).norm();
                if at0 > 1e-14 || d0 > 1e-14 {
                    return Err(ZooError::NotZeroAtOrigin {
                        role,
                        modulus: at0.max(d0),
                    });
                }
            }
        }
        Ok(cand)
    }

    /// `c * z^n`.
    pub fn monomial(role: SchwarzRole, c: Complex64, n: usize) -> Result<Self, ZooError> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = c;
        Self::new(role, OmegaForm::Polynomial { coeffs })
    }

    pub fn polynomial(role: SchwarzRole, coeffs: Vec<Complex64>) -> Result<Self, ZooError> {
        Self::new(role, OmegaForm::Polynomial { coeffs })
    }

    pub fn mobius(role: SchwarzRole, a: f64) -> Result<Self, ZooError> {
        Self::new(role, OmegaForm::Mobius { a })
    }

    pub fn zero(role: SchwarzRole) -> Self {
        Self {
            role,
            form: OmegaForm::Polynomial {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            },
        }
    }

    /// Same function, different role (rechecked).
    pub fn with_role(&self, role: SchwarzRole) -> Result<Self, ZooError> {
        Self::new(role, self.form.clone())
    }

    /// `\int_0^z omega(t) dt`.
    pub fn primitive(&self, z: Complex64) -> Complex64 {
        match &self.form {
            OmegaForm::Polynomial { coeffs } => {
                coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, (n, c)| acc * z + c / (n as f64 + 1.0))
                    * z
            }
            OmegaForm::Mobius { a } => mobius_primitive(*a, z),
            OmegaForm::Series { series } => series.integrate0().eval(z),
        }
    }

    /// Maclaurin series to the given order.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        match &self.form {
            OmegaForm::Polynomial { coeffs } => {
                TruncatedSeries::from_leading(order, coeffs).expect("polynomial coefficients are finite")
            }
            OmegaForm::Mobius { a } => mobius_series(*a, order),
            OmegaForm::Series { series } => series.truncate(order),
        }
    }

    /// Largest modulus over `n_angles` points on each circle of radius
    /// `radii`.
    pub fn sampled_sup(&self, radii: &[f64], n_angles: usize) -> f64 {
        let mut sup: f64 = 0.0;
        for &r in radii {
            for k in 0..n_angles {
                let t = std::f64::consts::TAU * k as f64 / n_angles as f64;
                sup = sup.max(self.value(Complex64::from_polar(r, t)).norm());
            }
        }
        sup
    }

    /// Checks `|omega| <= 1 + 1e-12` on a validation grid of 32 circles.
    pub fn validate_bound(&self) -> Result<f64, ZooError> {
        let radii: Vec<f64> = (1..=32).map(|j| 1.0 - 0.5f64.powi(j)).collect();
        let sup = self.sampled_sup(&radii, 512);
        if sup > 1.0 + 1e-12 {
            return Err(ZooError::NotBounded { sup });
        }
        Ok(sup)
    }
}

impl Holomorphic for SchwarzCandidate {
    fn value(&self, z: Complex64) -> Complex64 {
        match &self.form {
            OmegaForm::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
            }
            OmegaForm::Mobius { a } => (z + a) / (1.0 + a * z),
            OmegaForm::Series { series } => series.eval(z),
        }
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        match &self.form {
            OmegaForm::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (n, c)| acc * z + c * n as f64),
            OmegaForm::Mobius { a } => {
                let d = 1.0 + a * z;
                Complex64::new(1.0 - a * a, 0.0) / (d * d)
            }
            OmegaForm::Series { series } => series.differentiate().eval(z),
        }
    }
}

/// Maclaurin series of `(z + a)/(1 + a z) = a + sum_{n>=1} (1 - a^2)(-a)^{n-1} z^n`.
fn mobius_series(a: f64, order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Complex64::new(a, 0.0));
    let mut p = 1.0 - a * a;
    for _ in 1..=order {
        coeffs.push(Complex64::new(p, 0.0));
        p *= -a;
    }
    TruncatedSeries::new(coeffs).expect("finite")
}

/// `\int_0^z (t+a)/(1+at) dt = z/a + ((a^2-1)/a^2) ln(1+az)`, principal log.
pub fn mobius_primitive(a: f64, z: Complex64) -> Complex64 {
    if a < MOBIUS_LOG_SWITCH {
        // sum_n c_n z^{n+1}/(n+1), c_0 = a, c_n = (1-a^2)(-a)^{n-1}
        let mut acc = Complex64::new(a, 0.0) * z;
        let mut zp = z * z;
        let mut c = 1.0 - a * a;
        for n in 1..200 {
            let term = zp * (c / (n as f64 + 1.0));
            acc += term;
            if term.norm() < 1e-18 * acc.norm().max(1e-300) {
                break;
            }
            zp *= z;
            c *= -a;
        }
        return acc;
    }
    let w = Complex64::new(1.0, 0.0) + a * z;
    z / a + ((a * a - 1.0) / (a * a)) * w.ln()
}
