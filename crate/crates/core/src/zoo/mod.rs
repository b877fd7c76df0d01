//! Concrete functions of the class, each carried both as a closed form and
//! as a truncated series of `f(z)/z` and `z/f(z)`.

mod blaschke;
pub mod scalars;
mod schwarz;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::holomorphic::Holomorphic;
use crate::tps::{SeriesError, TruncatedSeries, DEFAULT_ORDER};

pub use blaschke::{BlaschkeKind, BlaschkeSpec, BlaschkeZero};
pub use schwarz::{mobius_primitive, OmegaForm, SchwarzCandidate, SchwarzRole};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZooError {
    #[error("{name} = {value} is outside its domain")]
    Domain { name: &'static str, value: f64 },
    #[error("integer parameter {name} = {value} is outside its domain")]
    IntDomain { name: &'static str, value: i64 },
    #[error("{role:?} candidate must vanish at the origin (got modulus {modulus:e})")]
    NotZeroAtOrigin { role: SchwarzRole, modulus: f64 },
    #[error("expected a candidate with role {expected:?}, got {got:?}")]
    WrongRole { expected: SchwarzRole, got: SchwarzRole },
    #[error("candidate exceeds modulus one on the validation grid (sup {sup})")]
    NotBounded { sup: f64 },
    #[error("a Blaschke product needs at least one factor")]
    EmptyBlaschke,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Complex(Complex64),
}

/// Closed form of `q(z) = z/f(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InverseForm {
    /// `q` is the polynomial `sum p_n z^n`.
    Polynomial { coeffs: Vec<Complex64> },
    /// `q(z) = 1 - a2 z + lambda z \int_0^z omega(t) dt`.
    Integral {
        a2: Complex64,
        lambda: f64,
        omega: SchwarzCandidate,
    },
    /// `q(rho z)`: the inverse of the rotation `conj(rho) f(rho z)`.
    Rotated { rho: Complex64, inner: Box<InverseForm> },
}

impl InverseForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            InverseForm::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
            }
            InverseForm::Integral { a2, lambda, omega } => 1.0 - a2 * z + *lambda * z * omega.primitive(z),
            InverseForm::Rotated { rho, inner } => inner.eval(rho * z),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            InverseForm::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (n, c)| acc * z + c * n as f64),
            InverseForm::Integral { a2, lambda, omega } => -a2 + *lambda * (omega.primitive(z) + z * omega.value(z)),
            InverseForm::Rotated { rho, inner } => rho * inner.derivative(rho * z),
        }
    }

    pub fn series(&self, order: usize) -> TruncatedSeries {
        match self {
            InverseForm::Polynomial { coeffs } => {
                TruncatedSeries::from_leading(order, coeffs).expect("finite coefficients")
            }
            InverseForm::Integral { a2, lambda, omega } => {
                let prim = omega.series(order).integrate0().shift(1);
                let mut base = TruncatedSeries::from_leading(order, &[Complex64::new(1.0, 0.0), -a2]).expect("finite");
                base = TruncatedSeries::linear_combine(
                    &base,
                    &prim,
                    Complex64::new(1.0, 0.0),
                    Complex64::new(*lambda, 0.0),
                )
                .expect("equal orders");
                base
            }
            InverseForm::Rotated { rho, inner } => inner.series(order).rotate(*rho),
        }
    }
}

/// A normalized analytic function `f(z) = z + a2 z^2 + ...` on the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticMap {
    pub name: String,
    /// Class parameter the map was constructed for.
    pub lambda: f64,
    pub a2: Complex64,
    pub params: BTreeMap<String, ParamValue>,
    form: InverseForm,
    /// Series of `f(z)/z`.
    series: TruncatedSeries,
    /// Series of `z/f(z)`.
    inverse_series: TruncatedSeries,
}

impl AnalyticMap {
    pub fn from_form(
        name: impl Into<String>,
        lambda: f64,
        params: BTreeMap<String, ParamValue>,
        form: InverseForm,
        order: usize,
    ) -> Result<Self, ZooError> {
        let inverse_series = form.series(order);
        if (inverse_series.coeff(0) - 1.0).norm() > 1e-14 {
            return Err(ZooError::Series(SeriesError::Singular {
                modulus: inverse_series.coeff(0).norm(),
            }));
        }
        let series = inverse_series.reciprocal()?;
        let a2 = series.coeff(1);
        Ok(Self {
            name: name.into(),
            lambda,
            a2,
            params,
            form,
            series,
            inverse_series,
        })
    }

    /// Same map with series rebuilt at another truncation order.
    pub fn with_order(&self, order: usize) -> Result<Self, ZooError> {
        Self::from_form(
            self.name.clone(),
            self.lambda,
            self.params.clone(),
            self.form.clone(),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn form(&self) -> &InverseForm {
        &self.form
    }

    /// Series of `f(z)/z`; coefficient `n - 1` is `a_n(f)`.
    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    /// Series of `z/f(z)`.
    pub fn inverse_series(&self) -> &TruncatedSeries {
        &self.inverse_series
    }

    /// Taylor coefficient `a_n` of `f`, `n >= 1`.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        match n {
            0 => Complex64::new(0.0, 0.0),
            n => self.series.coeff(n - 1),
        }
    }

    /// `z/f(z)`.
    pub fn inverse(&self, z: Complex64) -> Complex64 {
        self.form.eval(z)
    }

    /// `(z/f)'(z)`.
    pub fn inverse_derivative(&self, z: Complex64) -> Complex64 {
        self.form.derivative(z)
    }

    /// `U_f(z) = z/f - z (z/f)' - 1` from the closed form, without pole
    /// guards. See `membership::u_functional` for the checked version.
    pub fn u_raw(&self, z: Complex64) -> Complex64 {
        self.inverse(z) - z * self.inverse_derivative(z) - 1.0
    }

    /// `conj(rho) f(rho z)` with `rho = e^{i alpha}`.
    pub fn rotate(&self, alpha: f64) -> Result<Self, ZooError> {
        let rho = Complex64::from_polar(1.0, alpha);
        let mut params = self.params.clone();
        params.insert("rotation".into(), ParamValue::Real(alpha));
        Self::from_form(
            format!("{}_rotated", self.name),
            self.lambda,
            params,
            InverseForm::Rotated {
                rho,
                inner: Box::new(self.form.clone()),
            },
            self.order(),
        )
    }

    /// Structural checks every zoo member satisfies; returns violations.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if (self.series.coeff(0) - 1.0).norm() > 1e-14 {
            out.push("series constant term is not 1".into());
        }
        match self.series.mul(&self.inverse_series) {
            Ok(p) => {
                let d = p
                    .max_abs_diff(&TruncatedSeries::one(p.order()))
                    .unwrap_or(f64::INFINITY);
                if d > 1e-10 {
                    out.push(format!("series * inverse_series differs from 1 by {d:e}"));
                }
            }
            Err(e) => out.push(e.to_string()),
        }
        if (self.a2 - self.series.coeff(1)).norm() > 1e-12 {
            out.push("a2 disagrees with the series".into());
        }
        if self.a2.norm() > 1.0 + self.lambda + 1e-10 {
            out.push(format!("|a2| = {} exceeds 1 + lambda", self.a2.norm()));
        }
        out
    }
}

impl Holomorphic for AnalyticMap {
    fn value(&self, z: Complex64) -> Complex64 {
        if z.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        z / self.inverse(z)
    }

    /// `f' = (q - z q')/q^2` for `q = z/f`.
    fn derivative(&self, z: Complex64) -> Complex64 {
        let q = self.inverse(z);
        (q - z * self.inverse_derivative(z)) / (q * q)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_lambda_closed(lambda: f64) -> Result<(), ZooError> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(ZooError::Domain {
            name: "lambda",
            value: lambda,
        })
    }
}

fn check_lambda_open(lambda: f64) -> Result<(), ZooError> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(ZooError::Domain {
            name: "lambda",
            value: lambda,
        })
    }
}

fn polynomial_map(
    name: &str,
    lambda: f64,
    params: BTreeMap<String, ParamValue>,
    coeffs: Vec<Complex64>,
) -> Result<AnalyticMap, ZooError> {
    AnalyticMap::from_form(name, lambda, params, InverseForm::Polynomial { coeffs }, DEFAULT_ORDER)
}

/// `f(z) = z`.
pub fn make_identity() -> AnalyticMap {
    polynomial_map("identity", 1.0, BTreeMap::new(), vec![c(1.0)]).expect("identity")
}

/// The extremal map `z / (1 - (1+l) e^{i theta} z + l e^{2 i theta} z^2)`.
pub fn make_f_theta(lambda: f64, theta: f64) -> Result<AnalyticMap, ZooError> {
    check_lambda_closed(lambda)?;
    if !theta.is_finite() {
        return Err(ZooError::Domain {
            name: "theta",
            value: theta,
        });
    }
    let e = Complex64::from_polar(1.0, theta);
    let params = BTreeMap::from([("theta".to_string(), ParamValue::Real(theta))]);
    polynomial_map(
        "f_theta",
        lambda,
        params,
        vec![c(1.0), -(1.0 + lambda) * e, lambda * e * e],
    )
}

/// `g(z) = z / (1 + z^3/2)`, three-fold symmetric, in the class for `lambda = 1`.
pub fn make_g_threefold() -> AnalyticMap {
    polynomial_map("g", 1.0, BTreeMap::new(), vec![c(1.0), c(0.0), c(0.0), c(0.5)]).expect("g")
}

/// `z/f = (1 - z)(1 - (l z/k) sum_{nu<k} z^nu) = 1 - (1 + l/k) z + (l/k) z^{k+1}`.
pub fn make_example32(lambda: f64, k: u32) -> Result<AnalyticMap, ZooError> {
    check_lambda_open(lambda)?;
    if k < 2 {
        return Err(ZooError::IntDomain {
            name: "k",
            value: k as i64,
        });
    }
    let kf = k as f64;
    let mut coeffs = vec![c(0.0); k as usize + 2];
    coeffs[0] = c(1.0);
    coeffs[1] = c(-(1.0 + lambda / kf));
    coeffs[k as usize + 1] = c(lambda / kf);
    let params = BTreeMap::from([("k".to_string(), ParamValue::Int(k as i64))]);
    polynomial_map("example32", lambda, params, coeffs)
}

/// `z/f = 1 - a2 z + lambda z \int_0^z omega(t) dt`.
pub fn make_from_omega(lambda: f64, a2: Complex64, omega: SchwarzCandidate) -> Result<AnalyticMap, ZooError> {
    make_from_omega_named("from_omega", lambda, a2, omega, BTreeMap::new())
}

fn make_from_omega_named(
    name: &str,
    lambda: f64,
    a2: Complex64,
    omega: SchwarzCandidate,
    mut params: BTreeMap<String, ParamValue>,
) -> Result<AnalyticMap, ZooError> {
    check_lambda_closed(lambda)?;
    if omega.role != SchwarzRole::Omega {
        return Err(ZooError::WrongRole {
            expected: SchwarzRole::Omega,
            got: omega.role,
        });
    }
    params.insert("a2".into(), ParamValue::Complex(a2));
    let map = AnalyticMap::from_form(
        name,
        lambda,
        params,
        InverseForm::Integral { a2, lambda, omega },
        DEFAULT_ORDER,
    )?;
    assert!(
        (map.inverse_series().coeff(0) - 1.0).norm() < 1e-14,
        "inverse series must start with 1"
    );
    Ok(map)
}

/// `z/f = 1 + lambda a z^2`, i.e. `a2 = 0` and `omega1(z) = a z^2`.
pub fn make_omega1_quadratic(lambda: f64, a: Complex64) -> Result<AnalyticMap, ZooError> {
    if a.norm() > 1.0 + 1e-15 {
        return Err(ZooError::Domain {
            name: "|a|",
            value: a.norm(),
        });
    }
    let omega = SchwarzCandidate::monomial(SchwarzRole::Omega, a, 0)?;
    let params = BTreeMap::from([("a".to_string(), ParamValue::Complex(a))]);
    make_from_omega_named("omega1_quadratic", lambda, c(0.0), omega, params)
}

/// `f_a(z) = z / (1 - z (1 + lambda \int_z^1 (t+a)/(1+at) dt))`.
///
/// Built through the integral representation with `a2 = 1 + lambda v(a)` and
/// `omega = (t+a)/(1+at)`; the closed form uses the principal logarithm.
pub fn make_f_a(lambda: f64, a: f64) -> Result<AnalyticMap, ZooError> {
    check_lambda_open(lambda)?;
    if !(a > 0.0 && a < 1.0) {
        return Err(ZooError::Domain { name: "a", value: a });
    }
    let v = scalars::v(a)?;
    let omega = SchwarzCandidate::mobius(SchwarzRole::Omega, a)?;
    let params = BTreeMap::from([
        ("a".to_string(), ParamValue::Real(a)),
        ("v".to_string(), ParamValue::Real(v)),
    ]);
    make_from_omega_named("f_a", lambda, c(1.0 + lambda * v), omega, params)
}

/// Functions with integer coefficients listed as typical class members:
/// `z, z/(1±z)^2, z/(1±z), z/(1±z^2), z/(1±z+z^2)`.
pub fn s_z_members() -> Vec<AnalyticMap> {
    let mut out = vec![make_identity()];
    let table: [(&str, [f64; 3]); 8] = [
        ("z/(1-z)^2", [1.0, -2.0, 1.0]),
        ("z/(1+z)^2", [1.0, 2.0, 1.0]),
        ("z/(1-z)", [1.0, -1.0, 0.0]),
        ("z/(1+z)", [1.0, 1.0, 0.0]),
        ("z/(1-z^2)", [1.0, 0.0, -1.0]),
        ("z/(1+z^2)", [1.0, 0.0, 1.0]),
        ("z/(1-z+z^2)", [1.0, -1.0, 1.0]),
        ("z/(1+z+z^2)", [1.0, 1.0, 1.0]),
    ];
    for (name, q) in table {
        out.push(
            polynomial_map(name, 1.0, BTreeMap::new(), q.iter().map(|&x| c(x)).collect())
                .expect("integer-coefficient member"),
        );
    }
    out
}
