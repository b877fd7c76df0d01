//! Truncated power series over `Complex64`.
//!
//! A [`TruncatedSeries`] of order `N` stores the Maclaurin coefficients
//! `c_0, ..., c_N`. Binary operations require both operands to have the same
//! order; truncate explicitly with [`TruncatedSeries::truncate`] first.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default truncation order used by the function constructors.
pub const DEFAULT_ORDER: usize = 64;

/// Constant terms below this modulus are treated as zero.
pub const SINGULAR_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("constant term {modulus:e} is too small to invert")]
    Singular { modulus: f64 },
    #[error("inner series has nonzero constant term (modulus {modulus:e})")]
    NonzeroConstant { modulus: f64 },
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("a series needs at least one coefficient")]
    Empty,
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for TruncatedSeries {
    type Error = SeriesError;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self, Self::Error> {
        Self::new(coeffs)
    }
}

impl From<TruncatedSeries> for Vec<Complex64> {
    fn from(s: TruncatedSeries) -> Self {
        s.coeffs
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("order", &self.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SeriesError::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    /// Builds a series of the given order from a (possibly shorter or longer)
    /// list of leading coefficients. Missing coefficients are zero, extra ones
    /// are dropped.
    pub fn from_leading(order: usize, leading: &[Complex64]) -> Result<Self, SeriesError> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (dst, src) in coeffs.iter_mut().zip(leading) {
            *dst = *src;
        }
        Self::new(coeffs)
    }

    pub fn from_real(order: usize, leading: &[f64]) -> Result<Self, SeriesError> {
        let c: Vec<Complex64> = leading.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_leading(order, &c)
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Complex64::new(1.0, 0.0))
    }

    pub fn constant(order: usize, c: Complex64) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * z^power`, or the zero series if `power > order`.
    pub fn monomial(order: usize, power: usize, c: Complex64) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// The series of `z`.
    pub fn z(order: usize) -> Self {
        Self::monomial(order, 1, Complex64::new(1.0, 0.0))
    }

    /// Series of `z^power`.
    pub fn power(order: usize, power: usize) -> Self {
        Self::monomial(order, power, Complex64::new(1.0, 0.0))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Drops or zero-pads coefficients to reach `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Coefficientwise `alpha * a + beta * b`.
    pub fn linear_combine(a: &Self, b: &Self, alpha: Complex64, beta: Complex64) -> Result<Self, SeriesError> {
        a.check_order(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combine(self, other, one, one)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combine(self, other, one, -one)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Multiplicative inverse to the truncation order.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0.norm() <= SINGULAR_THRESHOLD {
            return Err(SeriesError::Singular { modulus: a0.norm() });
        }
        let inv0 = a0.inv();
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = inv0;
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc * inv0;
        }
        Self::new(out)
    }

    /// Square root with the principal value at the origin; the constant term
    /// must be nonzero.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0.norm() <= SINGULAR_THRESHOLD {
            return Err(SeriesError::Singular { modulus: a0.norm() });
        }
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = a0.sqrt();
        let two_b0_inv = (2.0 * out[0]).inv();
        // a_k = sum_{j=0}^{k} b_j b_{k-j}
        for k in 1..n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= out[j] * out[k - j];
            }
            out[k] = acc * two_b0_inv;
        }
        Self::new(out)
    }

    /// Maclaurin coefficients of `outer(inner(z))`. The inner series must
    /// vanish at the origin.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, SeriesError> {
        outer.check_order(inner)?;
        let c0 = inner.coeffs[0].norm();
        if c0 >= SINGULAR_THRESHOLD {
            return Err(SeriesError::NonzeroConstant { modulus: c0 });
        }
        let order = outer.order();
        let mut inner = inner.clone();
        inner.coeffs[0] = Complex64::new(0.0, 0.0);
        // Horner: acc = (...(o_N * w + o_{N-1}) * w + ...) + o_0
        let mut acc = Self::constant(order, outer.coeffs[order]);
        for k in (0..order).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] += outer.coeffs[k];
        }
        Ok(acc)
    }

    /// Term-by-term derivative. The result has order `N - 1` (order 0 maps to
    /// the order-0 zero series).
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * n as f64)
            .collect();
        Self { coeffs }
    }

    /// `z * a'(z)`, which keeps the order exactly: coefficient `n` is `n * a_n`.
    pub fn euler(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().enumerate().map(|(n, c)| c * n as f64).collect(),
        }
    }

    /// Primitive vanishing at the origin, truncated back to the same order.
    pub fn integrate0(&self) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = self.coeffs[k - 1] / k as f64;
        }
        Self { coeffs }
    }

    /// Multiplies by `z^k`, keeping the order (top coefficients fall off).
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        if k < n {
            coeffs[k..].copy_from_slice(&self.coeffs[..n - k]);
        }
        Self { coeffs }
    }

    /// Series of `a(rho * z)`.
    pub fn rotate(&self, rho: Complex64) -> Self {
        let mut p = Complex64::new(1.0, 0.0);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * p);
            p *= rho;
        }
        Self { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Largest coefficient modulus difference against `other` (same order).
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, SeriesError> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Index of the first coefficient with modulus above `eps`.
    pub fn valuation(&self, eps: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.norm() > eps)
    }

    /// Estimate of `sum_{n > N} |c_n|` by extending the decay of the last
    /// nonzero coefficients geometrically. Returns infinity when the
    /// coefficients are not decaying.
    pub fn tail_estimate(&self) -> f64 {
        let n = self.coeffs.len();
        if n < 3 {
            return 0.0;
        }
        let last = self.coeffs[n - 1].norm();
        let prev = self.coeffs[n - 2].norm();
        if last == 0.0 {
            return 0.0;
        }
        if prev == 0.0 {
            // isolated trailing term, no decay information
            return f64::INFINITY;
        }
        let ratio = last / prev;
        if ratio >= 1.0 {
            f64::INFINITY
        } else {
            last * ratio / (1.0 - ratio)
        }
    }
}
