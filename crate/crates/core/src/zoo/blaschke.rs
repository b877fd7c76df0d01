//! Truncated infinite Blaschke products `z * prod (|a_n|/a_n)(a_n - z)/(1 - conj(a_n) z)`.
//!
//! Zeros are stored as `(1 - r_n, theta_n)` so that quantities such as
//! `|zeta - a_n|^2 = (1-r)^2 + 4 r sin^2((arg zeta - theta)/2)` can be
//! evaluated without cancellation when `a_n` is within `1e-12` of the circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ZooError;
use crate::holomorphic::Holomorphic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlaschkeKind {
    /// `r_n = 1 - 2^{-4n}`, `theta_n = 2^{-n}`: finite angular derivative at 1.
    B1,
    /// `r_n = 1 - 2^{-2n}`, `theta_n = 2^{-n}`: infinite angular derivative at 1.
    B2,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeZero {
    pub one_minus_r: f64,
    pub theta: f64,
}

impl BlaschkeZero {
    pub fn r(&self) -> f64 {
        1.0 - self.one_minus_r
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(self.r(), self.theta)
    }

    /// `1 - |a|^2`.
    fn one_minus_r2(&self) -> f64 {
        self.one_minus_r * (2.0 - self.one_minus_r)
    }

    /// `|e^{i phi} - a|^2` for a unimodular point of argument `phi`.
    pub fn dist2_to_unimodular(&self, phi: f64) -> f64 {
        let eps = self.one_minus_r;
        let s = ((phi - self.theta) / 2.0).sin();
        let four_s2 = 4.0 * s * s;
        // (1-r)^2 + 4 r s^2 rearranged as 4 s^2 + eps (eps - 4 s^2)
        four_s2 + eps * (eps - four_s2)
    }

    /// `1 - conj(a)`, computed without cancellation.
    fn one_minus_conj(&self) -> Complex64 {
        let (s, c) = self.theta.sin_cos();
        let half = (self.theta / 2.0).sin();
        // 1 - e^{-i theta} = 2 sin^2(theta/2) + i sin(theta)
        let one_minus_unit = Complex64::new(2.0 * half * half, s);
        one_minus_unit + self.one_minus_r * Complex64::new(c, -s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSpec {
    pub kind: BlaschkeKind,
    zeros: Vec<BlaschkeZero>,
}

impl BlaschkeSpec {
    /// Example with `r_n = 1 - 2^{-4n}`, keeping `factors` zeros.
    pub fn b1(factors: usize) -> Result<Self, ZooError> {
        Self::from_rule(BlaschkeKind::B1, factors)
    }

    /// Example with `r_n = 1 - 2^{-2n}`, keeping `factors` zeros.
    pub fn b2(factors: usize) -> Result<Self, ZooError> {
        Self::from_rule(BlaschkeKind::B2, factors)
    }

    pub fn custom(zeros: Vec<BlaschkeZero>) -> Result<Self, ZooError> {
        if zeros.is_empty() {
            return Err(ZooError::EmptyBlaschke);
        }
        for z in &zeros {
            if !(z.one_minus_r > 0.0 && z.one_minus_r <= 1.0) || !z.theta.is_finite() {
                return Err(ZooError::Domain {
                    name: "blaschke zero 1-|a|",
                    value: z.one_minus_r,
                });
            }
        }
        Ok(Self {
            kind: BlaschkeKind::Custom,
            zeros,
        })
    }

    /// Single zero at `a`, `0 < |a| < 1`.
    pub fn single(a: Complex64) -> Result<Self, ZooError> {
        Self::custom(vec![BlaschkeZero {
            one_minus_r: 1.0 - a.norm(),
            theta: a.arg(),
        }])
    }

    fn from_rule(kind: BlaschkeKind, factors: usize) -> Result<Self, ZooError> {
        if factors == 0 {
            return Err(ZooError::EmptyBlaschke);
        }
        let zeros = (1..=factors).map(|n| rule_zero(kind, n)).collect();
        Ok(Self { kind, zeros })
    }

    pub fn zeros(&self) -> &[BlaschkeZero] {
        &self.zeros
    }

    pub fn truncation(&self) -> usize {
        self.zeros.len()
    }

    /// `n`-th zero (1-based). Rule-based kinds extend past the truncation.
    pub fn zero(&self, n: usize) -> Option<BlaschkeZero> {
        match self.kind {
            BlaschkeKind::Custom => self.zeros.get(n.checked_sub(1)?).copied(),
            kind if n >= 1 => Some(rule_zero(kind, n)),
            _ => None,
        }
    }

    /// `sum (1 - r_n)` over the retained zeros.
    pub fn blaschke_sum(&self) -> f64 {
        self.zeros.iter().map(|z| z.one_minus_r).sum()
    }

    /// `sum_{n > N_B} (1 - r_n)`, exact for the geometric rules.
    pub fn tail_bound(&self) -> f64 {
        let n = self.zeros.len() as i32;
        match self.kind {
            BlaschkeKind::B1 => 16f64.powi(-n) / 15.0,
            BlaschkeKind::B2 => 4f64.powi(-n) / 3.0,
            BlaschkeKind::Custom => 0.0,
        }
    }

    /// Partial sums of `G(B, zeta) = sum (1 - |a_n|)/|zeta - a_n|^2` over the
    /// first `terms` zeros, for unimodular `zeta`.
    pub fn gsum(&self, zeta: Complex64, terms: usize) -> Vec<f64> {
        let phi = zeta.arg();
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(terms);
        for n in 1..=terms {
            let Some(a) = self.zero(n) else { break };
            acc += a.one_minus_r / a.dist2_to_unimodular(phi);
            out.push(acc);
        }
        out
    }

    /// `1 + sum (1 - |a_n|^2)/|zeta - a_n|^2` over the retained zeros: the
    /// angular derivative `zeta B'(zeta)/B(zeta)` of the truncated product.
    pub fn boundary_log_derivative(&self, zeta: Complex64) -> f64 {
        let phi = zeta.arg();
        1.0 + self
            .zeros
            .iter()
            .map(|a| a.one_minus_r2() / a.dist2_to_unimodular(phi))
            .sum::<f64>()
    }
}

fn rule_zero(kind: BlaschkeKind, n: usize) -> BlaschkeZero {
    let n = n as i32;
    let theta = 0.5f64.powi(n);
    let one_minus_r = match kind {
        BlaschkeKind::B1 => 0.5f64.powi(4 * n),
        BlaschkeKind::B2 => 0.5f64.powi(2 * n),
        BlaschkeKind::Custom => unreachable!("custom zeros are explicit"),
    };
    BlaschkeZero { one_minus_r, theta }
}

impl Holomorphic for BlaschkeSpec {
    fn value(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(z, |acc, zero| {
            let a = zero.point();
            let unit = Complex64::from_polar(1.0, -zero.theta);
            acc * unit * (a - z) / (1.0 - a.conj() * z)
        })
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        // B'/B = 1/z + sum (conj(a)/(1 - conj(a) z) - 1/(a - z))
        let b = self.value(z);
        if z.norm() == 0.0 {
            return self.zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, zero| {
                acc * Complex64::new(zero.r(), 0.0)
            });
        }
        let mut log_d = z.inv();
        for zero in &self.zeros {
            let a = zero.point();
            log_d += a.conj() / (1.0 - a.conj() * z) - (a - z).inv();
        }
        b * log_d
    }

    /// Uses `1 - |factor|^2 = (1-|a|^2)(1-|z|^2)/|1 - conj(a) z|^2` and sums
    /// logarithms, so the result keeps relative accuracy near the circle.
    fn one_minus_modulus(&self, z: Complex64) -> f64 {
        let rz = z.norm();
        if rz >= 1.0 {
            return 1.0 - self.value(z).norm();
        }
        let one_minus_rz = 1.0 - rz;
        let one_minus_rz2 = one_minus_rz * (1.0 + rz);
        let one_minus_z = Complex64::new(1.0, 0.0) - z;
        let mut log_mod2 = 2.0 * (-one_minus_rz).ln_1p();
        for zero in &self.zeros {
            let a_conj = zero.point().conj();
            let denom = zero.one_minus_conj() + a_conj * one_minus_z;
            let x = zero.one_minus_r2() * one_minus_rz2 / denom.norm_sqr();
            log_mod2 += (-x.min(1.0)).ln_1p();
        }
        -(0.5 * log_mod2).exp_m1()
    }
}
