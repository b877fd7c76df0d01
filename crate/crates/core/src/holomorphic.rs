//! Minimal interface shared by everything that can be evaluated on the disk.

use num_complex::Complex64;

pub trait Holomorphic: Sync {
    fn value(&self, z: Complex64) -> Complex64;

    fn derivative(&self, z: Complex64) -> Complex64;

    /// `1 - |value(z)|`. Implementations with a cancellation-free route
    /// (Blaschke products near the circle) override this.
    fn one_minus_modulus(&self, z: Complex64) -> f64 {
        1.0 - self.value(z).norm()
    }
}

/// Wraps a pair of closures as a [`Holomorphic`] map.
pub struct FnMap<F, D> {
    f: F,
    df: D,
}

impl<F, D> FnMap<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    pub fn new(f: F, df: D) -> Self {
        Self { f, df }
    }
}

impl<F, D> Holomorphic for FnMap<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        (self.df)(z)
    }
}
