use proptest::prelude::*;
use schlicht::{Complex64, TruncatedSeries};

const ORDER: usize = 12;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(coeff(), ORDER + 1).prop_map(|c| TruncatedSeries::new(c).unwrap())
}

/// Series with constant term 1 and coefficients decaying like 2^{-n}.
fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(coeff(), ORDER).prop_map(|c| {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        v.extend(c.iter().enumerate().map(|(n, x)| x * 0.5f64.powi(n as i32 + 1)));
        TruncatedSeries::new(v).unwrap()
    })
}

fn close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) -> bool {
    a.max_abs_diff(b).unwrap() <= tol
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        let l = a.add(&b).unwrap().add(&c).unwrap();
        let r = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert!(close(&l, &r, 1e-14));
    }

    #[test]
    fn multiplication_is_a_commutative_ring(a in series(), b in series(), c in series()) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(close(&ab, &b.mul(&a).unwrap(), 1e-12));
        let l = ab.mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(close(&l, &r, 1e-9));
        let dist = a.mul(&b.add(&c).unwrap()).unwrap();
        let sum = ab.add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(close(&dist, &sum, 1e-11));
        prop_assert_eq!(a.mul(&TruncatedSeries::one(ORDER)).unwrap(), a.clone());
        prop_assert!(close(&a.sub(&a).unwrap(), &TruncatedSeries::zero(ORDER), 0.0));
    }

    #[test]
    fn reciprocal_inverts(a in unit_series()) {
        let p = a.mul(&a.reciprocal().unwrap()).unwrap();
        prop_assert!(close(&p, &TruncatedSeries::one(ORDER), 1e-10));
    }

    #[test]
    fn differentiate_undoes_integrate(a in series()) {
        let back = a.integrate0().differentiate();
        prop_assert!(close(&back, &a.truncate(ORDER - 1), 1e-14));
        prop_assert_eq!(a.integrate0().coeff(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in series(), b in series(), r in 0.0f64..0.3, t in 0.0f64..6.3) {
        // beyond the truncation the product picks up terms of order z^{N+1}
        let z = Complex64::from_polar(r, t);
        let lhs = a.mul(&b).unwrap().eval(z);
        let rhs = a.eval(z) * b.eval(z);
        prop_assert!((lhs - rhs).norm() <= 100.0 * r.powi(ORDER as i32 + 1) + 1e-12);
    }

    #[test]
    fn sqrt_squares_back(a in unit_series()) {
        let s = a.sqrt().unwrap();
        prop_assert!(close(&s.mul(&s).unwrap(), &a, 1e-10));
    }
}
