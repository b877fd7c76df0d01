//! Closed-form scalar functions: the `v, w, u` family behind the third
//! coefficient counterexample, the harmonic-map bounds `A` and `B`, the
//! boundary quantities for angular derivatives and the boundary real part
//! of `N`.

use std::f64::consts::LN_2;

use super::ZooError;

/// Below this, `v` and `w'` are summed from their Maclaurin series; the
/// closed forms lose `ulp / a^2` (resp. `ulp / a^3`) to cancellation.
const V_SERIES_SWITCH: f64 = 1e-3;
const W_PRIME_SERIES_SWITCH: f64 = 0.25;

fn check(name: &'static str, value: f64, ok: bool) -> Result<(), ZooError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ZooError::Domain { name, value })
    }
}

fn check_unit_a(a: f64) -> Result<(), ZooError> {
    check("a", a, (0.0..=1.0).contains(&a))
}

fn check_lambda(lambda: f64) -> Result<(), ZooError> {
    check("lambda", lambda, lambda > 0.0 && lambda <= 1.0)
}

/// `v(a) = \int_0^1 (t+a)/(1+at) dt = 1/a - ((1-a^2)/a^2) ln(1+a)`, with
/// `v(0) = 1/2`.
pub fn v(a: f64) -> Result<f64, ZooError> {
    check_unit_a(a)?;
    if a < V_SERIES_SWITCH {
        return Ok(v_series(a));
    }
    Ok(v_closed(a))
}

fn v_closed(a: f64) -> f64 {
    1.0 / a - (1.0 - a * a) / (a * a) * a.ln_1p()
}

/// `1/2 + sum_{k>=1} 2 (-1)^{k-1} a^k / (k (k+2))`
fn v_series(a: f64) -> f64 {
    let mut acc = 0.5;
    let mut p = a;
    for k in 1..200u32 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let kf = k as f64;
        let term = sign * 2.0 * p / (kf * (kf + 2.0));
        acc += term;
        if term.abs() < 1e-18 {
            break;
        }
        p *= a;
    }
    acc
}

/// `v(a)` by numerical quadrature of the defining integral. Independent of
/// the closed form in [`v`].
pub fn v_by_quadrature(a: f64) -> Result<f64, ZooError> {
    check_unit_a(a)?;
    let out = quadrature::double_exponential::integrate(|t| (t + a) / (1.0 + a * t), 0.0, 1.0, 1e-14);
    Ok(out.integral)
}

/// `w(a) = 2 v(a) - a`.
pub fn w(a: f64) -> Result<f64, ZooError> {
    Ok(2.0 * v(a)? - a)
}

/// `w'(a) = 2/a - 4/a^2 + 4 ln(1+a)/a^3 - 1`, with `w'(0) = 1/3`.
pub fn w_prime(a: f64) -> Result<f64, ZooError> {
    check_unit_a(a)?;
    if a < W_PRIME_SERIES_SWITCH {
        // 4 sum_{n>=3} (-1)^{n-1} a^{n-3} / n - 1
        let mut acc = 0.0;
        let mut p = 1.0;
        for n in 3..200 {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * p / n as f64;
            acc += term;
            if term.abs() < 1e-18 {
                break;
            }
            p *= a;
        }
        return Ok(4.0 * acc - 1.0);
    }
    Ok(2.0 / a - 4.0 / (a * a) + 4.0 * a.ln_1p() / (a * a * a) - 1.0)
}

/// `u(a) = 6a + 3a^2 - a^3 - 6(1+a) ln(1+a)`; `w''(a) = 2 u(a) / (a^4 (1+a))`.
pub fn u(a: f64) -> Result<f64, ZooError> {
    check_unit_a(a)?;
    Ok(6.0 * a + 3.0 * a * a - a * a * a - 6.0 * (1.0 + a) * a.ln_1p())
}

/// `u'(a) = 6a - 3a^2 - 6 ln(1+a)`.
pub fn u_prime(a: f64) -> Result<f64, ZooError> {
    check_unit_a(a)?;
    Ok(6.0 * a - 3.0 * a * a - 6.0 * a.ln_1p())
}

/// `(3 - 4 ln 2)/(4 ln 2 - 2)`, the supremum of `(w(a)-1)/(1-v(a)^2)`.
pub fn delta() -> f64 {
    (3.0 - 4.0 * LN_2) / (4.0 * LN_2 - 2.0)
}

/// `(w(a) - 1)/(1 - v(a)^2)`: the third coefficient exceeds
/// `1 + lambda + lambda^2` exactly when `lambda` is below this ratio.
pub fn excess_threshold(a: f64) -> Result<f64, ZooError> {
    check("a", a, a > 0.0 && a < 1.0)?;
    let vv = v(a)?;
    Ok((w(a)? - 1.0) / (1.0 - vv * vv))
}

/// `a_3(f_a) = 1 + lambda w(a) + lambda^2 v(a)^2` using a given value of `v`.
pub fn a3_formula(lambda: f64, a: f64, v_value: f64) -> f64 {
    1.0 + lambda * (2.0 * v_value - a) + lambda * lambda * v_value * v_value
}

/// `1 + lambda + lambda^2`.
pub fn conjectured_a3_bound(lambda: f64) -> f64 {
    1.0 + lambda + lambda * lambda
}

/// `A(r, lambda) = (1 - 2 lambda r^2 - lambda^2 r^4)/(1 + lambda r^2)^2`.
pub fn a_bound(r: f64, lambda: f64) -> Result<f64, ZooError> {
    check("r", r, (0.0..=1.0).contains(&r))?;
    check_lambda(lambda)?;
    let x = lambda * r * r;
    Ok((1.0 - 2.0 * x - x * x) / ((1.0 + x) * (1.0 + x)))
}

/// `B(r, lambda) = sqrt((1 - lambda^2 r^4)(1 - 4 lambda^2 r^4)^2)`.
pub fn b_bound(r: f64, lambda: f64) -> Result<f64, ZooError> {
    check("r", r, (0.0..=1.0).contains(&r))?;
    check_lambda(lambda)?;
    let x2 = (lambda * r * r).powi(2);
    Ok(((1.0 - x2) * (1.0 - 4.0 * x2).powi(2)).sqrt())
}

fn check_cos(c: f64) -> Result<(), ZooError> {
    check("cos theta0", c, (-1.0..=1.0).contains(&c))
}

/// `R^2(t) = (1+l)^2 t^2 + l^2 (2t+1)^2 - 2 t (2t+1) l (1+l) cos theta0`,
/// the squared boundary limit of `|U_f|` when the angular derivative of the
/// subordinating function is `1 + t`.
pub fn r_squared_cos(cos_theta0: f64, lambda: f64, t: f64) -> Result<f64, ZooError> {
    check_cos(cos_theta0)?;
    check_lambda(lambda)?;
    check("t", t, t >= 0.0)?;
    let l = lambda;
    Ok((1.0 + l).powi(2) * t * t + l * l * (2.0 * t + 1.0).powi(2)
        - 2.0 * t * (2.0 * t + 1.0) * l * (1.0 + l) * cos_theta0)
}

pub fn r_squared(theta0: f64, lambda: f64, t: f64) -> Result<f64, ZooError> {
    r_squared_cos(theta0.cos(), lambda, t)
}

/// The critical cosine `2 lambda / (1 + lambda)`.
pub fn critical_cos(lambda: f64) -> f64 {
    2.0 * lambda / (1.0 + lambda)
}

fn lemma_denominator(c: f64, l: f64) -> Result<f64, ZooError> {
    let d = 5.0 * l * l + 2.0 * l + 1.0 - 4.0 * l * (1.0 + l) * c;
    check("5l^2+2l+1-4l(1+l)cos", d, d > 0.0)?;
    Ok(d)
}

/// Minimizer `t0` of `R^2`; positive exactly when `cos theta0 > 2l/(1+l)`,
/// and exactly zero at the critical cosine.
pub fn t_zero_cos(cos_theta0: f64, lambda: f64) -> Result<f64, ZooError> {
    check_cos(cos_theta0)?;
    check_lambda(lambda)?;
    let l = lambda;
    // l((1+l)c - 2l) factored around the critical cosine
    let num = l * (1.0 + l) * (cos_theta0 - critical_cos(l));
    Ok(num / lemma_denominator(cos_theta0, l)?)
}

pub fn t_zero(theta0: f64, lambda: f64) -> Result<f64, ZooError> {
    t_zero_cos(theta0.cos(), lambda)
}

/// Upper bound `(1+l)(1+l-2l cos)/(5l^2+2l+1-4l(1+l)cos)` for the angular
/// derivative quotient in the supercritical case.
pub fn lemma31_upper_cos(cos_theta0: f64, lambda: f64) -> Result<f64, ZooError> {
    check_cos(cos_theta0)?;
    check_lambda(lambda)?;
    let l = lambda;
    Ok((1.0 + l) * (1.0 + l - 2.0 * l * cos_theta0) / lemma_denominator(cos_theta0, l)?)
}

pub fn lemma31_upper(theta0: f64, lambda: f64) -> Result<f64, ZooError> {
    lemma31_upper_cos(theta0.cos(), lambda)
}

/// `Re N(e^{i theta}) = 1 - l^3 - 2l(1-l) cos theta - l(1-l) cos 2 theta`
/// for `N(z) = (1 - l z^2)(1 - l conj(z))^2`.
pub fn re_n_boundary(lambda: f64, theta: f64) -> Result<f64, ZooError> {
    check_lambda(lambda)?;
    let l = lambda;
    Ok(1.0 - l.powi(3) - 2.0 * l * (1.0 - l) * theta.cos() - l * (1.0 - l) * (2.0 * theta).cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn v_endpoints_and_switch() {
        assert!((v(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(v(0.0).unwrap(), 0.5);
        assert!((v(1e-9).unwrap() - 0.5).abs() < 1e-8);
        for &a in &[V_SERIES_SWITCH, 0.01, 0.2] {
            assert!((v_series(a) - v_closed(a)).abs() < 1e-13, "a={a}");
        }
        assert!(v(1.5).is_err());
        assert!(v(-0.1).is_err());
    }

    #[test]
    fn v_matches_quadrature() {
        for &a in &[0.01, 0.2, 0.5, 0.77, 0.999] {
            let d = (v(a).unwrap() - v_by_quadrature(a).unwrap()).abs();
            assert!(d < 1e-13, "a={a} d={d}");
        }
    }

    #[test]
    fn w_family() {
        assert!((w(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((w(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((w_prime(1.0).unwrap() - (4.0 * LN_2 - 3.0)).abs() < 1e-14);
        assert!((w_prime(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // finite differences of w against w'
        for &a in &[0.05, 0.2, 0.26, 0.6, 0.9] {
            let h = 1e-5;
            let fd = (w(a + h).unwrap() - w(a - h).unwrap()) / (2.0 * h);
            assert!((fd - w_prime(a).unwrap()).abs() < 1e-8, "a={a}");
        }
        // w'' = 2u/(a^4(1+a)) by finite differences of w'
        for &a in &[0.3, 0.7] {
            let h = 1e-5;
            let fd = (w_prime(a + h).unwrap() - w_prime(a - h).unwrap()) / (2.0 * h);
            let formula = 2.0 * u(a).unwrap() / (a.powi(4) * (1.0 + a));
            assert!((fd - formula).abs() < 1e-7, "a={a}");
        }
        // u' matches u
        let a = 0.4;
        let fd = (u(a + 1e-6).unwrap() - u(a - 1e-6).unwrap()) / 2e-6;
        assert!((fd - u_prime(a).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn delta_value() {
        assert!((delta() - 0.29435).abs() < 5e-6);
        let near_one = excess_threshold(1.0 - 1e-5).unwrap();
        assert!((near_one - delta()).abs() < 1e-4);
        assert!(near_one < delta());
    }

    #[test]
    fn forced_zeros() {
        let l = 0.37;
        assert!(t_zero_cos(critical_cos(l), l).unwrap() == 0.0);
        assert_eq!(r_squared(1.3, l, 0.0).unwrap(), l * l);
        assert!(a_bound(1.0, 2f64.sqrt() - 1.0).unwrap().abs() < 1e-15);
        assert_eq!(b_bound(1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn t_zero_minimizes_r_squared() {
        let (c, l) = (0.9, 0.4);
        let t0 = t_zero_cos(c, l).unwrap();
        assert!(t0 > 0.0);
        let at = |t: f64| r_squared_cos(c, l, t).unwrap();
        assert!(at(t0) < at(t0 + 1e-4) && at(t0) < at(t0 - 1e-4));
        // R^2 returns to lambda^2 at 2 t0
        assert!((at(2.0 * t0) - l * l).abs() < 1e-14);
    }

    #[test]
    fn re_n_matches_direct_evaluation() {
        for &l in &[0.2, 0.5, 1.0] {
            for k in 0..32 {
                let th = k as f64 * 0.2;
                let z = Complex64::from_polar(1.0, th);
                let n = (1.0 - l * z * z) * (1.0 - l * z.conj()).powi(2);
                assert!((n.re - re_n_boundary(l, th).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(a_bound(1.1, 0.5).is_err());
        assert!(b_bound(0.5, 0.0).is_err());
        assert!(t_zero_cos(1.0, 1.0).is_err());
        assert!(r_squared_cos(0.5, 0.5, -1.0).is_err());
    }
}
