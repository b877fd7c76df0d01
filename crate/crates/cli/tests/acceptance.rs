//! The acceptance criteria, one line each:
//!
//! ```text
//! cargo test --release -p schlicht-cli --test acceptance
//! ```
//!
//! Runs without the libtest harness so that every criterion reports, in
//! order, even when an earlier one fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, LN_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use schlicht::geometry::{
    boundary_re_checks, certify_direction, convexity_quotient, schwarz_recover, tracked_psi, CertificateStatus,
    SearchGrid, SubordinationStatus, SubordinationWitness,
};
use schlicht::harmonic::{build_harmonic, certify_t42, HarmonicStatus};
use schlicht::membership::{
    dyadic_radii, julia_quotient, membership_verdict, sup_abs_u, u_series, JuliaConfig, JuliaLimit, SamplingPlan,
    Verdict,
};
use schlicht::zoo::scalars::{
    a3_formula, a_bound, b_bound, conjectured_a3_bound, critical_cos, delta, lemma31_upper_cos, r_squared, t_zero_cos,
    v, v_by_quadrature, w, w_prime,
};
use schlicht::zoo::{
    make_example32, make_f_a, make_f_theta, make_from_omega, make_g_threefold, make_omega1_quadratic, BlaschkeSpec,
    SchwarzCandidate, SchwarzRole,
};
use schlicht::{Complex64, Holomorphic};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

// `!(x < tol)` on purpose: a NaN must fail the check.
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// `a_n` of `z/((1 - rho z)(1 - lambda rho z))` by partial fractions.
fn f_theta_coefficient(lambda: f64, theta: f64, n: usize) -> Complex64 {
    let rho = Complex64::from_polar(1.0, theta);
    let scale = if lambda == 1.0 {
        n as f64
    } else {
        (1.0 - lambda.powi(n as i32)) / (1.0 - lambda)
    };
    rho.powu(n as u32 - 1) * scale
}

fn coefficient_identity() -> Outcome {
    let mut worst = 0.0f64;
    for &lambda in &[0.25, 0.5, 1.0] {
        for &theta in &[0.0, FRAC_PI_3] {
            let f = make_f_theta(lambda, theta).map_err(|e| e.to_string())?;
            for n in 1..=12 {
                let err = (f.coefficient(n) - f_theta_coefficient(lambda, theta, n)).norm();
                worst = worst.max(err);
                ensure!(err < 1e-10, "lambda={lambda} theta={theta} n={n}: error {err:e}");
            }
        }
    }
    Ok(format!("max error {worst:.1e}"))
}

/// The scan as run from the command line; returns its JSON result.
fn cli(args: &[&str]) -> Result<Value, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = schlicht_cli::main_with_args(
        std::iter::once("schlicht").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    ensure!(code == 0, "{args:?} exited {code}: {}", String::from_utf8_lossy(&err));
    let doc: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    Ok(doc["result"].clone())
}

fn counterexample() -> Outcome {
    let (lambda, a) = (0.15, 0.5);
    let f = make_f_a(lambda, a).map_err(|e| e.to_string())?;
    let series = f.coefficient(3);
    let formula = a3_formula(lambda, a, v_by_quadrature(a).map_err(|e| e.to_string())?);
    let excess = series.re - conjectured_a3_bound(lambda);
    ensure!(excess > 0.0, "excess {excess}");
    let gap = (series - formula).norm();
    ensure!(gap < 1e-8, "routes differ by {gap:e}");

    let scan = cli(&["--reproducible", "counterexample", "--scan"])?;
    let threshold = scan["threshold"].as_f64().ok_or("no threshold")?;
    let lo = scan["bracket"][0].as_f64().ok_or("no bracket")?;
    let hi = scan["bracket"][1].as_f64().ok_or("no bracket")?;
    ensure!((0.289..=0.300).contains(&threshold), "threshold {threshold}");
    ensure!(lo <= delta() && delta() <= hi, "bracket [{lo}, {hi}] misses delta");

    let closed = (3.0 - 4.0 * LN_2) / (4.0 * LN_2 - 2.0);
    ensure!((delta() - closed).abs() < 1e-12, "delta {}", delta());
    let checks = [
        ("v(1)", v(1.0).map_err(|e| e.to_string())?, 1.0),
        ("v(0+)", v(1e-12).map_err(|e| e.to_string())?, 0.5),
        ("w(0)", w(0.0).map_err(|e| e.to_string())?, 1.0),
        ("w(1)", w(1.0).map_err(|e| e.to_string())?, 1.0),
        ("w'(1)", w_prime(1.0).map_err(|e| e.to_string())?, 4.0 * LN_2 - 3.0),
    ];
    for (name, got, want) in checks {
        ensure!((got - want).abs() < 1e-10, "{name} = {got}, expected {want}");
    }
    Ok(format!(
        "excess {excess:.6}, routes agree to {gap:.1e}, threshold {threshold} in [{lo}, {hi}], delta {:.5}",
        delta()
    ))
}

fn membership() -> Outcome {
    let plan = SamplingPlan::default();
    let r = plan.r_max();
    for &lambda in &[0.25, 0.5, 1.0] {
        for &theta in &[0.0, FRAC_PI_3] {
            let f = make_f_theta(lambda, theta).map_err(|e| e.to_string())?;
            let rep = membership_verdict(&f, lambda, &plan).map_err(|e| e.to_string())?;
            let want = lambda * r * r;
            ensure!(
                (rep.sup_estimate - want).abs() <= 1e-9,
                "f_theta({lambda},{theta}): sup {} vs {want}",
                rep.sup_estimate
            );
            ensure!(
                rep.verdict == Verdict::In,
                "f_theta({lambda},{theta}): {:?}",
                rep.verdict
            );
        }
    }
    let rep = membership_verdict(&make_g_threefold(), 1.0, &plan).map_err(|e| e.to_string())?;
    ensure!(
        (rep.sup_estimate - r.powi(3)).abs() <= 1e-9,
        "g: sup {}",
        rep.sup_estimate
    );
    ensure!(rep.verdict == Verdict::In, "g: {:?}", rep.verdict);
    for &lambda in &[0.25, 0.5] {
        for k in [2u32, 3] {
            let f = make_example32(lambda, k).map_err(|e| e.to_string())?;
            let sup = sup_abs_u(&f, &plan).map_err(|e| e.to_string())?.sup_estimate;
            let want = lambda * r.powi(k as i32 + 1);
            ensure!(
                (sup - want).abs() <= 1e-9,
                "example32({lambda},{k}): sup {sup} vs {want}"
            );
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let degree = rng.gen_range(0..8);
        let raw: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        // sum |c_k| <= 1 keeps |omega| <= 1 on the disk
        let total: f64 = raw.iter().map(|z| z.norm()).sum();
        let scale = rng.gen_range(0.1..1.0) / total.max(1e-300);
        let coeffs: Vec<Complex64> = raw.iter().map(|z| z * scale).collect();
        let lambda = rng.gen_range(0.05..=1.0);
        let a2 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let omega = SchwarzCandidate::polynomial(SchwarzRole::Omega, coeffs.clone()).map_err(|e| e.to_string())?;
        let f = make_from_omega(lambda, a2, omega).map_err(|e| e.to_string())?;
        let u = u_series(&f);
        for (n, got) in u.coeffs().iter().enumerate() {
            let want = if n >= 2 {
                coeffs.get(n - 2).map_or(c(0.0), |&ck| -lambda * ck)
            } else {
                c(0.0)
            };
            let err = (got - want).norm();
            worst = worst.max(err);
            ensure!(err < 1e-12, "trial {trial}: coefficient {n} off by {err:e}");
        }
    }
    Ok(format!(
        "sup matches r_max powers to 1e-9; master identity max error {worst:.1e} over 50 draws"
    ))
}

fn close_to_convexity() -> Outcome {
    let plan = SamplingPlan::default();
    ensure!(plan.len() >= 80_000, "grid has only {} points", plan.len());
    let points = plan.points();
    let mut worst = f64::INFINITY;
    for &lambda in &[0.3, 0.7, 1.0] {
        for &theta in &[0.0, FRAC_PI_4, FRAC_PI_2] {
            let f = make_f_theta(lambda, theta).map_err(|e| e.to_string())?;
            let rho = Complex64::from_polar(1.0, theta);
            for &z in &points {
                let one = c(1.0) - rho * z;
                let v = (one * one * f.derivative(z)).re;
                worst = worst.min(v);
                ensure!(v >= -1e-9, "lambda={lambda} theta={theta} z={z}: {v:e}");
            }
        }
        let checks = boundary_re_checks(lambda, 4096, 1, 2).map_err(|e| e.to_string())?;
        // independent evaluation of Re N on the circle
        let mut oracle = f64::INFINITY;
        for k in 0..4096 {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / 4096.0);
            let n = (c(1.0) - lambda * z * z) * (c(1.0) - lambda * z.conj()).powu(2);
            oracle = oracle.min(n.re);
        }
        let bound = (1.0 - lambda).powi(3);
        ensure!(
            checks.re_n_min - bound >= -1e-12,
            "lambda={lambda}: Re N min {}",
            checks.re_n_min
        );
        ensure!(oracle - bound >= -1e-12, "lambda={lambda}: oracle Re N min {oracle}");
    }
    Ok(format!(
        "{} points, min {worst:.3e}; Re N >= (1-lambda)^3 on 4096 angles",
        points.len()
    ))
}

fn boundary_expression(lambda: f64, p: f64, x: f64) -> f64 {
    let lp = lambda * p;
    (1.0 - lp) * (1.0 + 4.0 * lp + lp * lp + (1.0 + lp).powi(2) * x - 2.0 * lp * x * x)
}

fn convexity_examples() -> Outcome {
    let mut worst = f64::INFINITY;
    for &p in &[0.5, 1.0] {
        for &lambda in &[0.5, 1.0] {
            for k in 0..1024 {
                let x = -1.0 + 2.0 * k as f64 / 1023.0;
                let e = boundary_expression(lambda, p, x);
                let q = convexity_quotient(lambda, p, x);
                worst = worst.min(e);
                ensure!(
                    e >= -1e-12 && q >= -1e-12,
                    "p={p} lambda={lambda} x={x}: {e:e}, quotient {q:e}"
                );
            }
        }
    }
    let phi = make_omega1_quadratic(1.0, c(1.0)).map_err(|e| e.to_string())?;
    let cert = certify_direction(&phi, 0.0, &SamplingPlan::default(), &SearchGrid::default(), 1e-9);
    ensure!(
        cert.status == CertificateStatus::Certified,
        "z/(1+z^2) at gamma=0: best min {} at mu={} nu={}",
        cert.min_re,
        cert.mu,
        cert.nu
    );
    Ok(format!(
        "boundary expression min {worst:.3e}; z/(1+z^2) certified at mu={:.4}, nu={:.4}",
        cert.mu, cert.nu
    ))
}

fn threefold_refutation() -> Outcome {
    let g = make_g_threefold();
    let plan = SamplingPlan::dyadic(12, 512, 1e-9).map_err(|e| e.to_string())?;
    let search = SearchGrid::default();
    let mut least_negative = f64::NEG_INFINITY;
    for i in 0..64 {
        let gamma = PI * i as f64 / 64.0;
        let cert = certify_direction(&g, gamma, &plan, &search, 1e-9);
        ensure!(cert.status == CertificateStatus::Failed, "gamma={gamma} certified");
        // the reported pair has the largest grid minimum of all searched pairs
        ensure!(
            cert.min_re < -1e-3,
            "gamma={gamma}: (mu={}, nu={}) reaches {}",
            cert.mu,
            cert.nu,
            cert.min_re
        );
        least_negative = least_negative.max(cert.min_re);
    }
    Ok(format!(
        "64 directions, {}x{} (mu,nu) pairs each, {} grid points: no certificate, best min {least_negative:.4}",
        search.mu_points,
        search.nu_points,
        plan.len()
    ))
}

fn subordination() -> Outcome {
    let plan = SamplingPlan::default();
    let points = plan.points();
    let mut worst = 0.0f64;
    for &(lambda, theta) in &[(0.5, 0.0), (0.8, 1.3), (1.0, FRAC_PI_3)] {
        let f = make_f_theta(lambda, theta).map_err(|e| e.to_string())?;
        let verdict = schwarz_recover(&f, lambda, &plan).map_err(|e| e.to_string())?;
        ensure!(
            verdict.status == SubordinationStatus::Subordinate,
            "f_theta({lambda},{theta}): {:?}",
            verdict.status
        );
        let rho = Complex64::from_polar(1.0, theta);
        let psi = tracked_psi(&f, lambda, &plan).map_err(|e| e.to_string())?;
        for (p, z) in psi.iter().zip(&points) {
            worst = worst.max((p - rho * z).norm());
        }
        ensure!(worst < 1e-8, "f_theta({lambda},{theta}): |psi - rho z| up to {worst:e}");
    }
    let mut witnesses = Vec::new();
    for &lambda in &[0.25, 0.5] {
        for k in [2u32, 3] {
            let f = make_example32(lambda, k).map_err(|e| e.to_string())?;
            let verdict = schwarz_recover(&f, lambda, &plan).map_err(|e| e.to_string())?;
            ensure!(
                verdict.status == SubordinationStatus::NotSubordinate,
                "example32({lambda},{k}): {:?} {:?}",
                verdict.status,
                verdict.diagnostics
            );
            match verdict.witness {
                Some(SubordinationWitness::ModulusExcess { z, modulus }) => {
                    ensure!(
                        z.norm() >= 0.999,
                        "example32({lambda},{k}): excess at |z| = {}",
                        z.norm()
                    );
                    witnesses.push(format!("|psi|={modulus:.4}"));
                }
                Some(SubordinationWitness::BranchPoint { z }) => {
                    ensure!(z.norm() < 1.0, "branch point outside the disk");
                    witnesses.push(format!("branch at {z}"));
                }
                other => return Err(format!("example32({lambda},{k}): witness {other:?}")),
            }
        }
    }
    Ok(format!(
        "f_theta |psi - rho z| <= {worst:.1e}; example32 witnesses {}",
        witnesses.join(", ")
    ))
}

fn blaschke() -> Outcome {
    let b1 = BlaschkeSpec::b1(50).map_err(|e| e.to_string())?;
    let g1 = b1.gsum(c(1.0), 50);
    let cap = 4.0 * PI * PI / 45.0 + 1e-6;
    ensure!(g1.windows(2).all(|w| w[1] >= w[0]), "B1 partial sums not monotone");
    ensure!(g1.iter().all(|&s| s <= cap), "B1 partial sum above 4 pi^2/45");
    let tail = g1[49] - g1[39];
    ensure!(tail <= 1e-10, "B1 sums still move by {tail:e} after 40 terms");

    let b2 = BlaschkeSpec::b2(50).map_err(|e| e.to_string())?;
    let g2 = b2.gsum(c(1.0), 50);
    ensure!(g2.len() == 50, "B2 has {} terms", g2.len());
    for (i, &s) in g2.iter().enumerate() {
        ensure!(s >= (i + 1) as f64, "B2 partial sum {} = {s}", i + 1);
    }

    let radii = dyadic_radii(20);
    let cfg = JuliaConfig::default();
    let j1 = julia_quotient(&BlaschkeSpec::b1(40).map_err(|e| e.to_string())?, c(1.0), &radii, &cfg);
    let j2 = julia_quotient(&BlaschkeSpec::b2(40).map_err(|e| e.to_string())?, c(1.0), &radii, &cfg);
    let q1 = match j1.classification {
        JuliaLimit::Finite { q } if q > 1.0 => q,
        other => return Err(format!("B1 Julia quotient {other:?}")),
    };
    ensure!(
        j2.classification == JuliaLimit::Divergent,
        "B2 Julia quotient {:?}",
        j2.classification
    );

    let k1 = 15f64.sqrt() / (2.0 * PI);
    for n in 1..=b1.truncation() {
        let z = b1.zero(n).ok_or("missing zero")?;
        let d = z.dist2_to_unimodular(0.0).sqrt();
        ensure!(d >= k1 * 0.5f64.powi(n as i32), "B1 zero {n}: |1-a| = {d:e}");
    }
    for n in 1..=b2.truncation() {
        let z = b2.zero(n).ok_or("missing zero")?;
        let d2 = z.dist2_to_unimodular(0.0);
        ensure!(d2 <= 0.25f64.powi(n as i32), "B2 zero {n}: |1-a|^2 = {d2:e}");
    }
    Ok(format!(
        "G(B1,1) -> {:.12} <= 4pi^2/45, G(B2,1) after 50 terms {:.2}; Julia B1 finite {q1:.4}, B2 divergent",
        g1[49], g2[49]
    ))
}

fn lemma_formulas() -> Outcome {
    let mut rng = StdRng::seed_from_u64(31);
    // at lambda = 1 the critical cosine is 1 and t_zero degenerates to 0/0
    for &lambda in &[0.1, 0.3, 0.5, 0.9, 0.999] {
        let t = t_zero_cos(critical_cos(lambda), lambda).map_err(|e| e.to_string())?;
        ensure!(t == 0.0, "t_zero at the critical cosine for lambda={lambda}: {t:e}");
    }
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let lambda: f64 = rng.gen_range(0.01..0.99);
        let lo = critical_cos(lambda);
        let cos0 = rng.gen_range(lo..=1.0);
        let t = t_zero_cos(cos0, lambda).map_err(|e| e.to_string())?;
        let upper = lemma31_upper_cos(cos0, lambda).map_err(|e| e.to_string())?;
        let err = (upper - (1.0 + 2.0 * t)).abs();
        worst = worst.max(err);
        ensure!(err <= 1e-12, "lambda={lambda} cos={cos0}: {upper} vs {}", 1.0 + 2.0 * t);
        let theta0 = cos0.acos();
        let r0 = r_squared(theta0, lambda, 0.0).map_err(|e| e.to_string())?;
        ensure!((r0 - lambda * lambda).abs() <= 1e-15, "R^2(theta0, {lambda}, 0) = {r0}");
    }
    Ok(format!(
        "t_zero exact at the critical cosine; upper = 1 + 2 t_zero to {worst:.1e} on 1000 draws"
    ))
}

fn harmonic() -> Outcome {
    let omega = SchwarzCandidate::monomial(SchwarzRole::Omega, c(1.0), 1).map_err(|e| e.to_string())?;
    let h = make_from_omega(0.3, c(0.0), omega).map_err(|e| e.to_string())?;
    let dil = SchwarzCandidate::monomial(SchwarzRole::Dilatation, c(0.18), 1).map_err(|e| e.to_string())?;
    let f = build_harmonic(h, dil).map_err(|e| e.to_string())?;
    let cert = certify_t42(&f, &SamplingPlan::default()).map_err(|e| e.to_string())?;
    ensure!(
        cert.status == HarmonicStatus::Certified,
        "T42: {:?} {:?}",
        cert.status,
        cert.notes
    );
    ensure!(cert.grid_min_margin > 0.0, "margin {}", cert.grid_min_margin);
    ensure!(cert.min_jacobian > 0.0, "jacobian {}", cert.min_jacobian);

    let a0 = a_bound(1.0, 2f64.sqrt() - 1.0).map_err(|e| e.to_string())?;
    let b0 = b_bound(1.0, 0.5).map_err(|e| e.to_string())?;
    ensure!(a0.abs() <= 1e-14, "A(1, sqrt2-1) = {a0:e}");
    ensure!(b0.abs() <= 1e-14, "B(1, 1/2) = {b0:e}");
    let mut worst = 0.0f64;
    for i in 0..32 {
        for j in 0..32 {
            let r = i as f64 / 31.0;
            // cos(3 arcsin x) = sqrt(1-x^2)(1-4x^2) needs x = lambda r^2 <= 1/2
            let lambda = 0.5 * (j + 1) as f64 / 32.0;
            let got = b_bound(r, lambda).map_err(|e| e.to_string())?;
            let want = (3.0 * (lambda * r * r).asin()).cos();
            worst = worst.max((got - want).abs());
        }
    }
    ensure!(worst <= 1e-12, "B vs cos(3 arcsin): {worst:e}");
    Ok(format!(
        "T42 certified, margin {:.4}, min jacobian {:.4}; forced zeros {a0:.1e}, {b0:.1e}; cos(3 arcsin) identity {worst:.1e}",
        cert.grid_min_margin, cert.min_jacobian
    ))
}

fn read_csv(path: &Path) -> Result<Vec<(f64, Complex64)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    ensure!(lines.next() == Some("t,re,im"), "bad header in {}", path.display());
    lines
        .map(|l| {
            let v: Vec<f64> = l
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            ensure!(v.len() == 3, "bad row {l}");
            Ok((v[0], Complex64::new(v[1], v[2])))
        })
        .collect()
}

/// Distance from `w` to the curve `t -> f(r e^{it})`, refining around the
/// nearest sample with golden-section search.
fn distance_to_curve(f: &dyn Holomorphic, r: f64, samples: &[(f64, Complex64)], w: Complex64) -> f64 {
    let (k, _) = samples
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 .1 - w).norm().total_cmp(&(b.1 .1 - w).norm()))
        .expect("non-empty");
    let h = TAU / samples.len() as f64;
    let d = |t: f64| (f.value(Complex64::from_polar(r, t)) - w).norm();
    let (mut a, mut b) = (samples[k].0 - h, samples[k].0 + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        if d(x1) < d(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    d(0.5 * (a + b)).min((samples[k].1 - w).norm())
}

fn rendering() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("figures");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    cli(&[
        "--reproducible",
        "render",
        "--family",
        "g",
        "--r",
        "0.999",
        "--n",
        "4096",
        "--svg",
        &path("figure1.svg"),
        "--csv",
        &path("figure1.csv"),
    ])?;
    cli(&[
        "--reproducible",
        "render",
        "--family",
        "omega1_quadratic",
        "--lambda",
        "1",
        "--a",
        "1",
        "--r",
        "0.9999",
        "--n",
        "4096",
        "--svg",
        &path("figure2.svg"),
        "--csv",
        &path("figure2.csv"),
    ])?;
    for name in ["figure1.svg", "figure2.svg"] {
        let svg = std::fs::read_to_string(dir.join(name)).map_err(|e| e.to_string())?;
        ensure!(
            svg.contains(r#"version="1.1""#) && svg.contains("<polygon"),
            "{name} has no curve"
        );
    }

    // z/(1+z^2): real boundary values 1/(2 cos t) away from t = +-pi/2
    let fig2 = read_csv(&dir.join("figure2.csv"))?;
    let near_pole = |t: f64| (t - FRAC_PI_2).abs() < 0.2 || (t - 3.0 * FRAC_PI_2).abs() < 0.2;
    let mut max_im = 0.0f64;
    let mut min_re = f64::INFINITY;
    for &(t, w) in fig2.iter().filter(|(t, _)| !near_pole(*t)) {
        max_im = max_im.max(w.im.abs());
        min_re = min_re.min(w.re.abs());
        ensure!(w.im.abs() < 2e-3, "t={t}: Im {}", w.im);
        ensure!(w.re.abs() >= 0.5 - 1e-3, "t={t}: Re {}", w.re);
    }

    // g commutes with rotation by 2 pi/3, so its boundary curve is invariant
    let g = make_g_threefold();
    let fig1 = read_csv(&dir.join("figure1.csv"))?;
    let rot = Complex64::from_polar(1.0, TAU / 3.0);
    let mut worst = 0.0f64;
    for &(_, w) in &fig1 {
        worst = worst.max(distance_to_curve(&g, 0.999, &fig1, rot * w));
    }
    ensure!(worst <= 1e-9, "rotated g-curve is {worst:e} from the curve");
    Ok(format!(
        "figures in {}; z/(1+z^2) |Im| <= {max_im:.1e}, |Re| >= {min_re:.4} off |t -+ pi/2| < 0.2; g rotation {worst:.1e}",
        dir.display()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("coefficients of f_theta", coefficient_identity),
        ("third-coefficient counterexample", counterexample),
        ("membership suprema and master identity", membership),
        ("close-to-convexity of f_theta", close_to_convexity),
        ("convexity boundary expression and direction", convexity_examples),
        ("no convex direction for g", threefold_refutation),
        ("subordination", subordination),
        ("Blaschke boundary behaviour", blaschke),
        ("angular derivative formulas", lemma_formulas),
        ("harmonic certificates", harmonic),
        ("rendering", rendering),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
