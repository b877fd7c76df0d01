use std::path::Path;

use schlicht::geometry::{
    boundary_curve, boundary_re_checks, certify_direction, schwarz_recover, CertificateStatus, GeometryError,
    SearchGrid, SubordinationStatus,
};
use schlicht::harmonic::{build_harmonic, certify_t42, certify_t43, HarmonicError};
use schlicht::membership::{dyadic_radii, julia_quotient, membership_verdict, JuliaConfig, MembershipError};
use schlicht::zoo::scalars::{a3_formula, conjectured_a3_bound, delta, excess_threshold, v, v_by_quadrature};
use schlicht::zoo::{make_f_a, BlaschkeKind, BlaschkeSpec};
use schlicht::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::write_atomic;
use crate::render::{curve_csv, curve_svg, Viewport};
use crate::spec::plan_from;
use crate::{CliError, Command, FunctionArgs, KindArg, Payload, PlanArgs, TheoremArg};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn ok(result: Value, warnings: Vec<String>) -> Result<Payload, CliError> {
    Ok(Payload {
        result,
        warnings,
        numerical_failure: false,
    })
}

pub fn dispatch(cmd: &Command) -> Result<Payload, CliError> {
    match cmd {
        Command::Membership {
            function,
            plan,
            against,
        } => membership(function, plan, *against),
        Command::Coeffs { function, n } => coeffs(function, *n),
        Command::Counterexample {
            lambda,
            a,
            scan,
            lambda_min,
            lambda_max,
            lambda_step,
            csv,
        } => {
            if *scan {
                counterexample_scan(*lambda_min, *lambda_max, *lambda_step, csv.as_deref())
            } else {
                counterexample(*lambda, *a)
            }
        }
        Command::Convexity {
            function,
            plan,
            gamma,
            gammas,
            mu_points,
            nu_points,
            boundary,
        } => {
            if *boundary {
                convexity_boundary(function)
            } else {
                let search = SearchGrid {
                    mu_points: *mu_points,
                    nu_points: *nu_points,
                };
                convexity(function, plan, *gamma, *gammas, search)
            }
        }
        Command::Subordination {
            function,
            plan,
            against,
        } => subordination(function, plan, *against),
        Command::Blaschke {
            kind,
            factors,
            zeta_arg,
            terms,
            radii,
        } => blaschke(*kind, *factors, *zeta_arg, *terms, *radii),
        Command::Harmonic {
            function,
            plan,
            dilatation,
            theorem,
        } => harmonic(function, plan, dilatation.as_deref(), *theorem),
        Command::Render {
            function,
            r,
            n,
            svg,
            csv,
        } => render(function, *r, *n, svg.as_deref(), csv.as_deref()),
    }
}

fn plan(p: &PlanArgs) -> Result<schlicht::membership::SamplingPlan, CliError> {
    plan_from(p.radii_count, p.angles, p.tolerance)
}

fn membership(function: &FunctionArgs, p: &PlanArgs, against: Option<f64>) -> Result<Payload, CliError> {
    let spec = function.to_spec()?;
    let (f, mut warnings) = spec.resolve()?;
    let plan = plan(p)?;
    let level = against.unwrap_or(f.lambda);
    let report = membership_verdict(&f, level, &plan).map_err(|e| match e {
        MembershipError::Lambda(_) | MembershipError::InvalidPlan(_) => usage(e.to_string()),
        MembershipError::Singular { .. } | MembershipError::NonFinite { .. } => CliError::Numerical(e.to_string()),
    })?;
    if !report.skipped_points.is_empty() {
        warnings.push(format!(
            "{} grid points at poles of f were skipped",
            report.skipped_points.len()
        ));
    }
    ok(to_value(&report), warnings)
}

#[derive(Serialize)]
struct CoefficientRow {
    n: usize,
    value: Complex64,
    modulus: f64,
    /// `sum_{k<n} lambda^k`.
    bound: f64,
    exceeds_bound: bool,
}

fn coeffs(function: &FunctionArgs, n: usize) -> Result<Payload, CliError> {
    if !(1..=512).contains(&n) {
        return Err(usage("--n must be in 1..=512"));
    }
    let (mut f, warnings) = function.to_spec()?.resolve()?;
    if f.order() < n {
        f = f.with_order(n).map_err(|e| CliError::Numerical(e.to_string()))?;
    }
    let rows: Vec<CoefficientRow> = (1..=n)
        .map(|k| {
            let value = f.coefficient(k);
            let bound: f64 = (0..k).map(|j| f.lambda.powi(j as i32)).sum();
            CoefficientRow {
                n: k,
                value,
                modulus: value.norm(),
                bound,
                exceeds_bound: value.norm() > bound + 1e-12,
            }
        })
        .collect();
    ok(
        json!({"function": f.name, "lambda": f.lambda, "coefficients": rows}),
        warnings,
    )
}

fn counterexample(lambda: Option<f64>, a: Option<f64>) -> Result<Payload, CliError> {
    let (Some(lambda), Some(a)) = (lambda, a) else {
        return Err(usage("counterexample needs --lambda and --a (or --scan)"));
    };
    let f = make_f_a(lambda, a).map_err(|e| usage(e.to_string()))?;
    let a3_series = f.coefficient(3);
    let vq = v_by_quadrature(a).map_err(|e| CliError::Numerical(e.to_string()))?;
    let by_formula = a3_formula(lambda, a, vq);
    let bound = conjectured_a3_bound(lambda);
    let diff = (a3_series - by_formula).norm();
    ok(
        json!({
            "lambda": lambda,
            "a": a,
            "v": v(a).map_err(|e| usage(e.to_string()))?,
            "v_quadrature": vq,
            "a3_series": a3_series,
            "a3_formula": by_formula,
            "routes_difference": diff,
            "routes_agree": diff < 1e-8,
            "bound": bound,
            "excess": a3_series.re - bound,
            "excess_threshold": excess_threshold(a).map_err(|e| usage(e.to_string()))?,
            "delta": delta(),
        }),
        Vec::new(),
    )
}

/// `a` values of the scan: tenths plus `1 - 10^{-j}` for `j = 2..=8`.
pub fn scan_a_grid() -> Vec<f64> {
    (1..10)
        .map(|i| i as f64 / 10.0)
        .chain((2..=8).map(|j| 1.0 - 10f64.powi(-j)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub a: f64,
    pub a3: f64,
    pub bound: f64,
    pub excess: f64,
}

fn counterexample_scan(min: f64, max: f64, step: f64, csv_path: Option<&Path>) -> Result<Payload, CliError> {
    if !(min > 0.0 && max < 1.0 && min <= max && step > 0.0) {
        return Err(usage("scan needs 0 < lambda-min <= lambda-max < 1 and lambda-step > 0"));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(usage("scan grid too large"));
    }
    // rounded so grid values print as typed (0.294, not 0.29400000000000004)
    let lambdas: Vec<f64> = (0..count)
        .map(|i| ((min + i as f64 * step) * 1e9).round() / 1e9)
        .collect();
    let a_grid = scan_a_grid();
    let mut rows = Vec::with_capacity(lambdas.len() * a_grid.len());
    for &lambda in &lambdas {
        for &a in &a_grid {
            let vv = v(a).map_err(|e| CliError::Numerical(e.to_string()))?;
            let a3 = a3_formula(lambda, a, vv);
            let bound = conjectured_a3_bound(lambda);
            rows.push(ScanRow {
                lambda,
                a,
                a3,
                bound,
                excess: a3 - bound,
            });
        }
    }
    let positive = |l: f64| rows.iter().any(|r| r.lambda == l && r.excess > 0.0);
    let threshold = lambdas
        .iter()
        .copied()
        .filter(|&l| positive(l))
        .fold(None, |m: Option<f64>, l| Some(m.map_or(l, |x| x.max(l))));
    let bracket = threshold.map(|t| {
        let above = lambdas.iter().copied().find(|&l| l > t);
        (t, above)
    });
    let d = delta();
    let brackets_delta = matches!(bracket, Some((lo, Some(hi))) if lo <= d && d < hi);
    if let Some(path) = csv_path {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["lambda", "a", "a3", "bound", "excess"])
            .map_err(|e| CliError::Io(e.into()))?;
        for r in &rows {
            w.write_record([
                r.lambda.to_string(),
                r.a.to_string(),
                r.a3.to_string(),
                r.bound.to_string(),
                r.excess.to_string(),
            ])
            .map_err(|e| CliError::Io(e.into()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        write_atomic(path, &bytes)?;
    }
    ok(
        json!({
            "lambda_grid": {"min": min, "max": max, "step": step, "count": count},
            "a_grid": a_grid,
            "threshold": threshold,
            "bracket": bracket.map(|(lo, hi)| json!([lo, hi])),
            "delta": d,
            "brackets_delta": brackets_delta,
            "csv": csv_path.map(|p| p.display().to_string()),
            "rows": rows,
        }),
        Vec::new(),
    )
}

fn convexity_boundary(function: &FunctionArgs) -> Result<Payload, CliError> {
    let lambda = function.lambda.ok_or_else(|| usage("--boundary needs --lambda"))?;
    let checks = boundary_re_checks(lambda, 4096, 64, 1024).map_err(|e| usage(e.to_string()))?;
    ok(to_value(&checks), Vec::new())
}

fn convexity(
    function: &FunctionArgs,
    p: &PlanArgs,
    gamma: Option<f64>,
    gammas: usize,
    search: SearchGrid,
) -> Result<Payload, CliError> {
    if search.mu_points == 0 || search.nu_points < 2 {
        return Err(usage("need --mu-points >= 1 and --nu-points >= 2"));
    }
    let (f, warnings) = function.to_spec()?.resolve()?;
    let plan = plan(p)?;
    let tol = plan.tolerance;
    if let Some(g) = gamma {
        let cert = certify_direction(&f, g, &plan, &search, tol);
        return ok(to_value(&cert), warnings);
    }
    if gammas == 0 || gammas > 4096 {
        return Err(usage("--gammas must be in 1..=4096"));
    }
    let mut summary = Vec::with_capacity(gammas);
    let mut certified = Vec::new();
    for i in 0..gammas {
        let g = std::f64::consts::PI * i as f64 / gammas as f64;
        let cert = certify_direction(&f, g, &plan, &search, tol);
        summary.push(json!({
            "gamma": g,
            "status": cert.status,
            "mu": cert.mu,
            "nu": cert.nu,
            "min_re": cert.min_re,
        }));
        if cert.status == CertificateStatus::Certified {
            certified.push(cert);
        }
    }
    let note = if certified.is_empty() {
        "no certificate found at resolution"
    } else {
        "certified directions listed"
    };
    ok(
        json!({
            "function": f.name,
            "gammas": gammas,
            "search": search,
            "grid": plan,
            "directions": summary,
            "certificates": certified,
            "note": note,
        }),
        warnings,
    )
}

fn subordination(function: &FunctionArgs, p: &PlanArgs, against: Option<f64>) -> Result<Payload, CliError> {
    let (f, warnings) = function.to_spec()?.resolve()?;
    let plan = plan(p)?;
    let level = against.unwrap_or(f.lambda);
    let verdict = schwarz_recover(&f, level, &plan).map_err(|e| usage(e.to_string()))?;
    let failed = verdict.status == SubordinationStatus::Undecided && !verdict.diagnostics.is_empty();
    Ok(Payload {
        result: to_value(&verdict),
        warnings,
        numerical_failure: failed,
    })
}

fn blaschke(kind: KindArg, factors: usize, zeta_arg: f64, terms: usize, radii: usize) -> Result<Payload, CliError> {
    if !(1..=200).contains(&factors) || !(1..=10_000).contains(&terms) || !(6..=48).contains(&radii) {
        return Err(usage("need 1 <= factors <= 200, 1 <= terms <= 10000, 6 <= radii <= 48"));
    }
    if !zeta_arg.is_finite() {
        return Err(usage("--zeta-arg must be finite"));
    }
    let spec = match kind {
        KindArg::B1 => BlaschkeSpec::b1(factors),
        KindArg::B2 => BlaschkeSpec::b2(factors),
    }
    .map_err(|e| usage(e.to_string()))?;
    let mut warnings = Vec::new();
    // B2's truncation behaves like a finite product once 1 - r < 4^{-factors}
    if kind == KindArg::B2 && 2 * factors < radii + 8 {
        warnings.push(format!(
            "{factors} factors are too few to resolve {radii} dyadic radii; the truncated product has a finite angular derivative"
        ));
    }
    let zeta = Complex64::from_polar(1.0, zeta_arg);
    let gsum = spec.gsum(zeta, terms);
    let julia = julia_quotient(&spec, zeta, &dyadic_radii(radii), &JuliaConfig::default());
    let zero_rule_holds = (1..=factors).all(|n| {
        let z = spec.zero(n).expect("rule zero");
        let d2 = z.dist2_to_unimodular(0.0);
        let p = 0.5f64.powi(n as i32);
        match spec.kind {
            BlaschkeKind::B1 => d2.sqrt() >= 15f64.sqrt() / std::f64::consts::TAU * p,
            _ => d2 <= p * p,
        }
    });
    ok(
        json!({
            "kind": spec.kind,
            "factors": factors,
            "zeta": zeta,
            "blaschke_sum": spec.blaschke_sum(),
            "tail_bound": spec.tail_bound(),
            "gsum": gsum,
            "julia": julia,
            "zero_rule_holds": zero_rule_holds,
        }),
        warnings,
    )
}

fn harmonic(
    function: &FunctionArgs,
    p: &PlanArgs,
    dilatation: Option<&str>,
    theorem: TheoremArg,
) -> Result<Payload, CliError> {
    let mut spec = function.to_spec()?;
    if let Some(d) = dilatation {
        spec.dilatation = Some(d.to_string());
    }
    let (h, warnings) = spec.resolve()?;
    let plan = plan(p)?;
    let hyp = |e: HarmonicError| match e {
        HarmonicError::ArcsinDomain { .. } => CliError::Numerical(e.to_string()),
        _ => usage(e.to_string()),
    };
    let f = build_harmonic(h, spec.dilatation()?).map_err(hyp)?;
    let cert = match theorem {
        TheoremArg::T42 => certify_t42(&f, &plan),
        TheoremArg::T43 => certify_t43(&f, &plan),
    }
    .map_err(hyp)?;
    ok(to_value(&cert), warnings)
}

fn render(
    function: &FunctionArgs,
    r: f64,
    n: usize,
    svg: Option<&Path>,
    csv_path: Option<&Path>,
) -> Result<Payload, CliError> {
    if !(3..=1_000_000).contains(&n) {
        return Err(usage("--n must be in 3..=1000000"));
    }
    let (f, warnings) = function.to_spec()?.resolve()?;
    let curve = boundary_curve(&f, r, n).map_err(|e| match e {
        GeometryError::PoleOnCircle { .. } => CliError::Numerical(e.to_string()),
        _ => usage(e.to_string()),
    })?;
    if let Some(path) = svg {
        let title = format!("{} on |z| = {r}", f.name);
        write_atomic(path, curve_svg(&curve, &title).as_bytes())?;
    }
    if let Some(path) = csv_path {
        let text = curve_csv(&curve).map_err(|e| CliError::Io(e.into()))?;
        write_atomic(path, text.as_bytes())?;
    }
    let vp = Viewport::fit(&curve);
    ok(
        json!({
            "function": f.name,
            "r": r,
            "n": n,
            "bbox": {"min": vp.min, "max": vp.max},
            "first_point": curve[0],
            "svg": svg.map(|p| p.display().to_string()),
            "csv": csv_path.map(|p| p.display().to_string()),
        }),
        warnings,
    )
}
