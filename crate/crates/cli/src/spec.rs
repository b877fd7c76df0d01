//! Function descriptors: `{family, lambda, theta?, a?, k?, omega?, a2?, dilatation?}`.

use schlicht::membership::SamplingPlan;
use schlicht::zoo::{
    make_example32, make_f_a, make_f_theta, make_from_omega, make_g_threefold, make_identity, make_omega1_quadratic,
    AnalyticMap, SchwarzCandidate, SchwarzRole,
};
use schlicht::Complex64;
use serde::{Deserialize, Serialize};

use crate::formula::parse_candidate;
use crate::CliError;

pub const FAMILIES: &[&str] = &[
    "identity",
    "f_theta",
    "g",
    "example32",
    "f_a",
    "omega1_quadratic",
    "from_omega",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilatation: Option<String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need<T: Copy>(v: Option<T>, family: &str, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("family {family} requires --{name}")))
}

impl FunctionSpec {
    /// Parses and validates a JSON descriptor without building the map.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let spec: Self = serde_json::from_str(text).map_err(|e| usage(format!("function spec: {e}")))?;
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<(), CliError> {
        if !FAMILIES.contains(&self.family.as_str()) {
            return Err(usage(format!(
                "unknown family {:?}; expected one of {}",
                self.family,
                FAMILIES.join(", ")
            )));
        }
        for (name, v) in [
            ("lambda", self.lambda),
            ("theta", self.theta),
            ("a", self.a),
            ("a2", self.a2),
        ] {
            if v.is_some_and(|x| !x.is_finite()) {
                return Err(usage(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Parameters given but not used by the family.
    fn unused(&self) -> Vec<&'static str> {
        let used: &[&str] = match self.family.as_str() {
            "identity" => &[],
            "f_theta" => &["lambda", "theta"],
            "g" => &["lambda"],
            "example32" => &["lambda", "k"],
            "f_a" => &["lambda", "a"],
            "omega1_quadratic" => &["lambda", "a", "theta"],
            _ => &["lambda", "omega", "a2", "a"],
        };
        let given = [
            ("lambda", self.lambda.is_some()),
            ("theta", self.theta.is_some()),
            ("a", self.a.is_some()),
            ("k", self.k.is_some()),
            ("omega", self.omega.is_some()),
            ("a2", self.a2.is_some()),
        ];
        given
            .into_iter()
            .filter(|(name, present)| *present && !used.contains(name))
            .map(|(name, _)| name)
            .collect()
    }

    /// Builds the map; warnings list parameters the family ignores.
    pub fn resolve(&self) -> Result<(AnalyticMap, Vec<String>), CliError> {
        self.check()?;
        let fam = self.family.as_str();
        let bad = |e: schlicht::zoo::ZooError| usage(format!("{fam}: {e}"));
        let map = match fam {
            "identity" => make_identity(),
            "f_theta" => make_f_theta(need(self.lambda, fam, "lambda")?, self.theta.unwrap_or(0.0)).map_err(bad)?,
            "g" => {
                if self.lambda.is_some_and(|l| l != 1.0) {
                    return Err(usage("family g is defined for lambda = 1 only"));
                }
                make_g_threefold()
            }
            "example32" => make_example32(need(self.lambda, fam, "lambda")?, need(self.k, fam, "k")?).map_err(bad)?,
            "f_a" => make_f_a(need(self.lambda, fam, "lambda")?, need(self.a, fam, "a")?).map_err(bad)?,
            "omega1_quadratic" => {
                let a = Complex64::from_polar(self.a.unwrap_or(1.0), self.theta.unwrap_or(0.0));
                if self.a.is_some_and(|m| m < 0.0) {
                    return Err(usage("omega1_quadratic needs |a| >= 0"));
                }
                make_omega1_quadratic(need(self.lambda, fam, "lambda")?, a).map_err(bad)?
            }
            _ => {
                let src = self
                    .omega
                    .as_deref()
                    .ok_or_else(|| usage("family from_omega requires --omega"))?;
                let omega =
                    parse_candidate(src, self.a, SchwarzRole::Omega).map_err(|e| usage(format!("omega: {e}")))?;
                omega
                    .validate_bound()
                    .map_err(|e| usage(format!("omega is not a Schwarz-type function: {e}")))?;
                let a2 = Complex64::new(self.a2.unwrap_or(0.0), 0.0);
                make_from_omega(need(self.lambda, fam, "lambda")?, a2, omega).map_err(bad)?
            }
        };
        let warnings = self
            .unused()
            .into_iter()
            .map(|p| format!("parameter {p} is ignored by family {fam}"))
            .collect();
        Ok((map, warnings))
    }

    /// The dilatation formula as a Schwarz-type function vanishing at 0.
    pub fn dilatation(&self) -> Result<SchwarzCandidate, CliError> {
        let src = self
            .dilatation
            .as_deref()
            .ok_or_else(|| usage("--dilatation is required"))?;
        parse_candidate(src, self.a, SchwarzRole::Dilatation).map_err(|e| usage(format!("dilatation: {e}")))
    }
}

/// Dyadic plan with optional overrides of the defaults (20 circles, 4096
/// angles, tolerance 1e-9).
pub fn plan_from(
    radii_count: Option<usize>,
    angles: Option<usize>,
    tolerance: Option<f64>,
) -> Result<SamplingPlan, CliError> {
    let radii = radii_count.unwrap_or(20);
    if !(1..=48).contains(&radii) {
        return Err(usage("--radii-count must be in 1..=48"));
    }
    SamplingPlan::dyadic(radii, angles.unwrap_or(4096), tolerance.unwrap_or(1e-9)).map_err(|e| usage(e.to_string()))
}
