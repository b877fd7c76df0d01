//! Replays the checked-in fuzz seeds through the same entry points as the
//! fuzz targets, so regressions show up without a fuzzing toolchain.

use std::path::PathBuf;

use clap::Parser;
use schlicht_cli::formula::{parse_formula, Formula, MAX_POWER};
use schlicht_cli::report::ReportEnvelope;
use schlicht_cli::spec::FunctionSpec;
use schlicht_cli::Cli;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.display().to_string(), std::fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn formula_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("formula") {
        let src = std::str::from_utf8(&data).unwrap();
        match parse_formula(src, Some(0.5)) {
            Ok(Formula::Polynomial(c)) => {
                assert!(c.len() <= MAX_POWER + 1 && c.iter().all(|x| x.is_finite()), "{name}");
                parsed += 1;
            }
            Ok(Formula::Mobius(a)) => {
                assert!(a.is_finite(), "{name}");
                parsed += 1;
            }
            Err(e) => panic!("{name}: {e}"),
        }
    }
    assert!(parsed > 0);
}

#[test]
fn function_spec_seeds() {
    for (name, data) in seeds("function_spec") {
        let text = std::str::from_utf8(&data).unwrap();
        let Ok(spec) = FunctionSpec::from_json(text) else {
            assert!(name.contains("unknown_field"), "{name} rejected");
            continue;
        };
        let again = FunctionSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec, "{name}");
        let (f, _) = spec.resolve().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(f.lambda.is_finite());
        let _ = spec.dilatation();
    }
}

#[test]
fn cli_args_seeds() {
    for (name, data) in seeds("cli_args") {
        let text = std::str::from_utf8(&data).unwrap();
        let args = std::iter::once("schlicht").chain(text.split('\0'));
        let cli = Cli::try_parse_from(args).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!cli.command.name().is_empty());
    }
}

#[test]
fn report_seeds() {
    for (name, data) in seeds("report") {
        let env: ReportEnvelope = serde_json::from_slice(&data).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(env.to_json().as_bytes(), &data[..], "{name}");
    }
}
