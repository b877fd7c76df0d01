#![no_main]
use libfuzzer_sys::fuzz_target;
use schlicht_cli::spec::FunctionSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = FunctionSpec::from_json(text) else {
        return;
    };
    // re-serialized specs parse back to the same value
    let again = FunctionSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(again, spec);
    if let Ok((f, _)) = spec.resolve() {
        assert!(f.lambda.is_finite());
    }
    let _ = spec.dilatation();
});
