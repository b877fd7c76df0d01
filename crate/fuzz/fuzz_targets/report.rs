#![no_main]
use libfuzzer_sys::fuzz_target;
use schlicht_cli::report::ReportEnvelope;

fuzz_target!(|data: &[u8]| {
    if let Ok(env) = serde_json::from_slice::<ReportEnvelope>(data) {
        let text = env.to_json();
        let again: ReportEnvelope = serde_json::from_str(&text).expect("envelope re-parses");
        assert_eq!(again.to_json(), text);
    }
});
