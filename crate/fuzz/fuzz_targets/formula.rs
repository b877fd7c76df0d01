#![no_main]
use libfuzzer_sys::fuzz_target;
use schlicht_cli::formula::{parse_formula, Formula, MAX_POWER};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    match parse_formula(src, Some(0.5)) {
        Ok(Formula::Polynomial(coeffs)) => {
            assert!(coeffs.len() <= MAX_POWER + 1);
            assert!(coeffs.iter().all(|c| c.is_finite()));
        }
        Ok(Formula::Mobius(a)) => assert!(a.is_finite()),
        Err(_) => {}
    }
});
