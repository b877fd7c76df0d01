#![no_main]
use clap::Parser;
use libfuzzer_sys::fuzz_target;
use schlicht_cli::Cli;

// NUL-separated argument vector; parsing only, nothing is run.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("schlicht").chain(text.split('\0'));
    if let Ok(cli) = Cli::try_parse_from(args) {
        assert!(!cli.command.name().is_empty());
    }
});
