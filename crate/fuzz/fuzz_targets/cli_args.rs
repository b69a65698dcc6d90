#![no_main]

use bestofn_cli::Cli;
use clap::Parser;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("bestofn").chain(s.split('\0'));
    let _ = Cli::try_parse_from(args);
});
