#![no_main]

use imhd::cli::parse_cli;
use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated; program name is prepended.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let argv = std::iter::once("imhd").chain(text.split('\0'));
    let _ = parse_cli(argv);
});
