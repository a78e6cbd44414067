#![no_main]

use imhd::io::parse_key_values;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(kv) = parse_key_values(text) {
        for (k, v) in kv.iter() {
            assert_eq!(kv.get(k), Some(v));
            assert!(kv.line(k).is_some());
        }
    }
});
