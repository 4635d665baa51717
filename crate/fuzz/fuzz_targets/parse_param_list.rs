#![no_main]

use diffset::harness::parse_param_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(params) = parse_param_list(text) {
        for p in params {
            assert_eq!(p.k() * (p.k() - 1), p.lambda() * (p.v() - 1));
        }
    }
});
