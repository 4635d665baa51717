#![no_main]

use diffset::harness::{parse_record, read_records};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_record(text, 1) {
        // Anything accepted must survive a round trip.
        assert_eq!(parse_record(&r.to_line(), 1).unwrap(), r);
    }
    let _ = read_records(data);
});
