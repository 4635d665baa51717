#![no_main]

use diffset::oracle::{parse_elements, parse_group, verify_difference_set, CandidateSet};
use libfuzzer_sys::fuzz_target;

// Input: "<factors>|<elements>|<lambda>".
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut parts = text.splitn(3, '|');
    let (Some(g), Some(e), Some(l)) = (parts.next(), parts.next(), parts.next()) else {
        return;
    };
    let Ok(group) = parse_group(g) else {
        return;
    };
    if group.order() > 4096 {
        return;
    }
    let Ok(elements) = parse_elements(e, &group) else {
        return;
    };
    if let Ok(lambda) = l.trim().parse::<u64>() {
        let _ = verify_difference_set(&CandidateSet { group, elements }, lambda);
    }
});
