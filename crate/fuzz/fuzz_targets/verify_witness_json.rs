#![no_main]

use diffset::elimination::{verify_witness, Witness};
use diffset::structure::ParamSet;
use libfuzzer_sys::fuzz_target;

#[derive(serde::Deserialize)]
struct Input {
    params: ParamSet,
    witness: Witness,
}

// Decoding arbitrary witnesses must never panic, and verification must
// terminate; small parameters keep factoring cheap.
fuzz_target!(|data: &[u8]| {
    let Ok(input) = serde_json::from_slice::<Input>(data) else {
        return;
    };
    if input.params.v() < 1 << 40 {
        let _ = verify_witness(&input.witness, &input.params);
    }
});
