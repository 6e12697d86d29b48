#![no_main]

use hermgen::families::{FamilyId, FamilyParams};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let family = FamilyId::ALL[sel as usize % FamilyId::ALL.len()];
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(rest) else { return };
    if let Ok(params) = FamilyParams::from_json(family, &value) {
        assert_eq!(FamilyParams::from_json(family, &params.to_json()).unwrap(), params);
    }
});
