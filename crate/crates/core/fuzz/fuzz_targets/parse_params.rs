#![no_main]

use hermgen::families::{genus, validate, FamilyId, FamilyParams};
use hermgen::numthy::PrimePower;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let family = FamilyId::ALL[sel as usize % FamilyId::ALL.len()];
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let Ok(params) = FamilyParams::parse(family, s) else { return };
    assert_eq!(FamilyParams::parse(family, &params.to_string()).unwrap(), params);
    assert_eq!(FamilyParams::from_json(family, &params.to_json()).unwrap(), params);
    for q in [8u64, 13] {
        let q = PrimePower::new(q).unwrap();
        if validate(&q, &params).map(|v| v.is_valid()).unwrap_or(false) {
            genus(&q, &params).unwrap();
        }
    }
});
