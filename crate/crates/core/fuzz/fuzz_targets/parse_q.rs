#![no_main]

use hermgen::numthy::PrimePower;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = s.parse::<PrimePower>() {
        assert_eq!(q.p().pow(q.n()), q.q());
        assert_eq!(q.to_string().parse::<PrimePower>().unwrap().q(), q.q());
    }
});
