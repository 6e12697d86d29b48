#![no_main]

use std::sync::OnceLock;

use hermgen::gf::{ElementLiteral, FieldCtx};
use libfuzzer_sys::fuzz_target;

static CTX: OnceLock<FieldCtx> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(lit) = s.parse::<ElementLiteral>() else { return };
    assert_eq!(lit.to_string().parse::<ElementLiteral>().unwrap(), lit);
    let ctx = CTX.get_or_init(|| FieldCtx::for_q(9).unwrap());
    let x = ctx.parse_element(s).unwrap();
    assert_eq!(ctx.element(lit), x);
});
