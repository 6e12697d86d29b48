#![no_main]

use std::sync::OnceLock;

use hermgen::gf::FieldCtx;
use hermgen::pgu::{parse_matrix_literal, ProjMatrix};
use libfuzzer_sys::fuzz_target;

static CTX: OnceLock<FieldCtx> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if parse_matrix_literal(s).is_err() {
        return;
    }
    let ctx = CTX.get_or_init(|| FieldCtx::for_q(4).unwrap());
    if let Ok(m) = ProjMatrix::parse(ctx, s) {
        // normalized matrices print as literals that parse back to themselves
        assert_eq!(ProjMatrix::parse(ctx, &m.to_string()).unwrap(), m);
    }
});
