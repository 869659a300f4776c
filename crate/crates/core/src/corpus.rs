//! The bundled presentation corpus, embedded at compile time.
//!
//! Every file here also ships as a plain `.pc` file under `corpus/` at the
//! repository root, so the CLI and the library see the same inputs.

use crate::pc::PcGroup;

/// `(name, file contents)` in name order.
pub const FILES: &[(&str, &str)] = &[
    ("c3", include_str!("../../../corpus/c3.pc")),
    ("c9", include_str!("../../../corpus/c9.pc")),
    ("c9xc3", include_str!("../../../corpus/c9xc3.pc")),
    ("elab3_2", include_str!("../../../corpus/elab3_2.pc")),
    ("elab3_3", include_str!("../../../corpus/elab3_3.pc")),
    ("extraspecial27_exp9", include_str!("../../../corpus/extraspecial27_exp9.pc")),
    ("heisenberg27", include_str!("../../../corpus/heisenberg27.pc")),
    ("heisenberg27_x_c3", include_str!("../../../corpus/heisenberg27_x_c3.pc")),
    ("maxclass3_4", include_str!("../../../corpus/maxclass3_4.pc")),
    ("maxclass3_4_x_c3", include_str!("../../../corpus/maxclass3_4_x_c3.pc")),
    ("maxclass3_5", include_str!("../../../corpus/maxclass3_5.pc")),
    ("maxclass3_6", include_str!("../../../corpus/maxclass3_6.pc")),
    ("maxclass3_7", include_str!("../../../corpus/maxclass3_7.pc")),
    ("sylow_sl2_f3t3", include_str!("../../../corpus/sylow_sl2_f3t3.pc")),
    ("sylow_sl2_z27", include_str!("../../../corpus/sylow_sl2_z27.pc")),
    ("sylow_sl2_z9", include_str!("../../../corpus/sylow_sl2_z9.pc")),
    ("thin_sl2_f3t3_q5", include_str!("../../../corpus/thin_sl2_f3t3_q5.pc")),
    ("thin_sl2_z27_q5", include_str!("../../../corpus/thin_sl2_z27_q5.pc")),
];

pub fn text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled group; `None` for unknown names.
pub fn load(name: &str) -> Option<PcGroup> {
    text(name).map(|t| PcGroup::from_text(t).unwrap_or_else(|e| panic!("bundled {name}: {e}")))
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}
