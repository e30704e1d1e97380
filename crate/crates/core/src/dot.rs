//! Graphviz DOT export. Identities are left implicit.

use std::fmt::Write;

use crate::coeq::{QArrow, QuotientCat};
use crate::fincat::FinCat;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per object, one edge per non-identity arrow.
pub fn category_dot(c: &FinCat) -> String {
    let mut out = String::from("digraph category {\n");
    for o in c.objects() {
        writeln!(out, "  {};", quote(c.object_name(o))).unwrap();
    }
    for a in c.non_identity_arrows() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(c.object_name(c.dom(a))),
            quote(c.object_name(c.cod(a))),
            quote(c.arrow_name(a))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// One node per class, one edge per non-identity arrow in `arrows`,
/// labelled by its comma-joined word.
pub fn quotient_dot(q: &QuotientCat, arrows: &[QArrow]) -> String {
    let mut out = String::from("digraph quotient {\n");
    for c in q.classes().ids() {
        writeln!(out, "  {};", quote(&q.class_name(c))).unwrap();
    }
    for a in arrows.iter().filter(|a| !a.is_identity()) {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&q.class_name(a.src)),
            quote(&q.class_name(a.tgt)),
            quote(&q.display_word(a).to_string())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
