//! The bundled example categories (at most three objects and six
//! non-identity arrows each).

use std::sync::Arc;

use crate::fincat::FinCat;

const FILES: &[(&str, &str)] = &[
    ("arrow2", include_str!("../corpus/arrow2.json")),
    ("chain3", include_str!("../corpus/chain3.json")),
    ("codiscrete3", include_str!("../corpus/codiscrete3.json")),
    ("discrete2", include_str!("../corpus/discrete2.json")),
    ("idempotent", include_str!("../corpus/idempotent.json")),
    ("iso_pair", include_str!("../corpus/iso_pair.json")),
    ("iso_then_arrow", include_str!("../corpus/iso_then_arrow.json")),
    ("one", include_str!("../corpus/one.json")),
    ("parallel", include_str!("../corpus/parallel.json")),
    ("retract", include_str!("../corpus/retract.json")),
    ("s3", include_str!("../corpus/s3.json")),
    ("span", include_str!("../corpus/span.json")),
    ("z2", include_str!("../corpus/z2.json")),
    ("z2_pair", include_str!("../corpus/z2_pair.json")),
    ("z3", include_str!("../corpus/z3.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Option<Arc<FinCat>> {
    let text = source(name)?;
    Some(Arc::new(FinCat::from_json(text).expect("bundled corpus files are valid")))
}

/// Every corpus category, sorted by name.
pub fn all() -> Vec<(&'static str, Arc<FinCat>)> {
    names().map(|n| (n, load(n).expect("listed"))).collect()
}

/// The default probe family: corpus categories with at most two objects and
/// four non-identity arrows.
pub fn default_probes() -> Vec<(String, Arc<FinCat>)> {
    all()
        .into_iter()
        .filter(|(_, c)| c.num_objects() <= 2 && c.non_identity_arrows().count() <= 4)
        .map(|(n, c)| (n.to_string(), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_small() {
        let all = all();
        assert!(all.len() >= 10);
        for (name, c) in &all {
            assert!(c.num_objects() <= 3, "{name}");
            assert!(c.non_identity_arrows().count() <= 6, "{name}");
        }
        let names: Vec<_> = names().collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}
