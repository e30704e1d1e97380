//! The free monoid on the arrows of a finite category and its reduced words.
//!
//! A word is a finite sequence of arrow names in diagrammatic order with no
//! composability constraint. It is *reduced* when it contains no identity and
//! no adjacent pair `(fᵢ, fᵢ₊₁)` with `cod fᵢ = dom fᵢ₊₁`. Every word is
//! equivalent to exactly one reduced word under the smallest congruence that
//! replaces a composable pair by its composite and deletes identities;
//! [`reduce`] computes it through the recursion [`phi`] / [`star`], and
//! [`closure_oracle`] recomputes the congruence classes by brute-force
//! saturation for cross-checking.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, FinCat};
use crate::unionfind::DisjointSet;
use crate::Budget;

/// An element of the free monoid on the arrows of a category.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<ArrowId>);

/// A word with no identities and no adjacent composable pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(Vec<ArrowId>);

impl Word {
    pub fn new(seq: Vec<ArrowId>) -> Word {
        Word(seq)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn concat(&self, other: &[ArrowId]) -> Word {
        let mut seq = self.0.clone();
        seq.extend_from_slice(other);
        Word(seq)
    }

    /// Comma-separated arrow names; the empty string is the empty word.
    pub fn parse(cat: &FinCat, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "()" {
            return Ok(Word::empty());
        }
        text.split(',').map(|name| cat.arrow_id(name.trim())).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn display<'a>(&'a self, cat: &'a FinCat) -> WordDisplay<'a> {
        WordDisplay { cat, seq: &self.0 }
    }
}

impl ReducedWord {
    /// Checks reducedness; use [`reduce`] to normalize arbitrary words.
    pub fn new(cat: &FinCat, seq: Vec<ArrowId>) -> Result<ReducedWord> {
        if is_reduced(cat, &seq) {
            Ok(ReducedWord(seq))
        } else {
            Err(Error::Precondition(format!("word {} is not reduced", render(cat, &seq))))
        }
    }

    pub fn empty() -> ReducedWord {
        ReducedWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn display<'a>(&'a self, cat: &'a FinCat) -> WordDisplay<'a> {
        WordDisplay { cat, seq: &self.0 }
    }
}

pub struct WordDisplay<'a> {
    cat: &'a FinCat,
    seq: &'a [ArrowId],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.seq.is_empty() {
            return f.write_str("()");
        }
        for (i, a) in self.seq.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(self.cat.arrow_name(*a))?;
        }
        Ok(())
    }
}

pub fn render(cat: &FinCat, seq: &[ArrowId]) -> String {
    WordDisplay { cat, seq }.to_string()
}

pub fn is_reduced(cat: &FinCat, seq: &[ArrowId]) -> bool {
    seq.iter().all(|a| !cat.is_identity(*a)) && seq.windows(2).all(|w| cat.dom(w[1]) != cat.cod(w[0]))
}

/// Prepends `a` to the reduced word stored back-to-front in `rev`.
fn push_front(cat: &FinCat, mut a: ArrowId, rev: &mut Vec<ArrowId>) {
    while let Some(&b) = rev.last() {
        match cat.composite(a, b) {
            Some(ab) => {
                rev.pop();
                a = ab;
            }
            None => break,
        }
    }
    if !cat.is_identity(a) {
        rev.push(a);
    }
}

/// `Φ(a, β)`: absorb `a` into the front of the reduced word `β`.
///
/// While the first letter `b` of `β` satisfies `cod a = dom b`, replace `a`
/// by `a ▷ b` and drop `b`; then drop `a` if it is an identity, otherwise
/// prepend it.
pub fn phi(cat: &FinCat, a: ArrowId, beta: &ReducedWord) -> ReducedWord {
    let mut rev: Vec<ArrowId> = beta.0.iter().rev().copied().collect();
    push_front(cat, a, &mut rev);
    rev.reverse();
    ReducedWord(rev)
}

/// `α ⋆ ν`, defined by `() ⋆ ν = ν` and `aβ ⋆ ν = Φ(a, β ⋆ ν)`.
pub fn star(cat: &FinCat, alpha: &[ArrowId], nu: &ReducedWord) -> ReducedWord {
    let mut rev: Vec<ArrowId> = nu.0.iter().rev().copied().collect();
    for &a in alpha.iter().rev() {
        push_front(cat, a, &mut rev);
    }
    rev.reverse();
    ReducedWord(rev)
}

/// The unique reduced word equivalent to `alpha`, i.e. `α ⋆ ()`.
pub fn reduce(cat: &FinCat, alpha: &[ArrowId]) -> ReducedWord {
    star(cat, alpha, &ReducedWord::empty())
}

/// Partition of all words up to a length bound into congruence classes,
/// computed by saturation. Test oracle only: it shares no code with
/// [`reduce`].
#[derive(Clone, Debug)]
pub struct ClosureClasses {
    max_len: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    class: Vec<usize>,
    num_classes: usize,
}

impl ClosureClasses {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).map(|i| self.class[*i])
    }

    pub fn same_class(&self, a: &Word, b: &Word) -> Option<bool> {
        Some(self.class_of(a)? == self.class_of(b)?)
    }

    /// Classes as lists of words, in order of their first member.
    pub fn classes(&self) -> Vec<Vec<Word>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (w, c) in self.words.iter().zip(&self.class) {
            out[*c].push(w.clone());
        }
        out
    }
}

/// Saturates all words of length `≤ max_len` under composing an adjacent
/// composable pair, deleting an identity, and the reverse of both (which
/// never leaves the bound, since every forward step shortens the word).
pub fn closure_oracle(cat: &FinCat, max_len: usize, budget: Budget) -> Result<ClosureClasses> {
    let n = cat.num_arrows();
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(n);
    }
    if total > budget.0 {
        return Err(Error::BudgetExceeded { budget: budget.0, what: format!("building {total} words") });
    }

    let mut words = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * n);
        for w in &frontier {
            for a in cat.arrow_ids() {
                next.push(w.concat(&[a]));
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

    let mut ds = DisjointSet::new(words.len());
    for (i, w) in words.iter().enumerate() {
        let seq = w.as_slice();
        for p in 0..seq.len() {
            if cat.is_identity(seq[p]) {
                let mut shorter = seq.to_vec();
                shorter.remove(p);
                ds.union(i, index[&Word(shorter)]);
            }
            if p + 1 < seq.len() {
                if let Some(c) = cat.composite(seq[p], seq[p + 1]) {
                    let mut shorter = seq[..p].to_vec();
                    shorter.push(c);
                    shorter.extend_from_slice(&seq[p + 2..]);
                    ds.union(i, index[&Word(shorter)]);
                }
            }
        }
    }
    let (class, num_classes) = ds.labels();
    Ok(ClosureClasses { max_len, words, index, class, num_classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    fn w(cat: &FinCat, text: &str) -> Word {
        Word::parse(cat, text).unwrap()
    }

    fn r(cat: &FinCat, text: &str) -> ReducedWord {
        ReducedWord::new(cat, w(cat, text).0).unwrap()
    }

    #[test]
    fn is_reduced_examples() {
        let i = corpus::load("iso_pair").unwrap();
        assert!(is_reduced(&i, &[]));
        assert!(!is_reduced(&i, w(&i, "f,g").as_slice()));
        assert!(is_reduced(&i, w(&i, "f,f").as_slice()));
        assert!(!is_reduced(&i, w(&i, "id:X").as_slice()));
    }

    #[test]
    fn phi_examples() {
        let i = corpus::load("iso_pair").unwrap();
        let (f, idx) = (i.arrow_id("f").unwrap(), i.arrow_id("id:X").unwrap());
        assert_eq!(phi(&i, idx, &r(&i, "f")), r(&i, "f"));
        // (g, f) is not reduced, but the recursion only looks at its first letter
        let gf = ReducedWord(w(&i, "g,f").0);
        assert_eq!(phi(&i, f, &gf), r(&i, "f"));
        assert_eq!(phi(&i, f, &r(&i, "f")), r(&i, "f,f"));
        // cross-check against the saturation oracle
        let oracle = closure_oracle(&i, 3, Budget::default()).unwrap();
        assert_eq!(oracle.same_class(&w(&i, "id:X,f"), &w(&i, "f")), Some(true));
        assert_eq!(oracle.same_class(&w(&i, "f,g,f"), &w(&i, "f")), Some(true));
    }

    #[test]
    fn star_examples() {
        let i = corpus::load("iso_pair").unwrap();
        assert_eq!(star(&i, &[], &r(&i, "f")), r(&i, "f"));
        assert_eq!(star(&i, w(&i, "f").as_slice(), &r(&i, "g")), ReducedWord::empty());
        assert_eq!(star(&i, w(&i, "f,f").as_slice(), &ReducedWord::empty()), r(&i, "f,f"));
    }

    #[test]
    fn reduce_examples() {
        let i = corpus::load("iso_pair").unwrap();
        assert_eq!(reduce(&i, w(&i, "id:X").as_slice()), ReducedWord::empty());
        assert_eq!(reduce(&i, w(&i, "f,g").as_slice()), ReducedWord::empty());
        assert_eq!(reduce(&i, w(&i, "f,f,g").as_slice()), r(&i, "f"));
        let oracle = closure_oracle(&i, 3, Budget::default()).unwrap();
        assert_eq!(oracle.same_class(&w(&i, "f,f,g"), &w(&i, "f")), Some(true));
        assert_eq!(oracle.same_class(&w(&i, "f,f,g"), &w(&i, "f,f")), Some(false));
    }

    #[test]
    fn closure_oracle_examples() {
        let d = FinCat::discrete(&["A", "B"]);
        let oracle = closure_oracle(&d, 3, Budget::default()).unwrap();
        assert_eq!(oracle.num_classes(), 1);

        let i = corpus::load("iso_pair").unwrap();
        let oracle = closure_oracle(&i, 2, Budget::default()).unwrap();
        assert_eq!(oracle.same_class(&w(&i, "f,g"), &w(&i, "id:X")), Some(true));
        assert_eq!(oracle.same_class(&w(&i, "id:X"), &Word::empty()), Some(true));
        assert_eq!(oracle.same_class(&w(&i, "f"), &w(&i, "g")), Some(false));
        assert!(matches!(closure_oracle(&i, 8, Budget(1000)), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn generating_identifications_stay_in_one_class() {
        for (name, c) in corpus::all() {
            let oracle = closure_oracle(&c, 2, Budget::default()).unwrap();
            for o in c.objects() {
                assert_eq!(oracle.same_class(&Word(vec![c.identity(o)]), &Word::empty()), Some(true), "{name}");
            }
            for f in c.arrow_ids() {
                for g in c.arrow_ids() {
                    if let Some(h) = c.composite(f, g) {
                        assert_eq!(oracle.same_class(&Word(vec![f, g]), &Word(vec![h])), Some(true), "{name}");
                    }
                }
            }
        }
    }

    /// Normal forms agree with the oracle partition in both directions.
    #[test]
    fn reduce_matches_closure_classes_up_to_length_three() {
        for (name, c) in corpus::all() {
            let oracle = closure_oracle(&c, 3, Budget::default()).unwrap();
            let mut by_class: HashMap<usize, ReducedWord> = HashMap::new();
            let mut by_form: HashMap<ReducedWord, usize> = HashMap::new();
            for word in oracle.words() {
                let class = oracle.class_of(word).unwrap();
                let form = reduce(&c, word.as_slice());
                assert!(is_reduced(&c, form.as_slice()));
                assert_eq!(by_class.entry(class).or_insert_with(|| form.clone()), &form, "{name}");
                assert_eq!(*by_form.entry(form).or_insert(class), class, "{name}");
            }
        }
    }

    #[test]
    fn star_associates_exhaustively_on_small_categories() {
        for name in ["iso_pair", "arrow2", "z2", "retract"] {
            let c = corpus::load(name).unwrap();
            let oracle = closure_oracle(&c, 3, Budget::default()).unwrap();
            let reduced: Vec<ReducedWord> = oracle
                .words()
                .iter()
                .filter(|x| x.len() <= 2 && is_reduced(&c, x.as_slice()))
                .map(|x| ReducedWord(x.0.clone()))
                .collect();
            for alpha in oracle.words() {
                for beta in oracle.words().iter().filter(|b| b.len() <= 2) {
                    let ab = alpha.concat(beta.as_slice());
                    for nu in &reduced {
                        assert_eq!(
                            star(&c, alpha.as_slice(), &star(&c, beta.as_slice(), nu)),
                            star(&c, ab.as_slice(), nu),
                            "{name}"
                        );
                    }
                }
            }
        }
    }

    fn corpus_word(max_len: usize) -> impl Strategy<Value = (String, Vec<usize>)> {
        let names: Vec<String> = corpus::names().map(String::from).collect();
        (proptest::sample::select(names), proptest::collection::vec(0usize..64, 0..=max_len))
    }

    fn materialize(cat: &FinCat, raw: &[usize]) -> Vec<ArrowId> {
        raw.iter().map(|i| ArrowId(i % cat.num_arrows())).collect()
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent((name, raw) in corpus_word(8)) {
            let c = corpus::load(&name).unwrap();
            let alpha = materialize(&c, &raw);
            let once = reduce(&c, &alpha);
            prop_assert_eq!(reduce(&c, once.as_slice()), once);
        }

        #[test]
        fn star_associates((name, a) in corpus_word(3), b in proptest::collection::vec(0usize..64, 0..=3), n in proptest::collection::vec(0usize..64, 0..=2)) {
            let c = corpus::load(&name).unwrap();
            let (alpha, beta) = (materialize(&c, &a), materialize(&c, &b));
            let nu = reduce(&c, &materialize(&c, &n));
            prop_assume!(nu.len() == n.len());
            let mut ab = alpha.clone();
            ab.extend_from_slice(&beta);
            prop_assert_eq!(star(&c, &alpha, &star(&c, &beta, &nu)), star(&c, &ab, &nu));
        }

        #[test]
        fn reduced_words_are_fixed_points((name, raw) in corpus_word(4)) {
            let c = corpus::load(&name).unwrap();
            let nu = materialize(&c, &raw);
            prop_assume!(is_reduced(&c, &nu));
            let nu = ReducedWord(nu);
            prop_assert_eq!(star(&c, nu.as_slice(), &ReducedWord::empty()), nu);
        }
    }
}
