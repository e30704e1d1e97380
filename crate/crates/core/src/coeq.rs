//! Coequalizers in `Cat` of functor pairs whose domain is discrete.
//!
//! Such a pair is just a list of object pairs to identify. The quotient `Q`
//! has the generated object classes as objects; an arrow is a chain of base
//! arrows whose endpoints match up to the identification, and two chains
//! denote the same arrow exactly when they have the same reduced word. So
//! every arrow is stored as `(source class, reduced word, target class)` and
//! arrow equality is syntactic.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, FinCat, ObjId};
use crate::unionfind::DisjointSet;
use crate::words::{is_reduced, reduce, ReducedWord, WordDisplay};
use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(pub usize);

/// The object pairs `(d₀(σ), d₁(σ))`, one per index of the discrete domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentificationSpec {
    base: Arc<FinCat>,
    pairs: Vec<(ObjId, ObjId)>,
}

impl IdentificationSpec {
    pub fn new(base: Arc<FinCat>, pairs: Vec<(ObjId, ObjId)>) -> Result<IdentificationSpec> {
        let n = base.num_objects();
        if let Some((a, b)) = pairs.iter().find(|(a, b)| a.0 >= n || b.0 >= n) {
            return Err(Error::UnknownObject(format!("object index {} or {}", a.0, b.0)));
        }
        Ok(IdentificationSpec { base, pairs })
    }

    pub fn from_names(base: Arc<FinCat>, pairs: &[(&str, &str)]) -> Result<IdentificationSpec> {
        let pairs =
            pairs.iter().map(|(a, b)| Ok((base.object_id(a)?, base.object_id(b)?))).collect::<Result<Vec<_>>>()?;
        IdentificationSpec::new(base, pairs)
    }

    /// Parses `X=Y,U=V`.
    pub fn parse(base: Arc<FinCat>, text: &str) -> Result<IdentificationSpec> {
        let mut pairs = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("identification `{item}` is not of the form X=Y")))?;
            pairs.push((base.object_id(a.trim())?, base.object_id(b.trim())?));
        }
        IdentificationSpec::new(base, pairs)
    }

    pub fn empty(base: Arc<FinCat>) -> IdentificationSpec {
        IdentificationSpec { base, pairs: Vec::new() }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn pairs(&self) -> &[(ObjId, ObjId)] {
        &self.pairs
    }

    /// The same spec with the pair at `index` removed.
    pub fn without_pair(&self, index: usize) -> IdentificationSpec {
        let mut pairs = self.pairs.clone();
        pairs.remove(index);
        IdentificationSpec { base: self.base.clone(), pairs }
    }
}

/// Partition of the base objects into classes, numbered in order of their
/// representatives (the lexicographically least member name).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectClassMap {
    class_of: Vec<ClassId>,
    members: Vec<Vec<ObjId>>,
    representatives: Vec<ObjId>,
}

impl ObjectClassMap {
    pub fn generate(base: &FinCat, pairs: &[(ObjId, ObjId)]) -> ObjectClassMap {
        let mut ds = DisjointSet::new(base.num_objects());
        for (a, b) in pairs {
            ds.union(a.0, b.0);
        }
        let (labels, count) = ds.labels();
        let mut groups: Vec<Vec<ObjId>> = vec![Vec::new(); count];
        for o in base.objects() {
            groups[labels[o.0]].push(o);
        }
        for g in &mut groups {
            g.sort_by(|a, b| base.object_name(*a).cmp(base.object_name(*b)));
        }
        groups.sort_by(|a, b| base.object_name(a[0]).cmp(base.object_name(b[0])));
        let mut class_of = vec![ClassId(0); base.num_objects()];
        for (i, g) in groups.iter().enumerate() {
            for o in g {
                class_of[o.0] = ClassId(i);
            }
        }
        let representatives = groups.iter().map(|g| g[0]).collect();
        ObjectClassMap { class_of, members: groups, representatives }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn class_of(&self, o: ObjId) -> ClassId {
        self.class_of[o.0]
    }

    pub fn members(&self, c: ClassId) -> &[ObjId] {
        &self.members[c.0]
    }

    pub fn representative(&self, c: ClassId) -> ObjId {
        self.representatives[c.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> {
        (0..self.members.len()).map(ClassId)
    }
}

/// An arrow of the quotient: a reduced chain between two classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QArrow {
    pub src: ClassId,
    pub word: ReducedWord,
    pub tgt: ClassId,
}

impl QArrow {
    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

/// The coequalizer of a discrete-domain pair. Hom-sets may be infinite and
/// are only ever enumerated up to a length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCat {
    spec: IdentificationSpec,
    classes: ObjectClassMap,
}

/// Builds the quotient category; its [`q_map`](QuotientCat::q_map) is the
/// quotient functor.
pub fn coequalize(spec: IdentificationSpec) -> QuotientCat {
    let classes = ObjectClassMap::generate(&spec.base, &spec.pairs);
    QuotientCat { spec, classes }
}

impl QuotientCat {
    pub fn base(&self) -> &Arc<FinCat> {
        &self.spec.base
    }

    pub fn spec(&self) -> &IdentificationSpec {
        &self.spec
    }

    pub fn classes(&self) -> &ObjectClassMap {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, o: ObjId) -> ClassId {
        self.classes.class_of(o)
    }

    /// `[X]` where `X` is the least member of the class.
    pub fn class_name(&self, c: ClassId) -> String {
        format!("[{}]", self.base().object_name(self.classes.representative(c)))
    }

    pub fn identity(&self, c: ClassId) -> QArrow {
        QArrow { src: c, word: ReducedWord::empty(), tgt: c }
    }

    /// Checks the chain invariants and builds a quotient arrow.
    pub fn arrow(&self, src: ClassId, seq: Vec<ArrowId>, tgt: ClassId) -> Result<QArrow> {
        let base = self.base();
        let chain_ok = match (seq.first(), seq.last()) {
            (None, None) => src == tgt,
            (Some(first), Some(last)) => {
                self.class_of(base.dom(*first)) == src
                    && self.class_of(base.cod(*last)) == tgt
                    && seq.windows(2).all(|w| self.class_of(base.cod(w[0])) == self.class_of(base.dom(w[1])))
            }
            _ => unreachable!(),
        };
        if !chain_ok {
            return Err(Error::Precondition("word is not a chain between the given classes".into()));
        }
        if !is_reduced(base, &seq) {
            return Err(Error::Precondition("word is not reduced".into()));
        }
        Ok(QArrow { src, word: ReducedWord::new(base, seq)?, tgt })
    }

    /// The quotient functor on objects.
    pub fn q_object(&self, o: ObjId) -> ClassId {
        self.class_of(o)
    }

    /// The quotient functor on arrows.
    pub fn q_map(&self, f: ArrowId) -> QArrow {
        let base = self.base();
        QArrow { src: self.class_of(base.dom(f)), word: reduce(base, &[f]), tgt: self.class_of(base.cod(f)) }
    }

    /// `a` then `b`: concatenate and reduce.
    pub fn q_compose(&self, a: &QArrow, b: &QArrow) -> Result<QArrow> {
        if a.tgt != b.src {
            return Err(Error::ClassMismatch { tgt: self.class_name(a.tgt), src: self.class_name(b.src) });
        }
        let mut seq = a.word.as_slice().to_vec();
        seq.extend_from_slice(b.word.as_slice());
        Ok(QArrow { src: a.src, word: reduce(self.base(), &seq), tgt: b.tgt })
    }

    /// An arrow is invertible iff its reduced chain is empty or consists of
    /// isomorphisms of the base.
    pub fn q_is_iso(&self, a: &QArrow) -> bool {
        a.word.as_slice().iter().all(|f| self.base().is_iso(*f))
    }

    pub fn q_is_automorphism(&self, a: &QArrow) -> bool {
        a.src == a.tgt && self.q_is_iso(a)
    }

    /// All arrows `src → tgt` with at most `max_len` letters, ordered by length
    /// and then lexicographically by arrow names.
    pub fn enumerate_q_arrows(
        &self,
        src: ClassId,
        tgt: ClassId,
        max_len: usize,
        budget: Budget,
    ) -> Result<Vec<QArrow>> {
        let mut out = Vec::new();
        if src == tgt {
            out.push(self.identity(src));
        }
        let mut visited = 0usize;
        let mut stack: Vec<ArrowId> = Vec::new();
        let starts: Vec<ArrowId> =
            self.base().non_identity_arrows().filter(|f| self.class_of(self.base().dom(*f)) == src).collect();
        for f in starts.into_iter().filter(|_| max_len > 0) {
            stack.push(f);
            self.extend_chains(&mut stack, tgt, max_len, budget, &mut visited, &mut out)?;
            stack.pop();
        }
        self.sort_arrows(&mut out);
        Ok(out)
    }

    fn extend_chains(
        &self,
        stack: &mut Vec<ArrowId>,
        tgt: ClassId,
        max_len: usize,
        budget: Budget,
        visited: &mut usize,
        out: &mut Vec<QArrow>,
    ) -> Result<()> {
        *visited += 1;
        if *visited > budget.0 {
            return Err(Error::BudgetExceeded { budget: budget.0, what: "enumerating quotient arrows".into() });
        }
        let base = self.base();
        let last = *stack.last().expect("non-empty chain");
        if self.class_of(base.cod(last)) == tgt {
            out.push(QArrow {
                src: self.class_of(base.dom(stack[0])),
                word: ReducedWord::new(base, stack.clone())?,
                tgt,
            });
        }
        if stack.len() >= max_len {
            return Ok(());
        }
        let here = base.cod(last);
        let class = self.class_of(here);
        for &o in self.classes.members(class) {
            if o == here {
                continue;
            }
            for next in base.objects() {
                for &g in base.hom(o, next) {
                    if base.is_identity(g) {
                        continue;
                    }
                    stack.push(g);
                    self.extend_chains(stack, tgt, max_len, budget, visited, out)?;
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    /// Every arrow with at most `max_len` letters, ordered by length, then by
    /// word, then by endpoints.
    pub fn enumerate_all(&self, max_len: usize, budget: Budget) -> Result<Vec<QArrow>> {
        let mut out = Vec::new();
        for s in self.classes.ids() {
            for t in self.classes.ids() {
                out.extend(self.enumerate_q_arrows(s, t, max_len, budget)?);
            }
        }
        self.sort_arrows(&mut out);
        Ok(out)
    }

    fn sort_arrows(&self, arrows: &mut [QArrow]) {
        let base = self.base().clone();
        arrows.sort_by_cached_key(|a| {
            let names: Vec<String> = a.word.as_slice().iter().map(|f| base.arrow_name(*f).to_string()).collect();
            (a.word.len(), names, a.src, a.tgt)
        });
    }

    pub fn display_word<'a>(&'a self, a: &'a QArrow) -> WordDisplay<'a> {
        a.word.display(self.base())
    }

    /// `[X] -> [Y] : f,g`
    pub fn render_arrow(&self, a: &QArrow) -> String {
        format!("{} -> {} : {}", self.class_name(a.src), self.class_name(a.tgt), self.display_word(a))
    }
}
