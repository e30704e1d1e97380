//! Finitely presented categories for Z-cokernels, with a bounded word problem.
//!
//! Equality of words in a presented category is only semi-decidable in
//! general, so [`word_equal_bounded`] answers with a three-valued
//! [`BoundedVerdict`]. `Equal` carries a replayable trace; `Distinct` is only
//! reported through sound invariants.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::coeq::{ClassId, QArrow, QuotientCat};
use crate::error::{Error, Result};
use crate::fincat::{ArrowId, FinCat, Functor, ObjId};
use crate::pretorsion::{is_trivial_functor, torsionfree_reflection, Composed};
use crate::unionfind::DisjointSet;
use crate::Budget;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    /// Formally inverted generators also provide the letter `name^-1`.
    pub invertible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Letter {
        Letter { gen, inverse: false }
    }

    pub fn inv(gen: usize) -> Letter {
        Letter { gen, inverse: true }
    }

    pub fn inverted(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// A composable chain of letters from `src` to `tgt`; empty words are
/// identities and carry their object explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PWord {
    pub src: usize,
    pub tgt: usize,
    pub letters: Vec<Letter>,
}

impl PWord {
    pub fn empty(obj: usize) -> PWord {
        PWord { src: obj, tgt: obj, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: PWord,
    pub rhs: PWord,
}

/// Where a rewrite rule comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOrigin {
    Relation(usize),
    /// `g·g⁻¹ = ()` or `g⁻¹·g = ()` for an invertible generator.
    Cancellation(usize),
    /// Derived from the given relation using formal inverses.
    Consequence(usize),
}

#[derive(Clone, Debug)]
struct Rule {
    /// Shortlex-greater side.
    lhs: Vec<Letter>,
    rhs: Vec<Letter>,
    /// Source object of both sides; needed when one of them is empty.
    at: usize,
    origin: RuleOrigin,
}

/// One rewrite: rule `rule` applied at `position`, left-to-right when
/// `forward` (towards the shortlex-smaller side).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: usize,
    pub forward: bool,
    pub position: usize,
}

impl Step {
    fn reversed(self) -> Step {
        Step { forward: !self.forward, ..self }
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    objects: Vec<String>,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
    rules: Vec<Rule>,
    reducing: HashMap<Vec<Letter>, usize>,
    max_lhs: usize,
    abelian: Lattice,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for Presentation {}

impl Presentation {
    pub fn new(objects: Vec<String>, generators: Vec<Generator>, relations: Vec<Relation>) -> Result<Presentation> {
        let mut seen = HashSet::new();
        for o in &objects {
            if !seen.insert(o.as_str()) {
                return Err(Error::Presentation(format!("duplicate object `{o}`")));
            }
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::Presentation(format!("duplicate generator `{}`", g.name)));
            }
            if g.src >= objects.len() || g.tgt >= objects.len() {
                return Err(Error::Presentation(format!("generator `{}` has an unknown endpoint", g.name)));
            }
        }
        let mut p = Presentation {
            objects,
            generators,
            relations: Vec::new(),
            rules: Vec::new(),
            reducing: HashMap::new(),
            max_lhs: 0,
            abelian: Lattice::default(),
        };
        for (i, r) in relations.iter().enumerate() {
            p.check_word(&r.lhs).map_err(|e| Error::Presentation(format!("relation #{i}: {e}")))?;
            p.check_word(&r.rhs).map_err(|e| Error::Presentation(format!("relation #{i}: {e}")))?;
            if (r.lhs.src, r.lhs.tgt) != (r.rhs.src, r.rhs.tgt) {
                return Err(Error::Presentation(format!("relation #{i}: sides have different endpoints")));
            }
        }
        p.relations = relations;
        p.build_rules();
        let vectors: Vec<Vec<i64>> = p.relations.iter().map(|r| p.difference(&r.lhs, &r.rhs)).collect();
        p.abelian = Lattice::new(p.generators.len(), vectors);
        Ok(p)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn letter_src(&self, l: Letter) -> usize {
        let g = &self.generators[l.gen];
        if l.inverse {
            g.tgt
        } else {
            g.src
        }
    }

    pub fn letter_tgt(&self, l: Letter) -> usize {
        let g = &self.generators[l.gen];
        if l.inverse {
            g.src
        } else {
            g.tgt
        }
    }

    fn letter_ok(&self, l: Letter) -> bool {
        l.gen < self.generators.len() && (!l.inverse || self.generators[l.gen].invertible)
    }

    fn all_invertible(&self, letters: &[Letter]) -> bool {
        letters.iter().all(|l| self.generators[l.gen].invertible)
    }

    /// Checks that `w` is a composable chain with the stated endpoints.
    pub fn check_word(&self, w: &PWord) -> Result<()> {
        if w.src >= self.objects.len() || w.tgt >= self.objects.len() {
            return Err(Error::Presentation("word has an unknown endpoint".into()));
        }
        let mut here = w.src;
        for &l in &w.letters {
            if !self.letter_ok(l) {
                return Err(Error::Presentation("word uses an unknown letter".into()));
            }
            if self.letter_src(l) != here {
                return Err(Error::Presentation(format!("`{}` is not a composable chain", self.render(w))));
            }
            here = self.letter_tgt(l);
        }
        if here != w.tgt {
            return Err(Error::Presentation(format!("`{}` does not end at {}", self.render(w), self.objects[w.tgt])));
        }
        Ok(())
    }

    /// Builds a word from letters; `empty_at` supplies the object of an
    /// empty word.
    pub fn word(&self, letters: Vec<Letter>, empty_at: usize) -> Result<PWord> {
        let (src, tgt) = match (letters.first(), letters.last()) {
            (Some(&f), Some(&l)) => (self.letter_src(f), self.letter_tgt(l)),
            _ => (empty_at, empty_at),
        };
        if letters.iter().any(|l| !self.letter_ok(*l)) {
            return Err(Error::Presentation("word uses an unknown letter".into()));
        }
        let w = PWord { src, tgt, letters };
        self.check_word(&w)?;
        Ok(w)
    }

    /// Parses `a,b^-1,c`; `()` and the empty string are the empty word,
    /// placed at `empty_at` or at the only object.
    pub fn parse_word(&self, text: &str, empty_at: Option<usize>) -> Result<PWord> {
        let text = text.trim();
        let mut letters = Vec::new();
        if !text.is_empty() && text != "()" {
            for part in text.split(',') {
                let part = part.trim();
                let (name, inverse) = match part.strip_suffix("^-1") {
                    Some(base) => (base, true),
                    None => (part, false),
                };
                let gen = self
                    .generator_index(name)
                    .ok_or_else(|| Error::Presentation(format!("unknown generator `{name}`")))?;
                if inverse && !self.generators[gen].invertible {
                    return Err(Error::Presentation(format!("generator `{name}` is not invertible")));
                }
                letters.push(Letter { gen, inverse });
            }
        }
        let at = match (letters.is_empty(), empty_at, self.objects.len()) {
            (false, _, _) => 0,
            (true, Some(o), _) => o,
            (true, None, 1) => 0,
            (true, None, _) => {
                return Err(Error::Presentation("cannot place the empty word: several objects".into()));
            }
        };
        self.word(letters, at)
    }

    pub fn render_letters(&self, letters: &[Letter]) -> String {
        if letters.is_empty() {
            return "()".to_string();
        }
        let parts: Vec<String> = letters
            .iter()
            .map(|l| {
                let name = &self.generators[l.gen].name;
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect();
        parts.join(",")
    }

    pub fn render(&self, w: &PWord) -> String {
        self.render_letters(&w.letters)
    }

    /// The formal inverse, defined when every letter is invertible.
    pub fn inverse(&self, w: &PWord) -> Option<PWord> {
        if !self.all_invertible(&w.letters) {
            return None;
        }
        let letters = w.letters.iter().rev().map(|l| l.inverted()).collect();
        Some(PWord { src: w.tgt, tgt: w.src, letters })
    }

    pub fn concat(&self, a: &PWord, b: &PWord) -> Result<PWord> {
        if a.tgt != b.src {
            return Err(Error::Presentation(format!("cannot compose `{}` with `{}`", self.render(a), self.render(b))));
        }
        let mut letters = a.letters.clone();
        letters.extend_from_slice(&b.letters);
        Ok(PWord { src: a.src, tgt: b.tgt, letters })
    }

    fn letter_key(&self, l: Letter) -> usize {
        if l.inverse {
            self.generators.len() + l.gen
        } else {
            l.gen
        }
    }

    /// Length first, then lexicographic with all positive letters before
    /// all inverse letters.
    fn shortlex(&self, a: &[Letter], b: &[Letter]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            let ka = a.iter().map(|l| self.letter_key(*l));
            let kb = b.iter().map(|l| self.letter_key(*l));
            ka.cmp(kb)
        })
    }

    fn object_at(&self, src: usize, letters: &[Letter], position: usize) -> usize {
        if position == 0 {
            src
        } else {
            self.letter_tgt(letters[position - 1])
        }
    }

    fn build_rules(&mut self) {
        let mut rules: Vec<Rule> = Vec::new();
        let mut seen: HashSet<(Vec<Letter>, Vec<Letter>)> = HashSet::new();
        let mut add = |p: &Presentation, a: Vec<Letter>, b: Vec<Letter>, at: usize, origin: RuleOrigin| {
            let (lhs, rhs) = match p.shortlex(&a, &b) {
                Ordering::Equal => return,
                Ordering::Greater => (a, b),
                Ordering::Less => (b, a),
            };
            if seen.insert((lhs.clone(), rhs.clone())) {
                rules.push(Rule { lhs, rhs, at, origin });
            }
        };
        for (i, r) in self.relations.iter().enumerate() {
            add(self, r.lhs.letters.clone(), r.rhs.letters.clone(), r.lhs.src, RuleOrigin::Relation(i));
        }
        for (g, gen) in self.generators.iter().enumerate().filter(|(_, g)| g.invertible) {
            add(self, vec![Letter::pos(g), Letter::inv(g)], vec![], gen.src, RuleOrigin::Cancellation(g));
            add(self, vec![Letter::inv(g), Letter::pos(g)], vec![], gen.tgt, RuleOrigin::Cancellation(g));
        }
        for (i, r) in self.relations.iter().enumerate() {
            let (l, rr) = (&r.lhs.letters, &r.rhs.letters);
            let origin = RuleOrigin::Consequence(i);
            if self.all_invertible(l) && self.all_invertible(rr) && l.len() + rr.len() <= 4 {
                // every split of every rotation of the relator l·r⁻¹ and of its inverse
                let mut relator = l.clone();
                relator.extend(rr.iter().rev().map(|x| x.inverted()));
                let inverse: Vec<Letter> = relator.iter().rev().map(|x| x.inverted()).collect();
                for cycle in [relator, inverse] {
                    let n = cycle.len();
                    for shift in 0..n {
                        let rotated: Vec<Letter> = cycle[shift..].iter().chain(&cycle[..shift]).copied().collect();
                        let at = self.letter_src(rotated[0]);
                        for k in 0..=n {
                            let p = rotated[..k].to_vec();
                            let s: Vec<Letter> = rotated[k..].iter().rev().map(|x| x.inverted()).collect();
                            add(self, p, s, at, origin);
                        }
                    }
                }
            } else {
                // a single invertible letter x = w makes x⁻¹ a two-sided inverse of w
                for (single, other, src, tgt) in [(l, rr, r.lhs.src, r.lhs.tgt), (rr, l, r.lhs.src, r.lhs.tgt)] {
                    if single.len() == 1 && self.generators[single[0].gen].invertible && other.len() <= 2 {
                        let x_inv = single[0].inverted();
                        let mut right = other.clone();
                        right.push(x_inv);
                        add(self, right, vec![], src, origin);
                        let mut left = vec![x_inv];
                        left.extend_from_slice(other);
                        add(self, left, vec![], tgt, origin);
                    }
                }
            }
        }
        let mut reducing: HashMap<Vec<Letter>, usize> = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            match reducing.get(&rule.lhs) {
                Some(&j) if self.shortlex(&rules[j].rhs, &rule.rhs) != Ordering::Greater => {}
                _ => {
                    reducing.insert(rule.lhs.clone(), i);
                }
            }
        }
        self.max_lhs = rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0);
        self.rules = rules;
        self.reducing = reducing;
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn rule_origin(&self, rule: usize) -> RuleOrigin {
        self.rules[rule].origin
    }

    /// Applies one step, or returns `None` when it does not match.
    pub fn apply_step(&self, w: &PWord, step: Step) -> Option<PWord> {
        let rule = self.rules.get(step.rule)?;
        let (pattern, replacement) = if step.forward { (&rule.lhs, &rule.rhs) } else { (&rule.rhs, &rule.lhs) };
        let letters = &w.letters;
        if step.position > letters.len() {
            return None;
        }
        if pattern.is_empty() {
            if self.object_at(w.src, letters, step.position) != rule.at {
                return None;
            }
        } else if letters.get(step.position..step.position + pattern.len())? != pattern.as_slice() {
            return None;
        }
        let mut out = Vec::with_capacity(letters.len() + replacement.len());
        out.extend_from_slice(&letters[..step.position]);
        out.extend_from_slice(replacement);
        out.extend_from_slice(&letters[step.position + pattern.len()..]);
        Some(PWord { src: w.src, tgt: w.tgt, letters: out })
    }

    /// Replays a trace from `start`, failing on the first step that does
    /// not apply.
    pub fn replay(&self, start: &PWord, trace: &[Step]) -> Option<PWord> {
        trace.iter().try_fold(start.clone(), |w, s| self.apply_step(&w, *s))
    }

    pub fn describe_step(&self, step: Step) -> String {
        let rule = &self.rules[step.rule];
        let (from, to) = if step.forward { (&rule.lhs, &rule.rhs) } else { (&rule.rhs, &rule.lhs) };
        let origin = match rule.origin {
            RuleOrigin::Relation(i) => format!("relation #{i}"),
            RuleOrigin::Cancellation(g) => format!("cancellation of {}", self.generators[g].name),
            RuleOrigin::Consequence(i) => format!("consequence of relation #{i}"),
        };
        format!("{} -> {} at {} ({origin})", self.render_letters(from), self.render_letters(to), step.position)
    }

    /// Greedy rewriting towards the shortlex-least side of every rule,
    /// always at the leftmost shortest match. Terminates because each step
    /// strictly decreases the word in shortlex order.
    pub fn normalize(&self, w: &PWord) -> (PWord, Vec<Step>) {
        let mut current = w.clone();
        let mut trace = Vec::new();
        'rewrite: loop {
            let n = current.letters.len();
            for i in 0..n {
                for len in 1..=self.max_lhs.min(n - i) {
                    if let Some(&rule) = self.reducing.get(&current.letters[i..i + len]) {
                        let step = Step { rule, forward: true, position: i };
                        current = self.apply_step(&current, step).expect("matched rule applies");
                        trace.push(step);
                        continue 'rewrite;
                    }
                }
            }
            return (current, trace);
        }
    }

    fn neighbours(&self, w: &PWord, max_len: usize, out: &mut Vec<(Step, PWord)>) {
        out.clear();
        let n = w.letters.len();
        for (r, rule) in self.rules.iter().enumerate() {
            for forward in [true, false] {
                let (pattern, replacement) = if forward { (&rule.lhs, &rule.rhs) } else { (&rule.rhs, &rule.lhs) };
                if n - pattern.len().min(n) + replacement.len() > max_len || pattern.len() > n {
                    continue;
                }
                for position in 0..=n - pattern.len() {
                    let step = Step { rule: r, forward, position };
                    if let Some(next) = self.apply_step(w, step) {
                        out.push((step, next));
                    }
                }
            }
        }
    }

    /// Exponent-sum vector of `a` minus that of `b`.
    fn difference(&self, a: &PWord, b: &PWord) -> Vec<i64> {
        let mut v = vec![0i64; self.generators.len()];
        for (w, sign) in [(a, 1), (b, -1)] {
            for l in &w.letters {
                v[l.gen] += if l.inverse { -sign } else { sign };
            }
        }
        v
    }

    /// Sends each generator to an arrow of `target` and checks every
    /// relation and every formal inverse. Returns the failures found.
    pub fn evaluate(&self, target: &FinCat, objects: &[ObjId], generators: &[ArrowId]) -> Result<Vec<String>> {
        if objects.len() != self.objects.len() || generators.len() != self.generators.len() {
            return Err(Error::Presentation("assignment has the wrong size".into()));
        }
        let mut failures = Vec::new();
        for (g, gen) in self.generators.iter().enumerate() {
            let a = generators[g];
            if target.dom(a) != objects[gen.src] || target.cod(a) != objects[gen.tgt] {
                failures.push(format!("generator `{}` is sent to an arrow with the wrong endpoints", gen.name));
            } else if gen.invertible && !target.is_iso(a) {
                failures.push(format!("invertible generator `{}` is sent to a non-isomorphism", gen.name));
            }
        }
        if !failures.is_empty() {
            return Ok(failures);
        }
        let eval = |w: &PWord| -> Result<ArrowId> {
            let mut acc = target.identity(objects[w.src]);
            for l in &w.letters {
                let a = generators[l.gen];
                let a = if l.inverse { target.inverse(a).expect("checked iso") } else { a };
                acc = target.compose(acc, a)?;
            }
            Ok(acc)
        };
        for (i, r) in self.relations.iter().enumerate() {
            if eval(&r.lhs)? != eval(&r.rhs)? {
                failures.push(format!("relation #{i} `{}` does not hold", self.render_relation(r)));
            }
        }
        Ok(failures)
    }

    pub fn render_relation(&self, r: &Relation) -> String {
        format!("{} = {}", self.render(&r.lhs), self.render(&r.rhs))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objects: {}", self.objects.join(", "))?;
        writeln!(f, "generators:")?;
        for g in &self.generators {
            let inv = if g.invertible { " (invertible)" } else { "" };
            writeln!(f, "  {}: {} -> {}{inv}", g.name, self.objects[g.src], self.objects[g.tgt])?;
        }
        writeln!(f, "relations:")?;
        for r in &self.relations {
            writeln!(f, "  {}", self.render_relation(r))?;
        }
        Ok(())
    }
}

/// Integer lattice in echelon form, for exponent-sum invariants.
#[derive(Clone, Debug, Default)]
struct Lattice {
    dim: usize,
    /// `(pivot column, row)` with strictly increasing pivot columns; each
    /// row is zero before its pivot.
    rows: Vec<(usize, Vec<i64>)>,
}

impl Lattice {
    fn new(dim: usize, vectors: Vec<Vec<i64>>) -> Lattice {
        let mut pending: Vec<Vec<i64>> = vectors.into_iter().filter(|v| v.iter().any(|x| *x != 0)).collect();
        let mut rows = Vec::new();
        for col in 0..dim {
            loop {
                let nonzero: Vec<usize> = (0..pending.len()).filter(|&i| pending[i][col] != 0).collect();
                let Some(&m) = nonzero.iter().min_by_key(|&&i| pending[i][col].abs()) else { break };
                let mut others_clear = true;
                for &j in nonzero.iter().filter(|&&j| j != m) {
                    let q = pending[j][col] / pending[m][col];
                    let pivot_row = pending[m].clone();
                    for (x, y) in pending[j].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                    others_clear &= pending[j][col] == 0;
                }
                if others_clear {
                    let mut row = pending.swap_remove(m);
                    if row[col] < 0 {
                        row.iter_mut().for_each(|x| *x = -*x);
                    }
                    rows.push((col, row));
                    break;
                }
            }
        }
        Lattice { dim, rows }
    }

    fn contains(&self, v: &[i64]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (col, row) in &self.rows {
            if v[*col] % row[*col] != 0 {
                return false;
            }
            let q = v[*col] / row[*col];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        v.iter().all(|x| *x == 0)
    }
}

/// Limits for [`word_equal_bounded`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBound {
    /// Rewrite steps in the bidirectional search, both sides together.
    pub max_steps: usize,
    /// Longest intermediate word.
    pub max_len: usize,
    /// Words visited before giving up.
    pub max_nodes: usize,
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound { max_steps: 8, max_len: 12, max_nodes: 50_000 }
    }
}

impl fmt::Display for SearchBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} steps, length {}, {} words", self.max_steps, self.max_len, self.max_nodes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Endpoints,
    /// Exponent sums differ modulo the relations.
    Abelianization,
    /// A model of the presentation tells the words apart.
    Model(String),
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separation::Endpoints => write!(f, "different endpoints"),
            Separation::Abelianization => write!(f, "abelianized exponent sums differ"),
            Separation::Model(why) => write!(f, "{why}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedVerdict {
    /// Steps rewriting the first word into the second.
    Equal(Vec<Step>),
    Distinct(Separation),
    Unknown(SearchBound),
}

impl BoundedVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, BoundedVerdict::Equal(_))
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, BoundedVerdict::Distinct(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, BoundedVerdict::Unknown(_))
    }
}

/// A sound way to tell words apart, beyond the built-in invariants.
pub trait Separator {
    fn separate(&self, p: &Presentation, a: &PWord, b: &PWord) -> Option<String>;
}

/// Semi-decides equality of two words with the default invariants.
pub fn word_equal_bounded(p: &Presentation, w1: &PWord, w2: &PWord, bound: SearchBound) -> Result<BoundedVerdict> {
    word_equal_with(p, w1, w2, bound, &[])
}

/// [`word_equal_bounded`] with extra separators. Both words are normalized
/// first; the bidirectional breadth-first search then runs between the
/// normal forms, applying relations in both directions.
pub fn word_equal_with(
    p: &Presentation,
    w1: &PWord,
    w2: &PWord,
    bound: SearchBound,
    separators: &[&dyn Separator],
) -> Result<BoundedVerdict> {
    p.check_word(w1)?;
    p.check_word(w2)?;
    if (w1.src, w1.tgt) != (w2.src, w2.tgt) {
        return Ok(BoundedVerdict::Distinct(Separation::Endpoints));
    }
    if w1 == w2 {
        return Ok(BoundedVerdict::Equal(Vec::new()));
    }
    let (n1, mut trace) = p.normalize(w1);
    let (n2, trace2) = p.normalize(w2);
    let back: Vec<Step> = trace2.iter().rev().map(|s| s.reversed()).collect();
    if n1 == n2 {
        trace.extend(back);
        return Ok(BoundedVerdict::Equal(trace));
    }
    if !p.abelian.contains(&p.difference(w1, w2)) {
        return Ok(BoundedVerdict::Distinct(Separation::Abelianization));
    }
    for s in separators {
        if let Some(why) = s.separate(p, w1, w2) {
            return Ok(BoundedVerdict::Distinct(Separation::Model(why)));
        }
    }
    match bidirectional(p, &n1, &n2, bound) {
        Some(path) => {
            trace.extend(path);
            trace.extend(back);
            Ok(BoundedVerdict::Equal(trace))
        }
        None => Ok(BoundedVerdict::Unknown(bound)),
    }
}

type Visited = HashMap<Vec<Letter>, Option<(Vec<Letter>, Step)>>;

fn bidirectional(p: &Presentation, a: &PWord, b: &PWord, bound: SearchBound) -> Option<Vec<Step>> {
    let mut seen: [Visited; 2] = [HashMap::new(), HashMap::new()];
    seen[0].insert(a.letters.clone(), None);
    seen[1].insert(b.letters.clone(), None);
    let mut frontier = [vec![a.letters.clone()], vec![b.letters.clone()]];
    let mut depth = [0usize; 2];
    let mut scratch = Vec::new();
    while depth[0] + depth[1] < bound.max_steps {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        if frontier[side].is_empty() {
            return None;
        }
        let mut next = Vec::new();
        for letters in std::mem::take(&mut frontier[side]) {
            let w = PWord { src: a.src, tgt: a.tgt, letters };
            p.neighbours(&w, bound.max_len, &mut scratch);
            for (step, n) in scratch.drain(..) {
                if seen[side].contains_key(&n.letters) {
                    continue;
                }
                seen[side].insert(n.letters.clone(), Some((w.letters.clone(), step)));
                if seen[1 - side].contains_key(&n.letters) {
                    return Some(join(&seen, &n.letters));
                }
                if seen[0].len() + seen[1].len() >= bound.max_nodes {
                    return None;
                }
                next.push(n.letters);
            }
        }
        frontier[side] = next;
        depth[side] += 1;
    }
    None
}

/// The path from the first root to `meet`, then from `meet` to the second.
fn join(seen: &[Visited; 2], meet: &[Letter]) -> Vec<Step> {
    let mut forward = Vec::new();
    let mut cur = meet.to_vec();
    while let Some(Some((parent, step))) = seen[0].get(&cur) {
        forward.push(*step);
        cur = parent.clone();
    }
    forward.reverse();
    let mut cur = meet.to_vec();
    while let Some(Some((parent, step))) = seen[1].get(&cur) {
        forward.push(step.reversed());
        cur = parent.clone();
    }
    forward
}

/// Objects `[X]`, one per class of `pairs`, named by the least member and
/// ordered by name. Returns the class of each object and the class names.
fn merged_objects(names: &[&str], pairs: impl Iterator<Item = (usize, usize)>) -> (Vec<usize>, Vec<String>) {
    let mut ds = DisjointSet::new(names.len());
    for (a, b) in pairs {
        ds.union(a, b);
    }
    let (labels, count) = ds.labels();
    let mut rep: Vec<Option<&str>> = vec![None; count];
    for (o, &l) in labels.iter().enumerate() {
        if rep[l].is_none_or(|r| names[o] < r) {
            rep[l] = Some(names[o]);
        }
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&l| rep[l]);
    let mut position = vec![0; count];
    for (i, &l) in order.iter().enumerate() {
        position[l] = i;
    }
    let class_of = labels.iter().map(|&l| position[l]).collect();
    let names = order.iter().map(|&l| format!("[{}]", rep[l].expect("nonempty class"))).collect();
    (class_of, names)
}

/// Generators for the non-identity arrows of `c` (starting at index
/// `offset`), the word of every arrow, and the composition relations.
fn arrow_generators(
    c: &FinCat,
    object_of: &[usize],
    offset: usize,
    name: impl Fn(&str) -> String,
    invertible: bool,
) -> (Vec<Generator>, Vec<PWord>, Vec<Relation>) {
    let mut generators = Vec::new();
    let mut words = Vec::with_capacity(c.num_arrows());
    for a in c.arrow_ids() {
        let (src, tgt) = (object_of[c.dom(a).0], object_of[c.cod(a).0]);
        if c.is_identity(a) {
            words.push(PWord::empty(src));
        } else {
            words.push(PWord { src, tgt, letters: vec![Letter::pos(offset + generators.len())] });
            generators.push(Generator { name: name(c.arrow_name(a)), src, tgt, invertible });
        }
    }
    let mut relations = Vec::new();
    for f in c.non_identity_arrows() {
        for g in c.non_identity_arrows() {
            if let Some(h) = c.composite(f, g) {
                let mut lhs = words[f.0].clone();
                lhs.letters.extend_from_slice(&words[g.0].letters);
                lhs.tgt = words[g.0].tgt;
                relations.push(Relation { lhs, rhs: words[h.0].clone() });
            }
        }
    }
    (generators, words, relations)
}

fn cancellations(generators: &[Generator], range: std::ops::Range<usize>) -> Vec<Relation> {
    let mut out = Vec::new();
    for g in range {
        let (src, tgt) = (generators[g].src, generators[g].tgt);
        let lhs = PWord { src, tgt: src, letters: vec![Letter::pos(g), Letter::inv(g)] };
        out.push(Relation { lhs, rhs: PWord::empty(src) });
        let lhs = PWord { src: tgt, tgt, letters: vec![Letter::inv(g), Letter::pos(g)] };
        out.push(Relation { lhs, rhs: PWord::empty(tgt) });
    }
    out
}

/// The category of fractions of `a` inverting every arrow.
pub fn localization_presentation(a: &FinCat) -> Presentation {
    let names: Vec<String> = a.objects().map(|o| a.object_name(o).to_string()).collect();
    let identity: Vec<usize> = (0..names.len()).collect();
    let (generators, _, mut relations) = arrow_generators(a, &identity, 0, str::to_string, true);
    relations.extend(cancellations(&generators, 0..generators.len()));
    Presentation::new(names, generators, relations).expect("fractions of a valid category")
}

/// The localization of `a` with each connected component collapsed to one
/// object `[X]`, and the word of every arrow of `a`.
pub fn z_cokernel_of_identity(a: &FinCat) -> (Presentation, Vec<PWord>) {
    let names: Vec<&str> = a.objects().map(|o| a.object_name(o)).collect();
    let (class_of, objects) = merged_objects(&names, a.arrow_ids().map(|f| (a.dom(f).0, a.cod(f).0)));
    let (generators, words, mut relations) = arrow_generators(a, &class_of, 0, str::to_string, true);
    relations.extend(cancellations(&generators, 0..generators.len()));
    let p = Presentation::new(objects, generators, relations).expect("fractions of a valid category");
    (p, words)
}

/// The pushout of [`z_cokernel_of_identity`] of the source along `f`.
/// Generators are the non-identity arrows of the target followed by
/// invertible copies `qp(a)` of the source's arrows. Returns the word of
/// every arrow of the target.
pub fn z_cokernel(f: &Functor) -> Result<(Presentation, Vec<PWord>)> {
    let (a, b) = (f.source(), f.target());
    let names: Vec<&str> = b.objects().map(|o| b.object_name(o)).collect();
    let merges = a.arrow_ids().map(|x| (f.on_object(a.dom(x)).0, f.on_object(a.cod(x)).0));
    let (class_of, objects) = merged_objects(&names, merges);
    let (mut generators, b_words, mut relations) = arrow_generators(b, &class_of, 0, str::to_string, false);
    let offset = generators.len();
    let a_class: Vec<usize> = a.objects().map(|o| class_of[f.on_object(o).0]).collect();
    let (a_gens, a_words, a_relations) = arrow_generators(a, &a_class, offset, |n| format!("qp({n})"), true);
    generators.extend(a_gens);
    relations.extend(a_relations);
    relations.extend(cancellations(&generators, offset..generators.len()));
    for x in a.non_identity_arrows() {
        relations.push(Relation { lhs: a_words[x.0].clone(), rhs: b_words[f.on_arrow(x).0].clone() });
    }
    let p = Presentation::new(objects, generators, relations)?;
    Ok((p, b_words))
}

/// Distinct normal forms of all words of length at most `max_len`, sorted
/// by endpoints, then shortlex.
pub fn bounded_normal_forms(p: &Presentation, max_len: usize, budget: Budget) -> Result<Vec<PWord>> {
    let mut letters_from: Vec<Vec<Letter>> = vec![Vec::new(); p.objects.len()];
    for (g, gen) in p.generators.iter().enumerate() {
        letters_from[gen.src].push(Letter::pos(g));
        if gen.invertible {
            letters_from[gen.tgt].push(Letter::inv(g));
        }
    }
    let mut forms: HashSet<PWord> = HashSet::new();
    let mut visited = 0usize;
    for start in 0..p.objects.len() {
        let mut stack = vec![PWord::empty(start)];
        while let Some(w) = stack.pop() {
            visited += 1;
            if visited > budget.0 {
                return Err(Error::BudgetExceeded { budget: budget.0, what: "normal-form enumeration".into() });
            }
            if w.len() < max_len {
                for &l in &letters_from[w.tgt] {
                    let mut next = w.clone();
                    next.letters.push(l);
                    next.tgt = p.letter_tgt(l);
                    stack.push(next);
                }
            }
            forms.insert(p.normalize(&w).0);
        }
    }
    let mut forms: Vec<PWord> = forms.into_iter().collect();
    forms.sort_by(|x, y| (x.src, x.tgt).cmp(&(y.src, y.tgt)).then_with(|| p.shortlex(&x.letters, &y.letters)));
    Ok(forms)
}

/// Pass/fail tally where unresolved checks are kept apart from failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundedReport {
    pub checks: usize,
    pub failures: Vec<String>,
    pub unknown: Vec<String>,
}

impl BoundedReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.unknown.is_empty()
    }

    fn record(&mut self, verdict: &BoundedVerdict, what: impl FnOnce() -> String) {
        self.checks += 1;
        match verdict {
            BoundedVerdict::Equal(_) => {}
            BoundedVerdict::Distinct(why) => self.failures.push(format!("{}: {why}", what())),
            BoundedVerdict::Unknown(_) => self.unknown.push(what()),
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }
}

/// A functor between presentations given on objects and generators.
#[derive(Clone, Debug)]
pub struct PresentationMap {
    objects: Vec<usize>,
    generators: Vec<PWord>,
}

impl PresentationMap {
    pub fn new(
        source: &Presentation,
        target: &Presentation,
        objects: Vec<usize>,
        generators: Vec<PWord>,
    ) -> Result<Self> {
        if objects.len() != source.objects.len() || generators.len() != source.generators.len() {
            return Err(Error::Presentation("map has the wrong size".into()));
        }
        for (g, w) in source.generators.iter().zip(&generators) {
            target.check_word(w)?;
            if (w.src, w.tgt) != (objects[g.src], objects[g.tgt]) {
                return Err(Error::Presentation(format!("image of `{}` has the wrong endpoints", g.name)));
            }
            if g.invertible && target.inverse(w).is_none() {
                return Err(Error::Presentation(format!("image of invertible `{}` is not invertible", g.name)));
            }
        }
        Ok(PresentationMap { objects, generators })
    }

    /// Matches objects by name and sends each generator to the word named
    /// by `image`.
    pub fn by_names(source: &Presentation, target: &Presentation, image: impl Fn(&str) -> String) -> Result<Self> {
        let objects = source
            .objects
            .iter()
            .map(|o| target.object_index(o).ok_or_else(|| Error::Presentation(format!("no object `{o}` in target"))))
            .collect::<Result<Vec<_>>>()?;
        let generators = source
            .generators
            .iter()
            .map(|g| target.parse_word(&image(&g.name), Some(objects[g.src])))
            .collect::<Result<Vec<_>>>()?;
        PresentationMap::new(source, target, objects, generators)
    }

    pub fn apply(&self, source: &Presentation, target: &Presentation, w: &PWord) -> PWord {
        let mut out = PWord::empty(self.objects[w.src]);
        for l in &w.letters {
            let image = &self.generators[l.gen];
            let piece = if l.inverse { target.inverse(image).expect("checked invertible") } else { image.clone() };
            out.letters.extend(piece.letters);
            out.tgt = piece.tgt;
        }
        debug_assert_eq!(out.tgt, self.objects[w.tgt], "{}", source.render(w));
        out
    }
}

/// Checks that `f: p → q` and `g: q → p` respect all relations and are
/// mutually inverse on generators, up to bounded word equality.
pub fn bounded_equivalence(
    p: &Presentation,
    q: &Presentation,
    f: &PresentationMap,
    g: &PresentationMap,
    bound: SearchBound,
) -> Result<BoundedReport> {
    let mut report = BoundedReport::default();
    for (from, to, map, label) in [(p, q, f, "first"), (q, p, g, "second")] {
        for r in &from.relations {
            let verdict = word_equal_bounded(to, &map.apply(from, to, &r.lhs), &map.apply(from, to, &r.rhs), bound)?;
            report.record(&verdict, || format!("{label} map breaks relation `{}`", from.render_relation(r)));
        }
    }
    for (from, to, there, back) in [(p, q, f, g), (q, p, g, f)] {
        for (i, gen) in from.generators.iter().enumerate() {
            let w = PWord { src: gen.src, tgt: gen.tgt, letters: vec![Letter::pos(i)] };
            let round = back.apply(to, from, &there.apply(from, to, &w));
            let verdict = word_equal_bounded(from, &w, &round, bound)?;
            report.record(&verdict, || format!("round trip moves generator `{}`", gen.name));
        }
    }
    Ok(report)
}

/// Compares `z_cokernel(id_A)` with `z_cokernel_of_identity(A)`.
pub fn identity_pushout_equivalence(a: &Arc<FinCat>, bound: SearchBound) -> Result<BoundedReport> {
    let (direct, _) = z_cokernel_of_identity(a);
    let (pushout, _) = z_cokernel(&Functor::identity(a))?;
    let there = PresentationMap::by_names(&direct, &pushout, |n| format!("qp({n})"))?;
    let back = PresentationMap::by_names(&pushout, &direct, |n| {
        n.strip_prefix("qp(").and_then(|s| s.strip_suffix(')')).unwrap_or(n).to_string()
    })?;
    bounded_equivalence(&direct, &pushout, &there, &back, bound)
}

/// Evaluates the pushout presentation of `f` into the target of a probe
/// `w` with `w ∘ f` trivial, checking every relation.
pub fn pushout_probe(f: &Functor, w: &Functor) -> Result<Vec<String>> {
    if **w.source() != **f.target() {
        return Err(Error::Precondition("probe does not start at the functor's target".into()));
    }
    if !is_trivial_functor(&Composed::new(f, w)?) {
        return Err(Error::Precondition("probe composite is not trivial".into()));
    }
    let (p, b_words) = z_cokernel(f)?;
    let b = f.target();
    let y = w.target();
    let mut objects: Vec<Option<ObjId>> = vec![None; p.objects.len()];
    let mut failures = Vec::new();
    for o in b.objects() {
        let class = b_words[b.identity(o).0].src;
        match objects[class] {
            None => objects[class] = Some(w.on_object(o)),
            Some(prev) if prev != w.on_object(o) => {
                failures.push(format!("probe separates objects merged into {}", p.objects[class]));
            }
            Some(_) => {}
        }
    }
    if !failures.is_empty() {
        return Ok(failures);
    }
    let objects: Vec<ObjId> = objects.into_iter().map(|o| o.expect("every class has a member")).collect();
    let mut generators: Vec<ArrowId> = b.non_identity_arrows().map(|x| w.on_arrow(x)).collect();
    generators.extend(f.source().non_identity_arrows().map(|x| w.on_arrow(f.on_arrow(x))));
    p.evaluate(y, &objects, &generators)
}

/// Interpretation of a presentation in a quotient category; it separates
/// words whose images differ.
pub struct QuotientModel<'q> {
    quotient: &'q QuotientCat,
    objects: Vec<ClassId>,
    images: Vec<QArrow>,
    inverses: Vec<Option<QArrow>>,
}

impl<'q> QuotientModel<'q> {
    /// Checks endpoints, two-sided inverses and every relation.
    pub fn new(
        p: &Presentation,
        quotient: &'q QuotientCat,
        objects: Vec<ClassId>,
        images: Vec<QArrow>,
        inverses: Vec<Option<QArrow>>,
    ) -> Result<Self> {
        let model = QuotientModel { quotient, objects, images, inverses };
        for (g, gen) in p.generators.iter().enumerate() {
            let image = &model.images[g];
            if (image.src, image.tgt) != (model.objects[gen.src], model.objects[gen.tgt]) {
                return Err(Error::Presentation(format!("image of `{}` has the wrong endpoints", gen.name)));
            }
            if gen.invertible {
                let Some(inv) = &model.inverses[g] else {
                    return Err(Error::Presentation(format!("no inverse for the image of `{}`", gen.name)));
                };
                let there = quotient.q_compose(image, inv)?;
                let back = quotient.q_compose(inv, image)?;
                if !there.is_identity() || !back.is_identity() {
                    return Err(Error::Presentation(format!("wrong inverse for the image of `{}`", gen.name)));
                }
            }
        }
        for r in &p.relations {
            if model.eval(&r.lhs)? != model.eval(&r.rhs)? {
                return Err(Error::Presentation(format!("model breaks `{}`", p.render_relation(r))));
            }
        }
        Ok(model)
    }

    /// Sends every generator named after an arrow of the base to its
    /// quotient image, and `[X]` to the class of `X`.
    pub fn by_base_names(p: &Presentation, quotient: &'q QuotientCat) -> Result<Self> {
        let base = quotient.base();
        let objects = p
            .objects
            .iter()
            .map(|name| {
                quotient
                    .classes()
                    .ids()
                    .find(|&c| quotient.class_name(c) == *name)
                    .ok_or_else(|| Error::Presentation(format!("no class {name} in the quotient")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut images = Vec::new();
        let mut inverses = Vec::new();
        for g in &p.generators {
            let a = base.arrow_id(&g.name)?;
            images.push(quotient.q_map(a));
            inverses.push(base.inverse(a).map(|i| quotient.q_map(i)));
        }
        QuotientModel::new(p, quotient, objects, images, inverses)
    }

    pub fn eval(&self, w: &PWord) -> Result<QArrow> {
        let mut acc = self.quotient.identity(self.objects[w.src]);
        for l in &w.letters {
            let image = if l.inverse {
                self.inverses[l.gen]
                    .as_ref()
                    .ok_or_else(|| Error::Presentation("letter has no inverse image".into()))?
            } else {
                &self.images[l.gen]
            };
            acc = self.quotient.q_compose(&acc, image)?;
        }
        Ok(acc)
    }
}

impl Separator for QuotientModel<'_> {
    fn separate(&self, _p: &Presentation, a: &PWord, b: &PWord) -> Option<String> {
        match (self.eval(a), self.eval(b)) {
            (Ok(x), Ok(y)) if x != y => Some(format!(
                "images {} and {} in the quotient differ",
                self.quotient.display_word(&x),
                self.quotient.display_word(&y)
            )),
            _ => None,
        }
    }
}

/// For a groupoid `a`: the bounded normal forms of
/// [`z_cokernel_of_identity`] correspond one-to-one with the arrows of the
/// skeletal reflection up to `max_len`.
pub fn groupoid_consistency(
    a: &Arc<FinCat>,
    max_len: usize,
    bound: SearchBound,
    budget: Budget,
) -> Result<BoundedReport> {
    if !a.is_groupoid() {
        return Err(Error::Precondition("category is not a groupoid".into()));
    }
    let (p, _) = z_cokernel_of_identity(a);
    let seq = torsionfree_reflection(a);
    let q = &seq.quotient;
    let model = QuotientModel::by_base_names(&p, q)?;
    let mut report = BoundedReport::default();

    let mut by_image: BTreeMap<QArrow, Vec<PWord>> = BTreeMap::new();
    for form in bounded_normal_forms(&p, max_len, budget)? {
        by_image.entry(model.eval(&form)?).or_default().push(form);
    }
    let arrows: BTreeSet<QArrow> = q.enumerate_all(max_len, budget)?.into_iter().collect();
    for image in by_image.keys() {
        report.checks += 1;
        if !arrows.contains(image) {
            report.fail(format!("normal form lands on {} beyond the enumeration", q.render_arrow(image)));
        }
    }
    let object_of = |c: ClassId| p.object_index(&q.class_name(c)).expect("model matched every class");
    for arrow in &arrows {
        let letters = arrow
            .word
            .as_slice()
            .iter()
            .map(|x| p.generator_index(q.base().arrow_name(*x)).map(Letter::pos))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Inconsistency("quotient letter without a generator".into()))?;
        let word = p.word(letters, object_of(arrow.src))?;
        let Some(forms) = by_image.get(arrow) else {
            report.fail(format!("no normal form for {}", q.render_arrow(arrow)));
            continue;
        };
        let separators: [&dyn Separator; 1] = [&model];
        for form in forms {
            let verdict = word_equal_with(&p, form, &word, bound, &separators)?;
            report.record(&verdict, || format!("`{}` against {}", p.render(form), q.render_arrow(arrow)));
        }
    }
    Ok(report)
}
