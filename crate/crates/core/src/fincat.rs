//! Finite categories, functors between them, and the wide subgroupoids
//! `Iso(C)` and `Aut(C)`.
//!
//! A category is stored as dense arrays: objects and arrows are addressed by
//! [`ObjId`] and [`ArrowId`], identities occupy the first `n` arrow slots (one
//! per object, named `id:<object>`), and composition is a total table over
//! composable pairs. Composition is written in diagrammatic order: `f ▷ g`
//! means "first `f`, then `g`".

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Budget;

pub const IDENTITY_PREFIX: &str = "id:";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
    pub is_identity: bool,
}

/// On-disk form of a category. Identities are implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub compose: Vec<ComposeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// `first ▷ then = equals`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeSpec {
    pub first: String,
    pub then: String,
    pub equals: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadObjectName { name: String, reason: &'static str },
    DuplicateObject(String),
    BadArrowName { name: String, reason: &'static str },
    DuplicateArrow(String),
    DanglingEndpoint { arrow: String, object: String },
    UnknownArrowInEntry { first: String, then: String, name: String },
    NotComposableEntry { first: String, then: String },
    DuplicateComposite { first: String, then: String },
    MissingComposite { first: String, then: String },
    EndpointIncorrect { first: String, then: String, equals: String },
    IdentityLaw { first: String, then: String, equals: String, expected: String },
    Associativity { first: String, second: String, third: String, left: String, right: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadObjectName { name, reason } => write!(f, "object name `{name}` {reason}"),
            Violation::DuplicateObject(name) => write!(f, "duplicate object `{name}`"),
            Violation::BadArrowName { name, reason } => write!(f, "arrow name `{name}` {reason}"),
            Violation::DuplicateArrow(name) => write!(f, "duplicate arrow `{name}`"),
            Violation::DanglingEndpoint { arrow, object } => {
                write!(f, "arrow `{arrow}` refers to unknown object `{object}`")
            }
            Violation::UnknownArrowInEntry { first, then, name } => {
                write!(f, "composition entry ({first}, {then}) refers to unknown arrow `{name}`")
            }
            Violation::NotComposableEntry { first, then } => {
                write!(f, "composition entry ({first}, {then}) is not a composable pair")
            }
            Violation::DuplicateComposite { first, then } => {
                write!(f, "composite for pair ({first}, {then}) given more than once")
            }
            Violation::MissingComposite { first, then } => {
                write!(f, "missing composite for composable pair ({first}, {then})")
            }
            Violation::EndpointIncorrect { first, then, equals } => write!(
                f,
                "endpoint-incorrect composite: {first} ▷ {then} = {equals} does not run from dom({first}) to cod({then})"
            ),
            Violation::IdentityLaw { first, then, equals, expected } => write!(
                f,
                "identity law fails: {first} ▷ {then} = {equals}, expected {expected}"
            ),
            Violation::Associativity { first, second, third, left, right } => write!(
                f,
                "associativity fails on ({first}, {second}, {third}): ({first} ▷ {second}) ▷ {third} = {left} but {first} ▷ ({second} ▷ {third}) = {right}"
            ),
        }
    }
}

/// Every law a candidate category violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_groupoid: bool,
    pub is_skeletal: bool,
    pub is_trivial: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupoidMode {
    Iso,
    Aut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    table: Vec<Option<ArrowId>>,
    homs: Vec<Vec<ArrowId>>,
    obj_index: HashMap<String, ObjId>,
    arrow_index: HashMap<String, ArrowId>,
}

fn name_problem(name: &str) -> Option<&'static str> {
    if name.is_empty() {
        Some("is empty")
    } else if name.starts_with(IDENTITY_PREFIX) {
        Some("uses the reserved prefix `id:`")
    } else if name.contains(',') {
        Some("contains a comma")
    } else if name.chars().any(char::is_whitespace) {
        Some("contains whitespace")
    } else if name.contains('^') || name == "()" {
        Some("clashes with word syntax")
    } else {
        None
    }
}

/// Checks every category law on `raw` and returns the validated category, or
/// the full list of violations.
pub fn validate_category(raw: &CategoryFile) -> Result<FinCat, ValidationReport> {
    let mut violations = Vec::new();

    let mut obj_index = HashMap::new();
    let mut objects = Vec::new();
    for name in &raw.objects {
        if let Some(reason) = name_problem(name) {
            violations.push(Violation::BadObjectName { name: name.clone(), reason });
        }
        if obj_index.insert(name.clone(), ObjId(objects.len())).is_some() {
            violations.push(Violation::DuplicateObject(name.clone()));
        }
        objects.push(name.clone());
    }

    let mut arrows: Vec<Arrow> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| Arrow { name: format!("{IDENTITY_PREFIX}{o}"), dom: ObjId(i), cod: ObjId(i), is_identity: true })
        .collect();
    let mut arrow_index: HashMap<String, ArrowId> =
        arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), ArrowId(i))).collect();
    for spec in &raw.arrows {
        if let Some(reason) = name_problem(&spec.name) {
            violations.push(Violation::BadArrowName { name: spec.name.clone(), reason });
        }
        let mut endpoint = |o: &str| match obj_index.get(o) {
            Some(id) => Some(*id),
            None => {
                violations.push(Violation::DanglingEndpoint { arrow: spec.name.clone(), object: o.to_string() });
                None
            }
        };
        let (dom, cod) = (endpoint(&spec.dom), endpoint(&spec.cod));
        let (Some(dom), Some(cod)) = (dom, cod) else { continue };
        if arrow_index.contains_key(&spec.name) {
            violations.push(Violation::DuplicateArrow(spec.name.clone()));
            continue;
        }
        arrow_index.insert(spec.name.clone(), ArrowId(arrows.len()));
        arrows.push(Arrow { name: spec.name.clone(), dom, cod, is_identity: false });
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    let n = arrows.len();
    let mut table: Vec<Option<ArrowId>> = vec![None; n * n];
    for f in 0..n {
        for g in 0..n {
            if arrows[f].cod != arrows[g].dom {
                continue;
            }
            if arrows[f].is_identity {
                table[f * n + g] = Some(ArrowId(g));
            } else if arrows[g].is_identity {
                table[f * n + g] = Some(ArrowId(f));
            }
        }
    }

    let mut given = vec![false; n * n];
    for entry in &raw.compose {
        let lookup = |name: &str| arrow_index.get(name).copied();
        let ids = (lookup(&entry.first), lookup(&entry.then), lookup(&entry.equals));
        let (Some(f), Some(g), Some(h)) = ids else {
            for name in [&entry.first, &entry.then, &entry.equals] {
                if lookup(name).is_none() {
                    violations.push(Violation::UnknownArrowInEntry {
                        first: entry.first.clone(),
                        then: entry.then.clone(),
                        name: name.clone(),
                    });
                }
            }
            continue;
        };
        let (fa, ga, ha) = (&arrows[f.0], &arrows[g.0], &arrows[h.0]);
        if fa.cod != ga.dom {
            violations.push(Violation::NotComposableEntry { first: entry.first.clone(), then: entry.then.clone() });
            continue;
        }
        if fa.is_identity || ga.is_identity {
            let expected = table[f.0 * n + g.0].expect("identity composites are derived");
            if expected != h {
                violations.push(Violation::IdentityLaw {
                    first: entry.first.clone(),
                    then: entry.then.clone(),
                    equals: entry.equals.clone(),
                    expected: arrows[expected.0].name.clone(),
                });
            }
            continue;
        }
        if given[f.0 * n + g.0] {
            violations.push(Violation::DuplicateComposite { first: entry.first.clone(), then: entry.then.clone() });
            continue;
        }
        given[f.0 * n + g.0] = true;
        if ha.dom != fa.dom || ha.cod != ga.cod {
            violations.push(Violation::EndpointIncorrect {
                first: entry.first.clone(),
                then: entry.then.clone(),
                equals: entry.equals.clone(),
            });
            continue;
        }
        table[f.0 * n + g.0] = Some(h);
    }

    for f in 0..n {
        for g in 0..n {
            if arrows[f].cod == arrows[g].dom && !arrows[f].is_identity && !arrows[g].is_identity && !given[f * n + g] {
                violations
                    .push(Violation::MissingComposite { first: arrows[f].name.clone(), then: arrows[g].name.clone() });
            }
        }
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    for f in 0..n {
        for g in 0..n {
            let Some(fg) = table[f * n + g] else { continue };
            for h in 0..n {
                let Some(gh) = table[g * n + h] else { continue };
                let left = table[fg.0 * n + h].expect("endpoint-correct table is total");
                let right = table[f * n + gh.0].expect("endpoint-correct table is total");
                if left != right {
                    violations.push(Violation::Associativity {
                        first: arrows[f].name.clone(),
                        second: arrows[g].name.clone(),
                        third: arrows[h].name.clone(),
                        left: arrows[left.0].name.clone(),
                        right: arrows[right.0].name.clone(),
                    });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    let k = objects.len();
    let mut homs = vec![Vec::new(); k * k];
    for (i, a) in arrows.iter().enumerate() {
        homs[a.dom.0 * k + a.cod.0].push(ArrowId(i));
    }
    Ok(FinCat { objects, arrows, table, homs, obj_index, arrow_index })
}

impl FinCat {
    /// Parses and validates the JSON category format.
    pub fn from_json(text: &str) -> Result<FinCat> {
        let raw: CategoryFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("category file: {e}")))?;
        Ok(validate_category(&raw)?)
    }

    /// Convenience constructor: `arrows` are `(name, dom, cod)`, `compose`
    /// entries are `(first, then, equals)`.
    pub fn from_parts(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        compose: &[(&str, &str, &str)],
    ) -> Result<FinCat, ValidationReport> {
        validate_category(&CategoryFile {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(n, d, c)| ArrowSpec { name: n.to_string(), dom: d.to_string(), cod: c.to_string() })
                .collect(),
            compose: compose
                .iter()
                .map(|(f, g, h)| ComposeSpec { first: f.to_string(), then: g.to_string(), equals: h.to_string() })
                .collect(),
        })
    }

    pub fn discrete(objects: &[&str]) -> FinCat {
        FinCat::from_parts(objects, &[], &[]).expect("discrete categories are valid")
    }

    /// Canonical file form: objects in order, non-identity arrows in order,
    /// and one entry per composable non-identity pair in `(first, then)` order.
    pub fn to_file(&self) -> CategoryFile {
        let arrows = self
            .non_identity_arrows()
            .map(|a| {
                let arrow = self.arrow(a);
                ArrowSpec {
                    name: arrow.name.clone(),
                    dom: self.object_name(arrow.dom).to_string(),
                    cod: self.object_name(arrow.cod).to_string(),
                }
            })
            .collect();
        let mut compose = Vec::new();
        for f in self.non_identity_arrows() {
            for g in self.non_identity_arrows() {
                if let Some(h) = self.composite(f, g) {
                    compose.push(ComposeSpec {
                        first: self.arrow_name(f).to_string(),
                        then: self.arrow_name(g).to_string(),
                        equals: self.arrow_name(h).to_string(),
                    });
                }
            }
        }
        CategoryFile { objects: self.objects.clone(), arrows, compose }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("category files serialize")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn non_identity_arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (self.objects.len()..self.arrows.len()).map(ArrowId)
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }

    pub fn object_id(&self, name: &str) -> Result<ObjId> {
        self.obj_index.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.0].name
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index.get(name).copied().ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn dom(&self, a: ArrowId) -> ObjId {
        self.arrows[a.0].dom
    }

    pub fn cod(&self, a: ArrowId) -> ObjId {
        self.arrows[a.0].cod
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        self.arrows[a.0].is_identity
    }

    pub fn identity(&self, o: ObjId) -> ArrowId {
        ArrowId(o.0)
    }

    pub fn hom(&self, dom: ObjId, cod: ObjId) -> &[ArrowId] {
        &self.homs[dom.0 * self.objects.len() + cod.0]
    }

    /// `f ▷ g` when `cod f = dom g`.
    pub fn composite(&self, f: ArrowId, g: ArrowId) -> Option<ArrowId> {
        self.table[f.0 * self.arrows.len() + g.0]
    }

    pub fn compose(&self, f: ArrowId, g: ArrowId) -> Result<ArrowId> {
        self.composite(f, g).ok_or_else(|| Error::NotComposable {
            first: self.arrow_name(f).to_string(),
            then: self.arrow_name(g).to_string(),
            cod: self.object_name(self.cod(f)).to_string(),
            dom: self.object_name(self.dom(g)).to_string(),
        })
    }

    /// [`compose`](Self::compose) by arrow names.
    pub fn compose_arrows(&self, f: &str, g: &str) -> Result<&str> {
        let h = self.compose(self.arrow_id(f)?, self.arrow_id(g)?)?;
        Ok(self.arrow_name(h))
    }

    /// Two-sided inverse, found by scanning the opposite hom-set.
    pub fn inverse(&self, f: ArrowId) -> Option<ArrowId> {
        let (d, c) = (self.dom(f), self.cod(f));
        self.hom(c, d)
            .iter()
            .copied()
            .find(|&g| self.composite(f, g) == Some(self.identity(d)) && self.composite(g, f) == Some(self.identity(c)))
    }

    pub fn is_iso(&self, f: ArrowId) -> bool {
        self.inverse(f).is_some()
    }

    pub fn is_automorphism(&self, f: ArrowId) -> bool {
        self.dom(f) == self.cod(f) && self.is_iso(f)
    }

    pub fn classify(&self) -> Classification {
        let is_groupoid = self.arrow_ids().all(|a| self.is_iso(a));
        let is_skeletal = self.arrow_ids().all(|a| self.dom(a) == self.cod(a) || !self.is_iso(a));
        Classification { is_groupoid, is_skeletal, is_trivial: is_groupoid && is_skeletal }
    }

    pub fn is_groupoid(&self) -> bool {
        self.classify().is_groupoid
    }

    pub fn is_skeletal(&self) -> bool {
        self.classify().is_skeletal
    }
}

/// A functor between finite categories, stored as object and arrow maps.
/// Equality is extensional.
#[derive(Clone, Debug)]
pub struct Functor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    object_map: Vec<ObjId>,
    arrow_map: Vec<ArrowId>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.object_map == other.object_map
            && self.arrow_map == other.arrow_map
            && (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
    }
}

impl Eq for Functor {}

/// Serialized functor: category paths plus the non-identity parts of the maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub arrows: BTreeMap<String, String>,
}

impl Functor {
    /// Builds a functor after checking endpoints, identities and composition
    /// on every arrow and composable pair.
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        object_map: Vec<ObjId>,
        arrow_map: Vec<ArrowId>,
    ) -> Result<Functor> {
        if object_map.len() != source.num_objects() || arrow_map.len() != source.num_arrows() {
            return Err(Error::InvalidFunctor("maps do not cover the source".into()));
        }
        if let Some(o) = object_map.iter().find(|o| o.0 >= target.num_objects()) {
            return Err(Error::InvalidFunctor(format!("object index {} out of range", o.0)));
        }
        if let Some(a) = arrow_map.iter().find(|a| a.0 >= target.num_arrows()) {
            return Err(Error::InvalidFunctor(format!("arrow index {} out of range", a.0)));
        }
        let f = Functor { source, target, object_map, arrow_map };
        if let Some(problem) = f.law_violation() {
            return Err(Error::InvalidFunctor(problem));
        }
        Ok(f)
    }

    fn law_violation(&self) -> Option<String> {
        let (s, t) = (&*self.source, &*self.target);
        for a in s.arrow_ids() {
            let image = self.arrow_map[a.0];
            let name = s.arrow_name(a);
            if t.dom(image) != self.object_map[s.dom(a).0] || t.cod(image) != self.object_map[s.cod(a).0] {
                return Some(format!("image of `{name}` has the wrong endpoints"));
            }
            if s.is_identity(a) && !t.is_identity(image) {
                return Some(format!("identity `{name}` is not sent to an identity"));
            }
        }
        for f in s.arrow_ids() {
            for g in s.arrow_ids() {
                if let Some(h) = s.composite(f, g) {
                    if t.composite(self.arrow_map[f.0], self.arrow_map[g.0]) != Some(self.arrow_map[h.0]) {
                        return Some(format!(
                            "composite `{}` ▷ `{}` is not preserved",
                            s.arrow_name(f),
                            s.arrow_name(g)
                        ));
                    }
                }
            }
        }
        None
    }

    /// Builds a functor from name maps; identities are mapped implicitly.
    pub fn from_names(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: &BTreeMap<String, String>,
        arrows: &BTreeMap<String, String>,
    ) -> Result<Functor> {
        let mut object_map = Vec::with_capacity(source.num_objects());
        for o in source.objects() {
            let name = source.object_name(o);
            let image =
                objects.get(name).ok_or_else(|| Error::InvalidFunctor(format!("object `{name}` is not mapped")))?;
            object_map.push(target.object_id(image)?);
        }
        for key in objects.keys() {
            source.object_id(key)?;
        }
        for key in arrows.keys() {
            source.arrow_id(key)?;
        }
        let mut arrow_map = Vec::with_capacity(source.num_arrows());
        for a in source.arrow_ids() {
            if source.is_identity(a) {
                arrow_map.push(target.identity(object_map[source.dom(a).0]));
            } else {
                let name = source.arrow_name(a);
                let image =
                    arrows.get(name).ok_or_else(|| Error::InvalidFunctor(format!("arrow `{name}` is not mapped")))?;
                arrow_map.push(target.arrow_id(image)?);
            }
        }
        Functor::new(source, target, object_map, arrow_map)
    }

    pub fn identity(c: &Arc<FinCat>) -> Functor {
        Functor {
            source: c.clone(),
            target: c.clone(),
            object_map: c.objects().collect(),
            arrow_map: c.arrow_ids().collect(),
        }
    }

    /// The unique functor to the terminal category on object `name`.
    pub fn to_terminal(c: &Arc<FinCat>, name: &str) -> Functor {
        let one = Arc::new(FinCat::discrete(&[name]));
        Functor {
            source: c.clone(),
            target: one,
            object_map: vec![ObjId(0); c.num_objects()],
            arrow_map: vec![ArrowId(0); c.num_arrows()],
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.object_map
    }

    pub fn arrow_map(&self) -> &[ArrowId] {
        &self.arrow_map
    }

    pub fn on_object(&self, o: ObjId) -> ObjId {
        self.object_map[o.0]
    }

    pub fn on_arrow(&self, a: ArrowId) -> ArrowId {
        self.arrow_map[a.0]
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &Functor) -> Result<Functor> {
        if *self.target != *then.source {
            return Err(Error::InvalidFunctor("composite of functors with mismatched categories".into()));
        }
        Ok(Functor {
            source: self.source.clone(),
            target: then.target.clone(),
            object_map: self.object_map.iter().map(|o| then.on_object(*o)).collect(),
            arrow_map: self.arrow_map.iter().map(|a| then.on_arrow(*a)).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut objs = self.object_map.clone();
        objs.sort();
        objs.dedup();
        let mut arrows = self.arrow_map.clone();
        arrows.sort();
        arrows.dedup();
        objs.len() == self.object_map.len() && arrows.len() == self.arrow_map.len()
    }

    pub fn to_file(&self, source_path: &str, target_path: &str) -> FunctorFile {
        let (s, t) = (&*self.source, &*self.target);
        FunctorFile {
            source: source_path.to_string(),
            target: target_path.to_string(),
            objects: s
                .objects()
                .map(|o| (s.object_name(o).to_string(), t.object_name(self.on_object(o)).to_string()))
                .collect(),
            arrows: s
                .non_identity_arrows()
                .map(|a| (s.arrow_name(a).to_string(), t.arrow_name(self.on_arrow(a)).to_string()))
                .collect(),
        }
    }
}

/// The wide subcategory of `c` on the arrows accepted by `keep` (identities
/// are always kept), together with its inclusion.
pub fn wide_subcategory(c: &Arc<FinCat>, keep: impl Fn(ArrowId) -> bool) -> Result<(Arc<FinCat>, Functor)> {
    let kept: Vec<ArrowId> = c.non_identity_arrows().filter(|a| keep(*a)).collect();
    let mut raw = c.to_file();
    raw.arrows.retain(|spec| kept.iter().any(|a| c.arrow_name(*a) == spec.name));
    raw.compose.clear();
    for &f in &kept {
        for &g in &kept {
            let Some(h) = c.composite(f, g) else { continue };
            if !c.is_identity(h) && !kept.contains(&h) {
                return Err(Error::NotClosed {
                    first: c.arrow_name(f).to_string(),
                    then: c.arrow_name(g).to_string(),
                    result: c.arrow_name(h).to_string(),
                });
            }
            raw.compose.push(ComposeSpec {
                first: c.arrow_name(f).to_string(),
                then: c.arrow_name(g).to_string(),
                equals: c.arrow_name(h).to_string(),
            });
        }
    }
    let sub = Arc::new(validate_category(&raw)?);
    let arrow_map = sub.arrow_ids().map(|a| c.arrow_id(sub.arrow_name(a))).collect::<Result<Vec<_>>>()?;
    let inclusion = Functor::new(sub.clone(), c.clone(), c.objects().collect(), arrow_map)?;
    Ok((sub, inclusion))
}

/// `Iso(C)` or `Aut(C)` with its inclusion functor.
pub fn subgroupoid(c: &Arc<FinCat>, mode: SubgroupoidMode) -> (Arc<FinCat>, Functor) {
    let keep = |a: ArrowId| match mode {
        SubgroupoidMode::Iso => c.is_iso(a),
        SubgroupoidMode::Aut => c.is_automorphism(a),
    };
    wide_subcategory(c, keep).expect("isomorphisms and automorphisms are closed under composition")
}

/// All functors `a → b`, in lexicographic order of their (object, arrow) maps.
pub fn enumerate_functors(a: &Arc<FinCat>, b: &Arc<FinCat>, budget: Budget) -> Result<Vec<Functor>> {
    let non_id: Vec<ArrowId> = a.non_identity_arrows().collect();
    // position of each arrow in the assignment order; identities count as pre-assigned
    let position = |x: ArrowId| -> Option<usize> {
        if a.is_identity(x) {
            None
        } else {
            Some(x.0 - a.num_objects())
        }
    };
    // composition constraints keyed by the last-assigned arrow they mention
    let mut constraints: Vec<Vec<(ArrowId, ArrowId, ArrowId)>> = vec![Vec::new(); non_id.len()];
    for f in a.arrow_ids() {
        for g in a.arrow_ids() {
            if let Some(h) = a.composite(f, g) {
                if let Some(last) = [f, g, h].iter().filter_map(|x| position(*x)).max() {
                    constraints[last].push((f, g, h));
                }
            }
        }
    }

    let mut search = FunctorSearch {
        a,
        b,
        non_id: &non_id,
        constraints: &constraints,
        budget,
        visited: 0,
        object_map: vec![ObjId(0); a.num_objects()],
        arrow_map: vec![ArrowId(0); a.num_arrows()],
        out: Vec::new(),
    };
    if a.num_objects() > 0 && b.num_objects() == 0 {
        return Ok(Vec::new());
    }
    search.assign_object(0)?;
    Ok(search.out)
}

struct FunctorSearch<'a> {
    a: &'a Arc<FinCat>,
    b: &'a Arc<FinCat>,
    non_id: &'a [ArrowId],
    constraints: &'a [Vec<(ArrowId, ArrowId, ArrowId)>],
    budget: Budget,
    visited: usize,
    object_map: Vec<ObjId>,
    arrow_map: Vec<ArrowId>,
    out: Vec<Functor>,
}

impl FunctorSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget.0 {
            return Err(Error::BudgetExceeded { budget: self.budget.0, what: "enumerating functors".into() });
        }
        Ok(())
    }

    fn assign_object(&mut self, i: usize) -> Result<()> {
        if i == self.a.num_objects() {
            for o in self.a.objects() {
                self.arrow_map[o.0] = self.b.identity(self.object_map[o.0]);
            }
            return self.assign_arrow(0);
        }
        for o in self.b.objects() {
            self.tick()?;
            self.object_map[i] = o;
            self.assign_object(i + 1)?;
        }
        Ok(())
    }

    fn assign_arrow(&mut self, k: usize) -> Result<()> {
        if k == self.non_id.len() {
            self.out.push(Functor {
                source: self.a.clone(),
                target: self.b.clone(),
                object_map: self.object_map.clone(),
                arrow_map: self.arrow_map.clone(),
            });
            return Ok(());
        }
        let x = self.non_id[k];
        let dom = self.object_map[self.a.dom(x).0];
        let cod = self.object_map[self.a.cod(x).0];
        for &candidate in self.b.hom(dom, cod) {
            self.tick()?;
            self.arrow_map[x.0] = candidate;
            let consistent = self.constraints[k].iter().all(|&(f, g, h)| {
                self.b.composite(self.arrow_map[f.0], self.arrow_map[g.0]) == Some(self.arrow_map[h.0])
            });
            if consistent {
                self.assign_arrow(k + 1)?;
            }
        }
        Ok(())
    }
}
