//! Group models, elements, generating sets and words.
//!
//! Every downstream module talks to a group only through [`GroupModel`]:
//! multiplication, inversion, ranking of finite elements and the generating
//! set. Products follow the left-to-right convention documented in
//! [`crate::perm`]; the Cayley edge for a generator `s` is `g -> g·s`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{factorial, Perm, MAX_DEGREE};

/// Largest degree for which generation is checked by exhaustive closure.
pub const MAX_GENERATION_CHECK_DEGREE: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Perm(Perm),
    /// A point of the free abelian group of rank two.
    Pair(i64, i64),
    /// A residue modulo the order of a cyclic model.
    Residue(u64),
}

impl Element {
    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            Element::Perm(p) => Some(p),
            _ => None,
        }
    }
}

impl From<Perm> for Element {
    fn from(p: Perm) -> Self {
        Element::Perm(p)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => write!(f, "{p}"),
            Element::Pair(a, b) => write!(f, "({a},{b})"),
            Element::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A word in the free monoid over the generating set: indices into
/// [`GeneratingSet::generators`]. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    generators: Vec<Element>,
    inverse_closed: bool,
    name: String,
}

impl GeneratingSet {
    /// Removes duplicates (keeping first occurrences) and rejects the identity.
    fn new(model: &ModelKind, generators: Vec<Element>, name: String) -> Result<Self> {
        let identity = model.identity();
        let mut seen = HashSet::new();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g == identity {
                return Err(Error::Parse(format!(
                    "the identity cannot be a generator of {name}"
                )));
            }
            if seen.insert(g.clone()) {
                gens.push(g);
            }
        }
        let inverse_closed = gens.iter().all(|g| seen.contains(&model.inverse(g)));
        Ok(GeneratingSet {
            generators: gens,
            inverse_closed,
            name,
        })
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn inverse_closed(&self) -> bool {
        self.inverse_closed
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Generators joined by `;` in element syntax; the input of the cache hash.
    pub fn canonical_text(&self) -> String {
        self.generators
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn position(&self, g: &Element) -> Option<usize> {
        self.generators.iter().position(|s| s == g)
    }

    pub fn same_set(&self, other: &GeneratingSet) -> bool {
        let a: HashSet<&Element> = self.generators.iter().collect();
        let b: HashSet<&Element> = other.generators.iter().collect();
        a == b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Transpositions `(1,2),(2,3),..,(n-1,n),(n,1)`.
    SymCircular(usize),
    /// Transpositions `(1,2),..,(n-1,n)`.
    SymAdjacent(usize),
    /// A user generating set, checked to generate all of `S_n`.
    SymCustom(usize),
    /// The Cayley graph of the subgroup generated by a user set inside
    /// `S_n`; elements outside the subgroup are unreachable.
    SymSubgroup(usize),
    Cyclic {
        n: u64,
        inverse_closed: bool,
    },
    /// `Z^2` with generators `(1,0),(0,1),(-1,0),(0,-1)`.
    FreeAbelianRank2,
}

impl ModelKind {
    pub fn degree(&self) -> Option<usize> {
        match *self {
            ModelKind::SymCircular(n)
            | ModelKind::SymAdjacent(n)
            | ModelKind::SymCustom(n)
            | ModelKind::SymSubgroup(n) => Some(n),
            _ => None,
        }
    }

    fn identity(&self) -> Element {
        match self {
            ModelKind::Cyclic { .. } => Element::Residue(0),
            ModelKind::FreeAbelianRank2 => Element::Pair(0, 0),
            _ => Element::Perm(Perm::identity(self.degree().unwrap())),
        }
    }

    fn inverse(&self, a: &Element) -> Element {
        match (self, a) {
            (_, Element::Perm(p)) => Element::Perm(p.inverse()),
            (ModelKind::Cyclic { n, .. }, Element::Residue(r)) => Element::Residue((n - r) % n),
            (_, Element::Pair(x, y)) => Element::Pair(-x, -y),
            (_, Element::Residue(r)) => Element::Residue(*r),
        }
    }
}

/// A group together with its ordered generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    kind: ModelKind,
    gens: GeneratingSet,
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "symmetric degree must lie in 1..={MAX_DEGREE}, got {n}"
        )));
    }
    Ok(())
}

fn transposition(n: usize, a: usize, b: usize) -> Element {
    Element::Perm(Perm::from_cycles(n, &[vec![a, b]]).expect("valid transposition"))
}

impl GroupModel {
    pub fn sym_circular(n: usize) -> Result<Self> {
        check_degree(n)?;
        if n < 2 {
            return Err(Error::Unsupported("sym-circular needs n >= 2".into()));
        }
        let kind = ModelKind::SymCircular(n);
        let mut gens: Vec<Element> = (1..n).map(|i| transposition(n, i, i + 1)).collect();
        gens.push(transposition(n, n, 1));
        let gens = GeneratingSet::new(&kind, gens, format!("sym-circular:{n}"))?;
        Ok(GroupModel { kind, gens })
    }

    pub fn sym_adjacent(n: usize) -> Result<Self> {
        check_degree(n)?;
        let kind = ModelKind::SymAdjacent(n);
        let gens = (1..n).map(|i| transposition(n, i, i + 1)).collect();
        let gens = GeneratingSet::new(&kind, gens, format!("sym-adjacent:{n}"))?;
        Ok(GroupModel { kind, gens })
    }

    /// A custom generating set of `S_n`; fails unless it generates the whole group.
    pub fn sym_custom(n: usize, gens: Vec<Perm>) -> Result<Self> {
        check_degree(n)?;
        let model = Self::sym_with(ModelKind::SymCustom(n), n, gens, "sym-custom")?;
        if !is_generating(&model, &model.gens)? {
            return Err(Error::NotGenerating(model.gens.name.clone()));
        }
        Ok(model)
    }

    /// The subgroup of `S_n` generated by `gens`, with no generation check.
    pub fn sym_subgroup(n: usize, gens: Vec<Perm>) -> Result<Self> {
        check_degree(n)?;
        Self::sym_with(ModelKind::SymSubgroup(n), n, gens, "sym-sub")
    }

    fn sym_with(kind: ModelKind, n: usize, gens: Vec<Perm>, tag: &str) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.degree() != n) {
            return Err(Error::ModelMismatch {
                model: format!("{tag}:{n}"),
                detail: format!("generator of degree {}", bad.degree()),
            });
        }
        let text = gens
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let elems = gens.into_iter().map(Element::Perm).collect();
        let gens = GeneratingSet::new(&kind, elems, format!("{tag}:{n}:{text}"))?;
        Ok(GroupModel { kind, gens })
    }

    /// `Cyclic(n)`; with `inverse_closed = false` only `x` generates (semigroup).
    pub fn cyclic(n: u64, inverse_closed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("cyclic order must be positive".into()));
        }
        let kind = ModelKind::Cyclic { n, inverse_closed };
        let mut gens = Vec::new();
        if n > 1 {
            gens.push(Element::Residue(1));
            if inverse_closed {
                gens.push(Element::Residue(n - 1));
            }
        }
        let name = if inverse_closed {
            format!("cyclic:{n}")
        } else {
            format!("cyclic:{n}:semigroup")
        };
        let gens = GeneratingSet::new(&kind, gens, name)?;
        Ok(GroupModel { kind, gens })
    }

    pub fn z2() -> Self {
        let kind = ModelKind::FreeAbelianRank2;
        let gens = vec![
            Element::Pair(1, 0),
            Element::Pair(0, 1),
            Element::Pair(-1, 0),
            Element::Pair(0, -1),
        ];
        let gens = GeneratingSet::new(&kind, gens, "z2".into()).expect("standard generators");
        GroupModel { kind, gens }
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn generators(&self) -> &GeneratingSet {
        &self.gens
    }

    /// The model spec string, e.g. `sym-circular:8` or `cyclic:5:semigroup`.
    pub fn descriptor(&self) -> &str {
        self.gens.name()
    }

    pub fn degree(&self) -> Option<usize> {
        self.kind.degree()
    }

    pub fn is_symmetric(&self) -> bool {
        self.degree().is_some()
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.kind, ModelKind::FreeAbelianRank2)
    }

    /// Size of the ambient index space: `n!` for permutation models, `n` for
    /// cyclic ones. For a subgroup model this exceeds the subgroup order.
    pub fn index_space(&self) -> Option<u64> {
        match self.kind {
            ModelKind::Cyclic { n, .. } => Some(n),
            ModelKind::FreeAbelianRank2 => None,
            _ => Some(factorial(self.degree().unwrap())),
        }
    }

    pub fn identity(&self) -> Element {
        self.kind.identity()
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }

    /// Verifies that `a` is a valid payload for this model.
    pub fn check(&self, a: &Element) -> Result<()> {
        let ok = match (&self.kind, a) {
            (ModelKind::Cyclic { n, .. }, Element::Residue(r)) => r < n,
            (ModelKind::FreeAbelianRank2, Element::Pair(..)) => true,
            (_, Element::Perm(p)) if Some(p.degree()) == self.degree() => {
                Perm::from_images(p.images().to_vec()).is_ok()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(a))
        }
    }

    fn mismatch(&self, a: &Element) -> Error {
        Error::ModelMismatch {
            model: self.descriptor().to_string(),
            detail: format!("{a:?}"),
        }
    }

    /// The product `a·b`; for permutations `a` acts first.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        match (&self.kind, a, b) {
            (ModelKind::Cyclic { n, .. }, Element::Residue(x), Element::Residue(y))
                if x < n && y < n =>
            {
                Ok(Element::Residue((x + y) % n))
            }
            (ModelKind::FreeAbelianRank2, Element::Pair(a1, a2), Element::Pair(b1, b2)) => {
                Ok(Element::Pair(a1 + b1, a2 + b2))
            }
            (_, Element::Perm(p), Element::Perm(q))
                if Some(p.degree()) == self.degree() && q.degree() == p.degree() =>
            {
                Ok(Element::Perm(p.then(q)))
            }
            (_, Element::Perm(_), Element::Perm(_)) | (_, _, _) => {
                if self.check(a).is_err() {
                    Err(self.mismatch(a))
                } else {
                    Err(self.mismatch(b))
                }
            }
        }
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.kind.inverse(a))
    }

    /// `p⁻¹·g·p`.
    pub fn conjugate(&self, g: &Element, p: &Element) -> Result<Element> {
        let pinv = self.inverse(p)?;
        self.multiply(&self.multiply(&pinv, g)?, p)
    }

    /// `start·ol(w)`.
    pub fn apply_word(&self, start: &Element, w: &Word) -> Result<Element> {
        let gens = self.gens.generators();
        let mut acc = start.clone();
        self.check(&acc)?;
        for &i in &w.0 {
            let s = gens.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                len: gens.len(),
            })?;
            acc = self.multiply(&acc, s)?;
        }
        Ok(acc)
    }

    /// Multiplies by generator `i` on the right (the Cayley edge `g -> g·s_i`).
    pub fn step(&self, g: &Element, i: usize) -> Element {
        self.multiply(g, &self.gens.generators()[i])
            .expect("element checked against model")
    }

    /// Sorted multiset of nontrivial cycle lengths (largest first).
    pub fn cycle_structure(&self, a: &Element) -> Result<Vec<usize>> {
        match a {
            Element::Perm(p) if self.is_symmetric() => {
                self.check(a)?;
                Ok(p.cycle_type())
            }
            _ => Err(Error::Unsupported(format!(
                "cycle structure in non-permutation model {}",
                self.descriptor()
            ))),
        }
    }

    /// Position of a finite element in the index space (Lehmer rank or residue).
    pub fn rank(&self, a: &Element) -> Result<u64> {
        match a {
            Element::Perm(p) if self.is_symmetric() => Ok(p.rank()),
            Element::Residue(r) if matches!(self.kind, ModelKind::Cyclic { .. }) => Ok(*r),
            _ => Err(Error::Unsupported(format!(
                "ranking elements of {}",
                self.descriptor()
            ))),
        }
    }

    pub fn unrank(&self, r: u64) -> Result<Element> {
        match self.kind {
            ModelKind::Cyclic { n, .. } if r < n => Ok(Element::Residue(r)),
            ModelKind::FreeAbelianRank2 | ModelKind::Cyclic { .. } => Err(Error::Unsupported(
                format!("unranking {r} in {}", self.descriptor()),
            )),
            _ => {
                let n = self.degree().unwrap();
                if r >= factorial(n) {
                    return Err(Error::Unsupported(format!(
                        "rank {r} out of range for S_{n}"
                    )));
                }
                Ok(Element::Perm(Perm::unrank(n, r)))
            }
        }
    }

    /// All elements of the ambient index space, in rank order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Element> + '_> {
        let size = self.index_space().ok_or_else(|| {
            Error::Unsupported(format!(
                "enumerating the infinite group {}",
                self.descriptor()
            ))
        })?;
        Ok((0..size).map(move |r| self.unrank(r).expect("rank in range")))
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        match self.kind {
            ModelKind::Cyclic { n, .. } => {
                let r: u64 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue {t:?}")))?;
                if r >= n {
                    return Err(Error::Parse(format!("residue {r} not in 0..{n}")));
                }
                Ok(Element::Residue(r))
            }
            ModelKind::FreeAbelianRank2 => {
                if t == "e" {
                    return Ok(Element::Pair(0, 0));
                }
                let inner = t
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("expected (a,b), got {t:?}")))?;
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(Error::Parse(format!("expected (a,b), got {t:?}")));
                }
                let num = |s: &str| {
                    s.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
                };
                Ok(Element::Pair(num(parts[0])?, num(parts[1])?))
            }
            _ => Ok(Element::Perm(Perm::parse(self.degree().unwrap(), t)?)),
        }
    }

    pub fn parse_generators(n: usize, text: &str) -> Result<Vec<Perm>> {
        text.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Perm::parse(n, s))
            .collect()
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    /// Grammar: `sym-circular:N`, `sym-adjacent:N`, `sym-custom:N:<gen;gen;..>`,
    /// `sym-sub:N:<gen;..>`, `cyclic:N[:semigroup]`, `z2`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let mut parts = spec.splitn(3, ':');
        let head = parts.next().unwrap_or_default();
        let degree = |p: Option<&str>| -> Result<u64> {
            p.ok_or_else(|| Error::Parse(format!("model {spec:?} needs a size")))?
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad size in model {spec:?}")))
        };
        match head {
            "z2" if parts.next().is_none() => Ok(GroupModel::z2()),
            "sym-circular" | "sym-adjacent" => {
                let n = degree(parts.next())? as usize;
                if parts.next().is_some() {
                    return Err(Error::Parse(format!("trailing fields in {spec:?}")));
                }
                if head == "sym-circular" {
                    GroupModel::sym_circular(n)
                } else {
                    GroupModel::sym_adjacent(n)
                }
            }
            "sym-custom" | "sym-sub" => {
                let n = degree(parts.next())? as usize;
                check_degree(n)?;
                let gens = GroupModel::parse_generators(
                    n,
                    parts
                        .next()
                        .ok_or_else(|| Error::Parse(format!("{spec:?} needs generators")))?,
                )?;
                if head == "sym-custom" {
                    GroupModel::sym_custom(n, gens)
                } else {
                    GroupModel::sym_subgroup(n, gens)
                }
            }
            "cyclic" => {
                let n = degree(parts.next())?;
                match parts.next() {
                    None => GroupModel::cyclic(n, true),
                    Some("semigroup") => GroupModel::cyclic(n, false),
                    Some(other) => Err(Error::Parse(format!("unknown cyclic flag {other:?}"))),
                }
            }
            _ => Err(Error::Parse(format!("unknown model {spec:?}"))),
        }
    }
}

/// True iff products of `gens` reach every element of the model's group.
/// Exhaustive closure from the identity, so limited to finite models of
/// modest size.
pub fn is_generating(model: &GroupModel, gens: &GeneratingSet) -> Result<bool> {
    match model.kind {
        ModelKind::FreeAbelianRank2 => Err(Error::Unsupported(
            "generation check in the infinite group Z^2".into(),
        )),
        ModelKind::Cyclic { n, .. } => {
            let mut seen = vec![false; n as usize];
            closure_count(model, gens, &mut seen).map(|c| c == n)
        }
        _ => {
            let n = model.degree().unwrap();
            if n > MAX_GENERATION_CHECK_DEGREE {
                return Err(Error::Unsupported(format!(
                    "generation check beyond degree {MAX_GENERATION_CHECK_DEGREE}"
                )));
            }
            let mut seen = vec![false; factorial(n) as usize];
            closure_count(model, gens, &mut seen).map(|c| c == factorial(n))
        }
    }
}

fn closure_count(model: &GroupModel, gens: &GeneratingSet, seen: &mut [bool]) -> Result<u64> {
    let id = model.identity();
    seen[model.rank(&id)? as usize] = true;
    let mut count = 1u64;
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for s in gens.generators() {
                let y = model.multiply(x, s)?;
                let r = model.rank(&y)? as usize;
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(count)
}
