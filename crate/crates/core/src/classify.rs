//! Partitions of group elements by interval invariants, whole-group
//! census histograms, and the normaliser of a generating set.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::cayley::{CayleyTable, DistanceOracle, DistanceTable};
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, GroupModel};
use crate::interval::{posets_isomorphic, GradedInterval, GradedPoset, IntervalSweep};
use crate::perm::factorial;

pub const NORMALISER_ENUMERATION_MAX_DEGREE: usize = 8;
pub const DEFAULT_ISO_MAX_INTERVAL: usize = 5000;

/// Lists above this size switch to the table-driven sweep when possible.
const SWEEP_THRESHOLD: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    SameLength,
    SameGeodesicCount,
    SameIntervalSize,
    SameIntervalIso,
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "length" => Ok(Relation::SameLength),
            "paths" => Ok(Relation::SameGeodesicCount),
            "size" => Ok(Relation::SameIntervalSize),
            "iso" => Ok(Relation::SameIntervalIso),
            _ => Err(Error::Parse(format!(
                "unknown relation {s:?} (expected length, paths, size or iso)"
            ))),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::SameLength => "length",
            Relation::SameGeodesicCount => "paths",
            Relation::SameIntervalSize => "size",
            Relation::SameIntervalIso => "iso",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub relation: Relation,
    pub classes: Vec<Vec<Element>>,
    /// One printable signature per class.
    pub signatures: Vec<String>,
    #[serde(skip)]
    pub signature_of: HashMap<Element, usize>,
    /// Elements whose interval exceeded the size cap (iso relation only).
    pub unclassified: Vec<Element>,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub max_interval_size: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_interval_size: DEFAULT_ISO_MAX_INTERVAL,
        }
    }
}

/// Length, geodesic count and size of `[1, h]` for each input, in order.
fn scalar_invariants(
    oracle: &DistanceOracle,
    elements: &[Element],
) -> Result<Vec<(u32, u128, u64)>> {
    let model = oracle.model();
    if elements.len() >= SWEEP_THRESHOLD && model.is_symmetric() {
        if let Some(table) = oracle.table() {
            let ct = CayleyTable::build(model, table.clone())?;
            let id = model.rank(&model.identity())? as u32;
            let mut sweep = IntervalSweep::new(&ct);
            return elements
                .iter()
                .map(|g| {
                    model.check(g)?;
                    let r = sweep
                        .from_identity(id, model.rank(g)? as u32)
                        .ok_or(Error::Unreachable)?;
                    Ok((r.length, r.geodesic_count, r.size))
                })
                .collect();
        }
    }
    elements
        .iter()
        .map(|g| {
            let i = GradedInterval::from_identity(oracle, g)?;
            Ok((i.length() as u32, i.geodesic_count(), i.len() as u64))
        })
        .collect()
}

/// Cheap isomorphism invariant used to bucket candidates: rank profile,
/// per-grade multiset of (up-degree, down-degree), and path count.
type CanonicalProfile = (Vec<usize>, Vec<Vec<(usize, usize)>>, u128);

fn canonical_profile(p: &GradedPoset) -> CanonicalProfile {
    let profile = p.rank_profile();
    let mut degrees = vec![Vec::new(); profile.len()];
    for x in 0..p.len() {
        degrees[p.rank(x) as usize].push((p.covers_of(x).len(), p.covered_by(x).len()));
    }
    for d in &mut degrees {
        d.sort_unstable();
    }
    (profile, degrees, p.maximal_chain_count())
}

/// Partitions `elements` by the chosen relation on the intervals `[1, g]`.
pub fn classify(
    oracle: &DistanceOracle,
    elements: &[Element],
    relation: Relation,
    opts: ClassifyOptions,
) -> Result<Classification> {
    let mut seen = HashSet::new();
    let elements: Vec<Element> = elements
        .iter()
        .filter(|g| seen.insert((*g).clone()))
        .cloned()
        .collect();

    if relation != Relation::SameIntervalIso {
        let inv = match relation {
            Relation::SameLength => elements
                .iter()
                .map(|g| Ok((oracle.length(g)?, 0, 0)))
                .collect::<Result<Vec<_>>>()?,
            _ => scalar_invariants(oracle, &elements)?,
        };
        let mut by_sig: BTreeMap<u128, Vec<Element>> = BTreeMap::new();
        for (g, (len, paths, size)) in elements.into_iter().zip(inv) {
            let sig = match relation {
                Relation::SameLength => len as u128,
                Relation::SameGeodesicCount => paths,
                _ => size as u128,
            };
            by_sig.entry(sig).or_default().push(g);
        }
        let mut out = Classification {
            relation,
            classes: Vec::new(),
            signatures: Vec::new(),
            signature_of: HashMap::new(),
            unclassified: Vec::new(),
        };
        for (sig, members) in by_sig {
            for g in &members {
                out.signature_of.insert(g.clone(), out.classes.len());
            }
            out.signatures.push(format!("{relation}={sig}"));
            out.classes.push(members);
        }
        return Ok(out);
    }

    let mut out = Classification {
        relation,
        classes: Vec::new(),
        signatures: Vec::new(),
        signature_of: HashMap::new(),
        unclassified: Vec::new(),
    };
    let mut reps: Vec<GradedPoset> = Vec::new();
    let mut buckets: HashMap<CanonicalProfile, Vec<usize>> = HashMap::new();
    for g in elements {
        let interval = GradedInterval::from_identity(oracle, &g)?;
        if interval.len() > opts.max_interval_size {
            out.unclassified.push(g);
            continue;
        }
        let poset = interval.poset();
        let key = canonical_profile(&poset);
        let bucket = buckets.entry(key.clone()).or_default();
        let found = bucket
            .iter()
            .copied()
            .find(|&c| posets_isomorphic(&reps[c], &poset));
        let class = match found {
            Some(c) => c,
            None => {
                let c = out.classes.len();
                bucket.push(c);
                out.classes.push(Vec::new());
                out.signatures.push(format!(
                    "iso#{c}:length={},size={},paths={}",
                    interval.length(),
                    interval.len(),
                    key.2
                ));
                reps.push(poset);
                c
            }
        };
        out.signature_of.insert(g.clone(), class);
        out.classes[class].push(g);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramRow {
    pub signature: u128,
    pub count: u64,
    /// Least element (by rank) carrying the signature.
    pub representative: Element,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub relation: Relation,
    pub total: u64,
    pub rows: Vec<HistogramRow>,
}

impl Census {
    /// `signature,count,representative` rows sorted by signature.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("signature,count,representative\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},\"{}\"\n",
                r.signature, r.count, r.representative
            ));
        }
        out
    }
}

/// Histogram of a scalar relation over every element of a permutation
/// model, streamed in rank order with per-class counts and the least
/// representative only.
pub fn census(model: &GroupModel, table: &CayleyTable, relation: Relation) -> Result<Census> {
    if relation == Relation::SameIntervalIso {
        return Err(Error::Unsupported(
            "census histograms cover length, paths and size".into(),
        ));
    }
    if table.distances().descriptor() != model.descriptor() {
        return Err(Error::Invariant(
            "census table belongs to another model".into(),
        ));
    }
    let order = table.order() as u32;
    let id = model.rank(&model.identity())? as u32;
    type Counts = BTreeMap<u128, (u64, u32)>;
    let merge = |mut a: Counts, b: Counts| {
        for (sig, (c, rep)) in b {
            let e = a.entry(sig).or_insert((0, u32::MAX));
            e.0 += c;
            e.1 = e.1.min(rep);
        }
        a
    };
    let counts: Counts = (0..order)
        .into_par_iter()
        .fold(
            || (Counts::new(), None::<IntervalSweep<'_>>),
            |(mut acc, mut sweep), h| {
                let sig = match relation {
                    Relation::SameLength => match table.dist(h) {
                        u8::MAX => None,
                        d => Some(d as u128),
                    },
                    _ => {
                        let s = sweep.get_or_insert_with(|| IntervalSweep::new(table));
                        s.from_identity(id, h).map(|r| match relation {
                            Relation::SameGeodesicCount => r.geodesic_count,
                            _ => r.size as u128,
                        })
                    }
                };
                if let Some(sig) = sig {
                    let e = acc.entry(sig).or_insert((0, h));
                    e.0 += 1;
                    e.1 = e.1.min(h);
                }
                (acc, sweep)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(Counts::new, merge);
    let rows: Vec<HistogramRow> = counts
        .into_iter()
        .map(|(signature, (count, rep))| {
            Ok(HistogramRow {
                signature,
                count,
                representative: model.unrank(rep as u64)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Census {
        relation,
        total: rows.iter().map(|r| r.count).sum(),
        rows,
    })
}

/// Builds the distance table and neighbour tables for a census.
pub fn census_table(model: &GroupModel, table: Option<DistanceTable>) -> Result<CayleyTable> {
    let table = match table {
        Some(t) => t,
        None => DistanceTable::build(model)?,
    };
    CayleyTable::build(model, table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormaliserMode {
    Enumerate,
    Predicate,
}

/// `N(S) = {σ : σ⁻¹Sσ = S}` inside the symmetric group of the model.
#[derive(Clone, Debug)]
pub struct Normaliser {
    model: GroupModel,
    gens: HashSet<Element>,
    members: Option<Vec<Element>>,
}

impl Normaliser {
    pub fn contains(&self, sigma: &Element) -> Result<bool> {
        self.model.check(sigma)?;
        for s in &self.gens {
            if !self.gens.contains(&self.model.conjugate(s, sigma)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Enumerated members in rank order, if computed.
    pub fn members(&self) -> Option<&[Element]> {
        self.members.as_deref()
    }

    pub fn order(&self) -> Option<u64> {
        self.members.as_ref().map(|m| m.len() as u64)
    }
}

pub fn normaliser(
    model: &GroupModel,
    gens: &GeneratingSet,
    mode: NormaliserMode,
) -> Result<Normaliser> {
    let n = model.degree().ok_or_else(|| {
        Error::Unsupported(format!(
            "normaliser in non-permutation model {}",
            model.descriptor()
        ))
    })?;
    for g in gens.generators() {
        model.check(g)?;
    }
    let mut norm = Normaliser {
        model: model.clone(),
        gens: gens.generators().iter().cloned().collect(),
        members: None,
    };
    if mode == NormaliserMode::Enumerate {
        if n > NORMALISER_ENUMERATION_MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "normaliser enumeration beyond degree {NORMALISER_ENUMERATION_MAX_DEGREE}"
            )));
        }
        let mut members = Vec::new();
        for r in 0..factorial(n) {
            let sigma = model.unrank(r)?;
            if norm.contains(&sigma)? {
                members.push(sigma);
            }
        }
        norm.members = Some(members);
    }
    Ok(norm)
}

/// Builds `[1, g]` and `[1, π⁻¹gπ]` and tests them for order isomorphism.
/// For `π` in the normaliser of the oracle's generating set this must hold;
/// `Ok(false)` therefore signals a defect in the interval machinery.
pub fn theorem1_check(
    oracle: &DistanceOracle,
    g: &Element,
    pi: &Element,
    gens: &GeneratingSet,
) -> Result<bool> {
    let model = oracle.model();
    if !gens.same_set(model.generators()) {
        return Err(Error::ModelMismatch {
            model: model.descriptor().to_string(),
            detail: "generating set differs from the oracle's".into(),
        });
    }
    if !normaliser(model, gens, NormaliserMode::Predicate)?.contains(pi)? {
        return Err(Error::NotInNormaliser);
    }
    let conj = model.conjugate(g, pi)?;
    let a = GradedInterval::from_identity(oracle, g)?;
    let b = GradedInterval::from_identity(oracle, &conj)?;
    Ok(crate::interval::order_isomorphic(&a, &b))
}
