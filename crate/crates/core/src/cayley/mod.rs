//! Distances, geodesics and balls in the Cayley graph `Γ(G,S)`.
//!
//! Every query reduces to a word length through left invariance:
//! `d(g,h) = ℓ(g⁻¹h)`. How `ℓ` is obtained depends on the [`Strategy`]:
//! closed forms for `Z²`, cyclic groups and adjacent transpositions, a
//! breadth-first table for permutation models up to degree 9, and a
//! bidirectional search for degrees 10 to 12.

pub mod bidir;
pub mod cache;
mod table;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

pub use table::{CayleyTable, DistanceTable};

use crate::error::{Error, Result};
use crate::group::{Element, GroupModel, ModelKind, Word};

pub const FULL_TABLE_MAX_DEGREE: usize = 9;
pub const BIDIRECTIONAL_MAX_DEGREE: usize = 12;
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Cyclic models above this order cannot use a one-byte table.
const CYCLIC_TABLE_MAX_ORDER: u64 = 255;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Analytic,
    FullTable,
    Bidirectional,
}

#[derive(Clone, Debug)]
pub struct DistanceOracle {
    model: GroupModel,
    strategy: Strategy,
    table: Option<Arc<DistanceTable>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeodesicMode {
    CountOnly,
    Enumerate { cap: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicSet {
    pub source: Element,
    pub target: Element,
    pub length: u32,
    /// Exact number of geodesic words, whether or not they were materialised.
    pub count: u128,
    pub words: Vec<Word>,
    pub truncated: bool,
}

fn has_closed_form(model: &GroupModel) -> bool {
    matches!(
        model.kind(),
        ModelKind::FreeAbelianRank2 | ModelKind::Cyclic { .. } | ModelKind::SymAdjacent(_)
    )
}

impl DistanceOracle {
    /// Picks the strategy for the model: analytic where a closed form exists,
    /// otherwise a full table or bidirectional search by degree.
    pub fn new(model: GroupModel) -> Result<Self> {
        let strategy = if has_closed_form(&model) {
            Strategy::Analytic
        } else {
            match model.degree() {
                Some(n) if n <= FULL_TABLE_MAX_DEGREE => Strategy::FullTable,
                Some(n) if n <= BIDIRECTIONAL_MAX_DEGREE => Strategy::Bidirectional,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "distances in {} (degree above {BIDIRECTIONAL_MAX_DEGREE})",
                        model.descriptor()
                    )))
                }
            }
        };
        Self::with_strategy(model, strategy)
    }

    pub fn with_strategy(model: GroupModel, strategy: Strategy) -> Result<Self> {
        let table = match strategy {
            Strategy::Analytic if !has_closed_form(&model) => {
                return Err(Error::Unsupported(format!(
                    "no closed-form distance for {}",
                    model.descriptor()
                )))
            }
            Strategy::FullTable => {
                let fits = match *model.kind() {
                    ModelKind::Cyclic { n, .. } => n <= CYCLIC_TABLE_MAX_ORDER,
                    ModelKind::FreeAbelianRank2 => false,
                    _ => model.degree().unwrap() <= FULL_TABLE_MAX_DEGREE,
                };
                if !fits {
                    return Err(Error::Unsupported(format!(
                        "full distance table for {}",
                        model.descriptor()
                    )));
                }
                Some(Arc::new(DistanceTable::build(&model)?))
            }
            _ => None,
        };
        Ok(DistanceOracle {
            model,
            strategy,
            table,
        })
    }

    /// Wraps a precomputed table (e.g. loaded from a cache file).
    pub fn from_table(model: GroupModel, table: DistanceTable) -> Result<Self> {
        if table.descriptor() != model.descriptor()
            || Some(table.len() as u64) != model.index_space()
        {
            return Err(Error::Cache(format!(
                "table for {} does not fit {}",
                table.descriptor(),
                model.descriptor()
            )));
        }
        Ok(DistanceOracle {
            model,
            strategy: Strategy::FullTable,
            table: Some(Arc::new(table)),
        })
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn table(&self) -> Option<&DistanceTable> {
        self.table.as_deref()
    }

    /// `ℓ(g) = d(1, g)`.
    pub fn length(&self, g: &Element) -> Result<u32> {
        self.model.check(g)?;
        match self.strategy {
            Strategy::Analytic => Ok(match (self.model.kind(), g) {
                (ModelKind::FreeAbelianRank2, Element::Pair(a, b)) => {
                    (a.unsigned_abs() + b.unsigned_abs()) as u32
                }
                (ModelKind::Cyclic { n, inverse_closed }, Element::Residue(r)) => {
                    if *inverse_closed {
                        (*r).min(n - r) as u32
                    } else {
                        *r as u32
                    }
                }
                (ModelKind::SymAdjacent(_), Element::Perm(p)) => p.inversions() as u32,
                _ => unreachable!("closed form checked at construction"),
            }),
            Strategy::FullTable => {
                let r = self.model.rank(g)?;
                self.table
                    .as_ref()
                    .expect("table strategy")
                    .get(r)
                    .ok_or(Error::Unreachable)
            }
            Strategy::Bidirectional => bidir::distance(&self.model, &self.model.identity(), g),
        }
    }

    /// `d(g, h)`: length of a shortest word `u` with `g·ol(u) = h`.
    pub fn distance(&self, g: &Element, h: &Element) -> Result<u32> {
        let delta = self.model.multiply(&self.model.inverse(g)?, h)?;
        self.length(&delta)
    }

    /// Geodesic words from `g` to `h`. The count is exact (memoised
    /// recursion `count(x) = Σ count(x·s)` over steps that decrease the
    /// distance to `h`); enumeration is lexicographic in generator index.
    pub fn geodesics(&self, g: &Element, h: &Element, mode: GeodesicMode) -> Result<GeodesicSet> {
        let length = self.distance(g, h)?;
        let k = self.model.generators().len();

        // successors and counts, filled in post-order with an explicit stack
        let mut memo: HashMap<Element, (u128, Vec<(usize, Element)>)> = HashMap::new();
        let mut stack: Vec<(Element, u32, bool)> = vec![(g.clone(), length, false)];
        while let Some((x, dx, expanded)) = stack.pop() {
            if memo.contains_key(&x) {
                continue;
            }
            if dx == 0 {
                memo.insert(x, (1, Vec::new()));
                continue;
            }
            if expanded {
                let mut succ = Vec::new();
                let mut count = 0u128;
                for i in 0..k {
                    let y = self.model.step(&x, i);
                    if let Some((c, _)) = memo.get(&y) {
                        if self.distance(&y, h)? == dx - 1 {
                            count += c;
                            succ.push((i, y));
                        }
                    }
                }
                memo.insert(x, (count, succ));
            } else {
                stack.push((x.clone(), dx, true));
                for i in 0..k {
                    let y = self.model.step(&x, i);
                    if !memo.contains_key(&y) && self.distance(&y, h)? == dx - 1 {
                        stack.push((y, dx - 1, false));
                    }
                }
            }
        }
        let count = memo[g].0;

        let mut words = Vec::new();
        let mut truncated = false;
        if let GeodesicMode::Enumerate { cap } = mode {
            truncated = count > cap as u128;
            let mut letters = Vec::new();
            // (node, next successor position)
            let mut path: Vec<(&Element, usize)> = vec![(g, 0)];
            while let Some(&mut (x, ref mut pos)) = path.last_mut() {
                if words.len() >= cap {
                    break;
                }
                let succ = &memo[x].1;
                if succ.is_empty() {
                    words.push(Word(letters.clone()));
                    path.pop();
                    letters.pop();
                    continue;
                }
                if *pos == succ.len() {
                    path.pop();
                    letters.pop();
                    continue;
                }
                let (i, ref y) = succ[*pos];
                *pos += 1;
                letters.push(i);
                path.push((y, 0));
            }
        }
        Ok(GeodesicSet {
            source: g.clone(),
            target: h.clone(),
            length,
            count,
            words,
            truncated,
        })
    }

    /// Closed ball `{h : d(g,h) <= r}` in breadth-first discovery order.
    pub fn ball(&self, g: &Element, r: u32) -> Result<Vec<Element>> {
        self.model.check(g)?;
        let mut seen: HashSet<Element> = HashSet::from([g.clone()]);
        let mut out = vec![g.clone()];
        let mut frontier = vec![g.clone()];
        for _ in 0..r {
            let mut next = Vec::new();
            for x in &frontier {
                for s in self.model.generators().generators() {
                    let y = self.model.multiply(x, s)?;
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }

    /// `diam(G) = max ℓ(g)`.
    pub fn diameter(&self) -> Result<u32> {
        match (self.strategy, self.model.kind()) {
            (_, ModelKind::FreeAbelianRank2) => Err(Error::Unsupported(
                "the diameter of the infinite group Z^2".into(),
            )),
            (Strategy::Analytic, ModelKind::Cyclic { n, inverse_closed }) => {
                Ok(if *inverse_closed {
                    (n / 2) as u32
                } else {
                    (n - 1) as u32
                })
            }
            (Strategy::Analytic, ModelKind::SymAdjacent(n)) => Ok((n * (n - 1) / 2) as u32),
            (Strategy::FullTable, _) => Ok(self
                .table
                .as_ref()
                .expect("table strategy")
                .sphere_sizes()
                .len() as u32
                - 1),
            _ => Err(Error::Unsupported(format!(
                "diameter of {} without a full table",
                self.model.descriptor()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn p(n: usize, t: &str) -> Element {
        Element::Perm(Perm::parse(n, t).unwrap())
    }

    #[test]
    fn strategy_selection() {
        let pick = |spec: &str| DistanceOracle::new(spec.parse().unwrap()).map(|o| o.strategy());
        assert_eq!(pick("z2").unwrap(), Strategy::Analytic);
        assert_eq!(pick("cyclic:9").unwrap(), Strategy::Analytic);
        assert_eq!(pick("sym-adjacent:12").unwrap(), Strategy::Analytic);
        assert_eq!(pick("sym-circular:6").unwrap(), Strategy::FullTable);
        assert_eq!(pick("sym-circular:11").unwrap(), Strategy::Bidirectional);
        assert!(matches!(
            pick("sym-circular:13"),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn distance_examples() {
        let z = DistanceOracle::new(GroupModel::z2()).unwrap();
        assert_eq!(
            z.distance(&Element::Pair(0, 0), &Element::Pair(4, 3))
                .unwrap(),
            7
        );
        let c = DistanceOracle::new(GroupModel::cyclic(6, true).unwrap()).unwrap();
        assert_eq!(c.length(&Element::Residue(3)).unwrap(), 3);
        let a = DistanceOracle::new(GroupModel::sym_adjacent(5).unwrap()).unwrap();
        assert_eq!(a.length(&p(5, "(1,3)")).unwrap(), 3);
        assert_eq!(a.length(&p(5, "(2,5)")).unwrap(), 5);
    }

    #[test]
    fn length_examples() {
        let c = DistanceOracle::new(GroupModel::sym_circular(5).unwrap()).unwrap();
        assert_eq!(c.length(&c.model().identity()).unwrap(), 0);
        let s = DistanceOracle::new(GroupModel::cyclic(5, false).unwrap()).unwrap();
        assert_eq!(s.length(&Element::Residue(4)).unwrap(), 4);
        let z = DistanceOracle::new(GroupModel::z2()).unwrap();
        assert_eq!(z.length(&Element::Pair(2, 2)).unwrap(), 4);
    }

    #[test]
    fn analytic_matches_table() {
        for model in [
            GroupModel::sym_adjacent(6).unwrap(),
            GroupModel::cyclic(11, true).unwrap(),
            GroupModel::cyclic(11, false).unwrap(),
        ] {
            let a = DistanceOracle::with_strategy(model.clone(), Strategy::Analytic).unwrap();
            let t = DistanceOracle::with_strategy(model.clone(), Strategy::FullTable).unwrap();
            for g in model.elements().unwrap() {
                assert_eq!(a.length(&g).unwrap(), t.length(&g).unwrap(), "{g}");
            }
            assert_eq!(a.diameter().unwrap(), t.diameter().unwrap());
        }
    }

    #[test]
    fn unreachable_is_an_error_not_a_number() {
        let gens = GroupModel::parse_generators(4, "(1,2);(3,4)").unwrap();
        let m = GroupModel::sym_subgroup(4, gens).unwrap();
        let o = DistanceOracle::new(m).unwrap();
        assert_eq!(o.length(&p(4, "(1,3)")), Err(Error::Unreachable));
        assert_eq!(o.length(&p(4, "(1,2)(3,4)")).unwrap(), 2);
    }

    #[test]
    fn geodesic_examples() {
        let z = DistanceOracle::new(GroupModel::z2()).unwrap();
        let o = Element::Pair(0, 0);
        let geo = z
            .geodesics(&o, &o, GeodesicMode::Enumerate { cap: 10 })
            .unwrap();
        assert_eq!((geo.count, geo.words.clone()), (1, vec![Word::empty()]));
        let geo = z
            .geodesics(
                &o,
                &Element::Pair(2, 2),
                GeodesicMode::Enumerate { cap: 100 },
            )
            .unwrap();
        assert_eq!(geo.count, 6);
        assert_eq!(geo.words.len(), 6);
        assert_eq!(geo.words[0], Word(vec![0, 0, 1, 1]));
        assert_eq!(geo.words[5], Word(vec![1, 1, 0, 0]));
        assert!(geo.words.windows(2).all(|w| w[0] < w[1]));
        for w in &geo.words {
            assert_eq!(z.model().apply_word(&o, w).unwrap(), Element::Pair(2, 2));
        }
        let geo = z
            .geodesics(&o, &Element::Pair(4, 0), GeodesicMode::CountOnly)
            .unwrap();
        assert_eq!(geo.count, 1);
        assert!(geo.words.is_empty());
        for n in [4u64, 6, 10] {
            let c = DistanceOracle::new(GroupModel::cyclic(n, true).unwrap()).unwrap();
            let geo = c
                .geodesics(
                    &Element::Residue(0),
                    &Element::Residue(n / 2),
                    GeodesicMode::CountOnly,
                )
                .unwrap();
            assert_eq!(geo.count, 2);
        }
    }

    #[test]
    fn enumeration_cap_sets_truncation() {
        let z = DistanceOracle::new(GroupModel::z2()).unwrap();
        let geo = z
            .geodesics(
                &Element::Pair(0, 0),
                &Element::Pair(3, 3),
                GeodesicMode::Enumerate { cap: 5 },
            )
            .unwrap();
        assert_eq!(geo.count, 20);
        assert_eq!(geo.words.len(), 5);
        assert!(geo.truncated);
    }

    #[test]
    fn ball_examples() {
        let c = DistanceOracle::new(GroupModel::sym_circular(4).unwrap()).unwrap();
        let id = c.model().identity();
        assert_eq!(c.ball(&id, 0).unwrap(), vec![id.clone()]);
        assert_eq!(c.ball(&id, 1).unwrap().len(), 5);
        let z = DistanceOracle::new(GroupModel::z2()).unwrap();
        let ball = z.ball(&Element::Pair(0, 0), 2).unwrap();
        // brute-force lattice count with |a|+|b| <= 2
        let expected = (-2i64..=2)
            .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() <= 2)
            .count();
        assert_eq!(ball.len(), expected);
        assert_eq!(ball.len(), 13);
    }

    #[test]
    fn diameter_examples() {
        let d = |m: GroupModel| DistanceOracle::new(m).unwrap().diameter();
        assert_eq!(d(GroupModel::cyclic(7, false).unwrap()).unwrap(), 6);
        assert_eq!(d(GroupModel::cyclic(8, true).unwrap()).unwrap(), 4);
        assert_eq!(d(GroupModel::sym_adjacent(5).unwrap()).unwrap(), 10);
        assert!(matches!(d(GroupModel::z2()), Err(Error::Unsupported(_))));
    }
}
