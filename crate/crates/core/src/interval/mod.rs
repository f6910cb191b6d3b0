//! Graded intervals `[g,h]`: every element on some geodesic from `g` to
//! `h`, ranked by distance from `g`, with generator-labelled cover edges.

mod export;
mod iso;
mod poset;
mod sweep;

use std::collections::HashMap;

use serde::Serialize;

pub(crate) use export::write_body as write_dot_body;
pub use iso::order_isomorphic as posets_isomorphic;
pub use poset::GradedPoset;
pub use sweep::{IntervalSweep, SweepResult};

use crate::cayley::DistanceOracle;
use crate::error::{Error, Result};
use crate::group::{Element, GroupModel};

/// Cover edge between node ids, labelled by a generator index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverEdge {
    pub from: usize,
    pub generator: usize,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct GradedInterval {
    bottom: Element,
    top: Element,
    ranks: Vec<Vec<Element>>,
    offsets: Vec<usize>,
    edges: Vec<CoverEdge>,
    index: HashMap<Element, (usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalStats {
    pub size: usize,
    pub geodesic_count: u128,
    pub rank_profile: Vec<usize>,
    pub max_antichain: usize,
    pub is_sperner: bool,
    pub is_lattice: bool,
}

/// Leading grades from the bottom and trailing grades from the top.
#[derive(Clone, Debug, Serialize)]
pub struct PartialInterval {
    pub length: u32,
    /// `forward[i]`: elements at distance `i` from the bottom, `i <= k`.
    pub forward: Vec<Vec<Element>>,
    /// `backward[j]`: elements at distance `j` from the top, `j <= k`.
    pub backward: Vec<Vec<Element>>,
}

impl PartialInterval {
    pub fn forward_profile(&self) -> Vec<usize> {
        self.forward.iter().map(Vec::len).collect()
    }

    pub fn backward_profile(&self) -> Vec<usize> {
        self.backward.iter().map(Vec::len).collect()
    }
}

/// `g1 <= g2` in the prefix order: `ℓ(g2) = ℓ(g1) + ℓ(g1⁻¹g2)`.
pub fn prefix_le(oracle: &DistanceOracle, g1: &Element, g2: &Element) -> Result<bool> {
    let lengths = (|| {
        Ok((
            oracle.length(g1)?,
            oracle.length(g2)?,
            oracle.distance(g1, g2)?,
        ))
    })();
    match lengths {
        Ok((l1, l2, d)) => Ok(l2 == l1 + d),
        Err(Error::Unreachable) => Ok(false),
        Err(e) => Err(e),
    }
}

impl GradedInterval {
    /// Grade-by-grade construction: `R_0 = {g}`, and `R_i` collects every
    /// `x·s` with `x ∈ R_{i-1}` and `d(x·s, h) = n - i`. Elements keep their
    /// first-discovered position under generator-index iteration.
    pub fn build(oracle: &DistanceOracle, g: &Element, h: &Element) -> Result<Self> {
        let model = oracle.model();
        let n = oracle.distance(g, h)? as usize;
        let mut index = HashMap::from([(g.clone(), (0usize, 0usize))]);
        let mut ranks = vec![vec![g.clone()]];
        let mut offsets = vec![0usize];
        let mut edges = Vec::new();
        let k = model.generators().len();
        for i in 1..=n {
            let base = offsets[i - 1] + ranks[i - 1].len();
            let mut grade: Vec<Element> = Vec::new();
            for (pos, x) in ranks[i - 1].iter().enumerate() {
                let from = offsets[i - 1] + pos;
                for s in 0..k {
                    let y = model.step(x, s);
                    let to = match index.get(&y) {
                        Some(&(r, p)) if r == i => base + p,
                        Some(_) => continue,
                        None => {
                            if oracle.distance(&y, h)? as usize != n - i {
                                continue;
                            }
                            index.insert(y.clone(), (i, grade.len()));
                            grade.push(y);
                            base + grade.len() - 1
                        }
                    };
                    edges.push(CoverEdge {
                        from,
                        generator: s,
                        to,
                    });
                }
            }
            offsets.push(base);
            ranks.push(grade);
        }
        Ok(GradedInterval {
            bottom: g.clone(),
            top: h.clone(),
            ranks,
            offsets,
            edges,
            index,
        })
    }

    /// `[1, h]`.
    pub fn from_identity(oracle: &DistanceOracle, h: &Element) -> Result<Self> {
        Self::build(oracle, &oracle.model().identity(), h)
    }

    pub fn bottom(&self) -> &Element {
        &self.bottom
    }

    pub fn top(&self) -> &Element {
        &self.top
    }

    /// `d(bottom, top)`.
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank_sets(&self) -> &[Vec<Element>] {
        &self.ranks
    }

    pub fn rank_profile(&self) -> Vec<usize> {
        self.ranks.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    /// Node id (rank-major position) of an element.
    pub fn node(&self, x: &Element) -> Option<usize> {
        self.index.get(x).map(|&(r, p)| self.offsets[r] + p)
    }

    /// `(rank, position)` of an element.
    pub fn locate(&self, x: &Element) -> Option<(usize, usize)> {
        self.index.get(x).copied()
    }

    pub fn element(&self, node: usize) -> &Element {
        let r = self.offsets.partition_point(|&o| o <= node) - 1;
        &self.ranks[r][node - self.offsets[r]]
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.ranks.iter().flatten()
    }

    pub fn cover_edges(&self) -> &[CoverEdge] {
        &self.edges
    }

    /// Cover edges as `(x, generator, x·s)` triples.
    pub fn edge_triples(&self) -> impl Iterator<Item = (&Element, usize, &Element)> {
        self.edges
            .iter()
            .map(|e| (self.element(e.from), e.generator, self.element(e.to)))
    }

    pub fn poset(&self) -> GradedPoset {
        let ranks = self
            .ranks
            .iter()
            .enumerate()
            .flat_map(|(r, set)| std::iter::repeat_n(r as u32, set.len()))
            .collect();
        let covers: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.from, e.to)).collect();
        GradedPoset::from_covers(ranks, &covers).expect("interval covers raise rank by one")
    }

    /// Number of maximal chains, i.e. `|Geo(bottom, top)|`.
    pub fn geodesic_count(&self) -> u128 {
        let mut paths = vec![0u128; self.len()];
        paths[0] = 1;
        // edges are emitted grade by grade, so sources are final when read
        for e in &self.edges {
            paths[e.to] += paths[e.from];
        }
        paths[self.len() - 1]
    }

    pub fn max_antichain(&self) -> usize {
        self.poset().max_antichain()
    }

    pub fn is_lattice(&self) -> bool {
        self.poset().is_lattice()
    }

    pub fn stats(&self) -> IntervalStats {
        let poset = self.poset();
        let rank_profile = self.rank_profile();
        let max_antichain = poset.max_antichain();
        let widest = rank_profile.iter().copied().max().unwrap_or(0);
        IntervalStats {
            size: self.len(),
            geodesic_count: self.geodesic_count(),
            rank_profile,
            max_antichain,
            is_sperner: max_antichain <= widest,
            is_lattice: poset.is_lattice(),
        }
    }

    /// Left translation by `g`; cover edges keep their labels.
    pub fn translate(&self, model: &GroupModel, g: &Element) -> Result<Self> {
        let ranks: Vec<Vec<Element>> = self
            .ranks
            .iter()
            .map(|set| set.iter().map(|x| model.multiply(g, x)).collect())
            .collect::<Result<_>>()?;
        let index = ranks
            .iter()
            .enumerate()
            .flat_map(|(r, set)| {
                set.iter()
                    .enumerate()
                    .map(move |(p, x)| (x.clone(), (r, p)))
            })
            .collect();
        Ok(GradedInterval {
            bottom: model.multiply(g, &self.bottom)?,
            top: model.multiply(g, &self.top)?,
            ranks,
            offsets: self.offsets.clone(),
            edges: self.edges.clone(),
            index,
        })
    }

    /// Checks the structural invariants; used by tests and the CLI's
    /// invariant reporting.
    pub fn validate(&self, oracle: &DistanceOracle) -> Result<()> {
        let n = self.length();
        let fail = |msg: String| Err(Error::Invariant(msg));
        if self.ranks[0] != [self.bottom.clone()] || self.ranks[n] != [self.top.clone()] {
            return fail("end grades must be the bottom and the top".into());
        }
        for (i, set) in self.ranks.iter().enumerate() {
            for x in set {
                if oracle.distance(&self.bottom, x)? as usize != i
                    || oracle.distance(x, &self.top)? as usize != n - i
                {
                    return fail(format!("{x} is misplaced in grade {i}"));
                }
            }
        }
        let mut has_up = vec![false; self.len()];
        let mut has_down = vec![false; self.len()];
        for (x, s, y) in self.edge_triples() {
            if oracle.model().step(x, s) != *y {
                return fail(format!("edge {x} -{s}-> {y} is not a generator step"));
            }
            let (rx, _) = self.locate(x).unwrap();
            let (ry, _) = self.locate(y).unwrap();
            if ry != rx + 1 {
                return fail(format!("edge {x} -> {y} does not raise the grade"));
            }
            has_up[self.node(x).unwrap()] = true;
            has_down[self.node(y).unwrap()] = true;
        }
        for v in 0..self.len() {
            if (v + 1 < self.len() && !has_up[v]) || (v > 0 && !has_down[v]) {
                return fail(format!("{} is missing a cover edge", self.element(v)));
            }
        }
        Ok(())
    }
}

pub fn build_interval(oracle: &DistanceOracle, g: &Element, h: &Element) -> Result<GradedInterval> {
    GradedInterval::build(oracle, g, h)
}

pub fn interval_stats(interval: &GradedInterval) -> IntervalStats {
    interval.stats()
}

/// Rank-preserving isomorphism of the Hasse diagrams, labels ignored.
pub fn order_isomorphic(a: &GradedInterval, b: &GradedInterval) -> bool {
    iso::order_isomorphic(&a.poset(), &b.poset())
}

/// The first `k` grades forward from `g` and the last `k` grades backward
/// from `h` (the backward pass steps by inverse generators).
pub fn partial_interval(
    oracle: &DistanceOracle,
    g: &Element,
    h: &Element,
    k: usize,
) -> Result<PartialInterval> {
    if k == 0 {
        return Err(Error::Unsupported("partial intervals need k >= 1".into()));
    }
    let model = oracle.model();
    let n = oracle.distance(g, h)? as usize;
    let depth = k.min(n);
    let inv_gens: Vec<Element> = model
        .generators()
        .generators()
        .iter()
        .map(|s| model.inverse(s))
        .collect::<Result<_>>()?;

    let grow = |start: &Element,
                next: &dyn Fn(&Element, usize) -> Result<Element>,
                keep: &dyn Fn(&Element, usize) -> Result<bool>|
     -> Result<Vec<Vec<Element>>> {
        let mut grades = vec![vec![start.clone()]];
        for i in 1..=depth {
            let mut grade: Vec<Element> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for x in &grades[i - 1] {
                for s in 0..model.generators().len() {
                    let y = next(x, s)?;
                    if !seen.contains(&y) && keep(&y, i)? {
                        seen.insert(y.clone());
                        grade.push(y);
                    }
                }
            }
            grades.push(grade);
        }
        Ok(grades)
    };
    let forward = grow(g, &|x, s| Ok(model.step(x, s)), &|y, i| {
        Ok(oracle.distance(y, h)? as usize == n - i)
    })?;
    let backward = grow(h, &|x, s| model.multiply(x, &inv_gens[s]), &|y, j| {
        Ok(oracle.distance(g, y)? as usize == n - j)
    })?;
    Ok(PartialInterval {
        length: n as u32,
        forward,
        backward,
    })
}
