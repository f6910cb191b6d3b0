//! Breadth-first distance tables and rank-indexed neighbour tables.

use crate::error::{Error, Result};
use crate::group::{Element, GroupModel};
use crate::perm::{rank_images, unrank_into};

/// Marks an index that breadth-first search from the identity never reached.
pub(crate) const UNREACHED: u8 = u8::MAX;

/// Word lengths `ℓ(x)` for every element of a finite model, indexed by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    pub(crate) descriptor: String,
    pub(crate) dist: Vec<u8>,
}

impl DistanceTable {
    pub fn build(model: &GroupModel) -> Result<Self> {
        let size = model.index_space().ok_or_else(|| {
            Error::Unsupported(format!(
                "distance table for infinite {}",
                model.descriptor()
            ))
        })?;
        let mut dist = vec![UNREACHED; size as usize];
        let id = model.rank(&model.identity())?;
        dist[id as usize] = 0;
        let mut frontier = vec![id];
        let mut depth: u8 = 0;
        let k = model.generators().len();
        let perm_gens: Option<Vec<&[u8]>> = model
            .generators()
            .generators()
            .iter()
            .map(|g| g.as_perm().map(|p| p.images()))
            .collect();
        let degree = model.degree().unwrap_or(0);
        let mut cur = vec![0u8; degree];
        let mut child = vec![0u8; degree];
        while !frontier.is_empty() {
            if depth == UNREACHED - 1 {
                return Err(Error::Unsupported(format!(
                    "{} has diameter beyond the one-byte table range",
                    model.descriptor()
                )));
            }
            depth += 1;
            let mut next = Vec::new();
            for &r in &frontier {
                match &perm_gens {
                    Some(gens) if degree > 0 => {
                        unrank_into(r, &mut cur);
                        for s in gens {
                            for i in 0..degree {
                                child[i] = s[cur[i] as usize];
                            }
                            let c = rank_images(&child);
                            if dist[c as usize] == UNREACHED {
                                dist[c as usize] = depth;
                                next.push(c);
                            }
                        }
                    }
                    _ => {
                        let x = model.unrank(r)?;
                        for i in 0..k {
                            let c = model.rank(&model.step(&x, i))?;
                            if dist[c as usize] == UNREACHED {
                                dist[c as usize] = depth;
                                next.push(c);
                            }
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(DistanceTable {
            descriptor: model.descriptor().to_string(),
            dist,
        })
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn entries(&self) -> &[u8] {
        &self.dist
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// `ℓ` at the given rank, `None` if unreachable.
    pub fn get(&self, rank: u64) -> Option<u32> {
        match self.dist.get(rank as usize) {
            Some(&d) if d != UNREACHED => Some(d as u32),
            _ => None,
        }
    }

    /// Number of elements at each length, starting at length 0.
    pub fn sphere_sizes(&self) -> Vec<u64> {
        let mut sizes = Vec::new();
        for &d in &self.dist {
            if d == UNREACHED {
                continue;
            }
            if sizes.len() <= d as usize {
                sizes.resize(d as usize + 1, 0);
            }
            sizes[d as usize] += 1;
        }
        sizes
    }

    /// Checks that the table is exactly the breadth-first distance function:
    /// zero at the identity, and `1 + min` over Cayley predecessors elsewhere.
    pub fn verify(&self, model: &GroupModel) -> Result<()> {
        if self.descriptor != model.descriptor() {
            return Err(Error::Cache(format!(
                "table built for {} but model is {}",
                self.descriptor,
                model.descriptor()
            )));
        }
        if Some(self.dist.len() as u64) != model.index_space() {
            return Err(Error::Cache("table length does not match the model".into()));
        }
        let inv_gens: Vec<Element> = model
            .generators()
            .generators()
            .iter()
            .map(|s| model.inverse(s))
            .collect::<Result<_>>()?;
        let id = model.rank(&model.identity())?;
        for (r, &d) in self.dist.iter().enumerate() {
            let r = r as u64;
            if r == id {
                if d != 0 {
                    return Err(Error::Cache("identity entry is not zero".into()));
                }
                continue;
            }
            let x = model.unrank(r)?;
            let mut best = UNREACHED;
            for s_inv in &inv_gens {
                let pred = model.rank(&model.multiply(&x, s_inv)?)?;
                best = best.min(self.dist[pred as usize]);
            }
            let expected = if best == UNREACHED {
                UNREACHED
            } else {
                best + 1
            };
            if d != expected {
                return Err(Error::Cache(format!(
                    "entry at rank {r} is {d}, breadth-first value is {expected}"
                )));
            }
        }
        Ok(())
    }
}

/// Rank-indexed Cayley graph of a permutation model: right neighbours
/// `x·s` and left neighbours `s⁻¹·x`, next to the distance table.
///
/// Used by whole-group sweeps, where an interval `[1,h]` is traced through
/// pairs `(x, x⁻¹h)` with table lookups only.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    pub(crate) k: usize,
    pub(crate) right: Vec<u32>,
    pub(crate) left_inv: Vec<u32>,
    pub(crate) table: DistanceTable,
}

impl CayleyTable {
    pub fn build(model: &GroupModel, table: DistanceTable) -> Result<Self> {
        let n = model.degree().ok_or_else(|| {
            Error::Unsupported(format!("neighbour table for {}", model.descriptor()))
        })?;
        if table.descriptor != model.descriptor() {
            return Err(Error::Invariant(
                "table does not belong to this model".into(),
            ));
        }
        let gens: Vec<Vec<u8>> = model
            .generators()
            .generators()
            .iter()
            .map(|g| g.as_perm().expect("permutation model").images().to_vec())
            .collect();
        let k = gens.len();
        let size = table.len();
        let mut right = vec![0u32; size * k];
        let mut left_inv = vec![0u32; size * k];
        let mut x = vec![0u8; n];
        let mut y = vec![0u8; n];
        for r in 0..size {
            unrank_into(r as u64, &mut x);
            for (i, s) in gens.iter().enumerate() {
                // x·s: apply x, then s
                for p in 0..n {
                    y[p] = s[x[p] as usize];
                }
                right[r * k + i] = rank_images(&y) as u32;
                // s⁻¹·x: s is applied after s⁻¹, so (s⁻¹·x)(s(p)) = x(p)
                for p in 0..n {
                    y[s[p] as usize] = x[p];
                }
                left_inv[r * k + i] = rank_images(&y) as u32;
            }
        }
        Ok(CayleyTable {
            k,
            right,
            left_inv,
            table,
        })
    }

    pub fn distances(&self) -> &DistanceTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn generator_count(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn right(&self, r: u32, s: usize) -> u32 {
        self.right[r as usize * self.k + s]
    }

    #[inline]
    pub fn left_inv(&self, r: u32, s: usize) -> u32 {
        self.left_inv[r as usize * self.k + s]
    }

    #[inline]
    pub fn dist(&self, r: u32) -> u8 {
        self.table.dist[r as usize]
    }
}
