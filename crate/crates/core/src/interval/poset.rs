//! Finite graded posets given by their cover relation.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A graded poset on nodes `0..len`, stored as a Hasse diagram. Every cover
/// goes from rank `r` to rank `r + 1`; the order is reachability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoset {
    rank: Vec<u32>,
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
}

const NIL: u32 = u32::MAX;

impl GradedPoset {
    pub fn from_covers(rank: Vec<u32>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = rank.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Invariant(format!("cover ({a},{b}) out of range")));
            }
            if rank[b] != rank[a] + 1 {
                return Err(Error::Invariant(format!(
                    "cover ({a},{b}) does not raise the rank by one"
                )));
            }
            if !up[a].contains(&(b as u32)) {
                up[a].push(b as u32);
                down[b].push(a as u32);
            }
        }
        Ok(GradedPoset { rank, up, down })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, x: usize) -> u32 {
        self.rank[x]
    }

    pub fn covers_of(&self, x: usize) -> &[u32] {
        &self.up[x]
    }

    pub fn covered_by(&self, x: usize) -> &[u32] {
        &self.down[x]
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    pub fn rank_profile(&self) -> Vec<usize> {
        let mut profile = Vec::new();
        for &r in &self.rank {
            if profile.len() <= r as usize {
                profile.resize(r as usize + 1, 0);
            }
            profile[r as usize] += 1;
        }
        profile
    }

    fn by_rank_desc(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.rank[x]));
        order
    }

    /// Reflexive up-sets `{y : x <= y}` for every node.
    pub fn up_sets(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut sets = vec![FixedBitSet::with_capacity(n); n];
        for x in self.by_rank_desc() {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            for &y in &self.up[x] {
                s.union_with(&sets[y as usize]);
            }
            sets[x] = s;
        }
        sets
    }

    /// Reflexive down-sets `{y : y <= x}` for every node.
    pub fn down_sets(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut sets = vec![FixedBitSet::with_capacity(n); n];
        let mut order = self.by_rank_desc();
        order.reverse();
        for x in order {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            for &y in &self.down[x] {
                s.union_with(&sets[y as usize]);
            }
            sets[x] = s;
        }
        sets
    }

    /// Number of saturated chains from minimal to maximal elements.
    pub fn maximal_chain_count(&self) -> u128 {
        let mut paths = vec![0u128; self.len()];
        let mut order = self.by_rank_desc();
        order.reverse();
        for x in order {
            if self.down[x].is_empty() {
                paths[x] = 1;
            }
            for &y in &self.up[x] {
                paths[y as usize] += paths[x];
            }
        }
        (0..self.len())
            .filter(|&x| self.up[x].is_empty())
            .map(|x| paths[x])
            .sum()
    }

    /// Width of the poset. By Dilworth's theorem this equals the minimum
    /// number of chains covering it, which is `len - M` where `M` is a
    /// maximum matching in the bipartite graph of strict comparabilities.
    pub fn max_antichain(&self) -> usize {
        let n = self.len();
        let mut strict = self.up_sets();
        for (x, s) in strict.iter_mut().enumerate() {
            s.set(x, false);
        }
        n - hopcroft_karp(n, &strict)
    }

    /// True iff every pair has a unique least upper bound and a unique
    /// greatest lower bound inside the poset.
    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let up = self.up_sets();
        let down = self.down_sets();
        let bounded = |sets: &[FixedBitSet], a: usize, b: usize, low_first: bool| -> bool {
            let mut common = sets[a].clone();
            common.intersect_with(&sets[b]);
            // the candidate extremum is a common bound of least (resp. greatest) rank
            let candidate = common.ones().reduce(|best, y| {
                let better = if low_first {
                    self.rank[y] < self.rank[best]
                } else {
                    self.rank[y] > self.rank[best]
                };
                if better {
                    y
                } else {
                    best
                }
            });
            match candidate {
                None => false,
                Some(c) => common.is_subset(&sets[c]),
            }
        };
        for a in 0..n {
            for b in a + 1..n {
                if !bounded(&up, a, b, true) || !bounded(&down, a, b, false) {
                    return false;
                }
            }
        }
        true
    }
}

/// Size of a maximum matching between left copies and right copies of
/// `0..n`, with `adj[u]` listing the right neighbours of `u`.
fn hopcroft_karp(n: usize, adj: &[FixedBitSet]) -> usize {
    let mut pair_left = vec![NIL; n];
    let mut pair_right = vec![NIL; n];
    let mut dist = vec![u32::MAX; n];
    let mut matching = 0;
    loop {
        // layered BFS from free left vertices
        let mut queue = Vec::new();
        for u in 0..n {
            if pair_left[u] == NIL {
                dist[u] = 0;
                queue.push(u as u32);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            for v in adj[u].ones() {
                let w = pair_right[v];
                if w == NIL {
                    found = true;
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u] + 1;
                    queue.push(w);
                }
            }
        }
        if !found {
            return matching;
        }
        for u in 0..n {
            if pair_left[u] == NIL && augment(u, adj, &mut pair_left, &mut pair_right, &mut dist) {
                matching += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[FixedBitSet],
    pair_left: &mut [u32],
    pair_right: &mut [u32],
    dist: &mut [u32],
) -> bool {
    for v in adj[u].ones() {
        let w = pair_right[v];
        let ok = w == NIL
            || (dist[w as usize] == dist[u] + 1
                && augment(w as usize, adj, pair_left, pair_right, dist));
        if ok {
            pair_left[u] = v as u32;
            pair_right[v] = u as u32;
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}
