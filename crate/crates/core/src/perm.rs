//! Permutations of `{1..n}` stored as 0-based image arrays.
//!
//! Composition is left-to-right: `a.then(&b)` applies `a` first and `b`
//! second, so `(a.then(b))(i) = b(a(i))`. A word `s1 s2 s3` therefore
//! evaluates to `s1.then(s2).then(s3)`, which is the convention under which
//! `(1,2)(3,4)(2,3)` in cycle notation equals the 4-cycle `(1,3,4,2)`.
//!
//! Ranks are lexicographic Lehmer ranks of the image array; the identity has
//! rank 0 and the reversal `n, n-1, .., 1` has rank `n! - 1`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest degree accepted anywhere in the crate.
pub const MAX_DEGREE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "degree {n} exceeds the maximum of {MAX_DEGREE}"
            )));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(Error::Parse(format!("{images:?} is not a bijection")));
            }
            seen[v] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation from a product of cycles given as 1-based points.
    /// Overlapping cycles are multiplied left to right.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut acc = Perm::identity(n);
        for cycle in cycles {
            let mut img: Vec<u8> = (0..n as u8).collect();
            let mut seen = vec![false; n];
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(Error::Parse(format!("point {p} outside 1..{n}")));
                }
                if seen[p - 1] {
                    return Err(Error::Parse(format!("point {p} repeated in a cycle")));
                }
                seen[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                img[p - 1] = (q - 1) as u8;
            }
            acc = acc.then(&Perm(img));
        }
        Ok(acc)
    }

    /// Parses cycle notation such as `(1,3)(2,5)`; `e` and `()` denote the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "e" || t.is_empty() {
            return Ok(Perm::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {text:?}")))?;
            let inner = &body[..close];
            if !inner.is_empty() {
                let pts = inner
                    .split(',')
                    .map(|p| {
                        p.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad point {p:?} in {text:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(pts);
            }
            rest = &body[close + 1..];
        }
        Perm::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// Image of the 1-based point `i`, as a 1-based point.
    pub fn image(&self, i: usize) -> usize {
        self.0[i - 1] as usize + 1
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&v| other.0[v as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm(inv)
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at its
    /// smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.0[start] as usize;
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.0[j] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Nontrivial cycle lengths sorted in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inversions(&self) -> usize {
        let v = &self.0;
        let mut count = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn rank(&self) -> u64 {
        rank_images(&self.0)
    }

    pub fn unrank(n: usize, rank: u64) -> Perm {
        let mut out = vec![0u8; n];
        unrank_into(rank, &mut out);
        Perm(out)
    }
}

/// Lexicographic rank of a 0-based image array.
pub fn rank_images(images: &[u8]) -> u64 {
    let n = images.len();
    let mut rank = 0u64;
    let mut used: u32 = 0;
    for (i, &v) in images.iter().enumerate() {
        let smaller_unused = v as u32 - (used & ((1u32 << v) - 1)).count_ones();
        rank = rank * (n - i) as u64 + smaller_unused as u64;
        used |= 1 << v;
    }
    rank
}

/// Inverse of [`rank_images`], writing into a buffer of the target degree.
pub fn unrank_into(mut rank: u64, out: &mut [u8]) {
    let n = out.len();
    let mut digits = [0u8; MAX_DEGREE];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = (rank % base) as u8;
        rank /= base;
    }
    let mut free: u32 = (1u32 << n) - 1;
    for i in 0..n {
        let mut k = digits[i];
        let mut bits = free;
        loop {
            let v = bits.trailing_zeros();
            if k == 0 {
                out[i] = v as u8;
                free &= !(1 << v);
                break;
            }
            k -= 1;
            bits &= bits - 1;
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
