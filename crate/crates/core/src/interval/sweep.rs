//! Table-driven size and geodesic count of `[1, h]` for whole-group sweeps.

use crate::cayley::CayleyTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepResult {
    pub length: u32,
    pub size: u64,
    pub geodesic_count: u128,
}

/// Reusable scratch space for tracing intervals through a [`CayleyTable`].
///
/// Each grade is a list of `(x, x⁻¹h)` rank pairs; the step by `s` maps
/// the pair to `(x·s, s⁻¹·x⁻¹h)`, so the distance to `h` is a table lookup
/// on the second component.
pub struct IntervalSweep<'a> {
    table: &'a CayleyTable,
    stamp: Vec<u32>,
    slot: Vec<u32>,
    epoch: u32,
}

impl<'a> IntervalSweep<'a> {
    pub fn new(table: &'a CayleyTable) -> Self {
        IntervalSweep {
            table,
            stamp: vec![0; table.order()],
            slot: vec![0; table.order()],
            epoch: 0,
        }
    }

    /// `None` if `h` is unreachable.
    pub fn from_identity(&mut self, identity: u32, h: u32) -> Option<SweepResult> {
        let t = self.table;
        let n = t.dist(h);
        if n == u8::MAX {
            return None;
        }
        let k = t.generator_count();
        let mut grade: Vec<(u32, u32, u128)> = vec![(identity, h, 1)];
        let mut size = 1u64;
        for i in 1..=n {
            self.epoch += 1;
            let mut next: Vec<(u32, u32, u128)> = Vec::with_capacity(grade.len() * 2);
            for &(x, z, paths) in &grade {
                for s in 0..k {
                    let z2 = t.left_inv(z, s);
                    if t.dist(z2) != n - i {
                        continue;
                    }
                    let y = t.right(x, s) as usize;
                    if self.stamp[y] == self.epoch {
                        next[self.slot[y] as usize].2 += paths;
                    } else {
                        self.stamp[y] = self.epoch;
                        self.slot[y] = next.len() as u32;
                        next.push((y as u32, z2, paths));
                    }
                }
            }
            size += next.len() as u64;
            grade = next;
        }
        debug_assert_eq!(grade.len(), 1);
        Some(SweepResult {
            length: n as u32,
            size,
            geodesic_count: grade[0].2,
        })
    }
}
