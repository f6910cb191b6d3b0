//! Order isomorphism of graded posets.
//!
//! Both Hasse diagrams are coloured jointly (initial colour = rank) and the
//! colouring is refined by the multisets of colours above and below each
//! node until it is stable. A colour class with unequal counts on the two
//! sides proves non-isomorphism. Otherwise a node from the smallest open
//! class is individualised against each same-coloured candidate and the
//! search recurses; a discrete colouring is checked edge by edge.

use std::collections::BTreeMap;

use super::poset::GradedPoset;

pub fn order_isomorphic(a: &GradedPoset, b: &GradedPoset) -> bool {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return false;
    }
    if a.rank_profile() != b.rank_profile() {
        return false;
    }
    let union = Union { a, b };
    let colours: Vec<u32> = (0..a.len())
        .map(|x| a.rank(x))
        .chain((0..b.len()).map(|x| b.rank(x)))
        .collect();
    match refine(&union, colours) {
        Some(c) => search(&union, c),
        None => false,
    }
}

struct Union<'a> {
    a: &'a GradedPoset,
    b: &'a GradedPoset,
}

impl Union<'_> {
    fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    fn side(&self, v: usize) -> (&GradedPoset, usize, usize) {
        if v < self.a.len() {
            (self.a, v, 0)
        } else {
            (self.b, v - self.a.len(), self.a.len())
        }
    }

    fn up(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (p, x, off) = self.side(v);
        p.covers_of(x).iter().map(move |&y| y as usize + off)
    }

    fn down(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (p, x, off) = self.side(v);
        p.covered_by(x).iter().map(move |&y| y as usize + off)
    }
}

/// Refines to a stable colouring; `None` if some class is unbalanced.
fn refine(g: &Union<'_>, mut colours: Vec<u32>) -> Option<Vec<u32>> {
    let mut classes = count_classes(&colours);
    loop {
        let mut table: BTreeMap<(u32, Vec<u32>, Vec<u32>), u32> = BTreeMap::new();
        let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..g.len())
            .map(|v| {
                let mut up: Vec<u32> = g.up(v).map(|y| colours[y]).collect();
                let mut down: Vec<u32> = g.down(v).map(|y| colours[y]).collect();
                up.sort_unstable();
                down.sort_unstable();
                (colours[v], up, down)
            })
            .collect();
        for s in &sigs {
            let next = table.len() as u32;
            table.entry(s.clone()).or_insert(next);
        }
        // renumber in signature order so both sides agree on ids
        for (i, id) in table.values_mut().enumerate() {
            *id = i as u32;
        }
        colours = sigs.iter().map(|s| table[s]).collect();
        if !balanced(g, &colours) {
            return None;
        }
        let now = count_classes(&colours);
        if now == classes {
            return Some(colours);
        }
        classes = now;
    }
}

fn count_classes(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn balanced(g: &Union<'_>, colours: &[u32]) -> bool {
    let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
    for (v, &c) in colours.iter().enumerate() {
        *counts.entry(c).or_default() += if v < g.a.len() { 1 } else { -1 };
    }
    counts.values().all(|&n| n == 0)
}

fn search(g: &Union<'_>, colours: Vec<u32>) -> bool {
    let na = g.a.len();
    let mut members: BTreeMap<u32, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (v, &c) in colours.iter().enumerate() {
        let e = members.entry(c).or_default();
        if v < na {
            e.0.push(v);
        } else {
            e.1.push(v - na);
        }
    }
    let open = members
        .values()
        .filter(|(xs, _)| xs.len() > 1)
        .min_by_key(|(xs, _)| xs.len());
    let Some((xs, ys)) = open else {
        let mut map = vec![0usize; na];
        for (xs, ys) in members.values() {
            map[xs[0]] = ys[0];
        }
        return is_isomorphism(g.a, g.b, &map);
    };
    let fresh = colours.iter().max().copied().unwrap_or(0) + 1;
    let x = xs[0];
    for &y in ys {
        let mut c = colours.clone();
        c[x] = fresh;
        c[na + y] = fresh;
        if let Some(refined) = refine(g, c) {
            if search(g, refined) {
                return true;
            }
        }
    }
    false
}

fn is_isomorphism(a: &GradedPoset, b: &GradedPoset, map: &[usize]) -> bool {
    (0..a.len()).all(|x| {
        let mut image: Vec<usize> = a.covers_of(x).iter().map(|&y| map[y as usize]).collect();
        let mut target: Vec<usize> = b.covers_of(map[x]).iter().map(|&y| y as usize).collect();
        image.sort_unstable();
        target.sort_unstable();
        image == target
    })
}
