//! Layered bidirectional breadth-first search for a single distance.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{Element, GroupModel};

/// Length of a shortest word `u` with `source·ol(u) = target`.
///
/// The forward side follows edges `x -> x·s`, the backward side follows
/// them in reverse (`x -> x·s⁻¹`). Each round expands one full layer of the
/// smaller frontier; the first layer that touches the other side yields the
/// minimum over all meeting points found in that layer.
pub fn distance(model: &GroupModel, source: &Element, target: &Element) -> Result<u32> {
    model.check(source)?;
    model.check(target)?;
    if source == target {
        return Ok(0);
    }
    let fwd_gens: Vec<Element> = model.generators().generators().to_vec();
    let bwd_gens: Vec<Element> = fwd_gens
        .iter()
        .map(|s| model.inverse(s))
        .collect::<Result<_>>()?;

    let mut fwd_seen: HashMap<Element, u32> = HashMap::from([(source.clone(), 0)]);
    let mut bwd_seen: HashMap<Element, u32> = HashMap::from([(target.clone(), 0)]);
    let mut fwd_frontier = vec![source.clone()];
    let mut bwd_frontier = vec![target.clone()];
    let (mut fwd_depth, mut bwd_depth) = (0u32, 0u32);

    while !fwd_frontier.is_empty() && !bwd_frontier.is_empty() {
        let forward = fwd_frontier.len() <= bwd_frontier.len();
        let (frontier, seen, other, gens, depth) = if forward {
            (
                &mut fwd_frontier,
                &mut fwd_seen,
                &bwd_seen,
                &fwd_gens,
                &mut fwd_depth,
            )
        } else {
            (
                &mut bwd_frontier,
                &mut bwd_seen,
                &fwd_seen,
                &bwd_gens,
                &mut bwd_depth,
            )
        };
        *depth += 1;
        let mut best: Option<u32> = None;
        let mut next = Vec::new();
        for x in frontier.iter() {
            for s in gens {
                let y = model.multiply(x, s)?;
                if seen.contains_key(&y) {
                    continue;
                }
                if let Some(&d) = other.get(&y) {
                    let total = *depth + d;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                seen.insert(y.clone(), *depth);
                next.push(y);
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        *frontier = next;
    }
    Err(Error::Unreachable)
}
