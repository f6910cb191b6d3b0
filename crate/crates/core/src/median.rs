//! Exact three-point medians through the interior of a triangle.
//!
//! For corners `c0, c1, c2` the radius `δ(ci)` is the distance from `ci`
//! to the interval spanned by the other two corners. Every minimiser of the
//! Steiner weight `sw(h) = Σ d(ci, h)` lies in the intersection of the three
//! closed balls `B(ci, δ(ci))`, so scanning that intersection is exact.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::DistanceOracle;
use crate::error::{Error, Result};
use crate::group::{Element, GroupModel, ModelKind};
use crate::interval::GradedInterval;

/// Three corners, stored translated so that the first is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    corners: [Element; 3],
    /// The original first corner; original coordinates are `translation·x`.
    translation: Element,
}

impl Triangle {
    pub fn new(model: &GroupModel, c0: &Element, c1: &Element, c2: &Element) -> Result<Self> {
        let t = model.inverse(c0)?;
        Ok(Triangle {
            corners: [
                model.identity(),
                model.multiply(&t, c1)?,
                model.multiply(&t, c2)?,
            ],
            translation: c0.clone(),
        })
    }

    /// Normalised corners (`c0` is the identity).
    pub fn corners(&self) -> &[Element; 3] {
        &self.corners
    }

    pub fn translation(&self) -> &Element {
        &self.translation
    }

    pub fn to_original(&self, model: &GroupModel, x: &Element) -> Result<Element> {
        model.multiply(&self.translation, x)
    }

    pub fn original_corners(&self, model: &GroupModel) -> Result<[Element; 3]> {
        Ok([
            self.to_original(model, &self.corners[0])?,
            self.to_original(model, &self.corners[1])?,
            self.to_original(model, &self.corners[2])?,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorPoint {
    pub element: Element,
    pub distances: [u32; 3],
    pub steiner_weight: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct InteriorRegion {
    pub deltas: [u32; 3],
    /// Normalised coordinates, sorted by element order.
    pub points: Vec<InteriorPoint>,
}

impl InteriorRegion {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.points.binary_search_by(|p| p.element.cmp(x)).is_ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MedianResult {
    /// Minimisers in original coordinates, sorted.
    pub minimizers: Vec<Element>,
    pub weight: u32,
    pub interior_size: usize,
}

/// The three intervals between pairs of corners: opposite `c0`, `c1`, `c2`.
fn opposite_intervals(oracle: &DistanceOracle, t: &Triangle) -> Result<[GradedInterval; 3]> {
    let [c0, c1, c2] = &t.corners;
    Ok([
        GradedInterval::build(oracle, c1, c2)?,
        GradedInterval::build(oracle, c0, c2)?,
        GradedInterval::build(oracle, c0, c1)?,
    ])
}

fn distance_to_interval(oracle: &DistanceOracle, c: &Element, i: &GradedInterval) -> Result<u32> {
    let mut best = u32::MAX;
    for x in i.elements() {
        best = best.min(oracle.distance(c, x)?);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// `(δ(c0), δ(c1), δ(c2))`.
pub fn deltas(oracle: &DistanceOracle, t: &Triangle) -> Result<[u32; 3]> {
    let intervals = opposite_intervals(oracle, t)?;
    let mut out = [0; 3];
    for k in 0..3 {
        out[k] = distance_to_interval(oracle, &t.corners[k], &intervals[k])?;
    }
    Ok(out)
}

/// `sw(h)` against the normalised corners; `h` in normalised coordinates.
pub fn steiner_weight(oracle: &DistanceOracle, h: &Element, t: &Triangle) -> Result<u32> {
    let mut total = 0;
    for c in &t.corners {
        total += oracle.distance(c, h)?;
    }
    Ok(total)
}

/// The ball around the corner with the smallest radius, filtered by the
/// other two radius constraints.
pub fn interior(oracle: &DistanceOracle, t: &Triangle) -> Result<InteriorRegion> {
    let deltas = deltas(oracle, t)?;
    let start = (0..3).min_by_key(|&k| deltas[k]).unwrap();
    let mut points = Vec::new();
    for h in oracle.ball(&t.corners[start], deltas[start])? {
        let mut d = [0u32; 3];
        let mut inside = true;
        for k in 0..3 {
            d[k] = oracle.distance(&t.corners[k], &h)?;
            if d[k] > deltas[k] {
                inside = false;
                break;
            }
        }
        if inside {
            points.push(InteriorPoint {
                element: h,
                distances: d,
                steiner_weight: d.iter().sum(),
            });
        }
    }
    points.sort_by(|a, b| a.element.cmp(&b.element));
    Ok(InteriorRegion { deltas, points })
}

fn minimise(
    model: &GroupModel,
    t: &Triangle,
    candidates: impl Iterator<Item = (Element, u32)>,
) -> Result<(Vec<Element>, u32)> {
    let mut weight = u32::MAX;
    let mut best = Vec::new();
    for (h, w) in candidates {
        if w < weight {
            weight = w;
            best.clear();
        }
        if w == weight {
            best.push(h);
        }
    }
    let mut out: Vec<Element> = best
        .iter()
        .map(|h| t.to_original(model, h))
        .collect::<Result<_>>()?;
    out.sort();
    Ok((out, weight))
}

/// All global minimisers of the Steiner weight, found by scanning the
/// interior only. Ties are kept.
pub fn medians(oracle: &DistanceOracle, t: &Triangle) -> Result<MedianResult> {
    let region = interior(oracle, t)?;
    let (minimizers, weight) = minimise(
        oracle.model(),
        t,
        region
            .points
            .iter()
            .map(|p| (p.element.clone(), p.steiner_weight)),
    )?;
    Ok(MedianResult {
        minimizers,
        weight,
        interior_size: region.len(),
    })
}

/// Minimisers over the whole group, for finite models; the reference the
/// interior scan is checked against.
pub fn brute_force_medians(oracle: &DistanceOracle, t: &Triangle) -> Result<MedianResult> {
    let model = oracle.model();
    let mut candidates = Vec::new();
    for h in model.elements()? {
        match steiner_weight(oracle, &h, t) {
            Ok(w) => candidates.push((h, w)),
            Err(Error::Unreachable) => continue,
            Err(e) => return Err(e),
        }
    }
    let (minimizers, weight) = minimise(model, t, candidates.into_iter())?;
    Ok(MedianResult {
        minimizers,
        weight,
        interior_size: 0,
    })
}

/// True iff all pairwise distances between minimisers are even. Only
/// defined for the circular transposition model.
pub fn median_parity_check(oracle: &DistanceOracle, t: &Triangle) -> Result<bool> {
    let model = oracle.model();
    if !matches!(model.kind(), ModelKind::SymCircular(_)) {
        return Err(Error::Unsupported(format!(
            "median parity law applies to sym-circular models, not {}",
            model.descriptor()
        )));
    }
    let result = medians(oracle, t)?;
    parity_holds(oracle, &result.minimizers)
}

fn parity_holds(oracle: &DistanceOracle, minimizers: &[Element]) -> Result<bool> {
    for (i, a) in minimizers.iter().enumerate() {
        for b in &minimizers[i + 1..] {
            if oracle.distance(a, b)? % 2 != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{corners, deltas, interior_size, weight, medians, parity_ok}`; the
/// parity field is `null` outside the circular model.
pub fn median_report(oracle: &DistanceOracle, t: &Triangle) -> Result<Value> {
    let model = oracle.model();
    let region = interior(oracle, t)?;
    let result = medians(oracle, t)?;
    let parity = if matches!(model.kind(), ModelKind::SymCircular(_)) {
        Some(parity_holds(oracle, &result.minimizers)?)
    } else {
        None
    };
    let corners: Vec<String> = t
        .original_corners(model)?
        .iter()
        .map(Element::to_string)
        .collect();
    Ok(json!({
        "corners": corners,
        "deltas": region.deltas,
        "interior_size": result.interior_size,
        "weight": result.weight,
        "medians": result.minimizers.iter().map(Element::to_string).collect::<Vec<_>>(),
        "parity_ok": parity,
    }))
}

/// The three corner-to-corner intervals as one digraph, interior elements
/// filled, in original coordinates.
pub fn median_dot(oracle: &DistanceOracle, t: &Triangle) -> Result<String> {
    let model = oracle.model();
    let region = interior(oracle, t)?;
    let marked: HashSet<Element> = region
        .points
        .iter()
        .map(|p| t.to_original(model, &p.element))
        .collect::<Result<_>>()?;
    let mut out = String::from("digraph median {\n  rankdir=BT;\n  node [shape=box];\n");
    for (k, i) in opposite_intervals(oracle, t)?.iter().enumerate() {
        let moved = i.translate(model, &t.translation)?;
        out.push_str(&format!("  subgraph cluster_{k} {{\n"));
        crate::interval::write_dot_body(
            &mut out,
            &moved,
            model.generators(),
            &marked,
            &format!("i{k}_"),
        );
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    Ok(out)
}
