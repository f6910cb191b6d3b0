use std::collections::HashSet;
use std::fmt::Write;

use serde_json::{json, Value};

use super::{GradedInterval, IntervalStats};
use crate::group::{Element, GeneratingSet};

impl GradedInterval {
    /// Graphviz digraph: one node per element (cycle notation), one
    /// `rank=same` cluster per grade, one labelled edge per cover.
    pub fn to_dot(&self, gens: &GeneratingSet) -> String {
        self.to_dot_highlighted(gens, &HashSet::new())
    }

    pub fn to_dot_highlighted(&self, gens: &GeneratingSet, marked: &HashSet<Element>) -> String {
        let mut out = String::from("digraph interval {\n  rankdir=BT;\n  node [shape=box];\n");
        write_body(&mut out, self, gens, marked, "n");
        out.push_str("}\n");
        out
    }

    /// `{bottom, top, n, ranks, edges, stats}` with elements in text syntax.
    pub fn to_json(&self, gens: &GeneratingSet, stats: Option<&IntervalStats>) -> Value {
        let ranks: Vec<Vec<String>> = self
            .rank_sets()
            .iter()
            .map(|set| set.iter().map(Element::to_string).collect())
            .collect();
        let edges: Vec<Value> = self
            .edge_triples()
            .map(|(x, s, y)| {
                json!([
                    x.to_string(),
                    gens.generators()[s].to_string(),
                    y.to_string()
                ])
            })
            .collect();
        json!({
            "bottom": self.bottom().to_string(),
            "top": self.top().to_string(),
            "n": self.length(),
            "ranks": ranks,
            "edges": edges,
            "stats": stats,
        })
    }
}

pub(crate) fn write_body(
    out: &mut String,
    interval: &GradedInterval,
    gens: &GeneratingSet,
    marked: &HashSet<Element>,
    prefix: &str,
) {
    for (r, set) in interval.rank_sets().iter().enumerate() {
        let _ = writeln!(out, "  {{ rank=same; // grade {r}");
        for x in set {
            let id = interval.node(x).unwrap();
            let style = if marked.contains(x) {
                ", style=filled, fillcolor=lightblue"
            } else {
                ""
            };
            let _ = writeln!(out, "    {prefix}{id} [label=\"{x}\"{style}];");
        }
        out.push_str("  }\n");
    }
    for e in interval.cover_edges() {
        let _ = writeln!(
            out,
            "  {prefix}{} -> {prefix}{} [label=\"{}\"];",
            e.from,
            e.to,
            gens.generators()[e.generator]
        );
    }
}
