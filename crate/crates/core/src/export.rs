//! Graphviz export of the graph G with edges colored by class.

use std::fmt::Write as _;

use crate::scheme::Polyhedron;
use crate::surface_map::{LabelId, VertexId};

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT graph: one node per ball vertex (with its class and
/// order), one edge per label (with its cycle), colored by edge class.
pub fn to_dot(p: &Polyhedron) -> String {
    let ball = p.ball();
    let vclasses = p.vertex_classes();
    let vclass = p.vertex_class_index(&vclasses);
    let eclasses = p.edge_classes();
    let eclass = p.label_class_index(&eclasses);
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "graph {} {{", quote(p.name())).expect("string");
    writeln!(w, "  node [shape=circle];").expect("string");
    for (v, &c) in vclass.iter().enumerate() {
        writeln!(
            w,
            "  v{v} [label=\"v{v}\\nclass {c}, order {}\"];",
            vclasses[c].order()
        )
        .expect("string");
    }
    let mut labels: Vec<LabelId> = (0..ball.label_count()).map(LabelId).collect();
    labels.sort_by(|a, b| ball.label_name(*a).cmp(ball.label_name(*b)));
    for l in labels {
        let (VertexId(t), VertexId(h)) = ball.label_endpoints(l);
        let c = eclass[l.0];
        writeln!(
            w,
            "  v{t} -- v{h} [label={}, color=\"{}\"];",
            quote(&format!("{} (cycle {})", ball.label_name(l), eclasses[c].cycle())),
            PALETTE[c % PALETTE.len()]
        )
        .expect("string");
    }
    writeln!(w, "}}").expect("string");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn lens_dot() {
        let dot = to_dot(&catalog::lens(3, 1).unwrap());
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert_eq!(dot.matches("[label=\"v").count(), 3);
        assert!(dot.starts_with("graph \"lens-3-1\" {"));
        assert_eq!(dot.matches(PALETTE[0]).count(), 3);
    }
}
