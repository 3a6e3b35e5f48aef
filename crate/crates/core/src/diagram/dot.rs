//! Graphviz export of the intersection graph.

use std::fmt::Write;

use super::{CombinatorialDiagram, CurveKind};

/// Directed graph: alpha edges solid, beta edges dashed, crossings labelled
/// `alpha/beta` with their sign.
pub fn to_dot(diagram: &CombinatorialDiagram) -> String {
    let mut out = String::from("digraph heegaard {\n  node [shape=circle, fontsize=10];\n");
    for (v, vert) in diagram.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "  v{v} [label=\"{}/{}{}\"];",
            vert.alpha,
            vert.beta,
            vert.sign.symbol()
        );
    }
    for e in &diagram.edges {
        let (style, name) = match e.kind {
            CurveKind::Alpha => ("solid", "a"),
            CurveKind::Beta => ("dashed", "b"),
        };
        let _ = writeln!(
            out,
            "  v{} -> v{} [style={style}, label=\"{name}{}.{}\"];",
            e.tail, e.head, e.curve, e.index
        );
    }
    out.push_str("}\n");
    out
}
