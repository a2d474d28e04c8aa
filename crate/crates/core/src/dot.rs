//! Graphviz export of the normal graph.

use std::fmt::Write;

use crate::realization::Realization;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Undirected DOT graph: a box per constraint labelled with its id and code
/// dimension, an edge per state labelled `id:dim`, and a point-shaped leaf
/// for every symbol.
pub fn export_dot(r: &Realization) -> String {
    let t = r.topology();
    let mut out = String::from("graph realization {\n  node [shape=box];\n");
    for (node, code) in t.constraints.iter().zip(r.codes()) {
        let label = format!("{}\\ndim {}", node.id, code.dim());
        let _ = writeln!(out, "  {} [label={}];", quote(&node.id), quote(&label));
    }
    for node in &t.constraints {
        for sym in t.symbols_of(node) {
            let dim = t.var_dim(sym).unwrap_or(0);
            let stub = format!("sym:{sym}");
            let _ = writeln!(out, "  {} [shape=point];", quote(&stub));
            let _ = writeln!(
                out,
                "  {} -- {} [label={}];",
                quote(&node.id),
                quote(&stub),
                quote(&format!("{sym}:{dim}"))
            );
        }
    }
    for s in &t.states {
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(&s.left),
            quote(&s.right),
            quote(&format!("{}:{}", s.id, s.dim))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lists_every_node_and_edge() {
        let dot = export_dot(&fixtures::even_weight_tail_biting());
        assert!(dot.starts_with("graph realization {"));
        for i in 0..3 {
            assert!(dot.contains(&format!("\"c{i}\" [label=\"c{i}\\ndim 2\"]")));
            assert!(dot.contains(&format!("label=\"s{i}:1\"")));
            assert!(dot.contains(&format!("\"sym:a{i}\" [shape=point]")));
        }
        assert_eq!(dot.matches(" -- ").count(), 6);
    }
}
