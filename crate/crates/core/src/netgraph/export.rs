use super::LabeledGraph;
use std::fmt::Write as _;

/// One `src dst relation` line per edge.
pub fn edge_list(g: &LabeledGraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        writeln!(
            out,
            "{} {} {}",
            g.node_id(e.src),
            g.node_id(e.dst),
            e.relation
        )
        .unwrap();
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// GraphML document with `kind`/`safety` node attributes, a `relation` edge
/// attribute, and per-edge direction. An optional community assignment (in
/// node order) is written as a `community` node attribute.
pub fn graphml(g: &LabeledGraph, communities: Option<&[usize]>) -> String {
    let mut out = String::from(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
        "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n",
        "  <key id=\"safety\" for=\"node\" attr.name=\"safety\" attr.type=\"string\"/>\n",
        "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n",
        "  <key id=\"relation\" for=\"edge\" attr.name=\"relation\" attr.type=\"string\"/>\n",
        "  <graph id=\"G\" edgedefault=\"directed\">\n",
    ));
    for (i, (id, info)) in g.nodes().enumerate() {
        write!(
            out,
            "    <node id=\"{}\"><data key=\"kind\">{}</data><data key=\"safety\">{}</data>",
            escape(id),
            info.kind,
            info.safety
        )
        .unwrap();
        if let Some(c) = communities {
            write!(out, "<data key=\"community\">{}</data>", c[i]).unwrap();
        }
        out.push_str("</node>\n");
    }
    for (i, e) in g.edges().iter().enumerate() {
        writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\" directed=\"{}\"><data key=\"relation\">{}</data></edge>",
            escape(g.node_id(e.src)),
            escape(g.node_id(e.dst)),
            e.directed(),
            e.relation
        )
        .unwrap();
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
