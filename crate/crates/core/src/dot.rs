//! Graphviz export of Rauzy graphs.
//!
//! Vertices are named by their factor string (ε for the empty word) and arcs
//! are labelled by the arc word. Since a vertex of order `ℓ` has length `ℓ`,
//! names stay unique in the union as well.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::rauzy::{all_cs, RauzyGraph, RauzyUnion};
use crate::Word;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn name(w: &[u8]) -> String {
    if w.is_empty() {
        quote("ε")
    } else {
        quote(&Word::from(w).to_string())
    }
}

/// Smallest arcs of every circuit in `⋃ CS_w(z)`.
pub fn cs_smallest_arcs(w: &[u8]) -> BTreeSet<Word> {
    all_cs(w)
        .values()
        .flatten()
        .map(|c| c.smallest_arc().clone())
        .collect()
}

fn write_body(out: &mut String, g: &RauzyGraph, marked: &BTreeSet<Word>, indent: &str) {
    for v in g.vertices() {
        writeln!(out, "{indent}{};", name(v)).unwrap();
    }
    for a in g.arcs() {
        let style = if marked.contains(a) { ", style=dashed" } else { "" };
        writeln!(
            out,
            "{indent}{} -> {} [label={}{style}];",
            name(RauzyGraph::initial(a)),
            name(RauzyGraph::terminal(a)),
            quote(&a.to_string())
        )
        .unwrap();
    }
}

pub fn graph_to_dot(g: &RauzyGraph, marked: &BTreeSet<Word>) -> String {
    let mut out = format!("digraph rauzy_{} {{\n", g.order());
    write_body(&mut out, g, marked, "  ");
    out.push_str("}\n");
    out
}

/// The union with one cluster per order.
pub fn union_to_dot(u: &RauzyUnion, marked: &BTreeSet<Word>) -> String {
    let mut out = String::from("digraph rauzy {\n");
    for g in u.graphs() {
        writeln!(out, "  subgraph cluster_{} {{", g.order()).unwrap();
        writeln!(out, "    label=\"order {}\";", g.order()).unwrap();
        write_body(&mut out, g, marked, "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
