//! DOT rendering. Arrows point downward, from the dominating side to the
//! dominated one, and all node and edge lists are sorted so output is
//! byte-stable.

use std::fmt::Write as _;

use crate::order::CoverDigraph;
use crate::system::{DominanceDiagram, PeriodicSystem};

fn quoted(id: &str) -> String {
    let escaped: String = id
        .chars()
        .flat_map(|c| match c {
            '"' | '\\' => vec!['\\', c],
            _ => vec![c],
        })
        .collect();
    format!("\"{escaped}\"")
}

/// Renders a cover digraph as a DOT digraph with one edge per cover pair,
/// drawn from the covering element to the covered one.
pub fn hasse_dot(covers: &CoverDigraph) -> String {
    let mut nodes: Vec<String> = covers.ground().iter().map(|x| quoted(x.as_str())).collect();
    nodes.sort();
    let mut edges: Vec<String> = covers
        .edges()
        .map(|(lower, upper)| format!("{} -> {}", quoted(upper.as_str()), quoted(lower.as_str())))
        .collect();
    edges.sort();
    render("hasse", &nodes, &edges)
}

/// Renders a dominance diagram as a DOT digraph. Nodes are hyperedges,
/// labelled by their member sets; two hyperedges with the same members are
/// told apart by their index.
pub fn dominance_dot(ps: &PeriodicSystem, diagram: &DominanceDiagram) -> String {
    let names = node_names(ps, diagram);
    let mut nodes: Vec<String> = names.iter().map(|n| quoted(n)).collect();
    nodes.sort();
    let mut edges: Vec<String> = diagram
        .edges
        .iter()
        .map(|&(i, j)| format!("{} -> {}", quoted(&names[i]), quoted(&names[j])))
        .collect();
    edges.sort();
    render("dominance", &nodes, &edges)
}

fn node_names(ps: &PeriodicSystem, diagram: &DominanceDiagram) -> Vec<String> {
    let mut names = vec![String::new(); diagram.nodes.iter().max().map_or(0, |m| m + 1)];
    let mut counts = std::collections::HashMap::new();
    for &index in &diagram.nodes {
        let members = ps
            .hypergraph()
            .edge_by_index(index)
            .expect("diagram nodes come from the hypergraph")
            .members();
        let label: Vec<&str> = members.iter().map(|m| m.as_str()).collect();
        let name = format!("{{{}}}", label.join(","));
        *counts.entry(name.clone()).or_insert(0usize) += 1;
        names[index] = name;
    }
    for &index in &diagram.nodes {
        if counts[&names[index]] > 1 {
            let disambiguated = format!("{}#{index}", names[index]);
            names[index] = disambiguated;
        }
    }
    names
}

fn render(graph: &str, nodes: &[String], edges: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {graph} {{").unwrap();
    for node in nodes {
        writeln!(out, "  {node};").unwrap();
    }
    for edge in edges {
        writeln!(out, "  {edge};").unwrap();
    }
    out.push_str("}\n");
    out
}
