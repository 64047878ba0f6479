//! Seeded generators and brute-force oracles shared by the integration
//! test targets.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use psys_core::hypergraph::{Hypergraph, IsomorphismWitness};
use psys_core::num::Decimal;
use psys_core::order::{AttributeSpec, AttributeTable, ElementId, Poset};
use psys_core::system::{build_periodic_system, PeriodicSystem};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn el(label: &str) -> ElementId {
    ElementId::new(label).unwrap()
}

pub fn labels(prefix: &str, n: usize) -> Vec<ElementId> {
    (0..n).map(|i| el(&format!("{prefix}{i}"))).collect()
}

pub fn dec(v: impl std::fmt::Display) -> Decimal {
    v.to_string().parse().unwrap()
}

fn close(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
}

/// Reflexive-transitive closure of a random DAG whose arcs only point
/// from lower to higher ground index, so antisymmetry holds by
/// construction.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> Poset {
    let density = rng.gen_range(0.05..0.95);
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
        for j in (i + 1)..n {
            if rng.gen_bool(density) {
                leq[i * n + j] = true;
            }
        }
    }
    close(&mut leq, n);
    Poset::try_new(labels("e", n), leq).expect("the closure of a DAG is a partial order")
}

/// Covers straight from the definition.
pub fn brute_force_covers(p: &Poset) -> BTreeSet<(usize, usize)> {
    let n = p.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if p.lt_idx(i, j) && !(0..n).any(|k| p.lt_idx(i, k) && p.lt_idx(k, j)) {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Reflexive-transitive closure of an edge set over `0..n`.
pub fn closure_of(edges: &BTreeSet<(usize, usize)>, n: usize) -> Vec<bool> {
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &(i, j) in edges {
        leq[i * n + j] = true;
    }
    close(&mut leq, n);
    leq
}

pub fn leq_matrix(p: &Poset) -> Vec<bool> {
    let n = p.len();
    (0..n * n).map(|x| p.leq_idx(x / n, x % n)).collect()
}

/// Random table with small integer values and random orientations; rows
/// are kept pairwise distinct so the product order never folds.
pub fn random_table(rng: &mut impl Rng, n: usize, width: usize) -> AttributeTable {
    let specs = (0..width)
        .map(|c| {
            let name = format!("a{c}");
            if rng.gen_bool(0.5) {
                AttributeSpec::ascending(name)
            } else {
                AttributeSpec::descending(name)
            }
        })
        .collect();
    let mut seen = BTreeSet::new();
    let rows = labels("e", n)
        .into_iter()
        .map(|id| {
            let mut row: Vec<i64>;
            loop {
                row = (0..width).map(|_| rng.gen_range(0..10)).collect();
                if seen.insert(row.clone()) {
                    break;
                }
            }
            (id, row.into_iter().map(dec).collect())
        })
        .collect();
    AttributeTable::new(specs, rows).unwrap()
}

fn random_members(rng: &mut impl Rng, vertices: &[ElementId]) -> BTreeSet<ElementId> {
    loop {
        let members: BTreeSet<ElementId> = vertices
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        if !members.is_empty() {
            return members;
        }
    }
}

pub fn random_hypergraph(rng: &mut impl Rng, max_v: usize, max_e: usize) -> Hypergraph {
    let vertices = labels("v", rng.gen_range(1..=max_v));
    let edges = (0..rng.gen_range(1..=max_e))
        .map(|i| (i, random_members(rng, &vertices)))
        .collect();
    Hypergraph::new(vertices, edges).unwrap()
}

/// Same member sets under freshly shuffled index values.
pub fn permuted_indices(rng: &mut impl Rng, h: &Hypergraph) -> Hypergraph {
    let mut indices: Vec<usize> = h.edges().iter().map(|e| e.index()).collect();
    indices.shuffle(rng);
    let edges = h
        .edges()
        .iter()
        .zip(indices)
        .map(|(e, i)| (i, e.members().clone()))
        .collect();
    Hypergraph::new(h.vertices().to_vec(), edges).unwrap()
}

/// Structure-preserving copy over fresh labels with shuffled indices;
/// returns the copy and the relabelling that produced it.
pub fn relabelled_copy(
    rng: &mut impl Rng,
    h: &Hypergraph,
    prefix: &str,
) -> (Hypergraph, BTreeMap<ElementId, ElementId>) {
    let mut fresh = labels(prefix, h.vertices().len());
    fresh.shuffle(rng);
    let map: BTreeMap<ElementId, ElementId> =
        h.vertices().iter().cloned().zip(fresh).collect();
    let mut indices: Vec<usize> = h.edges().iter().map(|e| e.index()).collect();
    indices.shuffle(rng);
    let edges = h
        .edges()
        .iter()
        .zip(indices)
        .map(|(e, i)| (i, e.members().iter().map(|m| map[m].clone()).collect()))
        .collect();
    let vertices: Vec<ElementId> = map.values().cloned().collect();
    (Hypergraph::new(vertices, edges).unwrap(), map)
}

/// Restriction of `h` to a random nonempty vertex subset, taking every
/// surviving intersection as a hyperedge.
pub fn random_restriction(rng: &mut impl Rng, h: &Hypergraph) -> Hypergraph {
    let kept: Vec<ElementId> = loop {
        let kept: Vec<ElementId> = h
            .vertices()
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .cloned()
            .collect();
        if !kept.is_empty() {
            break kept;
        }
    };
    let kept_set: BTreeSet<&ElementId> = kept.iter().collect();
    let edges = h
        .edges()
        .iter()
        .filter(|_| rng.gen_bool(0.8))
        .map(|e| {
            e.members()
                .iter()
                .filter(|m| kept_set.contains(m))
                .cloned()
                .collect::<BTreeSet<ElementId>>()
        })
        .filter(|members| !members.is_empty())
        .enumerate()
        .collect();
    Hypergraph::new(kept, edges).unwrap()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(acc: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, used: &mut [bool]) {
        if cur.len() == used.len() {
            acc.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(acc, cur, used);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut acc = Vec::new();
    rec(&mut acc, &mut Vec::new(), &mut vec![false; n]);
    acc
}

/// Exhaustive isomorphism oracle: tries every vertex bijection and
/// compares the resulting member-set multisets.
pub fn isomorphic_by_brute_force(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    let (v1, v2) = (h1.vertices(), h2.vertices());
    if v1.len() != v2.len() || h1.edges().len() != h2.edges().len() {
        return false;
    }
    let mut target: Vec<&BTreeSet<ElementId>> = h2.edges().iter().map(|e| e.members()).collect();
    target.sort();
    all_permutations(v1.len()).iter().any(|perm| {
        let map: BTreeMap<&ElementId, &ElementId> =
            v1.iter().zip(perm.iter().map(|&i| &v2[i])).collect();
        let mut mapped: Vec<BTreeSet<ElementId>> = h1
            .edges()
            .iter()
            .map(|e| e.members().iter().map(|m| map[m].clone()).collect())
            .collect();
        mapped.sort();
        mapped.iter().collect::<Vec<_>>() == target
    })
}

/// Checks a claimed witness against both hypergraphs.
pub fn witness_is_valid(h1: &Hypergraph, h2: &Hypergraph, w: &IsomorphismWitness) -> bool {
    let images: BTreeSet<&ElementId> = w.vertex_map.values().collect();
    let bijective = w.vertex_map.len() == h1.vertices().len()
        && images.len() == w.vertex_map.len()
        && h1.vertices().iter().all(|v| w.vertex_map.contains_key(v))
        && images.iter().all(|v| h2.vertex_set().contains(*v));
    let targets: BTreeSet<&usize> = w.edge_permutation.values().collect();
    let permutation = w.edge_permutation.len() == h1.edges().len()
        && targets.len() == w.edge_permutation.len();
    bijective
        && permutation
        && h1.edges().iter().all(|e| {
            let mapped: BTreeSet<ElementId> =
                e.members().iter().map(|m| w.vertex_map[m].clone()).collect();
            w.edge_permutation
                .get(&e.index())
                .and_then(|&j| h2.edge_by_index(j))
                .is_some_and(|f| f.members() == &mapped)
        })
}

/// Random periodic system over `n` distinct-row elements.
pub fn random_system(
    rng: &mut impl Rng,
    n: usize,
    width: usize,
    max_e: usize,
) -> PeriodicSystem {
    let table = random_table(rng, n, width);
    let vertices = table.elements().to_vec();
    let edges = (0..rng.gen_range(1..=max_e))
        .map(|i| (i, random_members(rng, &vertices)))
        .collect();
    let classes = Hypergraph::new(vertices, edges).unwrap();
    build_periodic_system(&table, &classes).unwrap()
}
