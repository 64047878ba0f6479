//! Hypergraphs over labelled vertices and the structural relations used to
//! compare them: sub-hypergraph, isomorphism, equivalence and equality.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::HashMap;

use thiserror::Error;

use crate::order::ElementId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("hypergraph has no vertices")]
    NoVertices,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate hyperedge index {0}")]
    DuplicateIndex(usize),
    #[error("hyperedge {0} is empty")]
    EmptyHyperedge(usize),
    #[error("hyperedge {index} contains unknown vertex `{member}`")]
    UnknownMember { index: usize, member: String },
}

/// Indexed subset of the vertex set. Always non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    index: usize,
    members: BTreeSet<ElementId>,
}

impl Hyperedge {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn members(&self) -> &BTreeSet<ElementId> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Vertex set plus an indexed family of non-empty member subsets.
/// Hyperedges may overlap or repeat; isolated vertices are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: Vec<ElementId>,
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    pub fn new(
        vertices: Vec<ElementId>,
        edges: Vec<(usize, BTreeSet<ElementId>)>,
    ) -> Result<Hypergraph, HypergraphError> {
        if vertices.is_empty() {
            return Err(HypergraphError::NoVertices);
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(HypergraphError::DuplicateVertex(v.to_string()));
            }
        }
        let vset: BTreeSet<&ElementId> = vertices.iter().collect();
        let mut seen = BTreeSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for (index, members) in edges {
            if !seen.insert(index) {
                return Err(HypergraphError::DuplicateIndex(index));
            }
            if members.is_empty() {
                return Err(HypergraphError::EmptyHyperedge(index));
            }
            if let Some(m) = members.iter().find(|m| !vset.contains(m)) {
                return Err(HypergraphError::UnknownMember {
                    index,
                    member: m.to_string(),
                });
            }
            built.push(Hyperedge { index, members });
        }
        Ok(Hypergraph {
            vertices,
            edges: built,
        })
    }

    pub fn vertices(&self) -> &[ElementId] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> BTreeSet<ElementId> {
        self.vertices.iter().cloned().collect()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge_by_index(&self, index: usize) -> Option<&Hyperedge> {
        self.edges.iter().find(|e| e.index == index)
    }

    pub fn edge_with_members(&self, members: &BTreeSet<ElementId>) -> Option<&Hyperedge> {
        self.edges.iter().find(|e| &e.members == members)
    }
}

/// Whether the hyperedges partition the vertex set: every vertex lies in
/// exactly one hyperedge.
pub fn is_partition(h: &Hypergraph) -> bool {
    h.vertices.iter().all(|v| {
        h.edges
            .iter()
            .filter(|e| e.members.contains(v))
            .count()
            == 1
    })
}

/// Whether `sub` is the restriction of `sup` to the vertex set of `sub`:
/// every hyperedge of `sub` equals the intersection of some hyperedge of
/// `sup` with that vertex set.
pub fn is_sub_hypergraph(sub: &Hypergraph, sup: &Hypergraph) -> bool {
    let vsub = sub.vertex_set();
    let vsup = sup.vertex_set();
    if !vsub.is_subset(&vsup) {
        return false;
    }
    sub.edges.iter().all(|e| {
        sup.edges.iter().any(|f| {
            let cut: BTreeSet<ElementId> = f.members.intersection(&vsub).cloned().collect();
            cut == e.members
        })
    })
}

/// Witness for a hypergraph isomorphism: a vertex bijection plus the
/// matching bijection between hyperedge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismWitness {
    pub vertex_map: BTreeMap<ElementId, ElementId>,
    pub edge_permutation: BTreeMap<usize, usize>,
}

/// Finds a vertex bijection under which the hyperedge families coincide,
/// if one exists.
pub fn find_isomorphism(h1: &Hypergraph, h2: &Hypergraph) -> Option<IsomorphismWitness> {
    search_isomorphism(h1, h2, |_, _| true, |_, _, _, _| true)
}

/// Backtracking isomorphism search with caller-supplied pruning hooks.
///
/// `vertex_ok(v1, v2)` admits mapping vertex position `v1` of `h1` to
/// position `v2` of `h2`; `pair_ok(a1, a2, b1, b2)` must accept every pair
/// of assignments `a1 -> a2`, `b1 -> b2` that appears together. All
/// complete assignments satisfying the hooks are explored until one also
/// matches the hyperedge families.
pub(crate) fn search_isomorphism(
    h1: &Hypergraph,
    h2: &Hypergraph,
    vertex_ok: impl Fn(usize, usize) -> bool,
    pair_ok: impl Fn(usize, usize, usize, usize) -> bool,
) -> Option<IsomorphismWitness> {
    let n = h1.vertices.len();
    if n != h2.vertices.len() || h1.edges.len() != h2.edges.len() {
        return None;
    }
    let mut sizes1: Vec<usize> = h1.edges.iter().map(Hyperedge::len).collect();
    let mut sizes2: Vec<usize> = h2.edges.iter().map(Hyperedge::len).collect();
    sizes1.sort_unstable();
    sizes2.sort_unstable();
    if sizes1 != sizes2 {
        return None;
    }

    let pos1 = positions(h1);
    let pos2 = positions(h2);
    let member_sets1 = member_index_sets(h1, &pos1);
    let member_sets2 = member_index_sets(h2, &pos2);
    let sig1 = signatures(n, &member_sets1, h1);
    let sig2 = signatures(n, &member_sets2, h2);
    let jc1 = joint_counts(n, &member_sets1);
    let jc2 = joint_counts(n, &member_sets2);

    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|v1| {
            (0..n)
                .filter(|&v2| sig1[v1] == sig2[v2] && vertex_ok(v1, v2))
                .collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| candidates[v].len());

    let mut state = Search {
        order: &order,
        candidates: &candidates,
        jc1: &jc1,
        jc2: &jc2,
        member_sets1: &member_sets1,
        member_sets2: &member_sets2,
        pair_ok: &pair_ok,
        assigned: vec![usize::MAX; n],
        used: vec![false; n],
        permutation: None,
    };
    if !state.run(0) {
        return None;
    }
    let vertex_map = state
        .assigned
        .iter()
        .enumerate()
        .map(|(v1, &v2)| (h1.vertices[v1].clone(), h2.vertices[v2].clone()))
        .collect();
    let by_position = state.permutation.expect("run(0) succeeded");
    let edge_permutation = by_position
        .into_iter()
        .enumerate()
        .map(|(e1, e2)| (h1.edges[e1].index, h2.edges[e2].index))
        .collect();
    Some(IsomorphismWitness {
        vertex_map,
        edge_permutation,
    })
}

struct Search<'a, F: Fn(usize, usize, usize, usize) -> bool> {
    order: &'a [usize],
    candidates: &'a [Vec<usize>],
    jc1: &'a [Vec<u32>],
    jc2: &'a [Vec<u32>],
    member_sets1: &'a [BTreeSet<usize>],
    member_sets2: &'a [BTreeSet<usize>],
    pair_ok: &'a F,
    assigned: Vec<usize>,
    used: Vec<bool>,
    permutation: Option<Vec<usize>>,
}

impl<F: Fn(usize, usize, usize, usize) -> bool> Search<'_, F> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            match self.match_edges() {
                Some(p) => {
                    self.permutation = Some(p);
                    return true;
                }
                None => return false,
            }
        }
        let v1 = self.order[depth];
        for ci in 0..self.candidates[v1].len() {
            let v2 = self.candidates[v1][ci];
            if self.used[v2] || !self.consistent(v1, v2) {
                continue;
            }
            self.assigned[v1] = v2;
            self.used[v2] = true;
            if self.run(depth + 1) {
                return true;
            }
            self.assigned[v1] = usize::MAX;
            self.used[v2] = false;
        }
        false
    }

    fn consistent(&self, v1: usize, v2: usize) -> bool {
        for u1 in 0..self.assigned.len() {
            let u2 = self.assigned[u1];
            if u2 == usize::MAX || u1 == v1 {
                continue;
            }
            if self.jc1[u1][v1] != self.jc2[u2][v2] || !(self.pair_ok)(u1, u2, v1, v2) {
                return false;
            }
        }
        true
    }

    /// With a complete vertex assignment, pairs up hyperedges whose member
    /// sets coincide under the map. Returns positions in `h2` per position
    /// in `h1`.
    fn match_edges(&self) -> Option<Vec<usize>> {
        let mut unused: HashMap<&BTreeSet<usize>, Vec<usize>> = HashMap::new();
        for (pos, set) in self.member_sets2.iter().enumerate() {
            unused.entry(set).or_default().push(pos);
        }
        let mut permutation = Vec::with_capacity(self.member_sets1.len());
        for set in self.member_sets1 {
            let image: BTreeSet<usize> = set.iter().map(|&v| self.assigned[v]).collect();
            let pos = unused.get_mut(&image)?.pop()?;
            permutation.push(pos);
        }
        Some(permutation)
    }
}

fn positions(h: &Hypergraph) -> HashMap<&ElementId, usize> {
    h.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect()
}

fn member_index_sets(h: &Hypergraph, pos: &HashMap<&ElementId, usize>) -> Vec<BTreeSet<usize>> {
    h.edges
        .iter()
        .map(|e| e.members.iter().map(|m| pos[m]).collect())
        .collect()
}

/// Per-vertex invariant: the sorted sizes of the hyperedges containing it.
fn signatures(n: usize, member_sets: &[BTreeSet<usize>], h: &Hypergraph) -> Vec<Vec<usize>> {
    let mut sig = vec![Vec::new(); n];
    for (e, set) in member_sets.iter().enumerate() {
        for &v in set {
            sig[v].push(h.edges[e].members.len());
        }
    }
    for s in &mut sig {
        s.sort_unstable();
    }
    sig
}

fn joint_counts(n: usize, member_sets: &[BTreeSet<usize>]) -> Vec<Vec<u32>> {
    let mut jc = vec![vec![0u32; n]; n];
    for set in member_sets {
        for &a in set {
            for &b in set {
                if a != b {
                    jc[a][b] += 1;
                }
            }
        }
    }
    jc
}

/// Equivalence: same vertex set and the same multiset of member sets, i.e.
/// the identity vertex map works after re-indexing hyperedges.
pub fn are_equivalent(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    if h1.vertex_set() != h2.vertex_set() || h1.edges.len() != h2.edges.len() {
        return false;
    }
    let mut m1: Vec<&BTreeSet<ElementId>> = h1.edges.iter().map(|e| &e.members).collect();
    let mut m2: Vec<&BTreeSet<ElementId>> = h2.edges.iter().map(|e| &e.members).collect();
    m1.sort();
    m2.sort();
    m1 == m2
}

/// Equality: same vertex set and identical member sets index by index.
pub fn are_equal(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    if h1.vertex_set() != h2.vertex_set() || h1.edges.len() != h2.edges.len() {
        return false;
    }
    let by_index: BTreeMap<usize, &BTreeSet<ElementId>> =
        h2.edges.iter().map(|e| (e.index, &e.members)).collect();
    h1.edges
        .iter()
        .all(|e| by_index.get(&e.index) == Some(&&e.members))
}
