//! Periodic systems: a hypergraph of similarity classes and a partial
//! order sharing one ground set, plus the dominance metrics defined on
//! them and the relations between two systems.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::hypergraph::{
    are_equal, are_equivalent, is_partition, is_sub_hypergraph, search_isomorphism, Hypergraph,
    HypergraphError,
};
use crate::num::{Decimal, NumError, Ratio};
use crate::order::{
    covers, is_total_order, product_order, quotient_by_equivalence, AttributeTable, CoverDigraph,
    ElementId, OrderError, Poset,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("hypergraph vertices and order ground set differ: {0}")]
    GroundMismatch(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown hyperedge index {0}")]
    UnknownHyperedge(usize),
    #[error("dominance needs at least two elements")]
    DegenerateSystem,
    #[error("hyperedge {0} has a single member, within-hyperedge dominance is undefined")]
    SingletonHyperedge(usize),
    #[error("inter-hyperedge dominance needs two distinct hyperedges, got index {0} twice")]
    SameHyperedge(usize),
    #[error("threshold must be positive, got {0}")]
    BadThreshold(String),
    #[error("not a bijection between the ground sets: {0}")]
    NotABijection(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// An ordered hypergraph: the classes and the order live on the same
/// ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSystem {
    hypergraph: Hypergraph,
    order: Poset,
}

impl PeriodicSystem {
    pub fn new(hypergraph: Hypergraph, order: Poset) -> Result<PeriodicSystem, SystemError> {
        let hv = hypergraph.vertex_set();
        let ov: BTreeSet<ElementId> = order.ground().iter().cloned().collect();
        if hv != ov {
            let only_h: Vec<String> = hv.difference(&ov).map(|e| e.to_string()).collect();
            let only_o: Vec<String> = ov.difference(&hv).map(|e| e.to_string()).collect();
            return Err(SystemError::GroundMismatch(format!(
                "only in hypergraph: [{}], only in order: [{}]",
                only_h.join(", "),
                only_o.join(", ")
            )));
        }
        Ok(PeriodicSystem { hypergraph, order })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }
}

/// Quotients the table, maps class memberships onto representatives
/// (folded elements keep all their memberships), and pairs the resulting
/// hypergraph with the product order of the quotiented table.
pub fn build_periodic_system(
    table: &AttributeTable,
    classes: &Hypergraph,
) -> Result<PeriodicSystem, SystemError> {
    let table_set: BTreeSet<&ElementId> = table.elements().iter().collect();
    let class_set = classes.vertex_set();
    if class_set.len() != table_set.len() || !class_set.iter().all(|v| table_set.contains(v)) {
        return Err(SystemError::GroundMismatch(
            "class vertices do not match the table elements".to_string(),
        ));
    }
    let (quotient, map) = quotient_by_equivalence(table);
    let edges = classes
        .edges()
        .iter()
        .map(|e| {
            let members: BTreeSet<ElementId> =
                e.members().iter().map(|m| map[m].clone()).collect();
            (e.index(), members)
        })
        .collect();
    let hypergraph = Hypergraph::new(quotient.elements().to_vec(), edges)?;
    let order = product_order(&quotient)?;
    PeriodicSystem::new(hypergraph, order)
}

/// The Mendeleevian special case: a total order with a partition.
pub fn is_mendeleevian(ps: &PeriodicSystem) -> bool {
    is_total_order(ps.order()) && is_partition(ps.hypergraph())
}

/// Fraction of the other elements strictly below `x`.
pub fn dominance_degree(ps: &PeriodicSystem, x: &ElementId) -> Result<Ratio, SystemError> {
    let order = ps.order();
    let n = order.len();
    if n < 2 {
        return Err(SystemError::DegenerateSystem);
    }
    let i = order
        .index_of(x)
        .ok_or_else(|| SystemError::UnknownElement(x.to_string()))?;
    let below = (0..n).filter(|&j| order.lt_idx(j, i)).count();
    Ok(Ratio::new(below as i64, (n - 1) as i64)?)
}

fn edge_member_indices(ps: &PeriodicSystem, index: usize) -> Result<Vec<usize>, SystemError> {
    let edge = ps
        .hypergraph()
        .edge_by_index(index)
        .ok_or(SystemError::UnknownHyperedge(index))?;
    Ok(edge
        .members()
        .iter()
        .map(|m| ps.order().index_of(m).expect("shared ground set"))
        .collect())
}

/// Fraction of realized strict comparabilities inside hyperedge `index`.
pub fn within_hyperedge_dominance(
    ps: &PeriodicSystem,
    index: usize,
) -> Result<Ratio, SystemError> {
    let members = edge_member_indices(ps, index)?;
    let n = members.len();
    if n < 2 {
        return Err(SystemError::SingletonHyperedge(index));
    }
    let mut strict = 0i64;
    for &i in &members {
        for &j in &members {
            if ps.order().lt_idx(j, i) {
                strict += 1;
            }
        }
    }
    Ok(Ratio::new(2 * strict, (n * (n - 1)) as i64)?)
}

/// Members of hyperedge `index` sorted from most dominant to least, if
/// they form a chain.
pub fn hyperedge_chain_order(
    ps: &PeriodicSystem,
    index: usize,
) -> Result<Option<Vec<ElementId>>, SystemError> {
    let mut members = edge_member_indices(ps, index)?;
    let order = ps.order();
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            if !order.leq_idx(i, j) && !order.leq_idx(j, i) {
                return Ok(None);
            }
        }
    }
    members.sort_by(|&i, &j| {
        if i == j {
            std::cmp::Ordering::Equal
        } else if order.leq_idx(j, i) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    Ok(Some(
        members.iter().map(|&i| order.ground()[i].clone()).collect(),
    ))
}

/// Fraction of pairs in `C_i x C_j` where the `C_j` member is strictly
/// below the `C_i` member. Overlapping hyperedges count per the literal
/// formula; a pair `(x, x)` never satisfies `x < x`.
pub fn inter_hyperedge_dominance(
    ps: &PeriodicSystem,
    i: usize,
    j: usize,
) -> Result<Ratio, SystemError> {
    if i == j {
        return Err(SystemError::SameHyperedge(i));
    }
    let mi = edge_member_indices(ps, i)?;
    let mj = edge_member_indices(ps, j)?;
    let mut dominated = 0i64;
    for &a in &mi {
        for &b in &mj {
            if ps.order().lt_idx(b, a) {
                dominated += 1;
            }
        }
    }
    Ok(Ratio::new(dominated, (mi.len() * mj.len()) as i64)?)
}

/// Hyperedge-level digraph: an edge `(i, j)` records that `C_i` dominates
/// `C_j` strictly above the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceDiagram {
    pub threshold: Decimal,
    /// Hyperedge indices, in hypergraph family order.
    pub nodes: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DominanceProfileEntry {
    pub index: usize,
    pub in_degree: usize,
    pub out_degree: usize,
}

/// Builds the dominance diagram at a positive threshold. Thresholds above
/// one are allowed and give an empty edge set, the strict inequality being
/// unsatisfiable. Singleton hyperedges participate.
pub fn dominance_diagram(
    ps: &PeriodicSystem,
    threshold: Decimal,
) -> Result<DominanceDiagram, SystemError> {
    if threshold <= Decimal::ZERO {
        return Err(SystemError::BadThreshold(threshold.to_string()));
    }
    let cut = Ratio::try_from(threshold)?;
    let nodes: Vec<usize> = ps.hypergraph().edges().iter().map(|e| e.index()).collect();
    let mut edges = BTreeSet::new();
    for &i in &nodes {
        for &j in &nodes {
            if i != j && inter_hyperedge_dominance(ps, i, j)? > cut {
                edges.insert((i, j));
            }
        }
    }
    Ok(DominanceDiagram {
        threshold,
        nodes,
        edges,
    })
}

/// In/out degrees of every hyperedge in the dominance diagram, in
/// hypergraph family order.
pub fn dominance_profile(
    ps: &PeriodicSystem,
    threshold: Decimal,
) -> Result<Vec<DominanceProfileEntry>, SystemError> {
    let diagram = dominance_diagram(ps, threshold)?;
    Ok(diagram
        .nodes
        .iter()
        .map(|&index| DominanceProfileEntry {
            index,
            in_degree: diagram.edges.iter().filter(|&&(_, j)| j == index).count(),
            out_degree: diagram.edges.iter().filter(|&&(i, _)| i == index).count(),
        })
        .collect())
}

/// Whether `map` sends every cover pair of `p1` onto a cover pair of `p2`.
/// The map must embed the first ground set injectively into the second;
/// the check is one-directional, so covers of `p2` need no preimage.
pub fn is_cover_preserving(
    map: &BTreeMap<ElementId, ElementId>,
    p1: &Poset,
    p2: &Poset,
) -> Result<bool, SystemError> {
    if map.len() != p1.len() || p1.len() > p2.len() {
        return Err(SystemError::NotABijection(format!(
            "map has {} entries for ground sets of {} and {}",
            map.len(),
            p1.len(),
            p2.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for x in p1.ground() {
        let y = map
            .get(x)
            .ok_or_else(|| SystemError::NotABijection(format!("`{x}` has no image")))?;
        if p2.index_of(y).is_none() {
            return Err(SystemError::NotABijection(format!(
                "image `{y}` is not in the target ground set"
            )));
        }
        if !seen.insert(y) {
            return Err(SystemError::NotABijection(format!(
                "`{y}` is the image of two elements"
            )));
        }
    }
    let c1 = covers(p1);
    let c2 = covers(p2);
    for (lo, hi) in c1.edges() {
        if !c2.contains(&map[lo], &map[hi])? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemRelation {
    Equal,
    Equivalent,
    Isomorphic,
    SubSystem,
    Unrelated,
}

impl fmt::Display for SystemRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemRelation::Equal => "equal",
            SystemRelation::Equivalent => "equivalent",
            SystemRelation::Isomorphic => "isomorphic",
            SystemRelation::SubSystem => "sub-system",
            SystemRelation::Unrelated => "unrelated",
        })
    }
}

fn identity_map(p: &Poset) -> BTreeMap<ElementId, ElementId> {
    p.ground().iter().map(|x| (x.clone(), x.clone())).collect()
}

/// Strongest relation of `ps2` to `ps1`, in the order equal, equivalent,
/// isomorphic, sub-system. Every hypergraph witness must also be a
/// cover-preserving map from the first order to the second; the
/// isomorphism search explores all candidate witnesses.
pub fn relate_systems(ps1: &PeriodicSystem, ps2: &PeriodicSystem) -> SystemRelation {
    let (h1, h2) = (ps1.hypergraph(), ps2.hypergraph());
    let (p1, p2) = (ps1.order(), ps2.order());

    let same_ground = h1.vertex_set() == h2.vertex_set();
    let identity_preserves = same_ground
        && is_cover_preserving(&identity_map(p1), p1, p2).expect("identity is a bijection");
    if identity_preserves && are_equal(h1, h2) {
        return SystemRelation::Equal;
    }
    if identity_preserves && are_equivalent(h1, h2) {
        return SystemRelation::Equivalent;
    }

    if isomorphism_with_covers(ps1, ps2) {
        return SystemRelation::Isomorphic;
    }

    if is_sub_hypergraph(h2, h1) && inclusion_preserves_covers(p2, p1) {
        return SystemRelation::SubSystem;
    }
    SystemRelation::Unrelated
}

/// Searches for a hypergraph isomorphism whose vertex map also carries
/// cover pairs of the first order onto cover pairs of the second.
fn isomorphism_with_covers(ps1: &PeriodicSystem, ps2: &PeriodicSystem) -> bool {
    let (h1, h2) = (ps1.hypergraph(), ps2.hypergraph());
    let (p1, p2) = (ps1.order(), ps2.order());
    let c1 = covers(p1);
    let c2 = covers(p2);
    // hypergraph vertex position -> poset index
    let to_p1: Vec<usize> = h1
        .vertices()
        .iter()
        .map(|v| p1.index_of(v).expect("shared ground set"))
        .collect();
    let to_p2: Vec<usize> = h2
        .vertices()
        .iter()
        .map(|v| p2.index_of(v).expect("shared ground set"))
        .collect();
    let degrees = |c: &CoverDigraph, n: usize| {
        let mut down = vec![0usize; n];
        let mut up = vec![0usize; n];
        for (lo, hi) in c.edge_indices() {
            up[lo] += 1;
            down[hi] += 1;
        }
        (down, up)
    };
    let (down1, up1) = degrees(&c1, p1.len());
    let (down2, up2) = degrees(&c2, p2.len());

    let vertex_ok = |v1: usize, v2: usize| {
        up1[to_p1[v1]] <= up2[to_p2[v2]] && down1[to_p1[v1]] <= down2[to_p2[v2]]
    };
    let pair_ok = |a1: usize, a2: usize, b1: usize, b2: usize| {
        let (pa1, pb1) = (to_p1[a1], to_p1[b1]);
        let (pa2, pb2) = (to_p2[a2], to_p2[b2]);
        (!c1.contains_idx(pa1, pb1) || c2.contains_idx(pa2, pb2))
            && (!c1.contains_idx(pb1, pa1) || c2.contains_idx(pb2, pa2))
    };
    search_isomorphism(h1, h2, vertex_ok, pair_ok).is_some()
}

/// Whether the inclusion of `sub`'s ground set maps every cover pair of
/// `sub` onto a cover pair of the suborder `sup` induces on that ground
/// set.
fn inclusion_preserves_covers(sub: &Poset, sup: &Poset) -> bool {
    let Ok(induced) = sup.restrict(sub.ground()) else {
        return false;
    };
    let csub = covers(sub);
    let cind = covers(&induced);
    let preserved = csub.edge_indices().all(|(lo, hi)| cind.contains_idx(lo, hi));
    preserved
}
