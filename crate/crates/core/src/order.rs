//! Attribute tables and the partial orders they induce.
//!
//! A table assigns each element one exact decimal value per oriented
//! attribute. The product order compares elements attribute-wise: `x <= y`
//! iff every oriented value of `x` is at most the one of `y`. Descending
//! attributes compare reversed.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::num::{Decimal, NumError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("invalid element label `{0}`")]
    InvalidLabel(String),
    #[error("attribute table has no {0}")]
    EmptyTable(&'static str),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("duplicate attribute `{0}`")]
    DuplicateAttribute(String),
    #[error("row for `{element}` has {got} values, expected {expected}")]
    RowShape {
        element: String,
        expected: usize,
        got: usize,
    },
    #[error("elements `{0}` and `{1}` have identical rows; quotient the table first")]
    DuplicateRows(String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("attribute `{0}` is constant, ranks are undefined")]
    DegenerateAttribute(String),
    #[error("tolerance must be non-negative, got {0}")]
    NegativeTolerance(String),
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Element label. Non-empty, free of whitespace, commas and colons, so
/// labels survive every textual format used by the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(label: impl Into<String>) -> Result<ElementId, OrderError> {
        let label = label.into();
        let ok = !label.is_empty()
            && !label
                .chars()
                .any(|c| c.is_whitespace() || c == ',' || c == ':');
        if ok {
            Ok(ElementId(label))
        } else {
            Err(OrderError::InvalidLabel(label))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ElementId {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<ElementId, OrderError> {
        ElementId::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub orientation: Orientation,
}

impl AttributeSpec {
    pub fn ascending(name: impl Into<String>) -> AttributeSpec {
        AttributeSpec {
            name: name.into(),
            orientation: Orientation::Ascending,
        }
    }

    pub fn descending(name: impl Into<String>) -> AttributeSpec {
        AttributeSpec {
            name: name.into(),
            orientation: Orientation::Descending,
        }
    }
}

/// Rectangular element-by-attribute matrix of exact decimals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeTable {
    elements: Vec<ElementId>,
    attributes: Vec<AttributeSpec>,
    values: Vec<Decimal>,
}

impl AttributeTable {
    pub fn new(
        attributes: Vec<AttributeSpec>,
        rows: Vec<(ElementId, Vec<Decimal>)>,
    ) -> Result<AttributeTable, OrderError> {
        if attributes.is_empty() {
            return Err(OrderError::EmptyTable("attributes"));
        }
        if rows.is_empty() {
            return Err(OrderError::EmptyTable("elements"));
        }
        for (i, spec) in attributes.iter().enumerate() {
            if attributes[..i].iter().any(|s| s.name == spec.name) {
                return Err(OrderError::DuplicateAttribute(spec.name.clone()));
            }
        }
        let mut elements = Vec::with_capacity(rows.len());
        let mut values = Vec::with_capacity(rows.len() * attributes.len());
        for (id, row) in rows {
            if elements.contains(&id) {
                return Err(OrderError::DuplicateElement(id.0));
            }
            if row.len() != attributes.len() {
                return Err(OrderError::RowShape {
                    element: id.0,
                    expected: attributes.len(),
                    got: row.len(),
                });
            }
            elements.push(id);
            values.extend(row);
        }
        Ok(AttributeTable {
            elements,
            attributes,
            values,
        })
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn value(&self, row: usize, col: usize) -> Decimal {
        self.values[row * self.attributes.len() + col]
    }

    pub fn row(&self, row: usize) -> &[Decimal] {
        let w = self.attributes.len();
        &self.values[row * w..(row + 1) * w]
    }

    pub fn column(&self, col: usize) -> Vec<Decimal> {
        (0..self.len()).map(|r| self.value(r, col)).collect()
    }

    pub fn element_index(&self, id: &ElementId) -> Option<usize> {
        self.elements.iter().position(|e| e == id)
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }
}

/// Merges elements with identical rows. Each class is represented by its
/// lexicographically smallest label; the returned map sends every original
/// element to its representative.
pub fn quotient_by_equivalence(
    table: &AttributeTable,
) -> (AttributeTable, BTreeMap<ElementId, ElementId>) {
    let mut groups: HashMap<&[Decimal], Vec<usize>> = HashMap::new();
    for r in 0..table.len() {
        groups.entry(table.row(r)).or_default().push(r);
    }
    let mut rep_of = vec![usize::MAX; table.len()];
    for members in groups.values() {
        let rep = *members
            .iter()
            .min_by_key(|&&r| &table.elements[r])
            .expect("group is non-empty");
        for &r in members {
            rep_of[r] = rep;
        }
    }
    let mut map = BTreeMap::new();
    for (r, id) in table.elements.iter().enumerate() {
        map.insert(id.clone(), table.elements[rep_of[r]].clone());
    }
    let mut elements = Vec::new();
    let mut values = Vec::new();
    for r in 0..table.len() {
        if rep_of[r] == r {
            elements.push(table.elements[r].clone());
            values.extend_from_slice(table.row(r));
        }
    }
    let quotient = AttributeTable {
        elements,
        attributes: table.attributes.clone(),
        values,
    };
    (quotient, map)
}

/// Finite partial order over a ground set, stored as a dense boolean
/// relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    ground: Vec<ElementId>,
    leq: Vec<bool>,
}

impl Poset {
    /// Validates the partial order axioms before accepting the relation.
    pub fn try_new(ground: Vec<ElementId>, leq: Vec<bool>) -> Result<Poset, OrderError> {
        let n = ground.len();
        if n == 0 {
            return Err(OrderError::EmptyTable("elements"));
        }
        for (i, id) in ground.iter().enumerate() {
            if ground[..i].contains(id) {
                return Err(OrderError::DuplicateElement(id.0.clone()));
            }
        }
        if leq.len() != n * n {
            return Err(OrderError::NotAPartialOrder(format!(
                "matrix has {} entries for {n} elements",
                leq.len()
            )));
        }
        let p = Poset { ground, leq };
        for i in 0..n {
            if !p.leq_idx(i, i) {
                return Err(OrderError::NotAPartialOrder(format!(
                    "reflexivity fails for `{}`",
                    p.ground[i]
                )));
            }
            for j in 0..n {
                if i != j && p.leq_idx(i, j) && p.leq_idx(j, i) {
                    return Err(OrderError::NotAPartialOrder(format!(
                        "antisymmetry fails for `{}` and `{}`",
                        p.ground[i], p.ground[j]
                    )));
                }
                for k in 0..n {
                    if p.leq_idx(i, j) && p.leq_idx(j, k) && !p.leq_idx(i, k) {
                        return Err(OrderError::NotAPartialOrder(format!(
                            "transitivity fails at `{}` <= `{}` <= `{}`",
                            p.ground[i], p.ground[j], p.ground[k]
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn index_of(&self, x: &ElementId) -> Option<usize> {
        self.ground.iter().position(|e| e == x)
    }

    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.ground.len() + j]
    }

    pub fn lt_idx(&self, i: usize, j: usize) -> bool {
        i != j && self.leq_idx(i, j)
    }

    pub fn leq(&self, x: &ElementId, y: &ElementId) -> Result<bool, OrderError> {
        let i = self
            .index_of(x)
            .ok_or_else(|| OrderError::UnknownElement(x.0.clone()))?;
        let j = self
            .index_of(y)
            .ok_or_else(|| OrderError::UnknownElement(y.0.clone()))?;
        Ok(self.leq_idx(i, j))
    }

    /// Induced suborder on `subset`, which must name distinct known elements.
    pub fn restrict(&self, subset: &[ElementId]) -> Result<Poset, OrderError> {
        let mut idx = Vec::with_capacity(subset.len());
        for x in subset {
            let i = self
                .index_of(x)
                .ok_or_else(|| OrderError::UnknownElement(x.0.clone()))?;
            if idx.contains(&i) {
                return Err(OrderError::DuplicateElement(x.0.clone()));
            }
            idx.push(i);
        }
        let m = idx.len();
        let mut leq = vec![false; m * m];
        for a in 0..m {
            for b in 0..m {
                leq[a * m + b] = self.leq_idx(idx[a], idx[b]);
            }
        }
        Poset::try_new(subset.to_vec(), leq)
    }
}

/// Builds the product order of the table under zero tolerance.
///
/// The table must already be quotiented: two identical rows make
/// antisymmetry fail and are reported as [`OrderError::DuplicateRows`].
pub fn product_order(table: &AttributeTable) -> Result<Poset, OrderError> {
    product_order_with_tolerance(table, Decimal::ZERO)
}

/// Product order where attribute values within `tolerance` of each other
/// count as tied. A positive tolerance can break the order axioms; that is
/// reported as [`OrderError::NotAPartialOrder`].
pub fn product_order_with_tolerance(
    table: &AttributeTable,
    tolerance: Decimal,
) -> Result<Poset, OrderError> {
    if tolerance.is_negative() {
        return Err(OrderError::NegativeTolerance(tolerance.to_string()));
    }
    let n = table.len();
    for i in 0..n {
        for j in i + 1..n {
            if table.row(i) == table.row(j) {
                return Err(OrderError::DuplicateRows(
                    table.elements[i].0.clone(),
                    table.elements[j].0.clone(),
                ));
            }
        }
    }
    let mut leq = vec![false; n * n];
    for i in 0..n {
        'pair: for j in 0..n {
            for (c, spec) in table.attributes.iter().enumerate() {
                let (lo, hi) = match spec.orientation {
                    Orientation::Ascending => (table.value(i, c), table.value(j, c)),
                    Orientation::Descending => (table.value(j, c), table.value(i, c)),
                };
                if lo.checked_sub(hi)? > tolerance {
                    continue 'pair;
                }
            }
            leq[i * n + j] = true;
        }
    }
    Poset::try_new(table.elements.clone(), leq)
}

/// Cover pairs of a poset: `(lower, upper)` is an edge iff `lower < upper`
/// with no element strictly between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDigraph {
    ground: Vec<ElementId>,
    edges: BTreeSet<(usize, usize)>,
}

impl CoverDigraph {
    pub fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    pub fn index_of(&self, x: &ElementId) -> Option<usize> {
        self.ground.iter().position(|e| e == x)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&ElementId, &ElementId)> + '_ {
        self.edges
            .iter()
            .map(|&(lo, hi)| (&self.ground[lo], &self.ground[hi]))
    }

    pub fn contains_idx(&self, lower: usize, upper: usize) -> bool {
        self.edges.contains(&(lower, upper))
    }

    pub fn contains(&self, lower: &ElementId, upper: &ElementId) -> Result<bool, OrderError> {
        let lo = self
            .index_of(lower)
            .ok_or_else(|| OrderError::UnknownElement(lower.0.clone()))?;
        let hi = self
            .index_of(upper)
            .ok_or_else(|| OrderError::UnknownElement(upper.0.clone()))?;
        Ok(self.contains_idx(lo, hi))
    }
}

pub fn covers(poset: &Poset) -> CoverDigraph {
    let n = poset.len();
    let mut edges = BTreeSet::new();
    for i in 0..n {
        'upper: for j in 0..n {
            if !poset.lt_idx(i, j) {
                continue;
            }
            for k in 0..n {
                if k != i && k != j && poset.lt_idx(i, k) && poset.lt_idx(k, j) {
                    continue 'upper;
                }
            }
            edges.insert((i, j));
        }
    }
    CoverDigraph {
        ground: poset.ground.clone(),
        edges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStats {
    /// Unordered pairs of distinct elements.
    pub pairs: usize,
    pub comparable: usize,
    pub incomparable: usize,
}

pub fn comparability_stats(poset: &Poset) -> PairStats {
    let n = poset.len();
    let mut comparable = 0;
    for i in 0..n {
        for j in i + 1..n {
            if poset.leq_idx(i, j) || poset.leq_idx(j, i) {
                comparable += 1;
            }
        }
    }
    let pairs = n * (n - 1) / 2;
    PairStats {
        pairs,
        comparable,
        incomparable: pairs - comparable,
    }
}

/// Elements below `x`, including `x` itself.
pub fn down_set(poset: &Poset, x: &ElementId) -> Result<BTreeSet<ElementId>, OrderError> {
    let i = poset
        .index_of(x)
        .ok_or_else(|| OrderError::UnknownElement(x.0.clone()))?;
    Ok((0..poset.len())
        .filter(|&j| poset.leq_idx(j, i))
        .map(|j| poset.ground[j].clone())
        .collect())
}

/// Elements above `x`, including `x` itself.
pub fn up_set(poset: &Poset, x: &ElementId) -> Result<BTreeSet<ElementId>, OrderError> {
    let i = poset
        .index_of(x)
        .ok_or_else(|| OrderError::UnknownElement(x.0.clone()))?;
    Ok((0..poset.len())
        .filter(|&j| poset.leq_idx(i, j))
        .map(|j| poset.ground[j].clone())
        .collect())
}

/// Elements incomparable to `x`; never contains `x`.
pub fn incomparables(poset: &Poset, x: &ElementId) -> Result<BTreeSet<ElementId>, OrderError> {
    let i = poset
        .index_of(x)
        .ok_or_else(|| OrderError::UnknownElement(x.0.clone()))?;
    Ok((0..poset.len())
        .filter(|&j| !poset.leq_idx(i, j) && !poset.leq_idx(j, i))
        .map(|j| poset.ground[j].clone())
        .collect())
}

pub fn maximal_elements(poset: &Poset) -> Vec<ElementId> {
    (0..poset.len())
        .filter(|&i| (0..poset.len()).all(|j| !poset.lt_idx(i, j)))
        .map(|i| poset.ground[i].clone())
        .collect()
}

pub fn minimal_elements(poset: &Poset) -> Vec<ElementId> {
    (0..poset.len())
        .filter(|&i| (0..poset.len()).all(|j| !poset.lt_idx(j, i)))
        .map(|i| poset.ground[i].clone())
        .collect()
}

/// Whether the named elements are pairwise comparable.
pub fn is_chain(poset: &Poset, subset: &[ElementId]) -> Result<bool, OrderError> {
    let mut idx = Vec::with_capacity(subset.len());
    for x in subset {
        idx.push(
            poset
                .index_of(x)
                .ok_or_else(|| OrderError::UnknownElement(x.0.clone()))?,
        );
    }
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            let (i, j) = (idx[a], idx[b]);
            if !poset.leq_idx(i, j) && !poset.leq_idx(j, i) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_total_order(poset: &Poset) -> bool {
    comparability_stats(poset).incomparable == 0
}

/// Spearman rank correlation between two attributes, computed on oriented
/// values with average ranks for ties.
pub fn spearman(table: &AttributeTable, a: &str, b: &str) -> Result<f64, OrderError> {
    let ra = ranks(table, a)?;
    let rb = ranks(table, b)?;
    Ok(pearson(&ra, &rb))
}

fn ranks(table: &AttributeTable, name: &str) -> Result<Vec<f64>, OrderError> {
    let col = table
        .attribute_index(name)
        .ok_or_else(|| OrderError::UnknownAttribute(name.to_string()))?;
    let oriented: Vec<Decimal> = (0..table.len())
        .map(|r| match table.attributes[col].orientation {
            Orientation::Ascending => table.value(r, col),
            Orientation::Descending => table.value(r, col).neg(),
        })
        .collect();
    if oriented.iter().all(|v| *v == oriented[0]) {
        return Err(OrderError::DegenerateAttribute(name.to_string()));
    }
    let mut order: Vec<usize> = (0..oriented.len()).collect();
    order.sort_by(|&i, &j| oriented[i].cmp(&oriented[j]));
    let mut ranks = vec![0.0; oriented.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && oriented[order[end]] == oriented[order[start]] {
            end += 1;
        }
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    Ok(ranks)
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    cov / (vx * vy).sqrt()
}
