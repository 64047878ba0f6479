//! The bundled single-covalent-bond dataset: 94 bonds with Pauling
//! electronegativity and single-bond covalent radius, 44 similarity
//! classes, and the ground-truth tables the computed system is reconciled
//! against.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::num::{mean, Decimal, NumError, Ratio};
use crate::order::{
    comparability_stats, down_set, incomparables, quotient_by_equivalence, spearman, up_set,
    AttributeSpec, AttributeTable, ElementId, OrderError, PairStats,
};
use crate::system::{
    build_periodic_system, hyperedge_chain_order, within_hyperedge_dominance, SystemError,
};

/// Shipped data files, embedded so the tools run without external paths.
pub mod data {
    /// 94 bonds: element, Pauling electronegativity, covalent radius (pm).
    pub const BONDS_CSV: &str = include_str!("../data/bonds.csv");
    /// 44 similarity classes, one per line.
    pub const CLASSES_TXT: &str = include_str!("../data/classes.txt");
    /// Down/up/incomparable ground truth for the 93 representatives.
    pub const TABLE_S1_TXT: &str = include_str!("../data/tableS1.txt");
    /// Published within-hyperedge degrees for the 26 multi-member classes.
    pub const WITHIN_DEGREES_TXT: &str = include_str!("../data/within_degrees.txt");
    /// Atomic number and mass for the classic ordering inversions.
    pub const INVERSIONS_CSV: &str = include_str!("../data/inversions.csv");
}

pub const ELECTRONEGATIVITY: &str = "electronegativity";
pub const RADIUS: &str = "radius_pm";

#[derive(Debug, Error)]
pub enum ChemError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("empty input")]
    EmptyInput,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BondRecord {
    pub element: ElementId,
    pub electronegativity: Decimal,
    pub radius_pm: Decimal,
}

fn csv_rows(text: &str, columns: &[&str]) -> Result<Vec<(usize, Vec<String>)>, ChemError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| ChemError::Parse {
            line: 1,
            msg: e.to_string(),
        })?
        .clone();
    for &col in columns {
        if !headers.iter().any(|h| h == col) {
            return Err(ChemError::MissingColumn(col.to_string()));
        }
    }
    if headers.len() != columns.len() {
        return Err(ChemError::Parse {
            line: 1,
            msg: format!("expected header `{}`", columns.join(",")),
        });
    }
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| headers.iter().position(|h| h == *c).expect("checked above"))
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ChemError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != columns.len() {
            return Err(ChemError::Parse {
                line,
                msg: format!("expected {} fields, got {}", columns.len(), record.len()),
            });
        }
        rows.push((line, idx.iter().map(|&i| record[i].to_string()).collect()));
    }
    Ok(rows)
}

fn parse_positive(field: &str, name: &str, line: usize) -> Result<Decimal, ChemError> {
    let value: Decimal = field.parse().map_err(|e: NumError| ChemError::Parse {
        line,
        msg: format!("{name}: {e}"),
    })?;
    if value <= Decimal::ZERO {
        return Err(ChemError::Parse {
            line,
            msg: format!("{name} must be positive, got {value}"),
        });
    }
    Ok(value)
}

pub fn parse_bond_records(text: &str) -> Result<Vec<BondRecord>, ChemError> {
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, fields) in csv_rows(text, &["element", ELECTRONEGATIVITY, RADIUS])? {
        let element = ElementId::new(fields[0].as_str()).map_err(|e| ChemError::Parse {
            line,
            msg: e.to_string(),
        })?;
        if !seen.insert(element.clone()) {
            return Err(ChemError::DuplicateElement(element.to_string()));
        }
        records.push(BondRecord {
            element,
            electronegativity: parse_positive(&fields[1], ELECTRONEGATIVITY, line)?,
            radius_pm: parse_positive(&fields[2], RADIUS, line)?,
        });
    }
    Ok(records)
}

/// Parses the bond CSV into an attribute table with electronegativity
/// ascending and radius descending, so smaller radii rank higher.
pub fn load_bond_dataset(text: &str) -> Result<AttributeTable, ChemError> {
    let records = parse_bond_records(text)?;
    if records.is_empty() {
        return Err(ChemError::EmptyInput);
    }
    let rows = records
        .into_iter()
        .map(|r| (r.element, vec![r.electronegativity, r.radius_pm]))
        .collect();
    Ok(AttributeTable::new(
        vec![
            AttributeSpec::ascending(ELECTRONEGATIVITY),
            AttributeSpec::descending(RADIUS),
        ],
        rows,
    )?)
}

/// Parses the inversions CSV (atomic number and atomic mass, both
/// ascending).
pub fn load_inversions(text: &str) -> Result<AttributeTable, ChemError> {
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, fields) in csv_rows(text, &["element", "z", "atomic_mass"])? {
        let element = ElementId::new(fields[0].as_str()).map_err(|e| ChemError::Parse {
            line,
            msg: e.to_string(),
        })?;
        if !seen.insert(element.clone()) {
            return Err(ChemError::DuplicateElement(element.to_string()));
        }
        let z = parse_positive(&fields[1], "z", line)?;
        let mass = parse_positive(&fields[2], "atomic_mass", line)?;
        rows.push((element, vec![z, mass]));
    }
    if rows.is_empty() {
        return Err(ChemError::EmptyInput);
    }
    Ok(AttributeTable::new(
        vec![
            AttributeSpec::ascending("z"),
            AttributeSpec::ascending("atomic_mass"),
        ],
        rows,
    )?)
}

/// Returns `max - v` per value, turning a descending attribute ascending.
pub fn reorient_attribute(values: &[Decimal]) -> Result<Vec<Decimal>, ChemError> {
    let max = *values.iter().max().ok_or(ChemError::EmptyInput)?;
    values
        .iter()
        .map(|&v| max.checked_sub(v).map_err(ChemError::from))
        .collect()
}

/// Parses the classes file: one class per line, members comma-separated,
/// `#` comments allowed, blank lines not. Classes are indexed by file
/// position and must name only the given vertices.
pub fn load_classes(text: &str, vertices: Vec<ElementId>) -> Result<Hypergraph, ChemError> {
    let vset: BTreeSet<&ElementId> = vertices.iter().collect();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim_start().starts_with('#') {
            continue;
        }
        if raw.trim().is_empty() {
            return Err(ChemError::Parse {
                line,
                msg: "empty class line".to_string(),
            });
        }
        let mut members = BTreeSet::new();
        for token in raw.split(',') {
            let member =
                ElementId::new(token.trim()).map_err(|e| ChemError::Parse {
                    line,
                    msg: e.to_string(),
                })?;
            if !vset.contains(&member) {
                return Err(ChemError::UnknownElement(member.to_string()));
            }
            members.insert(member);
        }
        edges.push((edges.len(), members));
    }
    if edges.is_empty() {
        return Err(ChemError::EmptyInput);
    }
    Ok(Hypergraph::new(vertices, edges)?)
}

/// One bond's ground-truth sets. Down and up lists include the bond
/// itself, the incomparable list does not.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BondSets {
    pub down: BTreeSet<ElementId>,
    pub up: BTreeSet<ElementId>,
    pub incomparable: BTreeSet<ElementId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WithinExpectation {
    /// Class members, as labelled in the fixture.
    pub members: BTreeSet<ElementId>,
    pub degree: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthFixture {
    pub bonds: BTreeMap<ElementId, BondSets>,
    pub within: Vec<WithinExpectation>,
}

pub fn load_ground_truth(s1: &str, within: &str) -> Result<GroundTruthFixture, ChemError> {
    Ok(GroundTruthFixture {
        bonds: parse_table_s1(s1)?,
        within: parse_within_degrees(within)?,
    })
}

const SECTION_HEADERS: [&str; 3] = ["Dominated bonds.", "Dominating bonds.", "Incomparable bonds."];

struct PendingRecord {
    element: ElementId,
    count: usize,
    items: Vec<ElementId>,
    line: usize,
}

/// Parses the three-section ground-truth table. Records have the shape
/// `X :( n ): a, b, c` where `n` is a checksum for the list length; long
/// records may wrap onto continuation lines.
pub fn parse_table_s1(text: &str) -> Result<BTreeMap<ElementId, BondSets>, ChemError> {
    let mut sections: [BTreeMap<ElementId, BTreeSet<ElementId>>; 3] = Default::default();
    let mut section: Option<usize> = None;
    let mut pending: Option<PendingRecord> = None;
    let mut last_line = 0;

    fn parse_items(text: &str, line: usize) -> Result<Vec<ElementId>, ChemError> {
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                ElementId::new(t).map_err(|e| ChemError::Parse {
                    line,
                    msg: e.to_string(),
                })
            })
            .collect()
    }

    fn close(
        sections: &mut [BTreeMap<ElementId, BTreeSet<ElementId>>; 3],
        section: usize,
        pending: Option<PendingRecord>,
    ) -> Result<(), ChemError> {
        let Some(rec) = pending else { return Ok(()) };
        if rec.items.len() != rec.count {
            return Err(ChemError::Parse {
                line: rec.line,
                msg: format!(
                    "checksum mismatch for `{}`: expected {} entries, got {}",
                    rec.element,
                    rec.count,
                    rec.items.len()
                ),
            });
        }
        let set: BTreeSet<ElementId> = rec.items.iter().cloned().collect();
        if set.len() != rec.items.len() {
            return Err(ChemError::Parse {
                line: rec.line,
                msg: format!("duplicate entry in record for `{}`", rec.element),
            });
        }
        if sections[section].insert(rec.element.clone(), set).is_some() {
            return Err(ChemError::Parse {
                line: rec.line,
                msg: format!("duplicate record for `{}`", rec.element),
            });
        }
        Ok(())
    }

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(pos) = SECTION_HEADERS.iter().position(|h| *h == trimmed) {
            if let Some(s) = section {
                close(&mut sections, s, pending.take())?;
            }
            section = Some(pos);
            continue;
        }
        let Some(s) = section else {
            return Err(ChemError::Parse {
                line,
                msg: format!("content before the first section header: `{trimmed}`"),
            });
        };
        if let Some(open) = trimmed.find(":(") {
            let element =
                ElementId::new(trimmed[..open].trim()).map_err(|e| ChemError::Parse {
                    line,
                    msg: format!("malformed record label: {e}"),
                })?;
            let rest = &trimmed[open + 2..];
            let closing = rest.find(')').ok_or_else(|| ChemError::Parse {
                line,
                msg: "unterminated checksum".to_string(),
            })?;
            let count: usize = rest[..closing].trim().parse().map_err(|_| ChemError::Parse {
                line,
                msg: format!("bad checksum `{}`", rest[..closing].trim()),
            })?;
            let tail = rest[closing + 1..].trim_start();
            let Some(items_text) = tail.strip_prefix(':') else {
                return Err(ChemError::Parse {
                    line,
                    msg: "expected `:` after the checksum".to_string(),
                });
            };
            close(&mut sections, s, pending.take())?;
            pending = Some(PendingRecord {
                element,
                count,
                items: parse_items(items_text, line)?,
                line,
            });
        } else {
            let Some(rec) = pending.as_mut() else {
                return Err(ChemError::Parse {
                    line,
                    msg: format!("continuation line without a record: `{trimmed}`"),
                });
            };
            rec.items.extend(parse_items(trimmed, line)?);
        }
    }
    if let Some(s) = section {
        close(&mut sections, s, pending.take())?;
    }
    let [down, up, incomparable] = sections;
    if section.is_none() || down.is_empty() {
        return Err(ChemError::EmptyInput);
    }
    for (name, part) in [("dominating", &up), ("incomparable", &incomparable)] {
        for element in down.keys() {
            if !part.contains_key(element) {
                return Err(ChemError::Parse {
                    line: last_line,
                    msg: format!("`{element}` has no record in the {name} section"),
                });
            }
        }
        if let Some(stray) = part.keys().find(|e| !down.contains_key(e)) {
            return Err(ChemError::Parse {
                line: last_line,
                msg: format!("`{stray}` appears in the {name} section only"),
            });
        }
    }
    let mut bonds = BTreeMap::new();
    for (element, d) in down {
        bonds.insert(
            element.clone(),
            BondSets {
                down: d,
                up: up[&element].clone(),
                incomparable: incomparable[&element].clone(),
            },
        );
    }
    Ok(bonds)
}

/// Parses the published within-class degrees. `0.66` and `0.33` stand for
/// the exact thirds they truncate.
pub fn parse_within_degrees(text: &str) -> Result<Vec<WithinExpectation>, ChemError> {
    let mut expectations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((members_text, degree_text)) = trimmed.split_once(char::is_whitespace) else {
            return Err(ChemError::Parse {
                line,
                msg: "expected `members degree`".to_string(),
            });
        };
        let mut members = BTreeSet::new();
        for token in members_text.split(',') {
            let member = ElementId::new(token).map_err(|e| ChemError::Parse {
                line,
                msg: e.to_string(),
            })?;
            if !members.insert(member) {
                return Err(ChemError::Parse {
                    line,
                    msg: format!("duplicate member `{token}`"),
                });
            }
        }
        let degree = match degree_text.trim() {
            "0.66" => Ratio::new(2, 3).expect("non-zero denominator"),
            "0.33" => Ratio::new(1, 3).expect("non-zero denominator"),
            other => {
                let d: Decimal = other.parse().map_err(|e: NumError| ChemError::Parse {
                    line,
                    msg: format!("degree: {e}"),
                })?;
                Ratio::try_from(d)?
            }
        };
        expectations.push(WithinExpectation { members, degree });
    }
    if expectations.is_empty() {
        return Err(ChemError::EmptyInput);
    }
    Ok(expectations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Down,
    Up,
    Incomparable,
}

impl std::fmt::Display for SetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SetKind::Down => "down",
            SetKind::Up => "up",
            SetKind::Incomparable => "incomparable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S1Mismatch {
    pub element: ElementId,
    pub kind: SetKind,
    /// In the fixture but not computed.
    pub missing: BTreeSet<ElementId>,
    /// Computed but not in the fixture.
    pub extra: BTreeSet<ElementId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WithinMismatch {
    /// Representative labels of the class.
    pub members: BTreeSet<ElementId>,
    /// `None` when no hyperedge carries these members.
    pub computed: Option<Ratio>,
    pub expected: Ratio,
}

/// Everything the reconciliation run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub element_count: usize,
    pub representative_count: usize,
    pub hyperedge_count: usize,
    pub stats: PairStats,
    /// Representatives checked against the ground-truth sets.
    pub s1_total: usize,
    pub s1_mismatches: Vec<S1Mismatch>,
    /// Fixture rows checked against computed within-class degrees.
    pub within_total: usize,
    pub within_mismatches: Vec<WithinMismatch>,
    /// Mean computed within-class degree over multi-member hyperedges.
    pub mean_within: Option<Ratio>,
    pub spearman: f64,
    /// Chain order per hyperedge with within-class degree 1.
    pub chain_orders: Vec<(usize, Vec<ElementId>)>,
}

impl DominanceReport {
    pub fn s1_matches(&self) -> usize {
        let flagged: BTreeSet<&ElementId> =
            self.s1_mismatches.iter().map(|m| &m.element).collect();
        self.s1_total - flagged.len().min(self.s1_total)
    }

    pub fn within_matches(&self) -> usize {
        self.within_total - self.within_mismatches.len().min(self.within_total)
    }

    pub fn reconciled(&self) -> bool {
        self.s1_mismatches.is_empty() && self.within_mismatches.is_empty()
    }
}

/// Builds the system from `table` and `classes` and reconciles it against
/// the ground-truth fixture: every representative's three sets, every
/// published within-class degree (compared after rounding both sides to
/// two decimals), plus the summary statistics.
pub fn reproduce_report(
    table: &AttributeTable,
    classes: &Hypergraph,
    fixture: &GroundTruthFixture,
) -> Result<DominanceReport, ChemError> {
    let ps = build_periodic_system(table, classes)?;
    let (_, quotient_map) = quotient_by_equivalence(table);
    let order = ps.order();

    let mut s1_mismatches = Vec::new();
    let empty = BondSets::default();
    for element in order.ground() {
        let expected = fixture.bonds.get(element).unwrap_or(&empty);
        let checks = [
            (SetKind::Down, down_set(order, element)?, &expected.down),
            (SetKind::Up, up_set(order, element)?, &expected.up),
            (
                SetKind::Incomparable,
                incomparables(order, element)?,
                &expected.incomparable,
            ),
        ];
        for (kind, computed, expected) in checks {
            if &computed != expected {
                s1_mismatches.push(S1Mismatch {
                    element: element.clone(),
                    kind,
                    missing: expected.difference(&computed).cloned().collect(),
                    extra: computed.difference(expected).cloned().collect(),
                });
            }
        }
    }
    for element in fixture.bonds.keys() {
        if order.index_of(element).is_none() {
            s1_mismatches.push(S1Mismatch {
                element: element.clone(),
                kind: SetKind::Down,
                missing: fixture.bonds[element].down.clone(),
                extra: BTreeSet::new(),
            });
        }
    }

    let mut within_mismatches = Vec::new();
    for expectation in &fixture.within {
        let mapped: BTreeSet<ElementId> = expectation
            .members
            .iter()
            .map(|m| quotient_map.get(m).unwrap_or(m).clone())
            .collect();
        let computed = match ps.hypergraph().edge_with_members(&mapped) {
            Some(edge) => Some(within_hyperedge_dominance(&ps, edge.index())?),
            None => None,
        };
        let matches =
            computed.is_some_and(|c| c.round2() == expectation.degree.round2());
        if !matches {
            within_mismatches.push(WithinMismatch {
                members: mapped,
                computed,
                expected: expectation.degree,
            });
        }
    }

    let mut degrees = Vec::new();
    let mut chain_orders = Vec::new();
    for edge in ps.hypergraph().edges() {
        if edge.len() < 2 {
            continue;
        }
        let degree = within_hyperedge_dominance(&ps, edge.index())?;
        degrees.push(degree);
        if degree == Ratio::ONE {
            let chain = hyperedge_chain_order(&ps, edge.index())?
                .expect("degree 1 means the members form a chain");
            chain_orders.push((edge.index(), chain));
        }
    }

    Ok(DominanceReport {
        element_count: table.len(),
        representative_count: order.len(),
        hyperedge_count: ps.hypergraph().edges().len(),
        stats: comparability_stats(order),
        s1_total: order.len(),
        s1_mismatches,
        within_total: fixture.within.len(),
        within_mismatches,
        mean_within: mean(&degrees),
        spearman: spearman(table, ELECTRONEGATIVITY, RADIUS)?,
        chain_orders,
    })
}
