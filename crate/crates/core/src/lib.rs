//! Periodic systems as ordered hypergraphs: a ground set of elements
//! carrying both a family of similarity classes (a hypergraph) and a
//! partial order induced by oriented attributes. The crate builds such
//! systems from attribute tables, measures dominance at the element,
//! within-class and between-class levels, relates systems to one another,
//! and reconciles the bundled chemical dataset against its published
//! ground truth.

pub mod chem;
pub mod dot;
pub mod hypergraph;
pub mod num;
pub mod order;
pub mod system;
