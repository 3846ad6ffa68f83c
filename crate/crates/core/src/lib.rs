//! Toolkit for OAI-ORE Resource Maps: a named-graph model of Aggregations,
//! validation against the ORE rules, Atom and N-Triples codecs with a
//! round-trip checker, Resource Map discovery, and a harvester that
//! dereferences, classifies, traverses and archives Aggregations.

pub mod atom;
pub mod discovery;
pub mod harvest;
pub mod model;
pub mod ntriples;
pub mod roundtrip;
pub mod validate;
mod xml;

pub use model::{Iri, Literal, ResourceMapGraph, Term, Triple};
