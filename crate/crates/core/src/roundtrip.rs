//! Round-trip fidelity checking over any codec.
//!
//! A codec may lose information the first time a model passes through it,
//! but from the second trip on the model must come back unchanged. Ids,
//! titles and other serialization-only additions never reach the parsed
//! model, so they cannot break this.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::atom::{self, AtomProfile};
use crate::model::{graph_equal, ResourceMapGraph, Triple};
use crate::ntriples;

/// A serialization that can be written and read back.
pub trait Codec {
    fn name(&self) -> &'static str;
    /// Serialized bytes plus the triples the codec says it could not carry.
    fn serialize(&self, graph: &ResourceMapGraph) -> Result<(Vec<u8>, Vec<Triple>), String>;
    fn parse(&self, bytes: &[u8]) -> Result<ResourceMapGraph, String>;
}

#[derive(Debug, Clone, Default)]
pub struct AtomCodec {
    pub profile: AtomProfile,
}

impl Codec for AtomCodec {
    fn name(&self) -> &'static str {
        "atom"
    }

    fn serialize(&self, graph: &ResourceMapGraph) -> Result<(Vec<u8>, Vec<Triple>), String> {
        atom::to_atom(graph, &self.profile)
            .map(|out| (out.bytes, out.dropped))
            .map_err(|e| e.to_string())
    }

    fn parse(&self, bytes: &[u8]) -> Result<ResourceMapGraph, String> {
        atom::from_atom(bytes).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NTriplesCodec;

impl Codec for NTriplesCodec {
    fn name(&self) -> &'static str {
        "ntriples"
    }

    fn serialize(&self, graph: &ResourceMapGraph) -> Result<(Vec<u8>, Vec<Triple>), String> {
        Ok((ntriples::to_ntriples(graph).into_bytes(), Vec::new()))
    }

    fn parse(&self, bytes: &[u8]) -> Result<ResourceMapGraph, String> {
        let text = std::str::from_utf8(bytes).map_err(|e| e.to_string())?;
        ntriples::from_ntriples(text, None).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Serialize,
    Parse,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Serialize => "serialize",
            Stage::Parse => "parse",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("trip {trip}: {stage} failed: {message}")]
pub struct RoundTripError {
    pub trip: usize,
    pub stage: Stage,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripReport {
    pub codec: &'static str,
    /// `g \ g1`: what the first trip lost.
    pub first_trip_dropped: BTreeSet<Triple>,
    /// What the codec reported as dropped while serializing `g`.
    pub declared_dropped: BTreeSet<Triple>,
    /// `g1 \ g`: anything the first trip added.
    pub first_trip_added: BTreeSet<Triple>,
    /// `g1 == g2`.
    pub stable_after_second: bool,
    /// `g2 == g3`.
    pub stable_after_third: bool,
    pub trips_executed: usize,
}

impl RoundTripReport {
    pub fn loss_matches_declaration(&self) -> bool {
        self.first_trip_dropped == self.declared_dropped
    }

    /// Stable from the second trip on, nothing invented, loss as declared.
    pub fn passed(&self) -> bool {
        self.stable_after_second
            && self.stable_after_third
            && self.first_trip_added.is_empty()
            && self.loss_matches_declaration()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "codec\t{}", self.codec).unwrap();
        writeln!(out, "trips\t{}", self.trips_executed).unwrap();
        writeln!(out, "dropped\t{}", self.first_trip_dropped.len()).unwrap();
        for t in &self.first_trip_dropped {
            writeln!(out, "  - {t}").unwrap();
        }
        writeln!(out, "added\t{}", self.first_trip_added.len()).unwrap();
        for t in &self.first_trip_added {
            writeln!(out, "  + {t}").unwrap();
        }
        writeln!(out, "declared\t{}", yes_no(self.loss_matches_declaration())).unwrap();
        writeln!(
            out,
            "stable\t{}",
            yes_no(self.stable_after_second && self.stable_after_third)
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Json<'a> {
            codec: &'a str,
            trips_executed: usize,
            first_trip_dropped: Vec<String>,
            declared_dropped: Vec<String>,
            first_trip_added: Vec<String>,
            loss_matches_declaration: bool,
            stable_after_second: bool,
            stable_after_third: bool,
        }
        let lines = |set: &BTreeSet<Triple>| set.iter().map(Triple::to_string).collect();
        serde_json::to_string_pretty(&Json {
            codec: self.codec,
            trips_executed: self.trips_executed,
            first_trip_dropped: lines(&self.first_trip_dropped),
            declared_dropped: lines(&self.declared_dropped),
            first_trip_added: lines(&self.first_trip_added),
            loss_matches_declaration: self.loss_matches_declaration(),
            stable_after_second: self.stable_after_second,
            stable_after_third: self.stable_after_third,
        })
        .expect("plain data serializes")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs three serialize/parse trips and compares the models.
pub fn fixpoint_check(
    graph: &ResourceMapGraph,
    codec: &dyn Codec,
) -> Result<RoundTripReport, RoundTripError> {
    let trip = |n: usize,
                g: &ResourceMapGraph|
     -> Result<(ResourceMapGraph, Vec<Triple>), RoundTripError> {
        let (bytes, dropped) = codec.serialize(g).map_err(|message| RoundTripError {
            trip: n,
            stage: Stage::Serialize,
            message,
        })?;
        let parsed = codec.parse(&bytes).map_err(|message| RoundTripError {
            trip: n,
            stage: Stage::Parse,
            message,
        })?;
        Ok((parsed, dropped))
    };
    let (g1, declared) = trip(1, graph)?;
    let (g2, _) = trip(2, &g1)?;
    let (g3, _) = trip(3, &g2)?;
    Ok(RoundTripReport {
        codec: codec.name(),
        first_trip_dropped: graph.triples().difference(g1.triples()).cloned().collect(),
        declared_dropped: declared.into_iter().collect(),
        first_trip_added: g1.triples().difference(graph.triples()).cloned().collect(),
        stable_after_second: graph_equal(&g1, &g2),
        stable_after_third: graph_equal(&g2, &g3),
        trips_executed: 3,
    })
}
