//! Atom serialization of Resource Maps.
//!
//! A Resource Map maps to an Atom feed and each aggregated resource to an
//! entry:
//!
//! | Model                                | Atom                                        |
//! |--------------------------------------|---------------------------------------------|
//! | Resource Map IRI                     | `/feed/link[@rel="self"]`                   |
//! | Aggregation IRI                      | `/feed/link[@rel="describes"]`              |
//! | `dc:creator` (IRI / plain literal)   | `/feed/author/uri` / `/feed/author/name`    |
//! | `dcterms:modified`                   | `/feed/updated`                             |
//! | `ore:aggregates <r>`                 | `/feed/entry/link[@rel="alternate"]`        |
//! | other triples about the map          | feed-level foreign element                  |
//! | other triples about the Aggregation  | feed-level foreign element with `rdf:about` |
//! | triples about an aggregated resource | foreign element inside its entry            |
//!
//! Foreign elements are named by the predicate (namespace + local name). An
//! IRI object is written as `rdf:resource`, a literal as element text with an
//! optional `rdf:datatype`. Feed and entry ids and titles carry no model
//! information and are minted by an [`AtomProfile`].
//!
//! Anything else cannot be expressed and is reported back as dropped: triples
//! whose subject is not the map, the Aggregation or a member, and triples
//! whose object is a member (other than the `ore:aggregates` links
//! themselves).

mod profile;
mod read;
mod write;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{parse_datetime, vocab, Iri, ModelError, ResourceMapGraph, Term, Triple};
use crate::validate::ValidationReport;
use crate::xml::{is_ncname, is_xml_text, ATOM_NS, XMLNS_NS, XML_NS};

pub use profile::AtomProfile;
pub(crate) use read::{alternate_href, link_href};
pub use read::{decode_atom, feed_id, from_atom, AtomDecoded};
pub use write::to_atom;

pub const MEDIA_TYPE: &str = "application/atom+xml";
/// Category scheme marking a feed as a Resource Map.
pub const ORE_CATEGORY_SCHEME: &str = "http://www.openarchives.org/ore/terms";
pub const ORE_CATEGORY_LABEL: &str = "Resource Map";
/// Link relation from the feed to the Aggregation.
pub const REL_DESCRIBES: &str = "describes";

#[derive(Debug, Error)]
pub enum AtomError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("document is not an Atom feed")]
    NotAFeed,
    #[error("feed has no link with rel=\"self\"")]
    MissingSelfLink,
    #[error("feed has no link with rel=\"describes\"")]
    MissingDescribesLink,
    #[error("describes link {describes} is not the self link {rem} plus #aggregation")]
    BindingViolation { rem: String, describes: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("graph does not validate: {}", .0.error_codes().iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", "))]
    ValidationFailed(ValidationReport),
}

/// Serialized feed plus the triples that could not be expressed.
#[derive(Debug, Clone)]
pub struct AtomOutput {
    pub bytes: Vec<u8>,
    pub dropped: Vec<Triple>,
}

/// Where a triple goes in the feed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Slot {
    /// Implied by feed structure (`rdf:type` of map and Aggregation,
    /// `ore:describes`).
    Structural,
    Author,
    Updated,
    /// Feed-level foreign element; `about` is set for Aggregation subjects.
    FeedExtension {
        about: Option<Iri>,
    },
    Member,
    EntryExtension,
}

/// Assigns each triple a slot, or `None` when Atom cannot carry it.
pub(crate) fn placement(graph: &ResourceMapGraph) -> Vec<(&Triple, Option<Slot>)> {
    let rem = graph.rem_uri();
    let agg = graph.aggregation_uri();
    let members = graph.aggregated_resources();
    let modified_count = graph.objects(rem, vocab::DCTERMS_MODIFIED).count();
    graph
        .iter()
        .map(|t| {
            let slot = slot_for(t, rem, &agg, &members, modified_count);
            (t, slot)
        })
        .collect()
}

fn slot_for(
    t: &Triple,
    rem: &Iri,
    agg: &Iri,
    members: &BTreeSet<Iri>,
    modified_count: usize,
) -> Option<Slot> {
    let p = t.predicate.as_str();
    if &t.subject == agg && p == vocab::ORE_AGGREGATES && t.object.as_iri().is_some() {
        return Some(Slot::Member);
    }
    if &t.subject == rem {
        match (p, &t.object) {
            (vocab::RDF_TYPE, Term::Iri(o)) if o == vocab::ORE_RESOURCE_MAP => {
                return Some(Slot::Structural)
            }
            (vocab::ORE_DESCRIBES, Term::Iri(o)) if o == agg => return Some(Slot::Structural),
            (vocab::DC_CREATOR, Term::Iri(_)) => return Some(Slot::Author),
            (vocab::DC_CREATOR, Term::Literal(l)) if l.is_plain() && is_xml_text(&l.lexical) => {
                return Some(Slot::Author)
            }
            (vocab::DCTERMS_MODIFIED, Term::Literal(l))
                if modified_count == 1 && l.is_plain() && parse_datetime(&l.lexical).is_some() =>
            {
                return Some(Slot::Updated)
            }
            _ => {}
        }
    }
    if t.object.as_iri().is_some_and(|o| members.contains(o)) {
        return None;
    }
    if &t.subject == rem {
        return extension_ok(t).then_some(Slot::FeedExtension { about: None });
    }
    if &t.subject == agg {
        if p == vocab::RDF_TYPE && t.object.is_iri(&vocab::iri(vocab::ORE_AGGREGATION)) {
            return Some(Slot::Structural);
        }
        return extension_ok(t).then(|| Slot::FeedExtension {
            about: Some(agg.clone()),
        });
    }
    if members.contains(&t.subject) {
        return extension_ok(t).then_some(Slot::EntryExtension);
    }
    None
}

/// Whether a triple can be written as a foreign element.
fn extension_ok(t: &Triple) -> bool {
    let Some((ns, _)) = split_predicate(&t.predicate) else {
        return false;
    };
    if matches!(ns, ATOM_NS | XML_NS | XMLNS_NS) {
        return false;
    }
    match &t.object {
        Term::Iri(_) => true,
        Term::Literal(l) => is_xml_text(&l.lexical),
    }
}

/// Splits a predicate IRI into an XML namespace and local name.
pub(crate) fn split_predicate(predicate: &Iri) -> Option<(&str, &str)> {
    let s = predicate.as_str();
    let cut = s.rfind(['#', '/', ':'])? + 1;
    let (ns, local) = s.split_at(cut);
    (is_ncname(local) && !ns.is_empty() && !ns.ends_with("://")).then_some((ns, local))
}

/// The part of `graph` an Atom round trip preserves.
pub fn atom_projection(graph: &ResourceMapGraph) -> ResourceMapGraph {
    let mut out = ResourceMapGraph::new(graph.rem_uri().clone()).expect("valid name");
    for (t, slot) in placement(graph) {
        if slot.is_some() {
            out.insert(t.clone());
        }
    }
    out
}

/// Triples an Atom serialization would drop.
pub fn atom_dropped(graph: &ResourceMapGraph) -> Vec<Triple> {
    placement(graph)
        .into_iter()
        .filter(|(_, slot)| slot.is_none())
        .map(|(t, _)| t.clone())
        .collect()
}
