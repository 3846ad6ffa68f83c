//! Resource Maps as named graphs.
//!
//! A [`ResourceMapGraph`] is the set of triples asserted by one Resource Map,
//! together with the Resource Map IRI that names it. The Aggregation the map
//! describes is always `<rem>#aggregation`.

mod datetime;
mod term;
pub mod vocab;

use std::collections::BTreeSet;

use thiserror::Error;

pub use datetime::{format_datetime, normalize_datetime, parse_datetime};
pub use term::{Iri, Literal, Term, Triple};

/// Fragment that turns a Resource Map IRI into its Aggregation IRI.
pub const AGGREGATION_FRAGMENT: &str = "aggregation";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid IRI {value:?}: {reason}")]
    InvalidIri { value: String, reason: String },
    #[error("Resource Map IRI {0} already has a fragment")]
    FragmentPresent(Iri),
    #[error("{0} is not an Aggregation IRI (expected a #aggregation fragment)")]
    NotAnAggregationUri(Iri),
    #[error("malformed dateTime {0:?}")]
    MalformedDateTime(String),
    #[error("creator must be an IRI or a plain literal")]
    InvalidCreator,
}

/// Aggregation IRI for a Resource Map: the map IRI plus `#aggregation`.
pub fn aggregation_uri(rem: &Iri) -> Result<Iri, ModelError> {
    if rem.has_fragment() {
        return Err(ModelError::FragmentPresent(rem.clone()));
    }
    Ok(Iri::new_unchecked(format!(
        "{}#{}",
        rem.as_str(),
        AGGREGATION_FRAGMENT
    )))
}

/// Inverse of [`aggregation_uri`].
pub fn rem_uri_from_aggregation(agg: &Iri) -> Result<Iri, ModelError> {
    match agg.as_str().split_once('#') {
        Some((rem, AGGREGATION_FRAGMENT)) => Ok(Iri::new_unchecked(rem)),
        _ => Err(ModelError::NotAnAggregationUri(agg.clone())),
    }
}

/// Builds the five mandatory triples of a Resource Map.
pub fn new_resource_map(
    rem: Iri,
    creator: Term,
    modified: Literal,
) -> Result<ResourceMapGraph, ModelError> {
    let mut graph = ResourceMapGraph::new(rem)?;
    if matches!(&creator, Term::Literal(lit) if !lit.is_plain()) {
        return Err(ModelError::InvalidCreator);
    }
    let typed_ok = modified
        .datatype
        .as_ref()
        .is_none_or(|dt| dt.as_str() == vocab::XSD_DATETIME);
    if !typed_ok || parse_datetime(&modified.lexical).is_none() {
        return Err(ModelError::MalformedDateTime(modified.lexical));
    }
    let rem = graph.rem_uri.clone();
    let agg = graph.aggregation_uri();
    graph.insert(Triple::new(
        rem.clone(),
        vocab::iri(vocab::RDF_TYPE),
        vocab::iri(vocab::ORE_RESOURCE_MAP),
    ));
    graph.insert(Triple::new(
        agg.clone(),
        vocab::iri(vocab::RDF_TYPE),
        vocab::iri(vocab::ORE_AGGREGATION),
    ));
    graph.insert(Triple::new(
        rem.clone(),
        vocab::iri(vocab::ORE_DESCRIBES),
        agg,
    ));
    graph.insert(Triple::new(
        rem.clone(),
        vocab::iri(vocab::DC_CREATOR),
        creator,
    ));
    graph.insert(Triple::new(
        rem,
        vocab::iri(vocab::DCTERMS_MODIFIED),
        modified,
    ));
    Ok(graph)
}

/// Equivalence assertions about one resource.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Equivalents {
    /// `owl:sameAs` partners, in either direction.
    pub same_as: BTreeSet<Iri>,
    /// `ore:analogousTo` objects, as asserted. Never substitutable.
    pub analogous_to: BTreeSet<Iri>,
}

/// The triples asserted by one Resource Map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceMapGraph {
    rem_uri: Iri,
    triples: BTreeSet<Triple>,
}

impl ResourceMapGraph {
    /// An empty graph named by `rem_uri`. The name must not carry a fragment.
    pub fn new(rem_uri: Iri) -> Result<Self, ModelError> {
        if rem_uri.has_fragment() {
            return Err(ModelError::FragmentPresent(rem_uri));
        }
        Ok(ResourceMapGraph {
            rem_uri,
            triples: BTreeSet::new(),
        })
    }

    pub fn rem_uri(&self) -> &Iri {
        &self.rem_uri
    }

    pub fn aggregation_uri(&self) -> Iri {
        aggregation_uri(&self.rem_uri).expect("rem_uri has no fragment")
    }

    /// Inserts a triple in canonical form. Returns `false` if it was already
    /// present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(canonical_triple(triple))
    }

    /// Returns a copy of this graph with `triple` added.
    pub fn add_triple(&self, triple: Triple) -> Self {
        let mut next = self.clone();
        next.insert(triple);
        next
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(&canonical_triple(triple.clone()))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(&canonical_triple(triple.clone()))
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// All triples matching every bound position.
    pub fn query(
        &self,
        subject: Option<&Iri>,
        predicate: Option<&Iri>,
        object: Option<&Term>,
    ) -> Vec<&Triple> {
        self.triples
            .iter()
            .filter(|t| subject.is_none_or(|s| &t.subject == s))
            .filter(|t| predicate.is_none_or(|p| &t.predicate == p))
            .filter(|t| object.is_none_or(|o| &t.object == o))
            .collect()
    }

    /// Objects of `<subject> <predicate> ?o` triples.
    pub fn objects<'a>(
        &'a self,
        subject: &'a Iri,
        predicate: &'a str,
    ) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples
            .iter()
            .filter(move |t| &t.subject == subject && t.predicate.as_str() == predicate)
            .map(|t| &t.object)
    }

    /// IRIs the Aggregation lists through `ore:aggregates`. Literal objects
    /// are skipped here and reported by the validator.
    pub fn aggregated_resources(&self) -> BTreeSet<Iri> {
        let agg = self.aggregation_uri();
        self.objects(&agg, vocab::ORE_AGGREGATES)
            .filter_map(Term::as_iri)
            .cloned()
            .collect()
    }

    /// `owl:sameAs` and `ore:analogousTo` assertions about `resource`.
    pub fn equivalents(&self, resource: &Iri) -> Equivalents {
        let mut out = Equivalents::default();
        for t in &self.triples {
            match t.predicate.as_str() {
                vocab::OWL_SAME_AS => {
                    if &t.subject == resource {
                        if let Term::Iri(o) = &t.object {
                            out.same_as.insert(o.clone());
                        }
                    } else if t.object.is_iri(resource) {
                        out.same_as.insert(t.subject.clone());
                    }
                }
                vocab::ORE_ANALOGOUS_TO if &t.subject == resource => {
                    if let Term::Iri(o) = &t.object {
                        out.analogous_to.insert(o.clone());
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Consumes the graph, returning its name and triples.
    pub fn into_parts(self) -> (Iri, BTreeSet<Triple>) {
        (self.rem_uri, self.triples)
    }
}

impl Extend<Triple> for ResourceMapGraph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

/// Graph equality: same name and same triples after canonicalization.
pub fn graph_equal(a: &ResourceMapGraph, b: &ResourceMapGraph) -> bool {
    if a.rem_uri != b.rem_uri || a.triples.len() != b.triples.len() {
        return false;
    }
    // Triples are canonicalized on insert, so set equality is enough.
    a.triples == b.triples
}

/// Predicates whose object is a point in time.
pub fn is_datetime_predicate(predicate: &Iri) -> bool {
    matches!(
        predicate.as_str(),
        vocab::DCTERMS_MODIFIED | vocab::DCTERMS_CREATED
    )
}

/// Canonical form of a triple: Dublin Core namespace spelling unified and
/// dateTime values normalized to UTC.
///
/// In `dcterms:modified` / `dcterms:created` positions a well-formed
/// dateTime becomes a plain literal; elsewhere an `xsd:dateTime` literal keeps
/// its datatype and only the lexical form changes.
pub fn canonical_triple(triple: Triple) -> Triple {
    let predicate = vocab::canonical_predicate(triple.predicate);
    let object = match triple.object {
        Term::Literal(lit) => Term::Literal(canonical_literal(&predicate, lit)),
        other => other,
    };
    Triple {
        subject: triple.subject,
        predicate,
        object,
    }
}

fn canonical_literal(predicate: &Iri, lit: Literal) -> Literal {
    let xsd_typed = lit
        .datatype
        .as_ref()
        .is_some_and(|dt| dt.as_str() == vocab::XSD_DATETIME);
    if is_datetime_predicate(predicate) && (lit.is_plain() || xsd_typed) {
        if let Some(norm) = normalize_datetime(&lit.lexical) {
            return Literal::plain(norm);
        }
    } else if xsd_typed {
        if let Some(norm) = normalize_datetime(&lit.lexical) {
            return Literal {
                lexical: norm,
                datatype: lit.datatype,
            };
        }
    }
    lit
}
