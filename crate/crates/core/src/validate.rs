//! Conformance checks for Resource Maps.
//!
//! Every problem becomes a [`Finding`] with a stable code; nothing here
//! returns an error. Mandatory clauses produce errors, optional or
//! stylistic ones produce warnings.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::atom;
use crate::harvest::{decode_response, fetch_following, Fetcher};
use crate::model::{graph_equal, parse_datetime, vocab, Iri, ResourceMapGraph, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

/// Finding codes. Each maps to one rule; see [`Code::rule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Code {
    #[serde(rename = "E-TYPE-REM")]
    TypeRem,
    #[serde(rename = "E-TYPE-AGG")]
    TypeAgg,
    #[serde(rename = "E-DESCRIBES")]
    Describes,
    #[serde(rename = "E-CREATOR-MISSING")]
    CreatorMissing,
    #[serde(rename = "E-MODIFIED-MISSING")]
    ModifiedMissing,
    #[serde(rename = "E-MODIFIED-MALFORMED")]
    ModifiedMalformed,
    #[serde(rename = "E-MODIFIED-REPEATED")]
    ModifiedRepeated,
    #[serde(rename = "E-AGG-EMPTY")]
    AggEmpty,
    #[serde(rename = "E-SELF-AGGREGATE")]
    SelfAggregate,
    #[serde(rename = "W-REM-AGGREGATED")]
    RemAggregated,
    #[serde(rename = "E-AGGREGATES-LITERAL")]
    AggregatesLiteral,
    #[serde(rename = "W-ORPHAN-AR-TYPE")]
    OrphanArType,
    #[serde(rename = "W-CREATED-REPEATED")]
    CreatedRepeated,
    #[serde(rename = "W-RIGHTS-REPEATED")]
    RightsRepeated,
    #[serde(rename = "E-REM-NOT-DEREFERENCEABLE")]
    RemNotDereferenceable,
    #[serde(rename = "W-REM-CONTENT-MISMATCH")]
    RemContentMismatch,
    #[serde(rename = "E-ENTRYID-IS-REM")]
    EntryIdIsRem,
    #[serde(rename = "E-FEED-IS-REM")]
    FeedIsRem,
    #[serde(rename = "E-ENTRYID-IS-REM-FEEDID")]
    EntryIdIsRemFeedId,
}

impl Code {
    pub const ALL: [Code; 19] = [
        Code::TypeRem,
        Code::TypeAgg,
        Code::Describes,
        Code::CreatorMissing,
        Code::ModifiedMissing,
        Code::ModifiedMalformed,
        Code::ModifiedRepeated,
        Code::AggEmpty,
        Code::SelfAggregate,
        Code::RemAggregated,
        Code::AggregatesLiteral,
        Code::OrphanArType,
        Code::CreatedRepeated,
        Code::RightsRepeated,
        Code::RemNotDereferenceable,
        Code::RemContentMismatch,
        Code::EntryIdIsRem,
        Code::FeedIsRem,
        Code::EntryIdIsRemFeedId,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::TypeRem => "E-TYPE-REM",
            Code::TypeAgg => "E-TYPE-AGG",
            Code::Describes => "E-DESCRIBES",
            Code::CreatorMissing => "E-CREATOR-MISSING",
            Code::ModifiedMissing => "E-MODIFIED-MISSING",
            Code::ModifiedMalformed => "E-MODIFIED-MALFORMED",
            Code::ModifiedRepeated => "E-MODIFIED-REPEATED",
            Code::AggEmpty => "E-AGG-EMPTY",
            Code::SelfAggregate => "E-SELF-AGGREGATE",
            Code::RemAggregated => "W-REM-AGGREGATED",
            Code::AggregatesLiteral => "E-AGGREGATES-LITERAL",
            Code::OrphanArType => "W-ORPHAN-AR-TYPE",
            Code::CreatedRepeated => "W-CREATED-REPEATED",
            Code::RightsRepeated => "W-RIGHTS-REPEATED",
            Code::RemNotDereferenceable => "E-REM-NOT-DEREFERENCEABLE",
            Code::RemContentMismatch => "W-REM-CONTENT-MISMATCH",
            Code::EntryIdIsRem => "E-ENTRYID-IS-REM",
            Code::FeedIsRem => "E-FEED-IS-REM",
            Code::EntryIdIsRemFeedId => "E-ENTRYID-IS-REM-FEEDID",
        }
    }

    pub fn severity(self) -> Severity {
        if self.as_str().starts_with("E-") {
            Severity::Error
        } else {
            Severity::Warning
        }
    }

    /// The rule a code enforces.
    pub fn rule(self) -> &'static str {
        match self {
            Code::TypeRem => "the Resource Map is typed ore:ResourceMap",
            Code::TypeAgg => "the Aggregation is typed ore:Aggregation",
            Code::Describes => "exactly one ore:describes triple, pointing at <rem>#aggregation",
            Code::CreatorMissing => "the Resource Map has at least one dc:creator",
            Code::ModifiedMissing => "the Resource Map has a dcterms:modified value",
            Code::ModifiedMalformed => "dcterms:modified is a dateTime literal with a timezone",
            Code::ModifiedRepeated => "dcterms:modified appears exactly once",
            Code::AggEmpty => "the Aggregation lists at least one ore:aggregates member",
            Code::SelfAggregate => "the Aggregation does not aggregate itself",
            Code::RemAggregated => "the Resource Map is listed as one of its own members",
            Code::AggregatesLiteral => "ore:aggregates objects are resources, not literals",
            Code::OrphanArType => {
                "resources typed ore:AggregatedResource are aggregated by something"
            }
            Code::CreatedRepeated => "dcterms:created appears at most once",
            Code::RightsRepeated => "dc:rights appears at most once",
            Code::RemNotDereferenceable => "a GET on the Resource Map IRI yields a serialization",
            Code::RemContentMismatch => "the served serialization matches the local graph",
            Code::EntryIdIsRem => {
                "a discovery feed entry id differs from the Resource Map it lists"
            }
            Code::FeedIsRem => "a discovery feed is not itself a Resource Map",
            Code::EntryIdIsRemFeedId => {
                "a discovery feed entry id differs from the listed Resource Map's feed id"
            }
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: Code,
    pub severity: Severity,
    pub subject: Option<Iri>,
    pub message: String,
}

impl Finding {
    pub fn new(code: Code, subject: Option<Iri>, message: impl Into<String>) -> Self {
        Finding {
            code,
            severity: code.severity(),
            subject,
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject = self.subject.as_ref().map_or("-", Iri::as_str);
        write!(
            f,
            "{} {} {} {}",
            self.severity, self.code, subject, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn new(findings: Vec<Finding>) -> Self {
        let passed = findings.iter().all(|f| f.severity != Severity::Error);
        ValidationReport { findings, passed }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
    }

    pub fn codes(&self) -> BTreeSet<Code> {
        self.findings.iter().map(|f| f.code).collect()
    }

    pub fn error_codes(&self) -> BTreeSet<Code> {
        self.errors().map(|f| f.code).collect()
    }

    /// One `SEVERITY CODE subject message` line per finding, then a verdict.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out.push_str(if self.passed { "passed\n" } else { "failed\n" });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Offline validation of a Resource Map graph.
pub fn validate(graph: &ResourceMapGraph) -> ValidationReport {
    let rem = graph.rem_uri();
    let agg = graph.aggregation_uri();
    let mut findings = Vec::new();

    let has = |s: &Iri, p: &str, o: &str| {
        graph
            .objects(s, p)
            .any(|obj| obj.as_iri().is_some_and(|i| i.as_str() == o))
    };

    if !has(rem, vocab::RDF_TYPE, vocab::ORE_RESOURCE_MAP) {
        findings.push(Finding::new(
            Code::TypeRem,
            Some(rem.clone()),
            "missing rdf:type ore:ResourceMap",
        ));
    }
    if !has(&agg, vocab::RDF_TYPE, vocab::ORE_AGGREGATION) {
        findings.push(Finding::new(
            Code::TypeAgg,
            Some(agg.clone()),
            "missing rdf:type ore:Aggregation",
        ));
    }

    let describes: Vec<&Term> = graph.objects(rem, vocab::ORE_DESCRIBES).collect();
    match describes.as_slice() {
        [] => findings.push(Finding::new(
            Code::Describes,
            Some(rem.clone()),
            "missing ore:describes",
        )),
        [only] if only.is_iri(&agg) => {}
        [other] => findings.push(Finding::new(
            Code::Describes,
            Some(rem.clone()),
            format!("ore:describes points at {other}, expected <{agg}>"),
        )),
        many => findings.push(Finding::new(
            Code::Describes,
            Some(rem.clone()),
            format!("{} ore:describes triples, expected one", many.len()),
        )),
    }

    if graph.objects(rem, vocab::DC_CREATOR).next().is_none() {
        findings.push(Finding::new(
            Code::CreatorMissing,
            Some(rem.clone()),
            "missing dc:creator",
        ));
    }

    let modified: Vec<&Term> = graph.objects(rem, vocab::DCTERMS_MODIFIED).collect();
    if modified.is_empty() {
        findings.push(Finding::new(
            Code::ModifiedMissing,
            Some(rem.clone()),
            "missing dcterms:modified",
        ));
    }
    if modified.len() > 1 {
        findings.push(Finding::new(
            Code::ModifiedRepeated,
            Some(rem.clone()),
            format!("{} dcterms:modified values, expected one", modified.len()),
        ));
    }
    for value in &modified {
        if !is_wellformed_datetime(value) {
            findings.push(Finding::new(
                Code::ModifiedMalformed,
                Some(rem.clone()),
                format!("dcterms:modified value {value} is not a dateTime"),
            ));
        }
    }

    let aggregates: Vec<&Triple> = graph
        .iter()
        .filter(|t| t.predicate.as_str() == vocab::ORE_AGGREGATES)
        .collect();
    if !aggregates.iter().any(|t| t.subject == agg) {
        findings.push(Finding::new(
            Code::AggEmpty,
            Some(agg.clone()),
            "the Aggregation has no ore:aggregates members",
        ));
    }
    for t in &aggregates {
        match &t.object {
            Term::Literal(lit) => findings.push(Finding::new(
                Code::AggregatesLiteral,
                Some(t.subject.clone()),
                format!("ore:aggregates object is the literal {lit}"),
            )),
            Term::Iri(o) if t.subject == agg && o == &agg => findings.push(Finding::new(
                Code::SelfAggregate,
                Some(agg.clone()),
                "the Aggregation lists itself as a member",
            )),
            Term::Iri(o) if t.subject == agg && o == rem => findings.push(Finding::new(
                Code::RemAggregated,
                Some(rem.clone()),
                "the Resource Map is one of the aggregated resources",
            )),
            Term::Iri(_) => {}
        }
    }

    let aggregated: BTreeSet<&Iri> = aggregates
        .iter()
        .filter_map(|t| t.object.as_iri())
        .collect();
    for t in graph.iter() {
        if t.predicate.as_str() == vocab::RDF_TYPE
            && t.object
                .as_iri()
                .is_some_and(|o| o.as_str() == vocab::ORE_AGGREGATED_RESOURCE)
            && !aggregated.contains(&t.subject)
        {
            findings.push(Finding::new(
                Code::OrphanArType,
                Some(t.subject.clone()),
                "typed ore:AggregatedResource but not aggregated",
            ));
        }
    }

    let created = graph.objects(rem, vocab::DCTERMS_CREATED).count();
    if created > 1 {
        findings.push(Finding::new(
            Code::CreatedRepeated,
            Some(rem.clone()),
            format!("{created} dcterms:created values"),
        ));
    }
    let rights = graph.objects(rem, vocab::DC_RIGHTS).count();
    if rights > 1 {
        findings.push(Finding::new(
            Code::RightsRepeated,
            Some(rem.clone()),
            format!("{rights} dc:rights values"),
        ));
    }

    ValidationReport::new(findings)
}

fn is_wellformed_datetime(value: &Term) -> bool {
    match value {
        Term::Literal(lit) => {
            lit.datatype
                .as_ref()
                .is_none_or(|dt| dt.as_str() == vocab::XSD_DATETIME)
                && parse_datetime(&lit.lexical).is_some()
        }
        Term::Iri(_) => false,
    }
}

/// Offline checks plus a dereference of the Resource Map IRI.
///
/// Issues a single GET (redirects aside). Failures surface as findings.
pub fn validate_online(graph: &ResourceMapGraph, fetcher: &dyn Fetcher) -> ValidationReport {
    let mut findings = validate(graph).findings;
    let rem = graph.rem_uri();
    match fetch_following(fetcher, rem) {
        Err(e) => findings.push(Finding::new(
            Code::RemNotDereferenceable,
            Some(rem.clone()),
            format!("GET failed: {e}"),
        )),
        Ok(fetched) if !fetched.response.is_success() => findings.push(Finding::new(
            Code::RemNotDereferenceable,
            Some(rem.clone()),
            format!("GET returned status {}", fetched.response.status),
        )),
        Ok(fetched) => match decode_response(&fetched) {
            Err(e) => findings.push(Finding::new(
                Code::RemContentMismatch,
                Some(rem.clone()),
                format!("served document does not decode: {e}"),
            )),
            Ok((served, format)) => {
                let expected = match format {
                    crate::harvest::Format::Atom => atom::atom_projection(graph),
                    crate::harvest::Format::NTriples => graph.clone(),
                };
                if !graph_equal(&served, &expected) {
                    findings.push(Finding::new(
                        Code::RemContentMismatch,
                        Some(rem.clone()),
                        "served Resource Map differs from the local graph",
                    ));
                }
            }
        },
    }
    ValidationReport::new(findings)
}
