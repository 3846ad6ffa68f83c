//! ORE vocabulary: namespace prefixes and the terms used by the toolkit.
//!
//! Namespace IRIs are the ones the ORE alpha documents print. Note the Dublin
//! Core elements namespace is spelled `element/1.1/` there; the conventional
//! `elements/1.1/` spelling is accepted on input and rewritten to this form.

use super::Iri;

pub const DC: &str = "http://purl.org/dc/element/1.1/";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const ORE: &str = "http://www.openarchives.org/ore/terms/";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

/// Dublin Core elements namespace as usually deployed.
pub const DC_ELEMENTS_ALT: &str = "http://purl.org/dc/elements/1.1/";

pub const XSD_DATETIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

pub const ORE_RESOURCE_MAP: &str = "http://www.openarchives.org/ore/terms/ResourceMap";
pub const ORE_AGGREGATION: &str = "http://www.openarchives.org/ore/terms/Aggregation";
pub const ORE_AGGREGATED_RESOURCE: &str =
    "http://www.openarchives.org/ore/terms/AggregatedResource";

pub const ORE_DESCRIBES: &str = "http://www.openarchives.org/ore/terms/describes";
pub const ORE_AGGREGATES: &str = "http://www.openarchives.org/ore/terms/aggregates";
pub const ORE_IS_AGGREGATED_BY: &str = "http://www.openarchives.org/ore/terms/isAggregatedBy";
pub const ORE_ALSO_IN_RESOURCE_MAP: &str =
    "http://www.openarchives.org/ore/terms/alsoInResourceMap";
pub const ORE_FROM_RESOURCE_MAP: &str = "http://www.openarchives.org/ore/terms/fromResourceMap";
pub const ORE_ANALOGOUS_TO: &str = "http://www.openarchives.org/ore/terms/analogousTo";
pub const OWL_SAME_AS: &str = "http://www.w3.org/2002/07/owl#sameAs";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const DC_CREATOR: &str = "http://purl.org/dc/element/1.1/creator";
pub const DC_RIGHTS: &str = "http://purl.org/dc/element/1.1/rights";
pub const DCTERMS_MODIFIED: &str = "http://purl.org/dc/terms/modified";
pub const DCTERMS_CREATED: &str = "http://purl.org/dc/terms/created";

/// Prefix table in the order the ORE documents list it.
pub const PREFIXES: [(&str, &str, &str); 5] = [
    ("dc", DC, "Dublin Core elements"),
    ("dcterms", DCTERMS, "Dublin Core terms"),
    ("ore", ORE, "ORE vocabulary terms"),
    ("owl", OWL, "OWL vocabulary terms"),
    ("rdf", RDF, "RDF vocabulary terms"),
];

/// Every class and predicate constant, with its compact name.
pub const TERMS: [(&str, &str); 15] = [
    ("ore:ResourceMap", ORE_RESOURCE_MAP),
    ("ore:Aggregation", ORE_AGGREGATION),
    ("ore:AggregatedResource", ORE_AGGREGATED_RESOURCE),
    ("ore:describes", ORE_DESCRIBES),
    ("ore:aggregates", ORE_AGGREGATES),
    ("ore:isAggregatedBy", ORE_IS_AGGREGATED_BY),
    ("ore:alsoInResourceMap", ORE_ALSO_IN_RESOURCE_MAP),
    ("ore:fromResourceMap", ORE_FROM_RESOURCE_MAP),
    ("ore:analogousTo", ORE_ANALOGOUS_TO),
    ("owl:sameAs", OWL_SAME_AS),
    ("rdf:type", RDF_TYPE),
    ("dc:creator", DC_CREATOR),
    ("dc:rights", DC_RIGHTS),
    ("dcterms:modified", DCTERMS_MODIFIED),
    ("dcterms:created", DCTERMS_CREATED),
];

/// Returns a vocabulary constant as an [`Iri`].
pub fn iri(constant: &'static str) -> Iri {
    Iri::new_unchecked(constant)
}

/// Known prefix for a namespace, if it is one of the five in [`PREFIXES`].
pub fn prefix_for(namespace: &str) -> Option<&'static str> {
    PREFIXES
        .iter()
        .find(|(_, ns, _)| *ns == namespace)
        .map(|(p, _, _)| *p)
}

/// Rewrites `elements/1.1/` Dublin Core IRIs to the `element/1.1/` form.
pub(crate) fn canonical_predicate(predicate: Iri) -> Iri {
    match predicate.as_str().strip_prefix(DC_ELEMENTS_ALT) {
        Some(local) => Iri::new_unchecked(format!("{DC}{local}")),
        None => predicate,
    }
}

/// Markdown reference table for the namespaces and terms.
pub fn markdown_table() -> String {
    let mut out = String::from("# ORE vocabulary\n\n");
    out.push_str("## Namespace prefixes\n\n");
    out.push_str("| Prefix | Namespace URI | Description |\n|---|---|---|\n");
    for (prefix, ns, desc) in PREFIXES {
        out.push_str(&format!("| {prefix} | `{ns}` | {desc} |\n"));
    }
    out.push_str("\nThe Dublin Core namespace is emitted as printed above; ");
    out.push_str(&format!("`{DC_ELEMENTS_ALT}` is accepted on input.\n"));
    out.push_str("\n## Terms\n\n| Term | IRI |\n|---|---|\n");
    for (name, iri) in TERMS {
        out.push_str(&format!("| {name} | `{iri}` |\n"));
    }
    out
}
