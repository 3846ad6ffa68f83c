use roxmltree::Node;

use super::{AtomError, REL_DESCRIBES};
use crate::model::{aggregation_uri, vocab, Iri, Literal, ResourceMapGraph, Term, Triple};
use crate::xml::{atom_children, base_for, is_atom, parse_document, resolve, text_of, ATOM_NS};

/// A decoded feed plus notes about content that produced no triples.
#[derive(Debug, Clone)]
pub struct AtomDecoded {
    pub graph: ResourceMapGraph,
    pub warnings: Vec<String>,
}

/// Decodes an Atom Resource Map. Relative references must be resolvable
/// against `xml:base` attributes.
pub fn from_atom(doc: &[u8]) -> Result<ResourceMapGraph, AtomError> {
    decode_atom(doc, None).map(|d| d.graph)
}

/// Decodes an Atom Resource Map, resolving relative references against
/// `xml:base` and then `base` (usually the IRI the document came from).
pub fn decode_atom(doc: &[u8], base: Option<&Iri>) -> Result<AtomDecoded, AtomError> {
    let document = parse_document(doc).map_err(AtomError::MalformedXml)?;
    let feed = document.root_element();
    if !is_atom(&feed, "feed") {
        return Err(AtomError::NotAFeed);
    }
    let feed_base = base_for(&feed, base);
    let mut warnings = Vec::new();

    let self_href = link_href(feed, "self").ok_or(AtomError::MissingSelfLink)?;
    let describes_href = link_href(feed, REL_DESCRIBES).ok_or(AtomError::MissingDescribesLink)?;
    let rem = resolve(feed_base.as_ref(), self_href)?;
    let agg = resolve(feed_base.as_ref(), describes_href)?;
    let expected = aggregation_uri(&rem)?;
    if agg != expected {
        return Err(AtomError::BindingViolation {
            rem: rem.into_string(),
            describes: agg.into_string(),
        });
    }

    let mut graph = ResourceMapGraph::new(rem.clone())?;
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
        agg.clone(),
    ));

    for author in atom_children(feed, "author") {
        let base = base_for(&author, base);
        let uri = atom_children(author, "uri").next();
        let name = atom_children(author, "name").next();
        let creator = match (uri, name) {
            (Some(uri), _) => match resolve(base.as_ref(), &text_of(&uri)) {
                Ok(iri) => Some(Term::Iri(iri)),
                Err(e) => {
                    warnings.push(format!("author uri ignored: {e}"));
                    None
                }
            },
            (None, Some(name)) => Some(Term::Literal(Literal::plain(text_of(&name)))),
            (None, None) => {
                warnings.push("author without name or uri ignored".to_string());
                None
            }
        };
        if let Some(creator) = creator {
            graph.insert(Triple::new(
                rem.clone(),
                vocab::iri(vocab::DC_CREATOR),
                creator,
            ));
        }
    }

    for updated in atom_children(feed, "updated") {
        graph.insert(Triple::new(
            rem.clone(),
            vocab::iri(vocab::DCTERMS_MODIFIED),
            Literal::plain(text_of(&updated).trim()),
        ));
    }

    for child in feed.children().filter(|c| is_foreign(c)) {
        if let Some(t) = extension_triple(child, &rem, base, &mut warnings) {
            graph.insert(t);
        }
    }

    for entry in atom_children(feed, "entry") {
        let entry_base = base_for(&entry, base);
        let Some(href) = alternate_href(entry) else {
            warnings.push("entry without an alternate link ignored".to_string());
            continue;
        };
        let member = match resolve(entry_base.as_ref(), href) {
            Ok(iri) => iri,
            Err(e) => {
                warnings.push(format!("entry ignored: {e}"));
                continue;
            }
        };
        graph.insert(Triple::new(
            agg.clone(),
            vocab::iri(vocab::ORE_AGGREGATES),
            member.clone(),
        ));
        for child in entry.children().filter(|c| is_foreign(c)) {
            if let Some(t) = extension_triple(child, &member, base, &mut warnings) {
                graph.insert(t);
            }
        }
    }

    Ok(AtomDecoded { graph, warnings })
}

/// The `/feed/id` text of an Atom document, if it has one.
pub fn feed_id(doc: &[u8]) -> Option<String> {
    let document = parse_document(doc).ok()?;
    let feed = document.root_element();
    if !is_atom(&feed, "feed") {
        return None;
    }
    let id = atom_children(feed, "id")
        .next()
        .map(|id| text_of(&id).trim().to_string());
    id
}

/// `href` of the first child link whose rel matches. A rel given as the ORE
/// term IRI is accepted for `describes`.
pub(crate) fn link_href<'a>(node: Node<'a, '_>, rel: &str) -> Option<&'a str> {
    atom_children(node, "link")
        .find(|l| {
            l.attribute("rel").is_some_and(|r| {
                let r = r.trim();
                r == rel || (rel == REL_DESCRIBES && r == vocab::ORE_DESCRIBES)
            })
        })
        .and_then(|l| l.attribute("href"))
}

/// Atom treats a link without `rel` as `alternate`.
pub(crate) fn alternate_href<'a>(entry: Node<'a, '_>) -> Option<&'a str> {
    atom_children(entry, "link")
        .find(|l| l.attribute("rel").is_none_or(|r| r.trim() == "alternate"))
        .and_then(|l| l.attribute("href"))
}

fn is_foreign(node: &Node<'_, '_>) -> bool {
    node.is_element() && node.tag_name().namespace() != Some(ATOM_NS)
}

fn extension_triple(
    element: Node<'_, '_>,
    default_subject: &Iri,
    doc_base: Option<&Iri>,
    warnings: &mut Vec<String>,
) -> Option<Triple> {
    let tag = element.tag_name();
    let Some(ns) = tag.namespace() else {
        warnings.push(format!("unqualified element <{}> ignored", tag.name()));
        return None;
    };
    let predicate = match Iri::parse(format!("{ns}{}", tag.name())) {
        Ok(p) => p,
        Err(_) => {
            warnings.push(format!(
                "element {{{ns}}}{} does not name a predicate",
                tag.name()
            ));
            return None;
        }
    };
    let base = base_for(&element, doc_base);
    let subject = match element.attribute((vocab::RDF, "about")) {
        Some(about) => match resolve(base.as_ref(), about) {
            Ok(s) => s,
            Err(e) => {
                warnings.push(format!("<{predicate}> ignored: {e}"));
                return None;
            }
        },
        None => default_subject.clone(),
    };
    if element.children().any(|c| c.is_element()) {
        warnings.push(format!("<{predicate}> has element content and was ignored"));
        return None;
    }
    let object = match element.attribute((vocab::RDF, "resource")) {
        Some(resource) => match resolve(base.as_ref(), resource) {
            Ok(o) => Term::Iri(o),
            Err(e) => {
                warnings.push(format!("<{predicate}> ignored: {e}"));
                return None;
            }
        },
        None => {
            let datatype = match element.attribute((vocab::RDF, "datatype")) {
                Some(dt) => match Iri::parse(dt.trim()) {
                    Ok(dt) => Some(dt),
                    Err(e) => {
                        warnings.push(format!("<{predicate}> ignored: {e}"));
                        return None;
                    }
                },
                None => None,
            };
            Term::Literal(Literal {
                lexical: text_of(&element),
                datatype,
            })
        }
    };
    Some(Triple::new(subject, predicate, object))
}
