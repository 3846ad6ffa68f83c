use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{placement, split_predicate, AtomError, AtomOutput, AtomProfile, Slot};
use super::{MEDIA_TYPE, ORE_CATEGORY_LABEL, ORE_CATEGORY_SCHEME, REL_DESCRIBES};
use crate::model::{vocab, Iri, ResourceMapGraph, Term, Triple};
use crate::validate::validate;
use crate::xml::{escape_attr, escape_text, ATOM_NS};

/// Serializes a valid Resource Map as an Atom feed.
///
/// Output is deterministic: entries are sorted by aggregated resource IRI and
/// foreign elements by predicate and object. Triples Atom cannot carry are
/// returned in [`AtomOutput::dropped`].
pub fn to_atom(graph: &ResourceMapGraph, profile: &AtomProfile) -> Result<AtomOutput, AtomError> {
    let report = validate(graph);
    if !report.passed {
        return Err(AtomError::ValidationFailed(report));
    }

    let rem = graph.rem_uri();
    let agg = graph.aggregation_uri();
    let mut authors: Vec<&Term> = Vec::new();
    let mut updated: Option<&str> = None;
    let mut feed_ext: Vec<(Option<&Iri>, &Triple)> = Vec::new();
    let mut members: BTreeMap<&Iri, Vec<&Triple>> = BTreeMap::new();
    let mut dropped = Vec::new();

    let placed = placement(graph);
    for (t, slot) in &placed {
        match slot {
            None => dropped.push((*t).clone()),
            Some(Slot::Structural) => {}
            Some(Slot::Author) => authors.push(&t.object),
            Some(Slot::Updated) => {
                updated = t.object.as_literal().map(|l| l.lexical.as_str());
            }
            Some(Slot::FeedExtension { about }) => feed_ext.push((about.as_ref(), t)),
            Some(Slot::Member) => {
                if let Term::Iri(member) = &t.object {
                    members.entry(member).or_default();
                }
            }
            Some(Slot::EntryExtension) => {}
        }
    }
    for (t, slot) in &placed {
        if slot == &Some(Slot::EntryExtension) {
            if let Some(list) = members.get_mut(&t.subject) {
                list.push(t);
            }
        }
    }
    let updated = updated.expect("validated graph has one dcterms:modified");

    // Minted ids must not collide with any IRI in the model.
    let model_iris: BTreeSet<&str> = graph
        .iter()
        .flat_map(|t| {
            [Some(&t.subject), Some(&t.predicate), t.object.as_iri()]
                .into_iter()
                .flatten()
        })
        .map(Iri::as_str)
        .chain([rem.as_str(), agg.as_str()])
        .collect();
    let unique = |minted: Iri| {
        let mut text = minted.into_string();
        while model_iris.contains(text.as_str()) {
            text.push('~');
        }
        text
    };

    let namespaces = namespace_table(
        feed_ext
            .iter()
            .map(|(_, t)| *t)
            .chain(members.values().flatten().copied()),
    );

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    write!(out, "<feed xmlns=\"{ATOM_NS}\"").unwrap();
    for (ns, prefix) in namespaces.ordered() {
        write!(out, " xmlns:{prefix}=\"{}\"", escape_attr(ns)).unwrap();
    }
    out.push_str(">\n");
    writeln!(
        out,
        "  <id>{}</id>",
        escape_text(&unique(profile.feed_id(rem)))
    )
    .unwrap();
    writeln!(
        out,
        "  <link href=\"{}\" rel=\"self\" type=\"{MEDIA_TYPE}\"/>",
        escape_attr(rem.as_str())
    )
    .unwrap();
    writeln!(
        out,
        "  <category scheme=\"{ORE_CATEGORY_SCHEME}\" term=\"{}\" label=\"{ORE_CATEGORY_LABEL}\"/>",
        vocab::ORE_RESOURCE_MAP
    )
    .unwrap();
    writeln!(
        out,
        "  <link rel=\"{REL_DESCRIBES}\" href=\"{}\"/>",
        escape_attr(agg.as_str())
    )
    .unwrap();
    writeln!(
        out,
        "  <title>{}</title>",
        escape_text(&profile.feed_title(rem))
    )
    .unwrap();
    authors.sort();
    for author in authors {
        match author {
            Term::Iri(uri) => writeln!(
                out,
                "  <author>\n    <uri>{}</uri>\n  </author>",
                escape_text(uri.as_str())
            )
            .unwrap(),
            Term::Literal(name) => writeln!(
                out,
                "  <author>\n    <name>{}</name>\n  </author>",
                escape_text(&name.lexical)
            )
            .unwrap(),
        }
    }
    writeln!(out, "  <updated>{}</updated>", escape_text(updated)).unwrap();
    feed_ext.sort();
    for (about, t) in &feed_ext {
        write_extension(&mut out, "  ", &namespaces, *about, t);
    }
    for (member, exts) in &members {
        out.push_str("  <entry>\n");
        writeln!(
            out,
            "    <id>{}</id>",
            escape_text(&unique(profile.entry_id(rem, member)))
        )
        .unwrap();
        writeln!(
            out,
            "    <link href=\"{}\" rel=\"alternate\"/>",
            escape_attr(member.as_str())
        )
        .unwrap();
        writeln!(
            out,
            "    <title>{}</title>",
            escape_text(&profile.entry_title(member))
        )
        .unwrap();
        writeln!(out, "    <updated>{}</updated>", escape_text(updated)).unwrap();
        let mut exts = exts.clone();
        exts.sort();
        for t in exts {
            write_extension(&mut out, "    ", &namespaces, None, t);
        }
        out.push_str("  </entry>\n");
    }
    out.push_str("</feed>\n");

    Ok(AtomOutput {
        bytes: out.into_bytes(),
        dropped,
    })
}

fn write_extension(
    out: &mut String,
    indent: &str,
    namespaces: &Namespaces,
    about: Option<&Iri>,
    t: &Triple,
) {
    let (ns, local) = split_predicate(&t.predicate).expect("placement checked the predicate");
    let name = format!("{}:{local}", namespaces.prefix(ns));
    let rdf = namespaces.prefix(vocab::RDF);
    write!(out, "{indent}<{name}").unwrap();
    if let Some(about) = about {
        write!(out, " {rdf}:about=\"{}\"", escape_attr(about.as_str())).unwrap();
    }
    match &t.object {
        Term::Iri(o) => {
            writeln!(out, " {rdf}:resource=\"{}\"/>", escape_attr(o.as_str())).unwrap();
        }
        Term::Literal(lit) => {
            if let Some(dt) = &lit.datatype {
                write!(out, " {rdf}:datatype=\"{}\"", escape_attr(dt.as_str())).unwrap();
            }
            writeln!(out, ">{}</{name}>", escape_text(&lit.lexical)).unwrap();
        }
    }
}

/// Namespace to prefix assignment: the ORE prefixes where they apply,
/// `ns1`, `ns2`, ... for everything else.
struct Namespaces {
    prefixes: BTreeMap<String, String>,
}

impl Namespaces {
    fn prefix(&self, ns: &str) -> &str {
        &self.prefixes[ns]
    }

    fn ordered(&self) -> Vec<(&str, &str)> {
        let mut list: Vec<(&str, &str)> = self
            .prefixes
            .iter()
            .map(|(ns, p)| (ns.as_str(), p.as_str()))
            .collect();
        list.sort_by_key(|(ns, p)| {
            let rank = vocab::PREFIXES
                .iter()
                .position(|(_, known, _)| known == ns)
                .unwrap_or(usize::MAX);
            (rank, p.len(), p.to_string())
        });
        list
    }
}

fn namespace_table<'a>(triples: impl Iterator<Item = &'a Triple>) -> Namespaces {
    let mut used: BTreeSet<String> = triples
        .filter_map(|t| split_predicate(&t.predicate))
        .map(|(ns, _)| ns.to_string())
        .collect();
    used.insert(vocab::RDF.to_string());
    let mut prefixes = BTreeMap::new();
    let mut counter = 0;
    for ns in used {
        let prefix = match vocab::prefix_for(&ns) {
            Some(p) => p.to_string(),
            None => {
                counter += 1;
                format!("ns{counter}")
            }
        };
        prefixes.insert(ns, prefix);
    }
    Namespaces { prefixes }
}
