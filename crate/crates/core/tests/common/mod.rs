#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use ore_core::Iri;
use quick_xml::events::{BytesStart, Event};
use quick_xml::name::ResolveResult;
use quick_xml::{NsReader, XmlVersion};

const ATOM: &str = "http://www.w3.org/2005/Atom";

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn iri(s: &str) -> Iri {
    Iri::parse(s).unwrap()
}

/// Atom fields pulled out with a streaming reader that shares no code with
/// the crate's own parser.
#[derive(Debug, Default)]
pub struct AtomFields {
    pub feed_links: Vec<BTreeMap<String, String>>,
    pub category: BTreeMap<String, String>,
    pub author_uris: Vec<String>,
    pub author_names: Vec<String>,
    pub updated: Vec<String>,
    pub feed_id: String,
    pub entry_alternates: Vec<String>,
    pub entry_ids: Vec<String>,
}

fn attributes(e: &BytesStart<'_>) -> BTreeMap<String, String> {
    e.attributes()
        .map(|a| {
            let a = a.unwrap();
            (
                a.key.as_ref().to_string(),
                a.normalized_value(XmlVersion::Implicit1_0)
                    .unwrap()
                    .into_owned(),
            )
        })
        .collect()
}

pub fn read_atom(bytes: &[u8]) -> AtomFields {
    let mut reader = NsReader::from_reader(bytes);
    let mut fields = AtomFields::default();
    let mut path: Vec<String> = Vec::new();
    let mut buf = Vec::new();
    loop {
        let (ns, event) = reader
            .read_resolved_event_into(&mut buf)
            .expect("well-formed XML");
        let is_atom = matches!(ns, ResolveResult::Bound(n) if n.as_ref() == ATOM);
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let local = e.local_name().as_ref().to_string();
                let local = if is_atom {
                    local
                } else {
                    format!("ext:{local}")
                };
                let attrs = attributes(e);
                match (path.join("/").as_str(), local.as_str()) {
                    ("feed", "link") => fields.feed_links.push(attrs),
                    ("feed", "category") => fields.category = attrs,
                    ("feed/entry", "link") if attrs.get("rel").is_none_or(|r| r == "alternate") => {
                        fields.entry_alternates.push(attrs["href"].clone());
                    }
                    _ => {}
                }
                if matches!(event, Event::Start(_)) {
                    path.push(local);
                }
            }
            Event::Text(ref t) => {
                let text = t.xml10_content().into_owned();
                match path.join("/").as_str() {
                    "feed/author/uri" => fields.author_uris.push(text),
                    "feed/author/name" => fields.author_names.push(text),
                    "feed/updated" => fields.updated.push(text),
                    "feed/id" => fields.feed_id = text,
                    "feed/entry/id" => fields.entry_ids.push(text),
                    _ => {}
                }
            }
            Event::End(_) => {
                path.pop();
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    fields
}

pub fn link_href(fields: &AtomFields, rel: &str) -> Option<String> {
    fields
        .feed_links
        .iter()
        .find(|l| l.get("rel").map(String::as_str) == Some(rel))
        .map(|l| l["href"].clone())
}
