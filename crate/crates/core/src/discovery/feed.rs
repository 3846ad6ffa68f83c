use super::{DiscoveryError, DiscoveryHit, Method};
use crate::atom::{alternate_href, link_href, REL_DESCRIBES};
use crate::model::{vocab, Iri};
use crate::validate::{Code, Finding};
use crate::xml::{atom_children, base_for, is_atom, parse_document, resolve, text_of};

/// What a discovery feed lists, plus separation-rule findings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeedScan {
    pub hits: Vec<DiscoveryHit>,
    /// Entry id for each hit, same order.
    pub entry_ids: Vec<Option<String>>,
    pub findings: Vec<Finding>,
}

/// Scans an Atom feed that lists Resource Maps. Each entry's alternate
/// link is a candidate. An entry whose id is the Resource Map it lists is
/// flagged `E-ENTRYID-IS-REM`; a feed that carries a `describes` link is
/// itself a Resource Map and is flagged `E-FEED-IS-REM`.
pub fn scan_discovery_feed(doc: &[u8], source: &Iri) -> Result<FeedScan, DiscoveryError> {
    let document = parse_document(doc).map_err(DiscoveryError::MalformedXml)?;
    let feed = document.root_element();
    if !is_atom(&feed, "feed") {
        return Err(DiscoveryError::NotAFeed);
    }
    let mut scan = FeedScan::default();
    if link_href(feed, REL_DESCRIBES).is_some() {
        scan.findings.push(Finding::new(
            Code::FeedIsRem,
            Some(source.clone()),
            "discovery feed carries a describes link, so it is also a Resource Map",
        ));
    }
    for entry in atom_children(feed, "entry") {
        let base = base_for(&entry, Some(source));
        let Some(candidate) = alternate_href(entry).and_then(|h| resolve(base.as_ref(), h).ok())
        else {
            continue;
        };
        let id = atom_children(entry, "id")
            .next()
            .map(|n| text_of(&n).trim().to_string());
        if id.as_deref() == Some(candidate.as_str()) {
            scan.findings.push(Finding::new(
                Code::EntryIdIsRem,
                Some(candidate.clone()),
                "entry id is the URI of the Resource Map it lists",
            ));
        }
        scan.hits
            .push(DiscoveryHit::new(candidate, Method::Feed, source.clone()));
        scan.entry_ids.push(id);
    }
    Ok(scan)
}

/// The Resource Map IRI (self link) of bytes that look like an Atom
/// Resource Map: a feed with a `describes` link and the ORE ResourceMap
/// category.
pub fn sniff_resource_map(doc: &[u8]) -> Option<Iri> {
    let document = parse_document(doc).ok()?;
    let feed = document.root_element();
    if !is_atom(&feed, "feed") {
        return None;
    }
    link_href(feed, REL_DESCRIBES)?;
    let categorized = atom_children(feed, "category")
        .any(|c| c.attribute("term").map(str::trim) == Some(vocab::ORE_RESOURCE_MAP));
    if !categorized {
        return None;
    }
    let base = base_for(&feed, None);
    resolve(base.as_ref(), link_href(feed, "self")?).ok()
}
