use super::DiscoveryError;
use crate::model::Iri;
use crate::xml::{parse_document, text_of};

/// URLs pulled from a sitemap. Every `<loc>` in a `urlset` is a candidate
/// until sniffed; a `sitemapindex` yields child sitemaps to scan in turn.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SitemapScan {
    pub candidates: Vec<Iri>,
    pub child_sitemaps: Vec<Iri>,
    pub warnings: Vec<String>,
}

pub fn scan_sitemap(doc: &[u8]) -> Result<SitemapScan, DiscoveryError> {
    let document = parse_document(doc).map_err(DiscoveryError::MalformedXml)?;
    let root = document.root_element();
    let (item, is_index) = match root.tag_name().name() {
        "urlset" => ("url", false),
        "sitemapindex" => ("sitemap", true),
        other => return Err(DiscoveryError::NotASitemap(other.to_string())),
    };
    let mut scan = SitemapScan::default();
    let locs = root
        .children()
        .filter(|n| n.is_element() && n.tag_name().name() == item)
        .flat_map(|n| {
            n.children()
                .filter(|c| c.is_element() && c.tag_name().name() == "loc")
        });
    for loc in locs {
        let text = text_of(&loc);
        match Iri::parse(text.trim()) {
            Ok(iri) if is_index => scan.child_sitemaps.push(iri),
            Ok(iri) => scan.candidates.push(iri),
            Err(e) => scan.warnings.push(format!("skipped <loc>: {e}")),
        }
    }
    Ok(scan)
}
