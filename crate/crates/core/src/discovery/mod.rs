//! Finding Resource Maps from HTML pages, `Link` response headers, sitemaps
//! and discovery feeds.
//!
//! Scanners are pure functions over bytes and never fetch anything. Their
//! hits start out unconfirmed; [`confirm`] marks a hit confirmed once fetched
//! bytes sniff as the Resource Map it names.

mod feed;
mod html;
mod link_header;
mod sitemap;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::Iri;

pub use feed::{scan_discovery_feed, sniff_resource_map, FeedScan};
pub use html::{html_links, scan_html, scan_html_with};
pub use link_header::{parse_link_header, scan_link_header, scan_link_header_with, HeaderLink};
pub use sitemap::{scan_sitemap, SitemapScan};

/// Link relation naming a Resource Map, matched case-insensitively.
pub const REL_RESOURCEMAP: &str = "resourcemap";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "html-link")]
    HtmlLink,
    #[serde(rename = "http-header")]
    HttpHeader,
    #[serde(rename = "sitemap")]
    Sitemap,
    #[serde(rename = "feed")]
    Feed,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::HtmlLink => "html-link",
            Method::HttpHeader => "http-header",
            Method::Sitemap => "sitemap",
            Method::Feed => "feed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiscoveryHit {
    pub rem_candidate: Iri,
    pub method: Method,
    /// Where the candidate was found.
    pub source: Iri,
    pub confirmed: bool,
}

impl DiscoveryHit {
    pub fn new(rem_candidate: Iri, method: Method, source: Iri) -> Self {
        DiscoveryHit {
            rem_candidate,
            method,
            source,
            confirmed: false,
        }
    }
}

impl fmt::Display for DiscoveryHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}",
            self.method, self.rem_candidate, self.confirmed
        )
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DiscoveryError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("root element <{0}> is not a sitemap")]
    NotASitemap(String),
    #[error("document is not an Atom feed")]
    NotAFeed,
}

/// Marks `hit` confirmed when `bytes` sniff as the Resource Map it names.
/// `location` is where the bytes were finally served from, which is
/// authoritative after redirects.
pub fn confirm(hit: &mut DiscoveryHit, bytes: &[u8], location: &Iri) -> bool {
    let confirmed = sniff_resource_map(bytes).is_some_and(|rem| rem == *location);
    hit.confirmed = confirmed;
    confirmed
}

/// Whether a whitespace-separated rel attribute contains `rel`.
pub(crate) fn has_rel(attribute: &str, rel: &str) -> bool {
    attribute
        .split_ascii_whitespace()
        .any(|token| token.eq_ignore_ascii_case(rel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_tokens_are_case_insensitive_and_multi_valued() {
        assert!(has_rel("resourcemap", REL_RESOURCEMAP));
        assert!(has_rel("alternate ResourceMap", REL_RESOURCEMAP));
        assert!(!has_rel("resourcemaps", REL_RESOURCEMAP));
        assert!(!has_rel("", REL_RESOURCEMAP));
    }

    #[test]
    fn hit_line_format() {
        let hit = DiscoveryHit::new(
            Iri::parse("http://e.org/rem").unwrap(),
            Method::HtmlLink,
            Iri::parse("http://e.org/a").unwrap(),
        );
        assert_eq!(hit.to_string(), "html-link\thttp://e.org/rem\tfalse");
    }
}
