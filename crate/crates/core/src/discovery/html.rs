use scraper::{Html, Selector};

use super::{has_rel, DiscoveryHit, Method, REL_RESOURCEMAP};
use crate::model::Iri;

/// Resource Map candidates from `<link rel="resourcemap">` elements, in
/// document order. A `<base href>` in the page overrides `base`.
pub fn scan_html(doc: &[u8], base: &Iri) -> Vec<DiscoveryHit> {
    scan_html_with(doc, base, REL_RESOURCEMAP)
}

/// [`scan_html`] with a different relation token.
pub fn scan_html_with(doc: &[u8], base: &Iri, rel: &str) -> Vec<DiscoveryHit> {
    let html = Html::parse_document(&String::from_utf8_lossy(doc));
    let resolver = document_base(&html, base);
    let selector = Selector::parse("link[rel][href]").expect("static selector");
    html.select(&selector)
        .filter(|el| el.value().attr("rel").is_some_and(|r| has_rel(r, rel)))
        .filter_map(|el| resolver.resolve(el.value().attr("href")?.trim()).ok())
        .map(|target| DiscoveryHit::new(target, Method::HtmlLink, base.clone()))
        .collect()
}

/// Every outgoing link of a page as `(rel, target)`, one pair per rel token,
/// lowercased. `<link>` elements without `rel` are skipped; `<a>` and
/// `<area>` elements without `rel` are reported as `hyperlink`.
pub fn html_links(doc: &[u8], base: &Iri) -> Vec<(String, Iri)> {
    let html = Html::parse_document(&String::from_utf8_lossy(doc));
    let base = document_base(&html, base);
    let selector = Selector::parse("link[href], a[href], area[href]").expect("static selector");
    let mut out = Vec::new();
    for el in html.select(&selector) {
        let Some(Ok(target)) = el.value().attr("href").map(|h| base.resolve(h.trim())) else {
            continue;
        };
        match el.value().attr("rel") {
            Some(rel) => {
                for token in rel.split_ascii_whitespace() {
                    out.push((token.to_ascii_lowercase(), target.clone()));
                }
            }
            None if el.value().name() != "link" => {
                out.push(("hyperlink".to_string(), target));
            }
            None => {}
        }
    }
    out
}

fn document_base(html: &Html, base: &Iri) -> Iri {
    let selector = Selector::parse("base[href]").expect("static selector");
    html.select(&selector)
        .next()
        .and_then(|el| base.resolve(el.value().attr("href")?.trim()).ok())
        .unwrap_or_else(|| base.clone())
}
