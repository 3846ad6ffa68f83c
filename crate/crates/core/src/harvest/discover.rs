use std::collections::{BTreeMap, BTreeSet};

use super::fetch::{fetch_all, Fetched, Fetcher};
use super::links::is_html;
use crate::atom::feed_id;
use crate::discovery::{
    confirm, html_links, scan_discovery_feed, scan_html, scan_link_header, scan_sitemap,
    DiscoveryHit, Method,
};
use crate::model::Iri;
use crate::validate::{Code, Finding};
use crate::xml::{parse_document, ATOM_NS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscoverOptions {
    /// Hyperlink hops to follow from the start page. Child sitemaps of a
    /// sitemap index are always followed.
    pub depth: usize,
    /// Fetch each candidate and sniff it.
    pub confirm: bool,
    pub parallelism: usize,
}

impl Default for DiscoverOptions {
    fn default() -> Self {
        DiscoverOptions {
            depth: 0,
            confirm: false,
            parallelism: 4,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DiscoverReport {
    pub hits: Vec<DiscoveryHit>,
    pub findings: Vec<Finding>,
    pub warnings: Vec<String>,
    pub failures: Vec<(Iri, String)>,
}

impl DiscoverReport {
    pub fn confirmed(&self) -> impl Iterator<Item = &DiscoveryHit> {
        self.hits.iter().filter(|h| h.confirmed)
    }
}

/// Looks for Resource Maps starting at `start`, which may be an HTML page,
/// any resource with `Link` headers, a sitemap or a discovery feed.
pub fn discover(fetcher: &dyn Fetcher, start: &Iri, options: DiscoverOptions) -> DiscoverReport {
    let mut report = DiscoverReport::default();
    let mut entry_ids: BTreeMap<Iri, String> = BTreeMap::new();
    let mut visited: BTreeSet<Iri> = BTreeSet::from([start.clone()]);
    let mut frontier: Vec<(Iri, usize)> = vec![(start.clone(), 0)];

    while !frontier.is_empty() {
        let batch = std::mem::take(&mut frontier);
        let iris: Vec<Iri> = batch.iter().map(|(i, _)| i.clone()).collect();
        for ((iri, level), result) in
            batch
                .into_iter()
                .zip(fetch_all(fetcher, &iris, options.parallelism))
        {
            let fetched = match result {
                Ok(f) if f.response.is_success() => f,
                Ok(f) => {
                    report
                        .failures
                        .push((iri, format!("status {}", f.response.status)));
                    continue;
                }
                Err(e) => {
                    report.failures.push((iri, e.to_string()));
                    continue;
                }
            };
            visited.insert(fetched.iri.clone());
            let mut next = Vec::new();
            scan_document(
                &fetched,
                level < options.depth,
                &mut report,
                &mut entry_ids,
                &mut next,
            );
            for target in next {
                if visited.insert(target.clone()) {
                    frontier.push((target, level + 1));
                }
            }
        }
    }

    let mut seen = BTreeSet::new();
    report
        .hits
        .retain(|h| seen.insert((h.rem_candidate.clone(), h.method, h.source.clone())));

    if options.confirm {
        confirm_hits(fetcher, &mut report, &entry_ids, options.parallelism);
    }
    report
}

fn scan_document(
    fetched: &Fetched,
    follow_links: bool,
    report: &mut DiscoverReport,
    entry_ids: &mut BTreeMap<Iri, String>,
    next: &mut Vec<Iri>,
) {
    let at = &fetched.iri;
    let body = &fetched.response.body;
    for value in &fetched.response.links {
        let (hits, warnings) = scan_link_header(value, at);
        report.hits.extend(hits);
        report.warnings.extend(warnings);
    }
    if is_html(fetched.response.media_type.as_deref(), body) {
        report.hits.extend(scan_html(body, at));
        if follow_links {
            next.extend(html_links(body, at).into_iter().map(|(_, target)| target));
        }
        return;
    }
    let root = match parse_document(body) {
        Ok(doc) => {
            let root = doc.root_element();
            (
                root.tag_name().namespace() == Some(ATOM_NS),
                root.tag_name().name().to_string(),
            )
        }
        Err(_) => return,
    };
    match root {
        (false, name) if name == "urlset" || name == "sitemapindex" => match scan_sitemap(body) {
            Ok(scan) => {
                report.hits.extend(
                    scan.candidates
                        .into_iter()
                        .map(|c| DiscoveryHit::new(c, Method::Sitemap, at.clone())),
                );
                report.warnings.extend(scan.warnings);
                next.extend(scan.child_sitemaps);
            }
            Err(e) => report.warnings.push(format!("{at}: {e}")),
        },
        (true, name) if name == "feed" => match scan_discovery_feed(body, at) {
            Ok(scan) => {
                for (hit, id) in scan.hits.iter().zip(scan.entry_ids) {
                    if let Some(id) = id {
                        entry_ids.insert(hit.rem_candidate.clone(), id);
                    }
                }
                report.hits.extend(scan.hits);
                report.findings.extend(scan.findings);
            }
            Err(e) => report.warnings.push(format!("{at}: {e}")),
        },
        _ => {}
    }
}

/// Fetches every distinct candidate once and sniffs it. Feed entries are
/// also checked against the fetched Resource Map's own feed id.
fn confirm_hits(
    fetcher: &dyn Fetcher,
    report: &mut DiscoverReport,
    entry_ids: &BTreeMap<Iri, String>,
    parallelism: usize,
) {
    let candidates: Vec<Iri> = report
        .hits
        .iter()
        .map(|h| h.rem_candidate.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let results: BTreeMap<Iri, Fetched> = candidates
        .iter()
        .cloned()
        .zip(fetch_all(fetcher, &candidates, parallelism))
        .filter_map(|(iri, r)| match r {
            Ok(f) if f.response.is_success() => Some((iri, f)),
            Ok(f) => {
                report
                    .failures
                    .push((iri, format!("status {}", f.response.status)));
                None
            }
            Err(e) => {
                report.failures.push((iri, e.to_string()));
                None
            }
        })
        .collect();
    for hit in &mut report.hits {
        if let Some(f) = results.get(&hit.rem_candidate) {
            confirm(hit, &f.response.body, &f.iri);
        }
    }
    for (candidate, entry_id) in entry_ids {
        let Some(f) = results.get(candidate) else {
            continue;
        };
        if feed_id(&f.response.body).as_deref() == Some(entry_id.as_str()) {
            report.findings.push(Finding::new(
                Code::EntryIdIsRemFeedId,
                Some(candidate.clone()),
                format!("entry id {entry_id} is the feed id of the Resource Map it lists"),
            ));
        }
    }
}
