use std::collections::{BTreeSet, VecDeque};

use super::fetch::{fetch_all, Fetcher};
use crate::discovery::{html_links, parse_link_header};
use crate::model::Iri;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: Iri,
    /// Always lowercase.
    pub rel: String,
    pub target: Iri,
}

impl Edge {
    pub fn new(source: Iri, rel: &str, target: Iri) -> Self {
        Edge {
            source,
            rel: rel.to_ascii_lowercase(),
            target,
        }
    }
}

/// Directed, typed links between resources.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkGraph {
    edges: BTreeSet<Edge>,
}

impl LinkGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source: Iri, rel: &str, target: Iri) -> bool {
        self.edges.insert(Edge::new(source, rel, target))
    }

    pub fn remove(&mut self, edge: &Edge) -> bool {
        self.edges.remove(edge)
    }

    pub fn contains(&self, source: &Iri, rel: &str, target: &Iri) -> bool {
        self.edges
            .contains(&Edge::new(source.clone(), rel, target.clone()))
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edges_from<'a>(&'a self, source: &'a Iri) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| &e.source == source)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl FromIterator<Edge> for LinkGraph {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        LinkGraph {
            edges: iter.into_iter().collect(),
        }
    }
}

/// Outcome of a crawl.
#[derive(Debug, Clone, Default)]
pub struct Crawl {
    pub graph: LinkGraph,
    /// IRIs fetched, in crawl order.
    pub fetched: Vec<Iri>,
    /// Resources that could not be retrieved, with the reason.
    pub failures: Vec<(Iri, String)>,
    pub warnings: Vec<String>,
}

/// Breadth-first crawl from `seeds`, `depth` hops out. Edges come from
/// `Link` headers on every response and from the markup of HTML responses.
/// No IRI is requested twice.
pub fn build_link_graph(
    fetcher: &dyn Fetcher,
    seeds: &BTreeSet<Iri>,
    depth: usize,
    parallelism: usize,
) -> Crawl {
    let mut crawl = Crawl::default();
    let mut visited: BTreeSet<Iri> = seeds.iter().cloned().collect();
    let mut frontier: VecDeque<Iri> = seeds.iter().cloned().collect();
    for level in 0..=depth {
        if frontier.is_empty() {
            break;
        }
        let batch: Vec<Iri> = frontier.drain(..).collect();
        let results = fetch_all(fetcher, &batch, parallelism);
        for (iri, result) in batch.into_iter().zip(results) {
            crawl.fetched.push(iri.clone());
            let fetched = match result {
                Ok(f) if f.response.is_success() => f,
                Ok(f) => {
                    crawl
                        .failures
                        .push((iri, format!("status {}", f.response.status)));
                    continue;
                }
                Err(e) => {
                    crawl.failures.push((iri, e.to_string()));
                    continue;
                }
            };
            let mut targets = Vec::new();
            for value in &fetched.response.links {
                let (links, warnings) = parse_link_header(value, &fetched.iri);
                crawl.warnings.extend(warnings);
                for link in links {
                    for rel in link.rels() {
                        crawl.graph.insert(iri.clone(), &rel, link.target.clone());
                    }
                    targets.push(link.target);
                }
            }
            if is_html(
                fetched.response.media_type.as_deref(),
                &fetched.response.body,
            ) {
                for (rel, target) in html_links(&fetched.response.body, &fetched.iri) {
                    crawl.graph.insert(iri.clone(), &rel, target.clone());
                    targets.push(target);
                }
            }
            visited.insert(fetched.iri.clone());
            if level < depth {
                for target in targets {
                    if visited.insert(target.clone()) {
                        frontier.push_back(target);
                    }
                }
            }
        }
    }
    crawl
}

pub(crate) fn is_html(media_type: Option<&str>, body: &[u8]) -> bool {
    match media_type {
        Some("text/html" | "application/xhtml+xml") => true,
        Some(_) => false,
        None => {
            let head = String::from_utf8_lossy(&body[..body.len().min(512)]).to_ascii_lowercase();
            let head = head.trim_start();
            head.starts_with("<!doctype html") || head.starts_with("<html")
        }
    }
}
