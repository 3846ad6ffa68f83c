use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use super::decode::fetch_resource_map;
use super::fetch::Fetcher;
use crate::model::{rem_uri_from_aggregation, vocab, Iri, ResourceMapGraph, Term};

/// Resource Maps keyed by their own IRI. Each triple stays attached to the
/// graph that asserted it.
#[derive(Debug, Clone, Default)]
pub struct GraphStore {
    graphs: BTreeMap<Iri, ResourceMapGraph>,
}

impl GraphStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces the graph named by `graph.rem_uri()`.
    pub fn insert(&mut self, graph: ResourceMapGraph) -> Option<ResourceMapGraph> {
        self.graphs.insert(graph.rem_uri().clone(), graph)
    }

    pub fn get(&self, rem: &Iri) -> Option<&ResourceMapGraph> {
        self.graphs.get(rem)
    }

    pub fn graphs(&self) -> impl Iterator<Item = &ResourceMapGraph> {
        self.graphs.values()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Whether `iri` occurs as a subject or object in any stored graph.
    pub fn mentions(&self, iri: &Iri) -> bool {
        self.graphs().any(|g| {
            g.iter()
                .any(|t| &t.subject == iri || t.object.as_iri() == Some(iri))
        })
    }

    /// IRI objects of `subject predicate ?` across every graph.
    fn objects_everywhere(&self, subject: &Iri, predicate: &str) -> BTreeSet<Iri> {
        self.graphs()
            .flat_map(|g| g.objects(subject, predicate))
            .filter_map(Term::as_iri)
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("{0} does not appear in any stored Resource Map")]
    UnknownAggregation(Iri),
}

/// Aggregations that (transitively) contain a starting Aggregation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Nesting {
    pub parents: Vec<Iri>,
    /// `ore:alsoInResourceMap` targets of the start and its parents.
    pub also_in: Vec<Iri>,
    /// Aggregations that lie on an `ore:isAggregatedBy` cycle.
    pub cycles: Vec<Iri>,
}

/// Follows `ore:isAggregatedBy` from `start_agg` through every stored graph.
/// Cycles are reported rather than followed.
pub fn nesting_closure(store: &GraphStore, start_agg: &Iri) -> Result<Nesting, StoreError> {
    if !store.mentions(start_agg) {
        return Err(StoreError::UnknownAggregation(start_agg.clone()));
    }
    let mut reached: BTreeSet<Iri> = BTreeSet::new();
    let mut cycles: BTreeSet<Iri> = BTreeSet::new();
    let mut done: BTreeSet<Iri> = BTreeSet::new();
    let mut path: Vec<Iri> = vec![start_agg.clone()];
    // Depth-first with an explicit stack of pending children per level.
    let mut stack: Vec<Vec<Iri>> = vec![children(store, start_agg)];
    while let Some(pending) = stack.last_mut() {
        let Some(next) = pending.pop() else {
            stack.pop();
            if let Some(finished) = path.pop() {
                done.insert(finished);
            }
            continue;
        };
        if let Some(pos) = path.iter().position(|p| p == &next) {
            cycles.extend(path[pos..].iter().cloned());
            continue;
        }
        reached.insert(next.clone());
        if done.contains(&next) {
            continue;
        }
        stack.push(children(store, &next));
        path.push(next);
    }
    reached.remove(start_agg);

    let mut also_in = BTreeSet::new();
    for agg in std::iter::once(start_agg).chain(reached.iter()) {
        also_in.extend(store.objects_everywhere(agg, vocab::ORE_ALSO_IN_RESOURCE_MAP));
    }
    Ok(Nesting {
        parents: reached.into_iter().collect(),
        also_in: also_in.into_iter().collect(),
        cycles: cycles.into_iter().collect(),
    })
}

fn children(store: &GraphStore, agg: &Iri) -> Vec<Iri> {
    let mut list: Vec<Iri> = store
        .objects_everywhere(agg, vocab::ORE_IS_AGGREGATED_BY)
        .into_iter()
        .collect();
    list.reverse();
    list
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineageMode {
    /// Each `ore:fromResourceMap` answer is tied to the graph asserting it.
    /// Experimental: the predicate is not settled.
    Strict,
    /// `ore:fromResourceMap` read as `ore:alsoInResourceMap`, merged across
    /// graphs without context.
    Degraded,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LineageEntry {
    pub target: Iri,
    /// The Resource Map that asserted it; `None` in degraded mode.
    pub asserted_by: Option<Iri>,
}

/// Where an aggregated resource came from.
pub fn lineage(store: &GraphStore, ar: &Iri, mode: LineageMode) -> BTreeSet<LineageEntry> {
    match mode {
        LineageMode::Strict => store
            .graphs()
            .flat_map(|g| {
                g.objects(ar, vocab::ORE_FROM_RESOURCE_MAP)
                    .filter_map(Term::as_iri)
                    .map(|target| LineageEntry {
                        target: target.clone(),
                        asserted_by: Some(g.rem_uri().clone()),
                    })
                    .collect::<Vec<_>>()
            })
            .collect(),
        LineageMode::Degraded => [
            vocab::ORE_FROM_RESOURCE_MAP,
            vocab::ORE_ALSO_IN_RESOURCE_MAP,
        ]
        .into_iter()
        .flat_map(|p| store.objects_everywhere(ar, p))
        .map(|target| LineageEntry {
            target,
            asserted_by: None,
        })
        .collect(),
    }
}

/// Fetches `rem` and then the Resource Maps of every Aggregation it is
/// nested in, transitively. Unfetchable parents are listed, not fatal.
pub fn collect_nesting_store(
    fetcher: &dyn Fetcher,
    rem: &Iri,
) -> Result<(GraphStore, Vec<(Iri, String)>), super::HarvestError> {
    let mut store = GraphStore::new();
    let mut failures = Vec::new();
    let root = fetch_resource_map(fetcher, rem)?;
    let mut queue = VecDeque::from([root.aggregation_uri()]);
    let mut seen: BTreeSet<Iri> = queue.iter().cloned().collect();
    store.insert(root);
    while let Some(agg) = queue.pop_front() {
        for parent in store.objects_everywhere(&agg, vocab::ORE_IS_AGGREGATED_BY) {
            if !seen.insert(parent.clone()) {
                continue;
            }
            queue.push_back(parent.clone());
            let Ok(parent_rem) = rem_uri_from_aggregation(&parent) else {
                continue;
            };
            if store.get(&parent_rem).is_some() {
                continue;
            }
            match fetch_resource_map(fetcher, &parent_rem) {
                Ok(g) => {
                    store.insert(g);
                }
                Err(e) => failures.push((parent_rem, e.to_string())),
            }
        }
    }
    Ok((store, failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{new_resource_map, Literal, Triple};

    fn iri(s: &str) -> Iri {
        Iri::parse(s).unwrap()
    }

    fn rem(name: &str) -> ResourceMapGraph {
        new_resource_map(
            iri(name),
            Term::Iri(iri("http://e.org/")),
            Literal::plain("2008-01-01T00:00:00Z"),
        )
        .unwrap()
    }

    fn with(mut g: ResourceMapGraph, s: &str, p: &'static str, o: &str) -> ResourceMapGraph {
        g.insert(Triple::new(iri(s), vocab::iri(p), iri(o)));
        g
    }

    #[test]
    fn figure_1_parent() {
        let g = rem("http://arxiv.org/rem/0801.2244v1");
        let agg = g.aggregation_uri();
        let g = with(
            g,
            agg.as_str(),
            vocab::ORE_IS_AGGREGATED_BY,
            "http://arxiv.org/rem/0801.2244#aggregation",
        );
        let g = with(
            g,
            agg.as_str(),
            vocab::ORE_ALSO_IN_RESOURCE_MAP,
            "http://arxiv.org/rem/0801.2244",
        );
        let mut store = GraphStore::new();
        store.insert(g);
        let nesting = nesting_closure(&store, &agg).unwrap();
        assert_eq!(
            nesting.parents,
            [iri("http://arxiv.org/rem/0801.2244#aggregation")]
        );
        assert_eq!(nesting.also_in, [iri("http://arxiv.org/rem/0801.2244")]);
        assert!(nesting.cycles.is_empty());
    }

    #[test]
    fn cycles_terminate() {
        let a = "http://e.org/a#aggregation";
        let b = "http://e.org/b#aggregation";
        let mut store = GraphStore::new();
        store.insert(with(
            rem("http://e.org/a"),
            a,
            vocab::ORE_IS_AGGREGATED_BY,
            b,
        ));
        store.insert(with(
            rem("http://e.org/b"),
            b,
            vocab::ORE_IS_AGGREGATED_BY,
            a,
        ));
        let nesting = nesting_closure(&store, &iri(a)).unwrap();
        assert_eq!(nesting.cycles, [iri(a), iri(b)]);
        assert_eq!(nesting.parents, [iri(b)]);
    }

    #[test]
    fn leaf_and_unknown() {
        let mut store = GraphStore::new();
        let g = rem("http://e.org/a");
        let agg = g.aggregation_uri();
        store.insert(g);
        assert_eq!(nesting_closure(&store, &agg).unwrap(), Nesting::default());
        assert_eq!(
            nesting_closure(&store, &iri("http://x.org/#aggregation")),
            Err(StoreError::UnknownAggregation(iri(
                "http://x.org/#aggregation"
            )))
        );
    }

    #[test]
    fn lineage_modes() {
        let ar = "http://e.org/ar-1";
        let mut store = GraphStore::new();
        store.insert(with(
            rem("http://e.org/rem-1"),
            ar,
            vocab::ORE_FROM_RESOURCE_MAP,
            "http://e.org/rem-3",
        ));
        store.insert(with(
            rem("http://e.org/rem-2"),
            ar,
            vocab::ORE_ALSO_IN_RESOURCE_MAP,
            "http://e.org/rem-4",
        ));
        let strict = lineage(&store, &iri(ar), LineageMode::Strict);
        assert_eq!(
            strict.into_iter().collect::<Vec<_>>(),
            [LineageEntry {
                target: iri("http://e.org/rem-3"),
                asserted_by: Some(iri("http://e.org/rem-1")),
            }]
        );
        let degraded: Vec<Iri> = lineage(&store, &iri(ar), LineageMode::Degraded)
            .into_iter()
            .map(|e| e.target)
            .collect();
        assert_eq!(
            degraded,
            [iri("http://e.org/rem-3"), iri("http://e.org/rem-4")]
        );
        assert!(lineage(&store, &iri("http://e.org/none"), LineageMode::Strict).is_empty());
    }
}
