//! Everything that touches the network: dereferencing Resource Maps,
//! crawling link graphs, classifying what members reveal about their
//! Resource Map, following nesting and lineage, and archiving snapshots.
//!
//! All retrieval goes through a [`Fetcher`]; [`FixtureFetcher`] serves
//! canned responses so every operation runs offline.

mod decode;
mod discover;
mod fetch;
mod knowledge;
mod links;
mod snapshot;
mod store;

use std::collections::BTreeSet;

pub use decode::{decode_response, fetch_resource_map, DecodeError, Format, HarvestError};
pub use discover::{discover, DiscoverOptions, DiscoverReport};
#[cfg(feature = "http")]
pub use fetch::HttpFetcher;
pub use fetch::{
    fetch_all, fetch_following, normalize_media_type, FetchError, Fetched, Fetcher, FixtureFetcher,
    Response, RoutingError, MAX_REDIRECTS,
};
pub use knowledge::{
    classify_knowledge, explain_knowledge, Classification, KnowledgeError, KnowledgeLevel,
};
pub use links::{build_link_graph, Crawl, Edge, LinkGraph};
pub use snapshot::{
    archive_snapshot, sha256_hex, EntryStatus, ManifestEntry, SnapshotError, SnapshotManifest,
    MANIFEST_FILE,
};
pub use store::{
    collect_nesting_store, lineage, nesting_closure, GraphStore, LineageEntry, LineageMode,
    Nesting, StoreError,
};

use crate::model::Iri;

/// Requests in flight at once unless configured otherwise.
pub const DEFAULT_PARALLELISM: usize = 4;

/// Result of classifying a live Aggregation.
#[derive(Debug, Clone)]
pub struct RemoteClassification {
    pub classification: Classification,
    pub members: BTreeSet<Iri>,
    pub crawl: Crawl,
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Harvest(#[from] HarvestError),
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
}

/// Dereferences `rem`, crawls its members `depth` hops out and classifies
/// the result.
pub fn classify_remote(
    fetcher: &dyn Fetcher,
    rem: &Iri,
    depth: usize,
    parallelism: usize,
) -> Result<RemoteClassification, ClassifyError> {
    let graph = fetch_resource_map(fetcher, rem)?;
    let members = graph.aggregated_resources();
    let crawl = build_link_graph(fetcher, &members, depth, parallelism);
    let classification = explain_knowledge(rem, &members, &crawl.graph)?;
    Ok(RemoteClassification {
        classification,
        members,
        crawl,
    })
}
