use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::decode::{decode_response, DecodeError};
use super::fetch::{fetch_all, fetch_following, FetchError, Fetcher};
use crate::model::Iri;

pub const MANIFEST_FILE: &str = "manifest.txt";

/// Outcome of retrieving one resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryStatus {
    /// An HTTP status code; only 2xx responses are stored.
    Http(u16),
    /// No response at all.
    TransportError,
}

impl EntryStatus {
    pub fn is_success(&self) -> bool {
        matches!(self, EntryStatus::Http(s) if (200..300).contains(s))
    }
}

impl std::fmt::Display for EntryStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntryStatus::Http(s) => write!(f, "{s}"),
            EntryStatus::TransportError => f.write_str("error"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub iri: Iri,
    pub status: EntryStatus,
    /// Lowercase hex SHA-256 of the stored bytes.
    pub digest: Option<String>,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotManifest {
    pub rem_uri: Iri,
    pub retrieved_at: DateTime<Utc>,
    /// The Resource Map first, then each aggregated resource in IRI order.
    pub entries: Vec<ManifestEntry>,
}

impl SnapshotManifest {
    /// `manifest.txt` content: two comment lines, then one tab-separated
    /// `iri status digest bytes` line per entry (`-` for no digest).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# resourcemap\t{}", self.rem_uri).unwrap();
        writeln!(
            out,
            "# retrieved\t{}",
            self.retrieved_at.to_rfc3339_opts(SecondsFormat::Secs, true)
        )
        .unwrap();
        for e in &self.entries {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                e.iri,
                e.status,
                e.digest.as_deref().unwrap_or("-"),
                e.bytes
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, SnapshotError> {
        let bad = |line: usize, message: &str| SnapshotError::BadManifest {
            line,
            message: message.to_string(),
        };
        let mut rem_uri = None;
        let mut retrieved_at = None;
        let mut entries = Vec::new();
        for (index, line) in text.lines().enumerate() {
            let n = index + 1;
            if let Some(rest) = line.strip_prefix("# resourcemap\t") {
                rem_uri = Some(Iri::parse(rest).map_err(|_| bad(n, "bad Resource Map IRI"))?);
                continue;
            }
            if let Some(rest) = line.strip_prefix("# retrieved\t") {
                retrieved_at = Some(
                    DateTime::parse_from_rfc3339(rest)
                        .map_err(|_| bad(n, "bad timestamp"))?
                        .with_timezone(&Utc),
                );
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [iri, status, digest, bytes] = fields[..] else {
                return Err(bad(n, "expected 4 tab-separated fields"));
            };
            entries.push(ManifestEntry {
                iri: Iri::parse(iri).map_err(|_| bad(n, "bad IRI"))?,
                status: match status {
                    "error" => EntryStatus::TransportError,
                    s => EntryStatus::Http(s.parse().map_err(|_| bad(n, "bad status"))?),
                },
                digest: (digest != "-").then(|| digest.to_string()),
                bytes: bytes.parse().map_err(|_| bad(n, "bad byte count"))?,
            });
        }
        Ok(SnapshotManifest {
            rem_uri: rem_uri.ok_or_else(|| bad(0, "missing resourcemap line"))?,
            retrieved_at: retrieved_at.ok_or_else(|| bad(0, "missing retrieved line"))?,
            entries,
        })
    }

    /// IRIs whose status or digest differ between two snapshots, including
    /// entries present in only one.
    pub fn changed(&self, other: &SnapshotManifest) -> Vec<Iri> {
        let key = |e: &ManifestEntry| (e.status.clone(), e.digest.clone());
        let mut changed: Vec<Iri> = Vec::new();
        for e in &self.entries {
            match other.entries.iter().find(|o| o.iri == e.iri) {
                Some(o) if key(o) == key(e) => {}
                _ => changed.push(e.iri.clone()),
            }
        }
        for o in &other.entries {
            if !self.entries.iter().any(|e| e.iri == o.iri) {
                changed.push(o.iri.clone());
            }
        }
        changed
    }
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("{iri}: status {status}")]
    Status { iri: Iri, status: u16 },
    #[error("{iri}: {source}")]
    Decode { iri: Iri, source: DecodeError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("manifest line {line}: {message}")]
    BadManifest { line: usize, message: String },
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Fetches a Resource Map and every resource it aggregates into `dir`.
///
/// Each successfully retrieved body is written to a file named by its
/// digest, and `manifest.txt` lists every attempt. Only failure to retrieve
/// or decode the Resource Map itself is an error.
pub fn archive_snapshot(
    fetcher: &dyn Fetcher,
    rem: &Iri,
    dir: &Path,
    retrieved_at: DateTime<Utc>,
    parallelism: usize,
) -> Result<SnapshotManifest, SnapshotError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| SnapshotError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;

    let fetched = fetch_following(fetcher, rem)?;
    if !fetched.response.is_success() {
        return Err(SnapshotError::Status {
            iri: fetched.iri,
            status: fetched.response.status,
        });
    }
    let (graph, _) = decode_response(&fetched).map_err(|source| SnapshotError::Decode {
        iri: fetched.iri.clone(),
        source,
    })?;

    let mut entries = vec![store(
        dir,
        rem.clone(),
        fetched.response.status,
        &fetched.response.body,
    )
    .map_err(io_err(dir))?];
    let members: Vec<Iri> = graph.aggregated_resources().into_iter().collect();
    for (iri, result) in members
        .iter()
        .zip(fetch_all(fetcher, &members, parallelism))
    {
        let entry = match result {
            Ok(f) if f.response.is_success() => {
                store(dir, iri.clone(), f.response.status, &f.response.body).map_err(io_err(dir))?
            }
            Ok(f) => ManifestEntry {
                iri: iri.clone(),
                status: EntryStatus::Http(f.response.status),
                digest: None,
                bytes: 0,
            },
            Err(_) => ManifestEntry {
                iri: iri.clone(),
                status: EntryStatus::TransportError,
                digest: None,
                bytes: 0,
            },
        };
        entries.push(entry);
    }

    let manifest = SnapshotManifest {
        rem_uri: rem.clone(),
        retrieved_at,
        entries,
    };
    let path = dir.join(MANIFEST_FILE);
    std::fs::write(&path, manifest.to_text()).map_err(io_err(&path))?;
    Ok(manifest)
}

fn store(dir: &Path, iri: Iri, status: u16, body: &[u8]) -> io::Result<ManifestEntry> {
    let digest = sha256_hex(body);
    std::fs::write(dir.join(&digest), body)?;
    Ok(ManifestEntry {
        iri,
        status: EntryStatus::Http(status),
        digest: Some(digest),
        bytes: body.len() as u64,
    })
}
