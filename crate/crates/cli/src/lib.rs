//! The `ore` command: validate, convert, round-trip, discover, classify,
//! snapshot and traverse Resource Maps.
//!
//! Exit codes: 0 success, 1 validation errors present, 2 input or parse
//! failure, 3 network failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use clap::{Parser, Subcommand, ValueEnum};
use ore_core::atom::{from_atom, to_atom, AtomError, AtomProfile};
use ore_core::harvest::{
    archive_snapshot, classify_remote, collect_nesting_store, discover, fetch_resource_map,
    lineage, nesting_closure, ClassifyError, DiscoverOptions, FetchError, Fetcher, FixtureFetcher,
    HarvestError, KnowledgeError, LineageMode, SnapshotError, DEFAULT_PARALLELISM, MANIFEST_FILE,
};
use ore_core::ntriples::{from_ntriples, to_ntriples};
use ore_core::roundtrip::{fixpoint_check, AtomCodec, Codec, NTriplesCodec};
use ore_core::validate::{validate, validate_online, Severity, ValidationReport};
use ore_core::{Iri, ResourceMapGraph};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NETWORK: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ore", version, about = "OAI-ORE Resource Map toolkit")]
struct Cli {
    /// Serve all requests from a fixture routing file instead of the network.
    #[arg(long, global = true, value_name = "ROUTING_FILE")]
    fixture: Option<PathBuf>,
    /// Requests in flight at once.
    #[arg(long, global = true, env = "ORE_PARALLELISM", default_value_t = DEFAULT_PARALLELISM)]
    parallelism: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a Resource Map against the ORE rules.
    Validate {
        input: String,
        /// Also dereference the Resource Map and compare.
        #[arg(long)]
        online: bool,
        #[arg(long)]
        json: bool,
    },
    /// Re-serialize a Resource Map.
    Convert {
        input: String,
        #[arg(long, value_enum)]
        to: Syntax,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serialize and parse three times and report what changed.
    Roundtrip {
        input: String,
        #[arg(long, value_enum)]
        codec: Syntax,
        #[arg(long)]
        json: bool,
    },
    /// Find Resource Map candidates starting from a page, sitemap or feed.
    Discover {
        url: String,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        /// Fetch and sniff each candidate.
        #[arg(long)]
        confirm: bool,
    },
    /// Classify how much an Aggregation's members reveal about its map.
    Classify {
        rem: String,
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Archive a Resource Map and its members into a directory.
    Snapshot {
        rem: String,
        #[arg(long)]
        out: PathBuf,
        /// Retrieval time recorded in the manifest (RFC 3339); defaults to now.
        #[arg(long)]
        at: Option<DateTime<Utc>>,
    },
    /// Follow nesting or lineage across Resource Maps.
    Graph {
        rem: String,
        #[arg(long, conflicts_with = "lineage")]
        parents: bool,
        /// Aggregated resource whose origin to list.
        #[arg(long, value_name = "AR")]
        lineage: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Strict, requires = "lineage")]
        mode: Mode,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Syntax {
    Atom,
    Ntriples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Strict,
    Degraded,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn network(message: impl ToString) -> Self {
        Failure {
            code: EXIT_NETWORK,
            message: message.to_string(),
        }
    }
}

impl From<HarvestError> for Failure {
    fn from(e: HarvestError) -> Self {
        match e {
            HarvestError::Fetch(_) | HarvestError::Status { .. } => Failure::network(e),
            HarvestError::Decode { .. } | HarvestError::RemUriMismatch { .. } => Failure::input(e),
        }
    }
}

impl From<FetchError> for Failure {
    fn from(e: FetchError) -> Self {
        Failure::network(e)
    }
}

type Outcome = Result<u8, Failure>;

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let parallelism = cli.parallelism.max(1);
    let fixture = cli.fixture.clone();
    let fetcher = || make_fetcher(fixture.as_deref());
    match cli.command {
        Command::Validate {
            input,
            online,
            json,
        } => {
            let fetcher = if online || is_url(&input) {
                Some(fetcher()?)
            } else {
                None
            };
            let graph = load(&input, fetcher.as_deref())?;
            let report = match (&fetcher, online) {
                (Some(f), true) => validate_online(&graph, f.as_ref()),
                _ => validate(&graph),
            };
            emit(
                out,
                if json {
                    format!("{}\n", report.to_json())
                } else {
                    report.to_text()
                },
            )?;
            Ok(report_code(&report))
        }
        Command::Convert {
            input,
            to,
            out: path,
        } => {
            let fetcher = if is_url(&input) {
                Some(fetcher()?)
            } else {
                None
            };
            let graph = load(&input, fetcher.as_deref())?;
            let (bytes, dropped) = match to {
                Syntax::Ntriples => (to_ntriples(&graph).into_bytes(), Vec::new()),
                Syntax::Atom => match to_atom(&graph, &AtomProfile::default()) {
                    Ok(o) => (o.bytes, o.dropped),
                    Err(AtomError::ValidationFailed(report)) => {
                        emit(err, report.to_text())?;
                        return Ok(EXIT_INVALID);
                    }
                    Err(e) => return Err(Failure::input(e)),
                },
            };
            if !dropped.is_empty() {
                let mut note = format!(
                    "warning: {} triples cannot be carried by Atom and were dropped\n",
                    dropped.len()
                );
                for t in &dropped {
                    note.push_str(&format!("  {t}\n"));
                }
                emit(err, note)?;
            }
            match path {
                Some(p) => std::fs::write(&p, &bytes)
                    .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
                None => out.write_all(&bytes).map_err(Failure::input)?,
            }
            Ok(EXIT_OK)
        }
        Command::Roundtrip { input, codec, json } => {
            let fetcher = if is_url(&input) {
                Some(fetcher()?)
            } else {
                None
            };
            let graph = load(&input, fetcher.as_deref())?;
            let codec: Box<dyn Codec> = match codec {
                Syntax::Atom => Box::new(AtomCodec::default()),
                Syntax::Ntriples => Box::new(NTriplesCodec),
            };
            let report = fixpoint_check(&graph, codec.as_ref())
                .map_err(|e| Failure::input(e.to_string()))?;
            emit(
                out,
                if json {
                    format!("{}\n", report.to_json())
                } else {
                    report.to_text()
                },
            )?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_INVALID
            })
        }
        Command::Discover {
            url,
            depth,
            confirm,
        } => {
            let fetcher = fetcher()?;
            let start = parse_iri(&url)?;
            let report = discover(
                fetcher.as_ref(),
                &start,
                DiscoverOptions {
                    depth,
                    confirm,
                    parallelism,
                },
            );
            if report.failures.iter().any(|(iri, _)| iri == &start) {
                let (_, why) = report
                    .failures
                    .iter()
                    .find(|(iri, _)| iri == &start)
                    .unwrap();
                return Err(Failure::network(format!("{start}: {why}")));
            }
            let mut text = String::new();
            for hit in &report.hits {
                text.push_str(&format!("{hit}\n"));
            }
            for finding in &report.findings {
                text.push_str(&format!("{finding}\n"));
            }
            emit(out, text)?;
            let mut notes = String::new();
            for w in &report.warnings {
                notes.push_str(&format!("warning: {w}\n"));
            }
            for (iri, why) in &report.failures {
                notes.push_str(&format!("warning: {iri}: {why}\n"));
            }
            emit(err, notes)?;
            let errors = report
                .findings
                .iter()
                .any(|f| f.code.severity() == Severity::Error);
            Ok(if errors { EXIT_INVALID } else { EXIT_OK })
        }
        Command::Classify { rem, depth } => {
            let fetcher = fetcher()?;
            let rem = parse_iri(&rem)?;
            let result = match classify_remote(fetcher.as_ref(), &rem, depth, parallelism) {
                Ok(r) => r,
                Err(ClassifyError::Harvest(e)) => return Err(e.into()),
                Err(ClassifyError::Knowledge(KnowledgeError::EmptyMembers)) => {
                    emit(err, format!("{rem}: the Aggregation has no members\n"))?;
                    return Ok(EXIT_INVALID);
                }
            };
            let c = &result.classification;
            let mut text = format!("{}\n", c.level);
            if let Some(hub) = &c.hub {
                text.push_str(&format!("hub\t{hub}\n"));
            }
            for e in &c.evidence {
                text.push_str(&format!("{}\t{}\t{}\n", e.source, e.rel, e.target));
            }
            emit(out, text)?;
            let mut notes = String::new();
            for (iri, why) in &result.crawl.failures {
                notes.push_str(&format!("warning: {iri}: {why}\n"));
            }
            emit(err, notes)?;
            Ok(EXIT_OK)
        }
        Command::Snapshot { rem, out: dir, at } => {
            let fetcher = fetcher()?;
            let rem = parse_iri(&rem)?;
            let at = at.unwrap_or_else(Utc::now);
            let manifest = archive_snapshot(fetcher.as_ref(), &rem, &dir, at, parallelism)
                .map_err(|e| match e {
                    SnapshotError::Fetch(_) | SnapshotError::Status { .. } => Failure::network(e),
                    other => Failure::input(other),
                })?;
            let failed = manifest
                .entries
                .iter()
                .filter(|e| !e.status.is_success())
                .count();
            if failed > 0 {
                emit(
                    err,
                    format!("warning: {failed} resources could not be retrieved\n"),
                )?;
            }
            emit(out, format!("{}\n", dir.join(MANIFEST_FILE).display()))?;
            Ok(EXIT_OK)
        }
        Command::Graph {
            rem,
            parents: _,
            lineage: ar,
            mode,
        } => {
            let fetcher = fetcher()?;
            let rem = parse_iri(&rem)?;
            let (store, failures) = collect_nesting_store(fetcher.as_ref(), &rem)?;
            let mut notes = String::new();
            for (iri, why) in &failures {
                notes.push_str(&format!("warning: {iri}: {why}\n"));
            }
            emit(err, notes)?;
            let mut text = String::new();
            match ar {
                Some(ar) => {
                    let mode = match mode {
                        Mode::Strict => LineageMode::Strict,
                        Mode::Degraded => LineageMode::Degraded,
                    };
                    for entry in lineage(&store, &parse_iri(&ar)?, mode) {
                        let by = entry
                            .asserted_by
                            .map(|i| i.to_string())
                            .unwrap_or_else(|| "-".into());
                        text.push_str(&format!("{}\t{by}\n", entry.target));
                    }
                }
                None => {
                    let agg = store
                        .get(&rem)
                        .map(ResourceMapGraph::aggregation_uri)
                        .ok_or_else(|| Failure::input(format!("{rem} was not retrieved")))?;
                    let nesting = nesting_closure(&store, &agg).map_err(Failure::input)?;
                    for p in &nesting.parents {
                        text.push_str(&format!("parent\t{p}\n"));
                    }
                    for r in &nesting.also_in {
                        text.push_str(&format!("also-in\t{r}\n"));
                    }
                    for c in &nesting.cycles {
                        text.push_str(&format!("cycle\t{c}\n"));
                    }
                }
            }
            emit(out, text)?;
            Ok(EXIT_OK)
        }
    }
}

fn emit(w: &mut dyn Write, text: String) -> Result<(), Failure> {
    w.write_all(text.as_bytes()).map_err(Failure::input)
}

fn report_code(report: &ValidationReport) -> u8 {
    if report.errors().next().is_some() {
        EXIT_INVALID
    } else {
        EXIT_OK
    }
}

fn is_url(input: &str) -> bool {
    input.starts_with("http://") || input.starts_with("https://")
}

fn parse_iri(text: &str) -> Result<Iri, Failure> {
    Iri::parse(text).map_err(Failure::input)
}

fn make_fetcher(fixture: Option<&Path>) -> Result<Box<dyn Fetcher>, Failure> {
    match fixture {
        Some(path) => Ok(Box::new(
            FixtureFetcher::from_routing_file(path).map_err(Failure::input)?,
        )),
        None => http_fetcher(),
    }
}

#[cfg(feature = "http")]
fn http_fetcher() -> Result<Box<dyn Fetcher>, Failure> {
    Ok(Box::new(ore_core::harvest::HttpFetcher::new()?))
}

#[cfg(not(feature = "http"))]
fn http_fetcher() -> Result<Box<dyn Fetcher>, Failure> {
    Err(Failure::network(
        "built without HTTP support; pass --fixture",
    ))
}

/// Reads a Resource Map from a URL or a file. Files ending in `.nt` are
/// N-Triples, `.atom` and `.xml` are Atom, anything else is sniffed.
fn load(input: &str, fetcher: Option<&dyn Fetcher>) -> Result<ResourceMapGraph, Failure> {
    if let (true, Some(f)) = (is_url(input), fetcher) {
        return Ok(fetch_resource_map(f, &parse_iri(input)?)?);
    }
    let bytes = std::fs::read(input).map_err(|e| Failure::input(format!("{input}: {e}")))?;
    let parse_nt = |bytes: &[u8]| -> Result<ResourceMapGraph, String> {
        let text = std::str::from_utf8(bytes).map_err(|e| e.to_string())?;
        from_ntriples(text, None).map_err(|e| e.to_string())
    };
    let extension = Path::new(input)
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("");
    let parsed = match extension {
        "nt" => parse_nt(&bytes),
        "atom" | "xml" => from_atom(&bytes).map_err(|e| e.to_string()),
        _ => from_atom(&bytes).or_else(|atom| {
            parse_nt(&bytes).map_err(|nt| format!("not Atom ({atom}) or N-Triples ({nt})"))
        }),
    };
    parsed.map_err(|e| Failure::input(format!("{input}: {e}")))
}
