use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::model::Iri;

/// Redirects followed before giving up.
pub const MAX_REDIRECTS: usize = 5;

/// What came back from a single request.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    /// Lowercased media type without parameters.
    pub media_type: Option<String>,
    pub body: Vec<u8>,
    /// Raw `Link` header values.
    pub links: Vec<String>,
    pub location: Option<String>,
}

impl Response {
    pub fn ok(media_type: &str, body: impl Into<Vec<u8>>) -> Self {
        Response {
            status: 200,
            media_type: normalize_media_type(media_type),
            body: body.into(),
            ..Default::default()
        }
    }

    pub fn status(status: u16) -> Self {
        Response {
            status,
            ..Default::default()
        }
    }

    pub fn with_link(mut self, value: impl Into<String>) -> Self {
        self.links.push(value.into());
        self
    }

    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }

    pub fn is_redirect(&self) -> bool {
        (300..400).contains(&self.status) && self.location.is_some()
    }
}

/// `type/subtype` lowercased, parameters dropped; `None` for empty input.
pub fn normalize_media_type(raw: &str) -> Option<String> {
    let essence = raw
        .split(';')
        .next()
        .unwrap_or("")
        .trim()
        .to_ascii_lowercase();
    (!essence.is_empty()).then_some(essence)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FetchError {
    #[error("{iri}: {message}")]
    Transport { iri: Iri, message: String },
    #[error("{iri}: more than {MAX_REDIRECTS} redirects")]
    TooManyRedirects { iri: Iri },
    #[error("{iri}: bad redirect location {location:?}")]
    BadLocation { iri: Iri, location: String },
}

/// Retrieves representations. Implementations must allow concurrent calls.
pub trait Fetcher: Send + Sync {
    fn fetch(&self, iri: &Iri) -> Result<Response, FetchError>;
}

impl<F: Fetcher + ?Sized> Fetcher for &F {
    fn fetch(&self, iri: &Iri) -> Result<Response, FetchError> {
        (**self).fetch(iri)
    }
}

/// A response plus the IRI it was finally served from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub requested: Iri,
    /// Authoritative location after redirects.
    pub iri: Iri,
    pub response: Response,
}

/// Fetches `iri`, following up to [`MAX_REDIRECTS`] redirects.
pub fn fetch_following(fetcher: &dyn Fetcher, iri: &Iri) -> Result<Fetched, FetchError> {
    let mut current = iri.clone();
    for _ in 0..=MAX_REDIRECTS {
        let response = fetcher.fetch(&current)?;
        if !response.is_redirect() {
            return Ok(Fetched {
                requested: iri.clone(),
                iri: current,
                response,
            });
        }
        let location = response.location.clone().unwrap_or_default();
        current = current
            .resolve(location.trim())
            .map_err(|_| FetchError::BadLocation {
                iri: current.clone(),
                location,
            })?;
    }
    Err(FetchError::TooManyRedirects { iri: iri.clone() })
}

/// Runs `fetch_following` over `iris` with at most `parallelism` requests
/// in flight. Results come back in input order.
pub fn fetch_all(
    fetcher: &dyn Fetcher,
    iris: &[Iri],
    parallelism: usize,
) -> Vec<Result<Fetched, FetchError>> {
    let workers = parallelism.max(1).min(iris.len());
    if workers <= 1 {
        return iris.iter().map(|i| fetch_following(fetcher, i)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<Fetched, FetchError>>>> =
        iris.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(iri) = iris.get(i) else { break };
                let result = fetch_following(fetcher, iri);
                *slots[i].lock().expect("slot lock") = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| {
            s.into_inner()
                .expect("slot lock")
                .expect("every slot filled")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Body {
    Bytes(Vec<u8>),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Route {
    status: u16,
    media_type: Option<String>,
    body: Body,
    links: Vec<String>,
    location: Option<String>,
}

#[derive(Debug, Error)]
pub enum RoutingError {
    #[error("cannot read routing file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// Serves canned responses, for tests and offline runs.
///
/// Routes come from code or from a routing file with one tab-separated
/// line per IRI:
///
/// ```text
/// iri  status  media-type  body-path  [Header: value]...
/// ```
///
/// `-` stands for no media type or an empty body. Body paths are relative
/// to the routing file and are read on every request, so edits between runs
/// are visible. `Link` and `Location` headers are honoured. Unrouted IRIs
/// fail as transport errors. Every request is logged.
#[derive(Debug, Default)]
pub struct FixtureFetcher {
    routes: BTreeMap<String, Route>,
    log: Mutex<Vec<Iri>>,
}

impl FixtureFetcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_routing_file(path: &Path) -> Result<Self, RoutingError> {
        let text = std::fs::read_to_string(path).map_err(|source| RoutingError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let mut fetcher = Self::new();
        for (index, line) in text.lines().enumerate() {
            let syntax = |message: String| RoutingError::Syntax {
                path: path.to_path_buf(),
                line: index + 1,
                message,
            };
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 4 {
                return Err(syntax(format!(
                    "expected at least 4 fields, found {}",
                    fields.len()
                )));
            }
            let iri = Iri::parse(fields[0].trim()).map_err(|e| syntax(e.to_string()))?;
            let status = fields[1]
                .trim()
                .parse::<u16>()
                .map_err(|_| syntax(format!("bad status {:?}", fields[1])))?;
            let media_type = match fields[2].trim() {
                "-" => None,
                m => normalize_media_type(m),
            };
            let body = match fields[3].trim() {
                "-" | "" => Body::Bytes(Vec::new()),
                p => Body::File(dir.join(p)),
            };
            let mut route = Route {
                status,
                media_type,
                body,
                links: Vec::new(),
                location: None,
            };
            for header in &fields[4..] {
                let (name, value) = header
                    .split_once(':')
                    .ok_or_else(|| syntax(format!("bad header {header:?}")))?;
                match name.trim().to_ascii_lowercase().as_str() {
                    "link" => route.links.push(value.trim().to_string()),
                    "location" => route.location = Some(value.trim().to_string()),
                    "content-type" => route.media_type = normalize_media_type(value),
                    _ => {}
                }
            }
            fetcher.routes.insert(iri.into_string(), route);
        }
        Ok(fetcher)
    }

    /// Serves `response` for `iri`.
    pub fn insert(&mut self, iri: &str, response: Response) {
        self.routes.insert(
            iri.to_string(),
            Route {
                status: response.status,
                media_type: response.media_type,
                body: Body::Bytes(response.body),
                links: response.links,
                location: response.location,
            },
        );
    }

    /// Serves a redirect from `iri` to `location`.
    pub fn redirect(&mut self, iri: &str, status: u16, location: &str) {
        let mut response = Response::status(status);
        response.location = Some(location.to_string());
        self.insert(iri, response);
    }

    /// Every IRI requested so far, in order.
    pub fn requests(&self) -> Vec<Iri> {
        self.log.lock().expect("log lock").clone()
    }
}

impl Fetcher for FixtureFetcher {
    fn fetch(&self, iri: &Iri) -> Result<Response, FetchError> {
        self.log.lock().expect("log lock").push(iri.clone());
        let route = self
            .routes
            .get(iri.as_str())
            .ok_or_else(|| FetchError::Transport {
                iri: iri.clone(),
                message: "no route in fixture".to_string(),
            })?;
        let body = match &route.body {
            Body::Bytes(b) => b.clone(),
            Body::File(path) => std::fs::read(path).map_err(|e| FetchError::Transport {
                iri: iri.clone(),
                message: format!("{}: {e}", path.display()),
            })?,
        };
        Ok(Response {
            status: route.status,
            media_type: route.media_type.clone(),
            body,
            links: route.links.clone(),
            location: route.location.clone(),
        })
    }
}

/// Plain HTTP(S) GETs. Redirects are returned, not followed, so that
/// [`fetch_following`] sees every hop.
#[cfg(feature = "http")]
#[derive(Debug, Clone)]
pub struct HttpFetcher {
    client: reqwest::blocking::Client,
}

#[cfg(feature = "http")]
impl HttpFetcher {
    pub fn new() -> Result<Self, FetchError> {
        let client = reqwest::blocking::Client::builder()
            .redirect(reqwest::redirect::Policy::none())
            .timeout(std::time::Duration::from_secs(30))
            .user_agent(concat!("ore/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| FetchError::Transport {
                iri: Iri::new_unchecked("about:blank"),
                message: e.to_string(),
            })?;
        Ok(HttpFetcher { client })
    }
}

#[cfg(feature = "http")]
impl Fetcher for HttpFetcher {
    fn fetch(&self, iri: &Iri) -> Result<Response, FetchError> {
        let transport = |e: reqwest::Error| FetchError::Transport {
            iri: iri.clone(),
            message: e.to_string(),
        };
        let response = self
            .client
            .get(iri.as_str())
            .header(
                reqwest::header::ACCEPT,
                "application/atom+xml, application/n-triples;q=0.9, text/html;q=0.5, */*;q=0.1",
            )
            .send()
            .map_err(transport)?;
        let headers = response.headers();
        let text =
            |v: &reqwest::header::HeaderValue| String::from_utf8_lossy(v.as_bytes()).into_owned();
        let media_type = headers
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| normalize_media_type(&text(v)));
        let links = headers
            .get_all(reqwest::header::LINK)
            .iter()
            .map(text)
            .collect();
        let location = headers.get(reqwest::header::LOCATION).map(text);
        let status = response.status().as_u16();
        let body = response.bytes().map_err(transport)?.to_vec();
        Ok(Response {
            status,
            media_type,
            body,
            links,
            location,
        })
    }
}
