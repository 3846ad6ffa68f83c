use crate::model::Iri;

/// Mints the Atom-only identifiers and titles for a Resource Map feed.
///
/// Feed ids are `tag:` IRIs built from the Resource Map IRI. For a plain
/// `http://host/path` map the id is `tag:host,DATE:/path`; anything else
/// (other schemes, ports, user info, empty paths) falls back to
/// `tag:host,DATE:~<full IRI>`. The two forms start with different
/// characters, so minting is injective. Entry ids append the aggregated
/// resource IRI as a fragment with `%` and `#` percent-encoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomProfile {
    /// Date component of the `tag:` tagging entity.
    pub tag_date: String,
}

const FALLBACK_AUTHORITY: &str = "ore.invalid";

impl Default for AtomProfile {
    fn default() -> Self {
        AtomProfile {
            tag_date: "2008".to_string(),
        }
    }
}

impl AtomProfile {
    pub fn feed_id(&self, rem: &Iri) -> Iri {
        let text = rem.as_str();
        let authority = rem.authority();
        let host = authority.and_then(dns_host);
        let simple =
            rem.scheme() == "http" && authority.is_some_and(|a| Some(a) == host) && host.is_some();
        let id = if simple {
            let host = host.unwrap_or_default();
            let rest = &text["http://".len() + host.len()..];
            if rest.starts_with('/') {
                format!("tag:{host},{}:{rest}", self.tag_date)
            } else {
                format!("tag:{host},{}:~{text}", self.tag_date)
            }
        } else {
            let host = host.unwrap_or(FALLBACK_AUTHORITY);
            format!("tag:{host},{}:~{text}", self.tag_date)
        };
        Iri::parse(id).expect("minted tag IRI is valid")
    }

    pub fn entry_id(&self, rem: &Iri, resource: &Iri) -> Iri {
        let fragment = resource.as_str().replace('%', "%25").replace('#', "%23");
        Iri::parse(format!("{}#{fragment}", self.feed_id(rem))).expect("minted entry IRI is valid")
    }

    pub fn feed_title(&self, rem: &Iri) -> String {
        format!("Resource Map {rem}")
    }

    pub fn entry_title(&self, resource: &Iri) -> String {
        format!("Aggregated Resource {resource}")
    }
}

/// Host part of an authority when it is usable as a tag authority name.
fn dns_host(authority: &str) -> Option<&str> {
    let host = authority.rsplit('@').next()?;
    let host = host.split(':').next()?;
    let ok = !host.is_empty()
        && host
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '-');
    ok.then_some(host)
}
