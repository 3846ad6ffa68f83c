use super::{has_rel, DiscoveryHit, Method, REL_RESOURCEMAP};
use crate::model::Iri;

/// One link from a `Link` header value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderLink {
    pub target: Iri,
    /// The raw `rel` parameter, empty when absent.
    pub rel: String,
}

impl HeaderLink {
    /// Lowercased rel tokens.
    pub fn rels(&self) -> impl Iterator<Item = String> + '_ {
        self.rel
            .split_ascii_whitespace()
            .map(str::to_ascii_lowercase)
    }
}

/// Parses a `Link` header value (`<uri>; rel="..."`, comma separated).
/// Malformed segments are skipped with a warning each.
pub fn parse_link_header(value: &str, base: &Iri) -> (Vec<HeaderLink>, Vec<String>) {
    let mut links = Vec::new();
    let mut warnings = Vec::new();
    for segment in split_outside(value, ',') {
        let segment = segment.trim();
        if segment.is_empty() {
            continue;
        }
        match parse_segment(segment, base) {
            Ok(link) => links.push(link),
            Err(reason) => warnings.push(format!("skipped link {segment:?}: {reason}")),
        }
    }
    (links, warnings)
}

/// Resource Map candidates from a `Link` header value.
pub fn scan_link_header(value: &str, base: &Iri) -> (Vec<DiscoveryHit>, Vec<String>) {
    scan_link_header_with(value, base, REL_RESOURCEMAP)
}

/// [`scan_link_header`] with a different relation token.
pub fn scan_link_header_with(
    value: &str,
    base: &Iri,
    rel: &str,
) -> (Vec<DiscoveryHit>, Vec<String>) {
    let (links, warnings) = parse_link_header(value, base);
    let hits = links
        .into_iter()
        .filter(|l| has_rel(&l.rel, rel))
        .map(|l| DiscoveryHit::new(l.target, Method::HttpHeader, base.clone()))
        .collect();
    (hits, warnings)
}

fn parse_segment(segment: &str, base: &Iri) -> Result<HeaderLink, String> {
    let rest = segment
        .strip_prefix('<')
        .ok_or("expected '<' at the start")?;
    let close = rest.find('>').ok_or("missing '>'")?;
    let target = base
        .resolve(rest[..close].trim())
        .map_err(|e| e.to_string())?;
    let mut rel = None;
    let params = rest[close + 1..].trim();
    if !params.is_empty() && !params.starts_with(';') {
        return Err("expected ';' after the target".into());
    }
    for param in split_outside(params, ';').into_iter().skip(1) {
        let param = param.trim();
        if param.is_empty() {
            continue;
        }
        let (name, value) = match param.split_once('=') {
            Some((n, v)) => (n.trim(), v.trim()),
            None => (param, ""),
        };
        if name.is_empty() {
            return Err(format!("parameter without a name: {param:?}"));
        }
        let value = match value.strip_prefix('"') {
            Some(quoted) => unquote(quoted).ok_or("unterminated quoted string")?,
            None => value.to_string(),
        };
        // Only the first rel parameter counts.
        if name.eq_ignore_ascii_case("rel") && rel.is_none() {
            rel = Some(value);
        }
    }
    Ok(HeaderLink {
        target,
        rel: rel.unwrap_or_default(),
    })
}

/// Body of a quoted string whose opening quote is already consumed.
fn unquote(s: &str) -> Option<String> {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?),
            '"' => return chars.as_str().trim().is_empty().then_some(out),
            c => out.push(c),
        }
    }
    None
}

/// Splits on `sep` where it is not inside `<...>` or a quoted string.
fn split_outside(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    let mut in_angle = false;
    let mut in_quote = false;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' if in_quote => escaped = true,
            '"' if !in_angle => in_quote = !in_quote,
            '<' if !in_quote => in_angle = true,
            '>' if !in_quote => in_angle = false,
            c if c == sep && !in_angle && !in_quote => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}
