//! Small helpers over `roxmltree` for namespace-aware reading and over plain
//! strings for writing.

use roxmltree::Node;

use crate::model::{Iri, ModelError};

pub const ATOM_NS: &str = "http://www.w3.org/2005/Atom";
pub const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";
pub const XMLNS_NS: &str = "http://www.w3.org/2000/xmlns/";

pub fn parse_document(bytes: &[u8]) -> Result<roxmltree::Document<'_>, String> {
    let text = std::str::from_utf8(bytes).map_err(|e| format!("not UTF-8: {e}"))?;
    let opts = roxmltree::ParsingOptions {
        allow_dtd: true,
        ..Default::default()
    };
    roxmltree::Document::parse_with_options(text, opts).map_err(|e| e.to_string())
}

pub fn is_atom(node: &Node<'_, '_>, local: &str) -> bool {
    node.is_element()
        && node.tag_name().namespace() == Some(ATOM_NS)
        && node.tag_name().name() == local
}

pub fn atom_children<'a, 'i>(
    node: Node<'a, 'i>,
    local: &'static str,
) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(move |c| is_atom(c, local))
}

/// Concatenated text of the direct text children.
pub fn text_of(node: &Node<'_, '_>) -> String {
    node.children()
        .filter(|c| c.is_text())
        .filter_map(|c| c.text())
        .collect()
}

/// Base IRI in effect for `node`, applying `xml:base` attributes from the
/// root down onto `doc_base`.
pub fn base_for(node: &Node<'_, '_>, doc_base: Option<&Iri>) -> Option<Iri> {
    let mut chain: Vec<&str> = node
        .ancestors()
        .filter(|n| n.is_element())
        .filter_map(|n| n.attribute((XML_NS, "base")))
        .collect();
    chain.reverse();
    let mut base = doc_base.cloned();
    for reference in chain {
        base = match &base {
            Some(b) => b.resolve(reference).ok(),
            None => Iri::parse(reference).ok(),
        };
    }
    base
}

/// Resolves `href` against `base`; without a base it must be absolute.
pub fn resolve(base: Option<&Iri>, href: &str) -> Result<Iri, ModelError> {
    let href = href.trim();
    match base {
        Some(b) => b.resolve(href),
        None => Iri::parse(href),
    }
}

/// Escapes element text. Carriage returns are written as character
/// references so parsers do not fold them into newlines.
pub fn escape_text(s: &str) -> String {
    quick_xml::escape::partial_escape(s).replace('\r', "&#13;")
}

pub fn escape_attr(s: &str) -> String {
    quick_xml::escape::escape(s).into_owned()
}

/// Whether `s` can be carried as XML 1.0 character data.
pub fn is_xml_text(s: &str) -> bool {
    s.chars().all(|c| {
        matches!(c, '\t' | '\n' | '\r')
            || ('\u{20}'..='\u{D7FF}').contains(&c)
            || ('\u{E000}'..='\u{FFFD}').contains(&c)
            || c >= '\u{10000}'
    })
}

/// Whether `s` is an XML NCName (ASCII-restricted).
pub fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}
