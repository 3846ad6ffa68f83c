use thiserror::Error;

use super::fetch::{fetch_following, FetchError, Fetched, Fetcher};
use crate::atom::{self, AtomError};
use crate::model::{Iri, ResourceMapGraph};
use crate::ntriples::{self, NTriplesError};

/// Serialization a Resource Map was served in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Atom,
    NTriples,
}

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("Atom: {0}")]
    Atom(#[from] AtomError),
    #[error("N-Triples: {0}")]
    NTriples(#[from] NTriplesError),
    #[error("not a recognizable Resource Map serialization")]
    Unrecognized,
}

#[derive(Debug, Error)]
pub enum HarvestError {
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("{iri}: status {status}")]
    Status { iri: Iri, status: u16 },
    #[error("{iri}: {source}")]
    Decode { iri: Iri, source: DecodeError },
    #[error("fetched {location} but the document describes {found}")]
    RemUriMismatch { location: Iri, found: Iri },
}

/// Decodes a fetched document. The media type picks the codec; a missing or
/// generic one falls back to sniffing, Atom first, then N-Triples.
pub fn decode_response(fetched: &Fetched) -> Result<(ResourceMapGraph, Format), DecodeError> {
    let body = &fetched.response.body;
    let atom = || atom::decode_atom(body, Some(&fetched.iri)).map(|d| (d.graph, Format::Atom));
    let nt = || {
        let text = std::str::from_utf8(body).map_err(|_| DecodeError::Unrecognized)?;
        ntriples::from_ntriples(text, Some(&fetched.iri))
            .map(|g| (g, Format::NTriples))
            .map_err(DecodeError::from)
    };
    match fetched.response.media_type.as_deref() {
        Some(atom::MEDIA_TYPE) => Ok(atom()?),
        Some(ntriples::MEDIA_TYPE) => nt(),
        _ => match atom() {
            Ok(decoded) => Ok(decoded),
            Err(AtomError::MalformedXml(_) | AtomError::NotAFeed) => {
                nt().map_err(|_| DecodeError::Unrecognized)
            }
            Err(e) => Err(e.into()),
        },
    }
}

/// Dereferences a Resource Map. The decoded graph must name the IRI the
/// document was finally served from.
pub fn fetch_resource_map(
    fetcher: &dyn Fetcher,
    iri: &Iri,
) -> Result<ResourceMapGraph, HarvestError> {
    fetch_resource_map_with_format(fetcher, iri).map(|(g, _)| g)
}

pub(crate) fn fetch_resource_map_with_format(
    fetcher: &dyn Fetcher,
    iri: &Iri,
) -> Result<(ResourceMapGraph, Format), HarvestError> {
    let fetched = fetch_following(fetcher, iri)?;
    if !fetched.response.is_success() {
        return Err(HarvestError::Status {
            iri: fetched.iri,
            status: fetched.response.status,
        });
    }
    let (graph, format) = decode_response(&fetched).map_err(|source| HarvestError::Decode {
        iri: fetched.iri.clone(),
        source,
    })?;
    if graph.rem_uri() != &fetched.iri {
        return Err(HarvestError::RemUriMismatch {
            location: fetched.iri,
            found: graph.rem_uri().clone(),
        });
    }
    Ok((graph, format))
}
