use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::links::{Edge, LinkGraph};
use crate::discovery::REL_RESOURCEMAP;
use crate::model::Iri;

/// How much an Aggregation's members tell a client about its Resource Map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KnowledgeLevel {
    /// Every member links to the Resource Map.
    Full,
    /// One member links to the Resource Map and every other member links to
    /// that one.
    Indirect,
    /// Some members link to the Resource Map.
    Limited,
    /// No member links to the Resource Map.
    Zero,
}

impl fmt::Display for KnowledgeLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnowledgeLevel::Full => "Full",
            KnowledgeLevel::Indirect => "Indirect",
            KnowledgeLevel::Limited => "Limited",
            KnowledgeLevel::Zero => "Zero",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KnowledgeError {
    #[error("cannot classify an Aggregation with no members")]
    EmptyMembers,
}

/// A level plus the edges that justify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub level: KnowledgeLevel,
    /// The member every other member links to, for `Indirect`.
    pub hub: Option<Iri>,
    pub evidence: Vec<Edge>,
}

/// Classifies with precedence Full > Indirect > Limited > Zero.
///
/// Member-to-hub links may have any relation; links to the Resource Map
/// count only with the `resourcemap` relation. For `Indirect`, members
/// other than the hub must not link to the Resource Map at all.
pub fn classify_knowledge(
    rem: &Iri,
    members: &BTreeSet<Iri>,
    links: &LinkGraph,
) -> Result<KnowledgeLevel, KnowledgeError> {
    explain_knowledge(rem, members, links).map(|c| c.level)
}

pub fn explain_knowledge(
    rem: &Iri,
    members: &BTreeSet<Iri>,
    links: &LinkGraph,
) -> Result<Classification, KnowledgeError> {
    if members.is_empty() {
        return Err(KnowledgeError::EmptyMembers);
    }
    let to_rem = |m: &Iri| Edge::new(m.clone(), REL_RESOURCEMAP, rem.clone());
    let linking: Vec<&Iri> = members
        .iter()
        .filter(|m| links.contains(m, REL_RESOURCEMAP, rem))
        .collect();

    if linking.len() == members.len() {
        return Ok(Classification {
            level: KnowledgeLevel::Full,
            hub: None,
            evidence: linking.into_iter().map(to_rem).collect(),
        });
    }

    if let [hub] = linking[..] {
        let mut evidence = vec![to_rem(hub)];
        let mut indirect = true;
        for member in members.iter().filter(|m| *m != hub) {
            let mut to_hub = links
                .edges_from(member)
                .filter(|e| &e.target == hub)
                .peekable();
            let touches_rem = links.edges_from(member).any(|e| &e.target == rem);
            if to_hub.peek().is_none() || touches_rem {
                indirect = false;
                break;
            }
            evidence.extend(to_hub.cloned());
        }
        if indirect {
            return Ok(Classification {
                level: KnowledgeLevel::Indirect,
                hub: Some(hub.clone()),
                evidence,
            });
        }
    }

    if !linking.is_empty() {
        return Ok(Classification {
            level: KnowledgeLevel::Limited,
            hub: None,
            evidence: linking.into_iter().map(to_rem).collect(),
        });
    }

    Ok(Classification {
        level: KnowledgeLevel::Zero,
        hub: None,
        evidence: Vec::new(),
    })
}
