//! Water filling: vote-based aggregation across decoding pathways.
//!
//! Each pathway acts as one voter. Triples are admitted in order of
//! decreasing votes and get `votes / 6` as confidence.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::pathway::Pathway;
use crate::types::{Triple, TripleKey};

/// A triple together with the pathways that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct VotedTriple {
    pub triple: Triple,
    pub votes: usize,
    pub pathways: BTreeSet<Pathway>,
}

const VOTERS: f64 = Pathway::ALL.len() as f64;

/// Groups triples by key and counts distinct producing pathways.
///
/// Output is sorted by votes (descending), then by subject, predicate and
/// object start, then by key. Arguments of each output triple are sorted.
pub fn vote<'a, I>(results: I) -> Result<Vec<VotedTriple>>
where
    I: IntoIterator<Item = (Pathway, &'a [Triple])>,
{
    let mut groups: BTreeMap<TripleKey, BTreeSet<Pathway>> = BTreeMap::new();
    let mut sentence: Option<&str> = None;
    for (pathway, triples) in results {
        for t in triples {
            match sentence {
                None => sentence = Some(&t.sentence_id),
                Some(s) if s != t.sentence_id => {
                    return Err(Error::MixedSentence(s.to_string(), t.sentence_id.clone()));
                }
                Some(_) => {}
            }
            groups.entry(t.key()).or_default().insert(pathway);
        }
    }

    let mut voted: Vec<VotedTriple> = groups
        .into_iter()
        .map(|(key, pathways)| {
            let votes = pathways.len();
            let triple = Triple {
                sentence_id: key.sentence_id,
                subject: key.subject,
                predicate: key.predicate,
                object: key.object,
                args: key.args,
                confidence: votes as f64 / VOTERS,
            };
            VotedTriple {
                triple,
                votes,
                pathways,
            }
        })
        .collect();
    voted.sort_by(|a, b| {
        b.votes
            .cmp(&a.votes)
            .then(a.triple.subject.start.cmp(&b.triple.subject.start))
            .then(a.triple.predicate.start.cmp(&b.triple.predicate.start))
            .then(a.triple.object.start.cmp(&b.triple.object.start))
            .then_with(|| a.triple.key().cmp(&b.triple.key()))
    });
    Ok(voted)
}

/// Aggregated triples with vote confidences, dropping those under `min_votes`.
pub fn water_fill<'a, I>(results: I, min_votes: usize) -> Result<Vec<Triple>>
where
    I: IntoIterator<Item = (Pathway, &'a [Triple])>,
{
    Ok(vote(results)?
        .into_iter()
        .filter(|v| v.votes >= min_votes)
        .map(|v| v.triple)
        .collect())
}
