use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bio::{disjoint_subset, encode_on, BioSequence};
use crate::error::Result;
use crate::marker::MarkedSentence;
use crate::types::{ElementKind, Sentence, Span, Triple};

use super::Tagger;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct GoldSpans {
    #[serde(rename = "s")]
    subject: Span,
    #[serde(rename = "p")]
    predicate: Span,
    #[serde(rename = "o")]
    object: Span,
    #[serde(rename = "a", default)]
    args: Vec<Span>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    words: Vec<String>,
    triples: Vec<GoldSpans>,
}

/// Serialized form of an [`OracleTagger`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleMeta {
    sentences: BTreeMap<String, Entry>,
}

/// Emits exactly the gold spans consistent with the conditioning markers.
///
/// For a query `(marked, kind)` it collects every gold triple of the sentence
/// that agrees with all marked elements and labels their `kind` spans. Spans
/// that cannot coexist in one BIO sequence (overlapping each other or a marked
/// element) are thinned greedily, earliest and longest first. Unknown
/// sentences, or sentences whose words differ from the gold copy, get all-O.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTagger {
    sentences: BTreeMap<String, Entry>,
}

impl OracleTagger {
    pub fn new<'a>(gold: impl IntoIterator<Item = (&'a Sentence, &'a [Triple])>) -> Self {
        let mut sentences: BTreeMap<String, Entry> = BTreeMap::new();
        for (sentence, triples) in gold {
            let entry = sentences
                .entry(sentence.id().to_string())
                .or_insert_with(|| Entry {
                    words: sentence.words().into_iter().map(String::from).collect(),
                    triples: Vec::new(),
                });
            for t in triples {
                let g = GoldSpans {
                    subject: t.subject,
                    predicate: t.predicate,
                    object: t.object,
                    args: t.args.clone(),
                };
                if !entry.triples.contains(&g) {
                    entry.triples.push(g);
                }
            }
        }
        OracleTagger { sentences }
    }

    pub(super) fn to_meta(&self) -> OracleMeta {
        OracleMeta {
            sentences: self.sentences.clone(),
        }
    }

    pub(super) fn from_meta(meta: OracleMeta) -> Self {
        OracleTagger {
            sentences: meta.sentences,
        }
    }

    /// Gold spans of `kind` consistent with the markers, before thinning.
    pub fn consistent_spans(&self, marked: &MarkedSentence, kind: ElementKind) -> Vec<Span> {
        let base = marked.base();
        let Some(entry) = self.sentences.get(base.id()) else {
            return Vec::new();
        };
        if entry.words.len() != base.len()
            || entry.words.iter().zip(base.tokens()).any(|(w, t)| *w != t.text)
        {
            return Vec::new();
        }
        let markers = marked.markers();
        let mut out = Vec::new();
        for g in &entry.triples {
            let agrees = markers.core().all(|(k, s)| match k {
                ElementKind::Subject => g.subject == s,
                ElementKind::Predicate => g.predicate == s,
                ElementKind::Object => g.object == s,
                ElementKind::Argument => true,
            });
            if !agrees {
                continue;
            }
            match kind {
                ElementKind::Subject => out.push(g.subject),
                ElementKind::Predicate => out.push(g.predicate),
                ElementKind::Object => out.push(g.object),
                ElementKind::Argument => out.extend(&g.args),
            }
        }
        out
    }
}

impl Tagger for OracleTagger {
    fn predict(&self, marked: &MarkedSentence, kind: ElementKind) -> Result<BioSequence> {
        let blocked: Vec<Span> = marked.markers().core().map(|(_, s)| s).collect();
        let spans = disjoint_subset(&self.consistent_spans(marked, kind), &blocked);
        encode_on(&spans, marked)
    }
}
