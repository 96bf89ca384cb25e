//! JSONL record formats.
//!
//! * sentence: `{"id", "tokens": [{"text", "dep", "pos"?, "head"?}]}`
//!   where `head` is the 0-based index of the governing token (absent for the root)
//! * triple: `{"sentence_id", "subject": [s,e], "predicate", "object", "args", "confidence"}`
//! * gold record: `{"sentence": <sentence>, "triples": [<triple without id/confidence>]}`
//! * training instance: `{"rendered", "tags", "pos"?, "target_kind", "labels", "negative"}`
//! * fact synsets: `{"sentence_id", "facts": [[{"s", "p", "o"}, ...], ...]}`
//! * priors: `{"sentence_id", "subject"?, "predicate"?, "object"?}` with spans or strings

use std::io::BufRead;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bio::BioSequence;
use crate::error::{Error, Result};
use crate::eval::{FactSynset, SurfaceTriple};
use crate::marker::MarkedSentence;
use crate::tagger::TrainingInstance;
use crate::traindata::GoldRecord;
use crate::types::{ElementKind, PartialTriple, Sentence, Span, Token, Triple};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub text: String,
    pub dep: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub id: String,
    pub tokens: Vec<TokenRecord>,
}

impl SentenceRecord {
    pub fn into_sentence(self, max_len: usize) -> Result<Sentence> {
        let tokens = self
            .tokens
            .into_iter()
            .map(|t| Token {
                index: 0,
                text: t.text,
                dep: t.dep,
                pos: t.pos,
                head: t.head,
            })
            .collect();
        let s = Sentence::new(self.id, tokens)?;
        s.check_max_len(max_len)?;
        Ok(s)
    }
}

impl From<&Sentence> for SentenceRecord {
    fn from(s: &Sentence) -> Self {
        SentenceRecord {
            id: s.id().to_string(),
            tokens: s
                .tokens()
                .iter()
                .map(|t| TokenRecord {
                    text: t.text.clone(),
                    dep: t.dep.clone(),
                    pos: t.pos.clone(),
                    head: t.head,
                })
                .collect(),
        }
    }
}

fn default_confidence() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub sentence_id: String,
    pub subject: Span,
    pub predicate: Span,
    pub object: Span,
    #[serde(default)]
    pub args: Vec<Span>,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

impl From<&Triple> for TripleRecord {
    fn from(t: &Triple) -> Self {
        TripleRecord {
            sentence_id: t.sentence_id.clone(),
            subject: t.subject,
            predicate: t.predicate,
            object: t.object,
            args: t.args.clone(),
            confidence: t.confidence,
        }
    }
}

impl TripleRecord {
    pub fn into_triple(self) -> Result<Triple> {
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(Error::Data(format!(
                "confidence {} outside [0, 1]",
                self.confidence
            )));
        }
        Ok(Triple {
            sentence_id: self.sentence_id,
            subject: self.subject,
            predicate: self.predicate,
            object: self.object,
            args: self.args,
            confidence: self.confidence,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldTripleRecord {
    pub subject: Span,
    pub predicate: Span,
    pub object: Span,
    #[serde(default)]
    pub args: Vec<Span>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldRecordJson {
    pub sentence: SentenceRecord,
    pub triples: Vec<GoldTripleRecord>,
}

impl GoldRecordJson {
    pub fn into_record(self, max_len: usize) -> Result<GoldRecord> {
        let sentence = self.sentence.into_sentence(max_len)?;
        let triples = self
            .triples
            .into_iter()
            .map(|t| Triple::new(sentence.id(), t.subject, t.predicate, t.object).with_args(t.args))
            .collect();
        GoldRecord::new(sentence, triples)
    }
}

impl From<&GoldRecord> for GoldRecordJson {
    fn from(r: &GoldRecord) -> Self {
        GoldRecordJson {
            sentence: SentenceRecord::from(&r.sentence),
            triples: r
                .triples
                .iter()
                .map(|t| GoldTripleRecord {
                    subject: t.subject,
                    predicate: t.predicate,
                    object: t.object,
                    args: t.args.clone(),
                })
                .collect(),
        }
    }
}

/// A line that carries a sentence: either a bare sentence or a gold record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SentenceLine {
    Gold(GoldRecordJson),
    Sentence(SentenceRecord),
}

impl SentenceLine {
    pub fn into_sentence(self, max_len: usize) -> Result<Sentence> {
        match self {
            SentenceLine::Gold(g) => g.sentence.into_sentence(max_len),
            SentenceLine::Sentence(s) => s.into_sentence(max_len),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub rendered: Vec<String>,
    /// Dependency tags, `MARKER` at marker positions.
    pub tags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Vec<String>>,
    pub target_kind: ElementKind,
    pub labels: BioSequence,
    pub negative: bool,
}

impl From<&TrainingInstance> for InstanceRecord {
    fn from(inst: &TrainingInstance) -> Self {
        let m = &inst.marked;
        let has_pos = m.base().tokens().iter().all(|t| t.pos.is_some());
        InstanceRecord {
            rendered: (0..m.len()).map(|i| m.text(i).to_string()).collect(),
            tags: (0..m.len()).map(|i| m.dep(i).to_string()).collect(),
            pos: has_pos.then(|| (0..m.len()).map(|i| m.pos(i).unwrap().to_string()).collect()),
            target_kind: inst.target_kind,
            labels: inst.target_labels.clone(),
            negative: inst.is_negative,
        }
    }
}

impl InstanceRecord {
    pub fn into_instance(self, id: impl Into<String>, max_len: usize) -> Result<TrainingInstance> {
        let n = self.rendered.len();
        if self.tags.len() != n || self.pos.as_ref().is_some_and(|p| p.len() != n) {
            return Err(Error::Data("rendered, tags and pos differ in length".into()));
        }
        let pos = self.pos.map(|p| p.into_iter().map(Some).collect()).unwrap_or_else(|| vec![None; n]);
        let items = self
            .rendered
            .into_iter()
            .zip(self.tags)
            .zip(pos)
            .map(|((t, d), p)| (t, d, p));
        let marked = MarkedSentence::from_rendered(id, items, max_len)?;
        TrainingInstance::new(marked, self.target_kind, self.labels, self.negative)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactRecord {
    pub s: String,
    pub p: String,
    pub o: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactSynsetRecord {
    pub sentence_id: String,
    pub facts: Vec<Vec<FactRecord>>,
}

impl FactSynsetRecord {
    pub fn into_synsets(self) -> Result<Vec<FactSynset>> {
        self.facts
            .into_iter()
            .map(|variants| {
                if variants.is_empty() {
                    return Err(Error::Data(format!(
                        "empty fact synset for sentence {:?}",
                        self.sentence_id
                    )));
                }
                Ok(FactSynset {
                    sentence_id: self.sentence_id.clone(),
                    variants: variants
                        .iter()
                        .map(|f| SurfaceTriple::new(self.sentence_id.clone(), &f.s, &f.p, &f.o))
                        .collect(),
                })
            })
            .collect()
    }
}

/// A prior element given either as a token span or as a surface string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpanOrText {
    Span(Span),
    Text(String),
}

impl SpanOrText {
    /// Resolves to a span; strings align to the leftmost exact token match.
    pub fn resolve(&self, sentence: &Sentence) -> Option<Span> {
        match self {
            SpanOrText::Span(s) => s.check(sentence.len()).ok().map(|_| *s),
            SpanOrText::Text(t) => sentence.find_phrase(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorRecord {
    pub sentence_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<SpanOrText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<SpanOrText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<SpanOrText>,
}

impl PriorRecord {
    /// Aligns every given element; `None` if any fails to align.
    pub fn resolve(&self, sentence: &Sentence) -> Option<PartialTriple> {
        let mut prior = PartialTriple::new();
        for (kind, value) in [
            (ElementKind::Subject, &self.subject),
            (ElementKind::Predicate, &self.predicate),
            (ElementKind::Object, &self.object),
        ] {
            if let Some(v) = value {
                prior.set(kind, v.resolve(sentence)?);
            }
        }
        Some(prior)
    }
}

/// A JSONL parse failure with its 1-based line number.
#[derive(Debug, thiserror::Error)]
#[error("line {line}: {source}")]
pub struct LineError {
    pub line: usize,
    #[source]
    pub source: Error,
}

/// Parses non-blank lines of a JSONL stream.
pub fn read_jsonl<T: DeserializeOwned, R: BufRead>(
    reader: R,
) -> impl Iterator<Item = std::result::Result<(usize, T), LineError>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line_no = i + 1;
            match line {
                Err(e) => Some(Err(LineError {
                    line: line_no,
                    source: e.into(),
                })),
                Ok(l) if l.trim().is_empty() => None,
                Ok(l) => Some(
                    serde_json::from_str::<T>(&l)
                        .map(|v| (line_no, v))
                        .map_err(|e| LineError {
                            line: line_no,
                            source: e.into(),
                        }),
                ),
            }
        })
}

/// Serializes one record as a JSON line (without the newline).
pub fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("records serialize")
}
