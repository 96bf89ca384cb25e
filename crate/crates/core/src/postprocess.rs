//! Binarization of n-ary triples and completion of partial extractions.

use serde::{Deserialize, Serialize};

use crate::bio::decode_bio;
use crate::error::{Error, Result};
use crate::marker::mark;
use crate::pathway::{expand, DecodeLimits, Extraction};
use crate::tagger::Tagger;
use crate::types::{ElementKind, PartialTriple, Sentence, Triple};

/// Counters for [`binarize`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarizeDiagnostics {
    pub accepted: usize,
    pub rejected: usize,
    /// Arguments skipped because marking failed (length or overlap).
    pub skipped: usize,
}

/// Splits an n-ary triple into binary triples.
///
/// The base `(subject; predicate; object)` is always kept. Each argument is
/// then tried as a hypothesized object: with the subject and the argument
/// marked, the predicate head proposes a new relation. If it returns nothing
/// the argument is dropped.
pub fn binarize<T: Tagger + ?Sized>(
    triple: &Triple,
    sentence: &Sentence,
    model: &T,
    max_len: usize,
) -> Result<(Vec<Triple>, BinarizeDiagnostics)> {
    let mut diag = BinarizeDiagnostics::default();
    let mut out = vec![triple.binary()];
    for &arg in &triple.args {
        let marking = PartialTriple::new()
            .with(ElementKind::Subject, triple.subject)
            .with(ElementKind::Object, arg);
        let marked = match mark(sentence, &marking, max_len) {
            Ok(m) => m,
            Err(Error::Length { .. } | Error::Overlap(..)) => {
                diag.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let labels = model.predict(&marked, ElementKind::Predicate)?;
        let predicate = decode_bio(&labels, &marked)?
            .into_iter()
            .find(|p| !p.overlaps(&triple.subject) && !p.overlaps(&arg));
        match predicate {
            Some(p) => {
                diag.accepted += 1;
                out.push(Triple {
                    sentence_id: triple.sentence_id.clone(),
                    subject: triple.subject,
                    predicate: p,
                    object: arg,
                    args: Vec::new(),
                    confidence: triple.confidence,
                });
            }
            None => diag.rejected += 1,
        }
    }
    Ok((out, diag))
}

/// Missing core elements of `prior` in completion order: predicate, subject, object.
pub fn completion_order(prior: &PartialTriple) -> Vec<ElementKind> {
    [ElementKind::Predicate, ElementKind::Subject, ElementKind::Object]
        .into_iter()
        .filter(|k| prior.get(*k).is_none())
        .collect()
}

/// Fills in the elements a partial extraction lacks, then its arguments.
///
/// An empty first completion step rejects the prior and yields no triples.
pub fn complete<T: Tagger + ?Sized>(
    sentence: &Sentence,
    prior: &PartialTriple,
    model: &T,
    limits: &DecodeLimits,
) -> Result<Extraction> {
    for (_, s) in prior.core() {
        s.check(sentence.len())?;
    }
    let spans: Vec<_> = prior.core().map(|(_, s)| s).collect();
    for (i, a) in spans.iter().enumerate() {
        if let Some(b) = spans[i + 1..].iter().find(|b| a.overlaps(b)) {
            return Err(Error::Overlap(*a, *b));
        }
    }
    expand(sentence, prior.clone(), &completion_order(prior), model, limits)
}
