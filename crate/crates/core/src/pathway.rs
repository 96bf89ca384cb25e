//! Iterative decoding along one extraction order.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bio::decode_bio;
use crate::error::{Error, Result};
use crate::marker::mark;
use crate::tagger::Tagger;
use crate::types::{ElementKind, PartialTriple, Sentence, Span, Triple, TripleKey, DEFAULT_MAX_LEN};

use ElementKind::{Object as O, Predicate as P, Subject as S};

/// Order in which subject, predicate and object are extracted.
/// Arguments always come last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pathway {
    #[serde(rename = "SPOA")]
    Spoa,
    #[serde(rename = "SOPA")]
    Sopa,
    #[serde(rename = "PSOA")]
    Psoa,
    #[serde(rename = "POSA")]
    Posa,
    #[serde(rename = "OSPA")]
    Ospa,
    #[serde(rename = "OPSA")]
    Opsa,
}

impl Pathway {
    pub const ALL: [Pathway; 6] = [
        Pathway::Spoa,
        Pathway::Sopa,
        Pathway::Psoa,
        Pathway::Posa,
        Pathway::Ospa,
        Pathway::Opsa,
    ];

    pub fn order(self) -> [ElementKind; 3] {
        match self {
            Pathway::Spoa => [S, P, O],
            Pathway::Sopa => [S, O, P],
            Pathway::Psoa => [P, S, O],
            Pathway::Posa => [P, O, S],
            Pathway::Ospa => [O, S, P],
            Pathway::Opsa => [O, P, S],
        }
    }

    pub fn from_order(order: [ElementKind; 3]) -> Option<Self> {
        Pathway::ALL.into_iter().find(|p| p.order() == order)
    }

    pub fn name(self) -> &'static str {
        match self {
            Pathway::Spoa => "SPOA",
            Pathway::Sopa => "SOPA",
            Pathway::Psoa => "PSOA",
            Pathway::Posa => "POSA",
            Pathway::Ospa => "OSPA",
            Pathway::Opsa => "OPSA",
        }
    }
}

impl fmt::Display for Pathway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pathway {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pathway::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown pathway {s:?}")))
    }
}

/// Bounds on branching during decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeLimits {
    /// Spans expanded per prediction step.
    pub max_branch: usize,
    /// Triples kept per sentence and pathway.
    pub max_triples: usize,
    pub max_len: usize,
}

impl Default for DecodeLimits {
    fn default() -> Self {
        DecodeLimits {
            max_branch: 8,
            max_triples: 64,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl DecodeLimits {
    pub fn validate(&self) -> Result<()> {
        if self.max_branch == 0 || self.max_triples == 0 {
            return Err(Error::Config("max_branch and max_triples must be at least 1".into()));
        }
        Ok(())
    }
}

/// Counters describing what decoding dropped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Branches whose prediction decoded to no span.
    pub pruned_empty: usize,
    /// Branches dropped because marking exceeded `max_len`.
    pub length_overflows: usize,
    /// Predicted spans overlapping an element already in the branch.
    pub overlapping_spans: usize,
    /// Steps that produced more than `max_branch` spans.
    pub branch_limit_hits: usize,
    /// Branches dropped by `max_triples`.
    pub triple_limit_drops: usize,
    /// Branches collapsed as duplicates.
    pub duplicates: usize,
}

impl Diagnostics {
    pub fn merge(&mut self, other: &Diagnostics) {
        self.pruned_empty += other.pruned_empty;
        self.length_overflows += other.length_overflows;
        self.overlapping_spans += other.overlapping_spans;
        self.branch_limit_hits += other.branch_limit_hits;
        self.triple_limit_drops += other.triple_limit_drops;
        self.duplicates += other.duplicates;
    }
}

/// Triples from one decoding run with its diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Extraction {
    pub triples: Vec<Triple>,
    pub diagnostics: Diagnostics,
}

/// Extracts triples following `pathway`.
pub fn extract<T: Tagger + ?Sized>(
    sentence: &Sentence,
    pathway: Pathway,
    model: &T,
    limits: &DecodeLimits,
) -> Result<Extraction> {
    expand(sentence, PartialTriple::new(), &pathway.order(), model, limits)
}

/// Runs all six pathways, possibly in parallel. Entries are in fixed pathway order.
pub fn extract_all<T: Tagger + ?Sized>(
    sentence: &Sentence,
    model: &T,
    limits: &DecodeLimits,
) -> Result<BTreeMap<Pathway, Extraction>> {
    Pathway::ALL
        .par_iter()
        .map(|p| extract(sentence, *p, model, limits).map(|e| (*p, e)))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().collect())
}

/// Breadth-wise decoding from a root branch.
///
/// Each step marks every element already in the branch, predicts the next
/// kind and forks one branch per decoded span. Branches with no span are
/// pruned. Complete branches get a single argument prediction whose spans are
/// all attached. Duplicate triples are collapsed, keeping the first.
pub fn expand<T: Tagger + ?Sized>(
    sentence: &Sentence,
    root: PartialTriple,
    steps: &[ElementKind],
    model: &T,
    limits: &DecodeLimits,
) -> Result<Extraction> {
    limits.validate()?;
    let mut diag = Diagnostics::default();
    let mut root = root;
    root.args.clear();
    let mut frontier = vec![root];

    for &kind in steps {
        debug_assert!(kind.is_core());
        let mut next = Vec::new();
        for branch in &frontier {
            let marked = match mark(sentence, branch, limits.max_len) {
                Ok(m) => m,
                Err(Error::Length { .. }) => {
                    diag.length_overflows += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let labels = model.predict(&marked, kind)?;
            let spans = decode_bio(&labels, &marked)?;
            if spans.is_empty() {
                diag.pruned_empty += 1;
                continue;
            }
            if spans.len() > limits.max_branch {
                diag.branch_limit_hits += 1;
            }
            for span in spans.into_iter().take(limits.max_branch) {
                if branch.core().any(|(_, s)| s.overlaps(&span)) {
                    diag.overlapping_spans += 1;
                    continue;
                }
                next.push(branch.clone().with(kind, span));
            }
        }
        if next.len() > limits.max_triples {
            diag.triple_limit_drops += next.len() - limits.max_triples;
            next.truncate(limits.max_triples);
        }
        frontier = next;
    }

    let mut triples = Vec::new();
    let mut seen: HashSet<TripleKey> = HashSet::new();
    for branch in frontier {
        let Some(mut triple) = branch.complete(sentence.id()) else {
            continue;
        };
        let marked = match mark(sentence, &branch, limits.max_len) {
            Ok(m) => m,
            Err(Error::Length { .. }) => {
                diag.length_overflows += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let labels = model.predict(&marked, ElementKind::Argument)?;
        let core: Vec<Span> = branch.core().map(|(_, s)| s).collect();
        for span in decode_bio(&labels, &marked)? {
            if core.iter().any(|s| s.overlaps(&span)) {
                diag.overlapping_spans += 1;
            } else {
                triple.args.push(span);
            }
        }
        if seen.insert(triple.key()) {
            triples.push(triple);
        } else {
            diag.duplicates += 1;
        }
    }
    Ok(Extraction {
        triples,
        diagnostics: diag,
    })
}
