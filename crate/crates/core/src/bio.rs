//! BIO span codec.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marker::MarkedSentence;
use crate::types::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BioLabel {
    B,
    I,
    O,
}

impl BioLabel {
    pub const ALL: [BioLabel; 3] = [BioLabel::B, BioLabel::I, BioLabel::O];

    pub fn index(self) -> usize {
        match self {
            BioLabel::B => 0,
            BioLabel::I => 1,
            BioLabel::O => 2,
        }
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }
}

impl fmt::Display for BioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BioLabel::B => "B",
            BioLabel::I => "I",
            BioLabel::O => "O",
        };
        f.write_str(s)
    }
}

impl FromStr for BioLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" => Ok(BioLabel::B),
            "I" => Ok(BioLabel::I),
            "O" => Ok(BioLabel::O),
            _ => Err(Error::Data(format!("unknown BIO label {s:?}"))),
        }
    }
}

/// Per-position labels for a (rendered) sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BioSequence(pub Vec<BioLabel>);

impl BioSequence {
    pub fn outside(len: usize) -> Self {
        BioSequence(vec![BioLabel::O; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_outside(&self) -> bool {
        self.0.iter().all(|l| *l == BioLabel::O)
    }

    pub fn labels(&self) -> &[BioLabel] {
        &self.0
    }

    /// Contiguous runs in raw sequence positions. A stray `I` opens a run.
    pub fn runs(&self) -> Vec<Span> {
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        for (i, label) in self.0.iter().enumerate() {
            match label {
                BioLabel::B => {
                    if let Some(s) = start.take() {
                        out.push(Span::new(s, i));
                    }
                    start = Some(i);
                }
                BioLabel::I => {
                    if start.is_none() {
                        start = Some(i);
                    }
                }
                BioLabel::O => {
                    if let Some(s) = start.take() {
                        out.push(Span::new(s, i));
                    }
                }
            }
        }
        if let Some(s) = start {
            out.push(Span::new(s, self.0.len()));
        }
        out
    }
}

impl fmt::Display for BioSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for BioSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(BioSequence)
    }
}

/// Decodes labels over a marked sentence into spans of base-sentence indices.
pub fn decode_bio(labels: &BioSequence, over: &MarkedSentence) -> Result<Vec<Span>> {
    if labels.len() != over.len() {
        return Err(Error::LengthMismatch {
            labels: labels.len(),
            input: over.len(),
        });
    }
    if let Some(i) = (0..over.len()).find(|&i| over.is_marker(i) && labels.0[i] != BioLabel::O) {
        return Err(Error::Alignment(i));
    }
    // Runs never include a marker position, so they map onto contiguous base spans.
    Ok(labels
        .runs()
        .into_iter()
        .map(|r| {
            let start = over.to_base(r.start).expect("run starts on a token");
            Span::new(start, start + r.len())
        })
        .collect())
}

/// Encodes disjoint spans as a BIO sequence of the given length.
pub fn encode_bio(spans: &[Span], length: usize) -> Result<BioSequence> {
    let mut sorted = spans.to_vec();
    sorted.sort();
    for s in &sorted {
        s.check(length)?;
    }
    for w in sorted.windows(2) {
        if w[0].overlaps(&w[1]) {
            return Err(Error::Overlap(w[0], w[1]));
        }
    }
    let mut labels = vec![BioLabel::O; length];
    for s in &sorted {
        labels[s.start] = BioLabel::B;
        for l in &mut labels[s.start + 1..s.end] {
            *l = BioLabel::I;
        }
    }
    Ok(BioSequence(labels))
}

/// Encodes base-sentence spans over the rendered positions of a marked sentence.
pub fn encode_on(spans: &[Span], over: &MarkedSentence) -> Result<BioSequence> {
    let rendered = spans
        .iter()
        .map(|s| over.span_to_rendered(*s))
        .collect::<Result<Vec<_>>>()?;
    encode_bio(&rendered, over.len())
}

/// Keeps a maximal prefix-greedy set of mutually disjoint spans, also disjoint
/// from `blocked`. Spans are visited by start, longer first on ties.
pub fn disjoint_subset(spans: &[Span], blocked: &[Span]) -> Vec<Span> {
    let mut sorted = spans.to_vec();
    sorted.sort_by_key(|s| (s.start, std::cmp::Reverse(s.end)));
    sorted.dedup();
    let mut kept: Vec<Span> = Vec::new();
    for s in sorted {
        if blocked.iter().chain(&kept).all(|k| !k.overlaps(&s)) {
            kept.push(s);
        }
    }
    kept
}
