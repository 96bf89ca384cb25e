//! Training-instance generation: order-sampled positives and corrupted negatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bio::{disjoint_subset, encode_on, BioSequence};
use crate::error::{Error, Result};
use crate::marker::{mark, MarkedSentence};
use crate::pathway::Pathway;
use crate::tagger::TrainingInstance;
use crate::types::{ElementKind, PartialTriple, Sentence, Span, Triple, DEFAULT_MAX_LEN};
use crate::util::stream_seed;

use ElementKind::{Object as O, Predicate as P, Subject as S};

/// A sentence with its gold triples.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldRecord {
    pub sentence: Sentence,
    pub triples: Vec<Triple>,
}

impl GoldRecord {
    pub fn new(sentence: Sentence, triples: Vec<Triple>) -> Result<Self> {
        for t in &triples {
            t.check(&sentence)?;
            if t.sentence_id != sentence.id() {
                return Err(Error::Data(format!(
                    "triple references sentence {:?} inside record {:?}",
                    t.sentence_id,
                    sentence.id()
                )));
            }
        }
        Ok(GoldRecord { sentence, triples })
    }

    /// Whether some gold triple agrees with every marked element.
    pub fn is_consistent(&self, marking: &PartialTriple) -> bool {
        self.triples.iter().any(|t| marking.consistent_with(t))
    }

    /// Gold spans of `kind` from triples consistent with `marking`, deduplicated.
    pub fn consistent_spans(&self, marking: &PartialTriple, kind: ElementKind) -> Vec<Span> {
        let mut out: Vec<Span> = Vec::new();
        for t in self.triples.iter().filter(|t| marking.consistent_with(t)) {
            for s in t.spans(kind) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub negatives_per_instance: usize,
    /// Fraction of records eligible for corruption.
    pub negative_fraction: f64,
    pub max_len: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            negatives_per_instance: 2,
            negative_fraction: 1.0,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.negative_fraction) {
            return Err(Error::Config(format!(
                "negative fraction must lie in [0, 1], got {}",
                self.negative_fraction
            )));
        }
        Ok(())
    }
}

/// What generation had to skip.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDiagnostics {
    pub length_skips: usize,
    /// Target spans dropped because they overlap another target or a marked element.
    pub overlap_drops: usize,
    /// Negatives abandoned after exhausting resampling.
    pub negative_skips: usize,
}

impl SampleDiagnostics {
    pub fn merge(&mut self, o: &SampleDiagnostics) {
        self.length_skips += o.length_skips;
        self.overlap_drops += o.overlap_drops;
        self.negative_skips += o.negative_skips;
    }
}

/// Draws one of the six extraction orders uniformly.
pub fn sample_order<R: Rng + ?Sized>(rng: &mut R) -> [ElementKind; 3] {
    Pathway::ALL[rng.gen_range(0..Pathway::ALL.len())].order()
}

fn record_rng(config: &SamplerConfig, record: &GoldRecord, stream: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(config.seed, record.sentence.id(), stream))
}

/// Positive instances: one sampled order per gold triple.
pub fn generate(record: &GoldRecord, config: &SamplerConfig) -> (Vec<TrainingInstance>, SampleDiagnostics) {
    let mut rng = record_rng(config, record, "orders");
    let mut out = Vec::new();
    let mut diag = SampleDiagnostics::default();
    for i in 0..record.triples.len() {
        let order = sample_order(&mut rng);
        let (inst, d) = instances_for_order(record, i, order, config.max_len);
        out.extend(inst);
        diag.merge(&d);
    }
    (out, diag)
}

/// The three conditioned core instances for `order` plus the argument instance
/// of triple `index`.
///
/// Step `k` marks the first `k` elements of the order and targets every gold
/// span of the next kind consistent with them.
pub fn instances_for_order(
    record: &GoldRecord,
    index: usize,
    order: [ElementKind; 3],
    max_len: usize,
) -> (Vec<TrainingInstance>, SampleDiagnostics) {
    let triple = &record.triples[index];
    let mut diag = SampleDiagnostics::default();
    let mut out = Vec::new();
    let mut prefix = PartialTriple::new();
    for kind in order.into_iter().chain([ElementKind::Argument]) {
        if let Some(inst) = positive(record, &prefix, kind, max_len, &mut diag) {
            out.push(inst);
        }
        if kind.is_core() {
            prefix.set(kind, triple.get(kind));
        }
    }
    (out, diag)
}

fn positive(
    record: &GoldRecord,
    prefix: &PartialTriple,
    kind: ElementKind,
    max_len: usize,
    diag: &mut SampleDiagnostics,
) -> Option<TrainingInstance> {
    let marked = match mark(&record.sentence, prefix, max_len) {
        Ok(m) => m,
        Err(_) => {
            diag.length_skips += 1;
            return None;
        }
    };
    let targets = record.consistent_spans(prefix, kind);
    let blocked: Vec<Span> = prefix.core().map(|(_, s)| s).collect();
    let kept = disjoint_subset(&targets, &blocked);
    diag.overlap_drops += targets.len() - kept.len();
    let labels = encode_on(&kept, &marked).expect("disjoint spans encode");
    Some(TrainingInstance {
        marked,
        target_kind: kind,
        target_labels: labels,
        is_negative: false,
    })
}

/// Ways of corrupting a conditioning marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corruption {
    /// Predicate replaced by random non-predicate tokens of the same length.
    RandomPredicate,
    /// Subject and object exchanged.
    SwapSubjectObject,
    /// Subject paired with the object of a different triple.
    MismatchPair,
}

impl Corruption {
    pub const ALL: [Corruption; 3] = [
        Corruption::RandomPredicate,
        Corruption::SwapSubjectObject,
        Corruption::MismatchPair,
    ];

    /// Whether the technique can produce a marking with `wrong` conditioned elements.
    pub fn applicable(self, record: &GoldRecord, wrong: usize) -> bool {
        match self {
            Corruption::RandomPredicate | Corruption::SwapSubjectObject => true,
            Corruption::MismatchPair => wrong == 2 && record.triples.len() >= 2,
        }
    }
}

/// A corrupted marking and the head it is paired with.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptedMarking {
    pub marking: PartialTriple,
    pub target: ElementKind,
    pub technique: Corruption,
}

fn pick<R: Rng + ?Sized, T: Copy>(rng: &mut R, items: &[T]) -> T {
    items[rng.gen_range(0..items.len())]
}

/// Corrupts the conditioning of triple `index` so that it marks `wrong`
/// (1 or 2) elements. An inapplicable `technique` is resampled among the
/// applicable ones. Returns `None` if the draw produced no usable marking.
///
/// * one element: `RandomPredicate` marks a random predicate alone;
///   `SwapSubjectObject` marks the object as subject (or vice versa) alone.
/// * two elements: `RandomPredicate` adds the gold subject or object;
///   `SwapSubjectObject` marks both swapped; `MismatchPair` marks the gold
///   subject with another triple's object.
pub fn corrupt<R: Rng + ?Sized>(
    record: &GoldRecord,
    index: usize,
    technique: Corruption,
    wrong: usize,
    rng: &mut R,
) -> Option<CorruptedMarking> {
    let technique = if technique.applicable(record, wrong) {
        technique
    } else {
        let options: Vec<Corruption> = Corruption::ALL
            .into_iter()
            .filter(|c| c.applicable(record, wrong))
            .collect();
        pick(rng, &options)
    };
    let t = &record.triples[index];
    let n = record.sentence.len();
    let (marking, target) = match (technique, wrong) {
        (Corruption::RandomPredicate, _) => {
            let len = t.predicate.len();
            let is_pred = |i: usize| record.triples.iter().any(|g| g.predicate.contains(i));
            let starts: Vec<usize> = (0..=n.saturating_sub(len))
                .filter(|&s| s + len <= n && (s..s + len).all(|i| !is_pred(i)))
                .collect();
            if starts.is_empty() {
                return None;
            }
            let start = pick(rng, &starts);
            let fake = Span::new(start, start + len);
            let m = PartialTriple::new().with(P, fake);
            if wrong == 1 {
                (m, pick(rng, &[S, O]))
            } else {
                let keep = pick(rng, &[S, O]);
                let other = if keep == S { O } else { S };
                (m.with(keep, t.get(keep)), other)
            }
        }
        (Corruption::SwapSubjectObject, 1) => {
            let (kind, span) = pick(rng, &[(S, t.object), (O, t.subject)]);
            let others: Vec<ElementKind> = ElementKind::CORE.into_iter().filter(|k| *k != kind).collect();
            (PartialTriple::new().with(kind, span), pick(rng, &others))
        }
        (Corruption::SwapSubjectObject, _) => (
            PartialTriple::new().with(S, t.object).with(O, t.subject),
            P,
        ),
        (Corruption::MismatchPair, _) => {
            let others: Vec<&Triple> = record
                .triples
                .iter()
                .filter(|u| u.object != t.object)
                .collect();
            if others.is_empty() {
                return None;
            }
            let u = others[rng.gen_range(0..others.len())];
            (PartialTriple::new().with(S, t.subject).with(O, u.object), P)
        }
    };
    Some(CorruptedMarking {
        marking,
        target,
        technique,
    })
}

const MAX_TRIES: usize = 10;

/// Negative instances for one record: corrupted markings with all-O targets.
///
/// Negative `j` marks one wrong element when `j` is even and two when odd.
/// Draws that are consistent with some gold triple, overlap, or overflow
/// `max_len` are resampled up to ten times, then skipped.
pub fn negatives(record: &GoldRecord, config: &SamplerConfig) -> (Vec<TrainingInstance>, SampleDiagnostics) {
    let mut diag = SampleDiagnostics::default();
    let mut out = Vec::new();
    if record.triples.is_empty() {
        return (out, diag);
    }
    let mut rng = record_rng(config, record, "negatives");
    if rng.gen::<f64>() >= config.negative_fraction {
        return (out, diag);
    }
    for j in 0..config.negatives_per_instance {
        let wrong = if j % 2 == 0 { 1 } else { 2 };
        match draw_negative(record, wrong, config.max_len, &mut rng) {
            Some(inst) => out.push(inst),
            None => diag.negative_skips += 1,
        }
    }
    (out, diag)
}

fn draw_negative<R: Rng + ?Sized>(
    record: &GoldRecord,
    wrong: usize,
    max_len: usize,
    rng: &mut R,
) -> Option<TrainingInstance> {
    for _ in 0..MAX_TRIES {
        let index = rng.gen_range(0..record.triples.len());
        let applicable: Vec<Corruption> = Corruption::ALL
            .into_iter()
            .filter(|c| c.applicable(record, wrong))
            .collect();
        let technique = pick(rng, &applicable);
        let Some(c) = corrupt(record, index, technique, wrong, rng) else {
            continue;
        };
        if record.is_consistent(&c.marking) {
            continue;
        }
        let Ok(marked) = mark(&record.sentence, &c.marking, max_len) else {
            continue;
        };
        let labels = BioSequence::outside(marked.len());
        return Some(TrainingInstance {
            marked,
            target_kind: c.target,
            target_labels: labels,
            is_negative: true,
        });
    }
    None
}

/// Positives followed by negatives for every record.
pub fn build_instances<'a>(
    records: impl IntoIterator<Item = &'a GoldRecord>,
    config: &SamplerConfig,
) -> Result<(Vec<TrainingInstance>, SampleDiagnostics)> {
    config.validate()?;
    let mut all = Vec::new();
    let mut diag = SampleDiagnostics::default();
    for r in records {
        let (p, d) = generate(r, config);
        all.extend(p);
        diag.merge(&d);
        let (n, d) = negatives(r, config);
        all.extend(n);
        diag.merge(&d);
    }
    Ok((all, diag))
}

/// Convenience view used in tests and reports: rendered input and decoded target surfaces.
pub fn describe(inst: &TrainingInstance) -> (String, Vec<String>) {
    let spans = crate::bio::decode_bio(&inst.target_labels, &inst.marked).unwrap_or_default();
    let base: &MarkedSentence = &inst.marked;
    (
        base.joined(),
        spans.iter().map(|s| base.base().surface(*s)).collect(),
    )
}
