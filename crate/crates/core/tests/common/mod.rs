#![allow(dead_code)]

use std::collections::HashMap;

use iterie::traindata::GoldRecord;
use iterie::{ElementKind, PartialTriple, Sentence, Span, Token, Triple};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TAJ: &str = "The Taj Mahal was built by Shah Jahan in 1643";

pub fn taj_sentence() -> Sentence {
    Sentence::from_text("taj", TAJ).unwrap()
}

/// (Taj Mahal; built by; Shah Jahan; [in 1643])
pub fn taj_triple() -> Triple {
    Triple::new("taj", Span::new(1, 3), Span::new(4, 6), Span::new(6, 8)).with_args(vec![Span::new(8, 10)])
}

pub fn taj_record() -> GoldRecord {
    GoldRecord::new(taj_sentence(), vec![taj_triple()]).unwrap()
}

/// Barrack Obama became US President in 2008
pub fn obama_sentence() -> Sentence {
    let toks = vec![
        Token::new("Barrack", "compound").with_pos("PROPN").with_head(1),
        Token::new("Obama", "nsubj").with_pos("PROPN").with_head(2),
        Token::new("became", "root").with_pos("VERB"),
        Token::new("US", "compound").with_pos("PROPN").with_head(4),
        Token::new("President", "xcomp").with_pos("PROPN").with_head(2),
        Token::new("in", "case").with_pos("ADP").with_head(6),
        Token::new("2008", "obl").with_pos("NUM").with_head(2),
    ];
    Sentence::new("obama", toks).unwrap()
}

/// (Barrack Obama; became; US President; [2008])
pub fn obama_nary() -> Triple {
    Triple::new("obama", Span::new(0, 2), Span::new(2, 3), Span::new(3, 5)).with_args(vec![Span::new(6, 7)])
}

/// (Barrack Obama; became US President in; 2008)
pub fn obama_second() -> Triple {
    Triple::new("obama", Span::new(0, 2), Span::new(2, 6), Span::new(6, 7))
}

const WORDS: &[&str] = &["a", "b", "c", "dog", "ran", "the", "x1", "Zed", "über", "."];
const TAGS: &[&str] = &["nsubj", "obj", "det", "root", "amod", "case"];
const POS: &[&str] = &["NOUN", "VERB", "DET", "ADJ"];

pub fn random_sentence<R: Rng>(rng: &mut R, id: &str, max_len: usize) -> Sentence {
    let n = rng.gen_range(1..=max_len);
    let toks = (0..n)
        .map(|_| Token::new(*WORDS.choose(rng).unwrap(), *TAGS.choose(rng).unwrap()).with_pos(*POS.choose(rng).unwrap()))
        .collect();
    Sentence::new(id, toks).unwrap()
}

/// Up to `k` pairwise disjoint non-empty spans inside `[0, n)`, in random order.
pub fn random_disjoint_spans<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<Span> {
    let mut cuts: Vec<usize> = (0..=n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take((2 * k).min(n + 1)).collect();
    cuts.sort();
    let mut spans: Vec<Span> = cuts
        .chunks(2)
        .filter(|c| c.len() == 2 && c[0] < c[1])
        .map(|c| Span::new(c[0], c[1]))
        .collect();
    spans.shuffle(rng);
    spans
}

/// A random marking with pairwise disjoint core spans and no arguments.
pub fn random_partial<R: Rng>(rng: &mut R, n: usize) -> PartialTriple {
    let spans = random_disjoint_spans(rng, n, 3);
    let mut kinds = ElementKind::CORE.to_vec();
    kinds.shuffle(rng);
    let mut p = PartialTriple::new();
    for (kind, span) in kinds.into_iter().zip(spans) {
        if rng.gen_bool(0.7) {
            p.set(kind, span);
        }
    }
    p
}

pub fn sentence_map(records: &[GoldRecord]) -> HashMap<String, Sentence> {
    records
        .iter()
        .map(|r| (r.sentence.id().to_string(), r.sentence.clone()))
        .collect()
}
