use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::types::{Sentence, Triple};

use super::ScoreReport;

/// A binary extraction as whitespace-normalized surface strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceTriple {
    pub sentence_id: String,
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

fn norm(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl SurfaceTriple {
    pub fn new(sentence_id: impl Into<String>, subject: &str, predicate: &str, object: &str) -> Self {
        SurfaceTriple {
            sentence_id: sentence_id.into(),
            subject: norm(subject),
            predicate: norm(predicate),
            object: norm(object),
        }
    }

    pub fn of(triple: &Triple, sentence: &Sentence) -> Self {
        SurfaceTriple::new(
            triple.sentence_id.clone(),
            &sentence.surface(triple.subject),
            &sentence.surface(triple.predicate),
            &sentence.surface(triple.object),
        )
    }
}

/// Surface forms of span-based triples. Triples whose sentence is unknown are skipped.
pub fn surfaces(preds: &[Triple], sentences: &HashMap<String, Sentence>) -> Vec<SurfaceTriple> {
    preds
        .iter()
        .filter_map(|t| sentences.get(&t.sentence_id).map(|s| SurfaceTriple::of(t, s)))
        .collect()
}

/// One gold fact and every surface variant that counts as expressing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactSynset {
    pub sentence_id: String,
    pub variants: Vec<SurfaceTriple>,
}

impl FactSynset {
    pub fn new(sentence_id: impl Into<String>, variants: &[(&str, &str, &str)]) -> Self {
        let id = sentence_id.into();
        FactSynset {
            variants: variants
                .iter()
                .map(|(s, p, o)| SurfaceTriple::new(id.clone(), s, p, o))
                .collect(),
            sentence_id: id,
        }
    }
}

/// Fact-level scoring with exact, case-sensitive surface matching.
///
/// A prediction is correct if it equals a variant of some synset of its
/// sentence. Recall counts synsets hit by at least one prediction.
pub fn score_benchie(preds: &[SurfaceTriple], gold: &[FactSynset]) -> ScoreReport {
    let mut index: HashMap<&SurfaceTriple, Vec<usize>> = HashMap::new();
    for (i, syn) in gold.iter().enumerate() {
        for v in &syn.variants {
            // Variants inherit the synset's sentence.
            debug_assert_eq!(v.sentence_id, syn.sentence_id);
            index.entry(v).or_default().push(i);
        }
    }
    let mut hit: HashSet<usize> = HashSet::new();
    let mut correct = 0;
    for p in preds {
        if let Some(ids) = index.get(p) {
            correct += 1;
            hit.extend(ids);
        }
    }
    ScoreReport::from_counts("benchie", correct, preds.len(), hit.len(), gold.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str, p: &str, o: &str) -> SurfaceTriple {
        SurfaceTriple::new("1", s, p, o)
    }

    fn gold() -> Vec<FactSynset> {
        vec![
            FactSynset::new("1", &[("Taj Mahal", "was built by", "Shah Jahan"), ("The Taj Mahal", "was built by", "Shah Jahan")]),
            FactSynset::new("1", &[("Taj Mahal", "was built in", "1643")]),
        ]
    }

    #[test]
    fn perfect() {
        let preds = vec![st("Taj Mahal", "was built by", "Shah Jahan"), st("Taj Mahal", "was built in", "1643")];
        let r = score_benchie(&preds, &gold());
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn empty_predictions() {
        let r = score_benchie(&[], &gold());
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn half_and_half() {
        let preds = vec![st("The Taj Mahal", "was built by", "Shah Jahan"), st("Taj", "built", "1643")];
        let r = score_benchie(&preds, &gold());
        assert_eq!((r.precision, r.recall, r.f1), (0.5, 0.5, 0.5));
    }

    #[test]
    fn case_sensitive_and_whitespace_normalized() {
        let preds = vec![st("taj mahal", "was built by", "Shah Jahan"), st(" Taj   Mahal ", "was built in", "1643")];
        let r = score_benchie(&preds, &gold());
        assert_eq!((r.matched_predictions, r.matched_facts), (1, 1));
    }

    #[test]
    fn other_sentence_does_not_match() {
        let preds = vec![SurfaceTriple::new("2", "Taj Mahal", "was built in", "1643")];
        assert_eq!(score_benchie(&preds, &gold()).matched_predictions, 0);
    }
}
