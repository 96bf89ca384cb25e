use std::collections::{BTreeMap, BTreeSet};

use crate::types::Triple;

use super::{max_weight_assignment, ScoreReport};

/// Token-index sets for subject, predicate, and object with arguments merged.
fn parts(t: &Triple) -> [BTreeSet<usize>; 3] {
    let mut obj: BTreeSet<usize> = t.object.indices().collect();
    for a in &t.args {
        obj.extend(a.indices());
    }
    [t.subject.indices().collect(), t.predicate.indices().collect(), obj]
}

/// Mean over the three parts of `|a ∩ b| / |a|`.
fn coverage(a: &[BTreeSet<usize>; 3], b: &[BTreeSet<usize>; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if x.is_empty() {
                0.0
            } else {
                x.intersection(y).count() as f64 / x.len() as f64
            }
        })
        .sum::<f64>()
        / 3.0
}

/// CaRB-style tuple matching on token overlap.
///
/// Within each sentence, every prediction/gold pair gets a precision-side
/// similarity (share of predicted tokens found in the gold tuple) and a
/// recall-side similarity (share of gold tokens covered). Predictions and
/// gold tuples are matched one-to-one maximizing the summed similarity.
/// Precision is the matched precision similarity over all predictions,
/// recall the matched recall similarity over all gold tuples.
pub fn score_carb(preds: &[Triple], gold: &[Triple]) -> ScoreReport {
    let mut by_sentence: BTreeMap<&str, (Vec<&Triple>, Vec<&Triple>)> = BTreeMap::new();
    for p in preds {
        by_sentence.entry(&p.sentence_id).or_default().0.push(p);
    }
    for g in gold {
        by_sentence.entry(&g.sentence_id).or_default().1.push(g);
    }

    let mut prec_sum = 0.0;
    let mut rec_sum = 0.0;
    let mut matched_preds = 0;
    let mut matched_gold = 0;
    for (ps, gs) in by_sentence.values() {
        if ps.is_empty() || gs.is_empty() {
            continue;
        }
        let pp: Vec<_> = ps.iter().map(|t| parts(t)).collect();
        let gp: Vec<_> = gs.iter().map(|t| parts(t)).collect();
        let prec: Vec<Vec<f64>> = pp.iter().map(|p| gp.iter().map(|g| coverage(p, g)).collect()).collect();
        let rec: Vec<Vec<f64>> = pp.iter().map(|p| gp.iter().map(|g| coverage(g, p)).collect()).collect();
        let combined: Vec<Vec<f64>> = prec
            .iter()
            .zip(&rec)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        for (i, j) in max_weight_assignment(&combined).into_iter().enumerate() {
            let Some(j) = j else { continue };
            if combined[i][j] > 0.0 {
                prec_sum += prec[i][j];
                rec_sum += rec[i][j];
                matched_preds += 1;
                matched_gold += 1;
            }
        }
    }

    let precision = if preds.is_empty() { 0.0 } else { prec_sum / preds.len() as f64 };
    let recall = if gold.is_empty() { 0.0 } else { rec_sum / gold.len() as f64 };
    ScoreReport {
        metric: "carb".into(),
        f1: super::f1(precision, recall),
        precision,
        recall,
        matched_predictions: matched_preds,
        total_predictions: preds.len(),
        matched_facts: matched_gold,
        total_facts: gold.len(),
    }
}
