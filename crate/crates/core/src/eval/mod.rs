//! Extraction scorers and tag-entropy analysis.

mod assignment;
mod benchie;
mod carb;
mod entropy;
mod lexical;

use serde::{Deserialize, Serialize};

pub use assignment::max_weight_assignment;
pub use benchie::{score_benchie, surfaces, FactSynset, SurfaceTriple};
pub use carb::score_carb;
pub use entropy::{entropy, entropy_profile, EntropyRow, EntropyTable, TagFamily};
pub use lexical::{head_token, score_lexical};

/// Precision, recall and F1 with the counts behind them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub metric: String,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub matched_predictions: usize,
    pub total_predictions: usize,
    pub matched_facts: usize,
    pub total_facts: usize,
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn ratio(num: f64, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}

impl ScoreReport {
    pub fn from_counts(
        metric: impl Into<String>,
        matched_predictions: usize,
        total_predictions: usize,
        matched_facts: usize,
        total_facts: usize,
    ) -> Self {
        let precision = ratio(matched_predictions as f64, total_predictions);
        let recall = ratio(matched_facts as f64, total_facts);
        ScoreReport {
            metric: metric.into(),
            f1: f1(precision, recall),
            precision,
            recall,
            matched_predictions,
            total_predictions,
            matched_facts,
            total_facts,
        }
    }

    /// Aligned text table with F1 / Prec. / Rec. columns, values in percent.
    pub fn table(&self) -> String {
        let width = self.metric.len().max(6);
        format!(
            "{:<width$}  {:>7}  {:>7}  {:>7}\n{:<width$}  {:>7.2}  {:>7.2}  {:>7.2}\n",
            "",
            "F1",
            "Prec.",
            "Rec.",
            self.metric,
            100.0 * self.f1,
            100.0 * self.precision,
            100.0 * self.recall,
        )
    }
}
