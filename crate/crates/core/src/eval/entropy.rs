use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::traindata::GoldRecord;
use crate::types::{ElementKind, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TagFamily {
    #[serde(rename = "dep")]
    Dep,
    #[serde(rename = "pos")]
    Pos,
}

impl fmt::Display for TagFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TagFamily::Dep => "DEP",
            TagFamily::Pos => "POS",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub kind: ElementKind,
    pub family: TagFamily,
    /// Bits.
    pub entropy: f64,
    pub tokens: usize,
    pub distinct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyTable {
    pub rows: Vec<EntropyRow>,
}

impl EntropyTable {
    pub fn get(&self, kind: ElementKind, family: TagFamily) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.kind == kind && r.family == family)
            .map(|r| r.entropy)
    }

    /// Subject / Predicate / Object groups with one column per tag family.
    pub fn table(&self) -> String {
        let families: Vec<TagFamily> = {
            let mut f: Vec<TagFamily> = self.rows.iter().map(|r| r.family).collect();
            f.sort();
            f.dedup();
            f
        };
        let mut head1 = format!("{:<8}", "Entropy");
        let mut head2 = format!("{:<8}", "");
        let mut vals = format!("{:<8}", "");
        for (kind, name) in [
            (ElementKind::Subject, "Subject"),
            (ElementKind::Predicate, "Predicate"),
            (ElementKind::Object, "Object"),
        ] {
            head1.push_str(&format!("  {:<w$}", name, w = 7 * families.len()));
            for f in &families {
                head2.push_str(&format!("  {:<5}", f.to_string()));
                match self.get(kind, *f) {
                    Some(h) => vals.push_str(&format!("  {h:<5.3}")),
                    None => vals.push_str(&format!("  {:<5}", "-")),
                }
            }
        }
        format!(
            "{}\n{}\n{}\n",
            head1.trim_end(),
            head2.trim_end(),
            vals.trim_end()
        )
    }
}

/// Shannon entropy in bits of a histogram.
pub fn entropy<I: IntoIterator<Item = usize>>(counts: I) -> f64 {
    let counts: Vec<usize> = counts.into_iter().filter(|c| *c > 0).collect();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let h: f64 = -counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>();
    // avoid printing -0
    h + 0.0
}

/// Entropy of tag distributions inside gold subject, predicate and object spans.
///
/// Each distinct span of a kind within a sentence contributes its tokens once,
/// even when several triples share it.
pub fn entropy_profile(records: &[GoldRecord], families: &[TagFamily]) -> Result<EntropyTable> {
    let mut rows = Vec::new();
    for kind in ElementKind::CORE {
        for &family in families {
            let mut hist: BTreeMap<&str, usize> = BTreeMap::new();
            for r in records {
                let mut spans: Vec<Span> = r.triples.iter().map(|t| t.get(kind)).collect();
                spans.sort();
                spans.dedup();
                for s in spans {
                    for i in s.indices() {
                        let tok = &r.sentence.tokens()[i];
                        let tag = match family {
                            TagFamily::Dep => tok.dep.as_str(),
                            TagFamily::Pos => tok.pos.as_deref().ok_or_else(|| Error::MissingTag {
                                sentence: r.sentence.id().to_string(),
                                token: i,
                                family: "pos",
                            })?,
                        };
                        *hist.entry(tag).or_default() += 1;
                    }
                }
            }
            rows.push(EntropyRow {
                kind,
                family,
                entropy: entropy(hist.values().copied()),
                tokens: hist.values().sum(),
                distinct: hist.len(),
            });
        }
    }
    Ok(EntropyTable { rows })
}
