use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bio::{BioLabel, BioSequence};
use crate::error::{Error, Result};
use crate::marker::MarkedSentence;
use crate::types::ElementKind;

use super::features::{extract_features, FeatureId};
use super::{force_markers_outside, Tagger, TrainConfig, TrainingInstance};

const LABELS: usize = 3;
const HEADS: usize = 4;

/// Shape and vocabulary of a saved windowed tagger.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowedMeta {
    pub hidden: usize,
    pub heads: Vec<ElementKind>,
    /// Feature hashes in row order of the embedding table.
    pub features: Vec<FeatureId>,
    pub config: TrainConfig,
}

/// Per-token classifier: a shared feature embedding with a tanh hidden layer,
/// followed by one softmax output layer per element kind.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedTagger {
    hidden: usize,
    trained: [bool; HEADS],
    vocab: HashMap<FeatureId, u32>,
    features: Vec<FeatureId>,
    config: TrainConfig,
    /// `features.len() × hidden`
    embed: Vec<f32>,
    bias: Vec<f32>,
    /// Per head: `LABELS × hidden` weights then `LABELS` biases.
    out: Vec<Vec<f32>>,
}

struct Example {
    head: usize,
    weight: f32,
    positions: Vec<(Vec<u32>, usize)>,
}

impl WindowedTagger {
    fn head_len(hidden: usize) -> usize {
        LABELS * hidden + LABELS
    }

    pub(super) fn fit(instances: &[TrainingInstance], config: &TrainConfig) -> Self {
        let hidden = config.hidden;
        let mut vocab: HashMap<FeatureId, u32> = HashMap::new();
        let mut features: Vec<FeatureId> = Vec::new();
        let mut trained = [false; HEADS];

        let mut examples = Vec::with_capacity(instances.len());
        for inst in instances {
            let head = inst.target_kind.head_index();
            trained[head] = true;
            let feats = extract_features(&inst.marked);
            let positions = feats
                .into_iter()
                .enumerate()
                .filter(|(r, _)| !inst.marked.is_marker(*r))
                .map(|(r, fs)| {
                    let ids = fs
                        .into_iter()
                        .map(|f| {
                            *vocab.entry(f).or_insert_with(|| {
                                features.push(f);
                                (features.len() - 1) as u32
                            })
                        })
                        .collect();
                    (ids, inst.target_labels.0[r].index())
                })
                .collect();
            let weight = if inst.is_negative {
                config.negative_weight
            } else {
                1.0
            };
            examples.push(Example {
                head,
                weight,
                positions,
            });
        }

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let scale = (6.0 / (hidden + LABELS) as f32).sqrt();
        let out: Vec<Vec<f32>> = (0..HEADS)
            .map(|_| {
                let mut w: Vec<f32> = (0..LABELS * hidden)
                    .map(|_| rng.gen_range(-scale..scale))
                    .collect();
                w.extend([0.0; LABELS]);
                w
            })
            .collect();
        let mut model = WindowedTagger {
            hidden,
            trained,
            vocab,
            embed: vec![0.0; features.len() * hidden],
            features,
            config: config.clone(),
            bias: vec![0.0; hidden],
            out,
        };

        let mut g_embed = vec![0.0f32; model.embed.len()];
        let mut g_bias = vec![0.0f32; hidden];
        let mut g_out = vec![vec![0.0f32; Self::head_len(hidden)]; HEADS];
        let lr = config.learning_rate;
        let eps = 1e-8f32;

        let mut order: Vec<usize> = (0..examples.len()).collect();
        let mut h = vec![0.0f32; hidden];
        let mut dh = vec![0.0f32; hidden];
        for _ in 0..config.epochs {
            order.shuffle(&mut rng);
            for &ei in &order {
                let ex = &examples[ei];
                if ex.weight == 0.0 {
                    continue;
                }
                for (ids, gold) in &ex.positions {
                    model.hidden_into(ids, &mut h);
                    let probs = model.probs(ex.head, &h);
                    let head = &mut model.out[ex.head];
                    let acc = &mut g_out[ex.head];
                    dh.iter_mut().for_each(|v| *v = 0.0);
                    for c in 0..LABELS {
                        let target = if c == *gold { 1.0 } else { 0.0 };
                        let g = (probs[c] - target) * ex.weight;
                        let row = c * hidden;
                        for j in 0..hidden {
                            dh[j] += head[row + j] * g;
                            let gw = g * h[j];
                            acc[row + j] += gw * gw;
                            head[row + j] -= lr * gw / (acc[row + j].sqrt() + eps);
                        }
                        let bi = LABELS * hidden + c;
                        acc[bi] += g * g;
                        head[bi] -= lr * g / (acc[bi].sqrt() + eps);
                    }
                    for j in 0..hidden {
                        dh[j] *= 1.0 - h[j] * h[j];
                        g_bias[j] += dh[j] * dh[j];
                        model.bias[j] -= lr * dh[j] / (g_bias[j].sqrt() + eps);
                    }
                    for &id in ids {
                        let row = id as usize * hidden;
                        for j in 0..hidden {
                            g_embed[row + j] += dh[j] * dh[j];
                            model.embed[row + j] -= lr * dh[j] / (g_embed[row + j].sqrt() + eps);
                        }
                    }
                }
            }
        }
        model
    }

    fn hidden_into(&self, ids: &[u32], h: &mut [f32]) {
        h.copy_from_slice(&self.bias);
        for &id in ids {
            let row = &self.embed[id as usize * self.hidden..(id as usize + 1) * self.hidden];
            for (hj, e) in h.iter_mut().zip(row) {
                *hj += e;
            }
        }
        for v in h.iter_mut() {
            *v = v.tanh();
        }
    }

    fn probs(&self, head: usize, h: &[f32]) -> [f32; LABELS] {
        let w = &self.out[head];
        let mut logits = [0.0f32; LABELS];
        for (c, l) in logits.iter_mut().enumerate() {
            let row = &w[c * self.hidden..(c + 1) * self.hidden];
            *l = w[LABELS * self.hidden + c] + row.iter().zip(h).map(|(a, b)| a * b).sum::<f32>();
        }
        let max = logits.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
        let mut z = 0.0;
        for l in logits.iter_mut() {
            *l = (*l - max).exp();
            z += *l;
        }
        logits.map(|l| l / z)
    }

    pub fn heads(&self) -> Vec<ElementKind> {
        ElementKind::ALL
            .into_iter()
            .filter(|k| self.trained[k.head_index()])
            .collect()
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub(super) fn to_parts(&self) -> (WindowedMeta, Vec<f32>) {
        let meta = WindowedMeta {
            hidden: self.hidden,
            heads: self.heads(),
            features: self.features.clone(),
            config: self.config.clone(),
        };
        let mut params =
            Vec::with_capacity(self.embed.len() + self.hidden + HEADS * Self::head_len(self.hidden));
        params.extend_from_slice(&self.embed);
        params.extend_from_slice(&self.bias);
        for o in &self.out {
            params.extend_from_slice(o);
        }
        (meta, params)
    }

    pub(super) fn from_parts(meta: WindowedMeta, params: Vec<f32>) -> Result<Self> {
        let hidden = meta.hidden;
        if hidden == 0 {
            return Err(Error::Format("hidden size is zero".into()));
        }
        let n_embed = meta.features.len() * hidden;
        let expected = n_embed + hidden + HEADS * Self::head_len(hidden);
        if params.len() != expected {
            return Err(Error::Format(format!(
                "expected {expected} parameters, found {}",
                params.len()
            )));
        }
        let mut trained = [false; HEADS];
        for k in &meta.heads {
            trained[k.head_index()] = true;
        }
        let vocab: HashMap<FeatureId, u32> = meta
            .features
            .iter()
            .enumerate()
            .map(|(i, f)| (*f, i as u32))
            .collect();
        if vocab.len() != meta.features.len() {
            return Err(Error::Format("duplicate feature ids".into()));
        }
        let embed = params[..n_embed].to_vec();
        let bias = params[n_embed..n_embed + hidden].to_vec();
        let out = params[n_embed + hidden..]
            .chunks_exact(Self::head_len(hidden))
            .map(<[f32]>::to_vec)
            .collect();
        Ok(WindowedTagger {
            hidden,
            trained,
            vocab,
            features: meta.features,
            config: meta.config,
            embed,
            bias,
            out,
        })
    }
}

impl Tagger for WindowedTagger {
    fn predict(&self, marked: &MarkedSentence, kind: ElementKind) -> Result<BioSequence> {
        let head = kind.head_index();
        if !self.trained[head] {
            return Err(Error::UnsupportedHead(kind));
        }
        let mut h = vec![0.0f32; self.hidden];
        let mut labels = BioSequence::outside(marked.len());
        for (r, feats) in extract_features(marked).into_iter().enumerate() {
            if marked.is_marker(r) {
                continue;
            }
            let ids: Vec<u32> = feats.iter().filter_map(|f| self.vocab.get(f).copied()).collect();
            self.hidden_into(&ids, &mut h);
            let p = self.probs(head, &h);
            let best = (0..LABELS)
                .max_by(|&a, &b| p[a].total_cmp(&p[b]).then(b.cmp(&a)))
                .unwrap();
            labels.0[r] = BioLabel::from_index(best);
        }
        force_markers_outside(marked, &mut labels);
        Ok(labels)
    }
}
