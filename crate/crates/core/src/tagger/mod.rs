//! Four-head sequence taggers.
//!
//! A tagger predicts one BIO sequence per query `(marked sentence, head)`.
//! Two implementations ship: [`OracleTagger`] answers from gold triples and
//! [`WindowedTagger`] is a small trainable per-token classifier.

mod features;
mod oracle;
mod windowed;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bio::{BioLabel, BioSequence};
use crate::error::{Error, Result};
use crate::marker::MarkedSentence;
use crate::types::{ElementKind, Sentence, Triple, DEFAULT_MAX_LEN};

pub use features::{extract_features, FeatureId};
pub use oracle::OracleTagger;
pub use windowed::WindowedTagger;

/// Magic bytes opening every model file.
pub const MODEL_MAGIC: &[u8; 12] = b"MILIE-TAGGER";
/// Current model container version.
pub const MODEL_VERSION: u32 = 1;

/// Anything that labels a marked sentence for one element kind.
pub trait Tagger: Send + Sync {
    fn predict(&self, marked: &MarkedSentence, kind: ElementKind) -> Result<BioSequence>;
}

impl<T: Tagger + ?Sized> Tagger for &T {
    fn predict(&self, marked: &MarkedSentence, kind: ElementKind) -> Result<BioSequence> {
        (**self).predict(marked, kind)
    }
}

impl<T: Tagger + ?Sized> Tagger for Box<T> {
    fn predict(&self, marked: &MarkedSentence, kind: ElementKind) -> Result<BioSequence> {
        (**self).predict(marked, kind)
    }
}

/// One supervised example: the head `target_kind` should emit `target_labels`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingInstance {
    pub marked: MarkedSentence,
    pub target_kind: ElementKind,
    pub target_labels: BioSequence,
    pub is_negative: bool,
}

impl TrainingInstance {
    pub fn new(
        marked: MarkedSentence,
        target_kind: ElementKind,
        target_labels: BioSequence,
        is_negative: bool,
    ) -> Result<Self> {
        let inst = TrainingInstance {
            marked,
            target_kind,
            target_labels,
            is_negative,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_labels.len() != self.marked.len() {
            return Err(Error::Data(format!(
                "instance labels have length {} but input has length {}",
                self.target_labels.len(),
                self.marked.len()
            )));
        }
        if self.is_negative && !self.target_labels.is_all_outside() {
            return Err(Error::Data("negative instance with non-O labels".into()));
        }
        if let Some(i) = (0..self.marked.len())
            .find(|&i| self.marked.is_marker(i) && self.target_labels.0[i] != BioLabel::O)
        {
            return Err(Error::Data(format!("marker position {i} labeled non-O")));
        }
        Ok(())
    }
}

/// Hyperparameters for [`train`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub seed: u64,
    pub epochs: usize,
    pub learning_rate: f32,
    /// Loss multiplier for negative instances.
    pub negative_weight: f32,
    pub hidden: usize,
    pub max_len: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seed: 0,
            epochs: 2,
            learning_rate: 0.1,
            negative_weight: 1.0,
            hidden: 64,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.negative_weight.is_finite() && self.negative_weight >= 0.0) {
            return Err(Error::Config(format!(
                "negative weight must be non-negative, got {}",
                self.negative_weight
            )));
        }
        if self.hidden == 0 {
            return Err(Error::Config("hidden size must be at least 1".into()));
        }
        if self.max_len == 0 {
            return Err(Error::Config("max_len must be at least 1".into()));
        }
        Ok(())
    }
}

/// A loadable, saveable tagger.
#[derive(Debug, Clone, PartialEq)]
pub enum TaggerModel {
    Oracle(OracleTagger),
    Windowed(WindowedTagger),
}

impl Tagger for TaggerModel {
    fn predict(&self, marked: &MarkedSentence, kind: ElementKind) -> Result<BioSequence> {
        match self {
            TaggerModel::Oracle(m) => m.predict(marked, kind),
            TaggerModel::Windowed(m) => m.predict(marked, kind),
        }
    }
}

const KIND_ORACLE: u8 = 0;
const KIND_WINDOWED: u8 = 1;

impl TaggerModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TaggerModel::Oracle(_) => "oracle",
            TaggerModel::Windowed(_) => "windowed",
        }
    }

    /// Serializes to the versioned container:
    /// magic, `u32` version, `u8` model kind, `u32`-prefixed JSON metadata,
    /// `u64`-prefixed little-endian `f32` parameters.
    pub fn save(&self) -> Result<Vec<u8>> {
        let (kind, meta, params) = match self {
            TaggerModel::Oracle(m) => (KIND_ORACLE, serde_json::to_vec(&m.to_meta())?, Vec::new()),
            TaggerModel::Windowed(m) => {
                let (meta, params) = m.to_parts();
                (KIND_WINDOWED, serde_json::to_vec(&meta)?, params)
            }
        };
        let mut out = Vec::with_capacity(32 + meta.len() + 4 * params.len());
        out.extend_from_slice(MODEL_MAGIC);
        out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
        out.push(kind);
        out.extend_from_slice(&(meta.len() as u32).to_le_bytes());
        out.extend_from_slice(&meta);
        out.extend_from_slice(&(params.len() as u64).to_le_bytes());
        for p in params {
            out.extend_from_slice(&p.to_le_bytes());
        }
        Ok(out)
    }

    pub fn load(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(MODEL_MAGIC.len())? != MODEL_MAGIC {
            return Err(Error::Format("missing MILIE-TAGGER header".into()));
        }
        let version = u32::from_le_bytes(r.take(4)?.try_into().unwrap());
        if version != MODEL_VERSION {
            return Err(Error::Format(format!(
                "unsupported model version {version} (expected {MODEL_VERSION})"
            )));
        }
        let kind = r.take(1)?[0];
        let meta_len = u32::from_le_bytes(r.take(4)?.try_into().unwrap()) as usize;
        let meta = r.take(meta_len)?;
        let n_params = u64::from_le_bytes(r.take(8)?.try_into().unwrap());
        let n_params = usize::try_from(n_params)
            .ok()
            .filter(|n| n.checked_mul(4).is_some_and(|b| b <= r.remaining()))
            .ok_or_else(|| Error::Format("parameter block is truncated".into()))?;
        let params: Vec<f32> = r
            .take(n_params * 4)?
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if r.remaining() != 0 {
            return Err(Error::Format(format!("{} trailing bytes", r.remaining())));
        }
        let bad_meta = |e: serde_json::Error| Error::Format(format!("bad metadata: {e}"));
        match kind {
            KIND_ORACLE => {
                if !params.is_empty() {
                    return Err(Error::Format("oracle model carries parameters".into()));
                }
                let meta = serde_json::from_slice(meta).map_err(bad_meta)?;
                Ok(TaggerModel::Oracle(OracleTagger::from_meta(meta)))
            }
            KIND_WINDOWED => {
                let meta = serde_json::from_slice(meta).map_err(bad_meta)?;
                Ok(TaggerModel::Windowed(WindowedTagger::from_parts(meta, params)?))
            }
            k => Err(Error::Format(format!("unknown model kind {k}"))),
        }
    }

    pub fn save_to(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.save()?)?;
        Ok(())
    }

    pub fn load_from(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::load(&std::fs::read(path)?)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("unexpected end of model data".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

/// Builds a tagger that answers from gold triples.
pub fn oracle_from_gold<'a>(
    gold: impl IntoIterator<Item = (&'a Sentence, &'a [Triple])>,
) -> TaggerModel {
    TaggerModel::Oracle(OracleTagger::new(gold))
}

/// Trains a [`WindowedTagger`].
pub fn train(
    instances: impl IntoIterator<Item = TrainingInstance>,
    config: &TrainConfig,
) -> Result<TaggerModel> {
    config.validate()?;
    let instances: Vec<TrainingInstance> = instances.into_iter().collect();
    if instances.is_empty() {
        return Err(Error::Data("no training instances".into()));
    }
    let mut per_kind: BTreeMap<ElementKind, usize> = BTreeMap::new();
    for inst in &instances {
        inst.validate()?;
        if inst.marked.len() > config.max_len {
            return Err(Error::Data(format!(
                "instance of length {} exceeds max_len {}",
                inst.marked.len(),
                config.max_len
            )));
        }
        *per_kind.entry(inst.target_kind).or_default() += 1;
    }
    if let Some(k) = ElementKind::ALL.iter().find(|k| !per_kind.contains_key(k)) {
        return Err(Error::Data(format!("no instances target head {k:?}")));
    }
    Ok(TaggerModel::Windowed(WindowedTagger::fit(&instances, config)))
}

/// Labels positions with marker symbols as O.
pub(crate) fn force_markers_outside(marked: &MarkedSentence, labels: &mut BioSequence) {
    for (i, l) in labels.0.iter_mut().enumerate() {
        if marked.is_marker(i) {
            *l = BioLabel::O;
        }
    }
}
