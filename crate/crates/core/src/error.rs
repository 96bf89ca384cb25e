use thiserror::Error;

use crate::types::{ElementKind, Span};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spans overlap: {0} and {1}")]
    Overlap(Span, Span),

    #[error("rendered length {len} exceeds max_len {max_len}")]
    Length { len: usize, max_len: usize },

    #[error("span {span} out of bounds for sequence of length {len}")]
    SpanOutOfBounds { span: Span, len: usize },

    #[error("decoded span crosses marker symbol at rendered position {0}")]
    Alignment(usize),

    #[error("label sequence has length {labels} but input has length {input}")]
    LengthMismatch { labels: usize, input: usize },

    #[error("invalid sentence: {0}")]
    InvalidSentence(String),

    #[error("malformed marked sequence: {0}")]
    MalformedMarking(String),

    #[error("model does not support head {0:?}")]
    UnsupportedHead(ElementKind),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid training data: {0}")]
    Data(String),

    #[error("model format error: {0}")]
    Format(String),

    #[error("triples reference different sentences: {0:?} and {1:?}")]
    MixedSentence(String, String),

    #[error("token {token} of sentence {sentence:?} has no {family} tag")]
    MissingTag {
        sentence: String,
        token: usize,
        family: &'static str,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by a missing or incompatible model.
    pub fn is_model_error(&self) -> bool {
        matches!(self, Error::UnsupportedHead(_) | Error::Format(_))
    }
}
