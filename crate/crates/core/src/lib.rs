//! Iterative open information extraction.
//!
//! A sentence is decoded element by element: each step marks the elements
//! found so far with `<S>`, `<P>`, `<O>` and asks a BIO tagger for the next
//! one. Running all six subject/predicate/object orders and voting over the
//! results gives ranked triples.
//!
//! ```
//! use iterie::{mark, strip, PartialTriple, Sentence, Span, ElementKind};
//!
//! let s = Sentence::from_text("1", "The Taj Mahal was built by Shah Jahan").unwrap();
//! let c = PartialTriple::new().with(ElementKind::Predicate, Span::new(3, 6));
//! let m = mark(&s, &c, 120).unwrap();
//! assert_eq!(m.joined(), "The Taj Mahal <P> was built by <P> Shah Jahan");
//! assert_eq!(strip(&m), s);
//! ```

pub mod aggregate;
pub mod bio;
pub mod error;
pub mod eval;
pub mod io;
pub mod marker;
pub mod pathway;
pub mod postprocess;
pub mod synth;
pub mod tagger;
pub mod traindata;
pub mod types;
pub mod util;

pub use aggregate::{vote, water_fill, VotedTriple};
pub use bio::{decode_bio, disjoint_subset, encode_bio, BioLabel, BioSequence};
pub use error::{Error, Result};
pub use marker::{mark, strip, MarkedSentence};
pub use pathway::{expand, extract, extract_all, DecodeLimits, Diagnostics, Extraction, Pathway};
pub use postprocess::{binarize, complete};
pub use tagger::{Tagger, TaggerModel, TrainConfig, TrainingInstance};
pub use traindata::{GoldRecord, SamplerConfig};
pub use types::{ElementKind, PartialTriple, Sentence, Span, Token, Triple, TripleKey, DEFAULT_MAX_LEN};
