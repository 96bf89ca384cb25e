use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default maximum rendered sentence length (including marker slack).
pub const DEFAULT_MAX_LEN: usize = 120;

/// A single token with its tags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub index: usize,
    pub text: String,
    pub dep: String,
    pub pos: Option<String>,
    /// Index of the syntactic head, `None` for the root or when unknown.
    pub head: Option<usize>,
}

impl Token {
    pub fn new(text: impl Into<String>, dep: impl Into<String>) -> Self {
        Token {
            index: 0,
            text: text.into(),
            dep: dep.into(),
            pos: None,
            head: None,
        }
    }

    pub fn with_pos(mut self, pos: impl Into<String>) -> Self {
        self.pos = Some(pos.into());
        self
    }

    pub fn with_head(mut self, head: usize) -> Self {
        self.head = Some(head);
        self
    }
}

/// A tokenized, tagged sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence {
    id: String,
    tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence, re-indexing tokens by position.
    ///
    /// Rejects empty sentences, empty token texts and reserved marker symbols.
    pub fn new(id: impl Into<String>, mut tokens: Vec<Token>) -> Result<Self> {
        let id = id.into();
        if tokens.is_empty() {
            return Err(Error::InvalidSentence(format!("{id}: no tokens")));
        }
        for (i, tok) in tokens.iter_mut().enumerate() {
            if tok.text.is_empty() {
                return Err(Error::InvalidSentence(format!("{id}: token {i} is empty")));
            }
            if crate::marker::is_marker_symbol(&tok.text) {
                return Err(Error::InvalidSentence(format!(
                    "{id}: token {i} is the reserved marker {}",
                    tok.text
                )));
            }
            tok.index = i;
        }
        let n = tokens.len();
        if let Some(t) = tokens.iter().find(|t| t.head.is_some_and(|h| h >= n)) {
            return Err(Error::InvalidSentence(format!(
                "{id}: token {} has head outside the sentence",
                t.index
            )));
        }
        Ok(Sentence { id, tokens })
    }

    /// Whitespace-tokenized sentence with a uniform placeholder tag. Handy in tests.
    pub fn from_text(id: impl Into<String>, text: &str) -> Result<Self> {
        let tokens = text.split_whitespace().map(|w| Token::new(w, "dep")).collect();
        Sentence::new(id, tokens)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn check_max_len(&self, max_len: usize) -> Result<()> {
        if self.len() > max_len {
            return Err(Error::Length {
                len: self.len(),
                max_len,
            });
        }
        Ok(())
    }

    /// Surface string of a span, tokens joined by single spaces.
    pub fn surface(&self, span: Span) -> String {
        self.tokens[span.start..span.end]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn words(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    /// Leftmost span whose tokens equal the whitespace-split `phrase`.
    pub fn find_phrase(&self, phrase: &str) -> Option<Span> {
        let needle: Vec<&str> = phrase.split_whitespace().collect();
        if needle.is_empty() || needle.len() > self.len() {
            return None;
        }
        (0..=self.len() - needle.len())
            .find(|&i| {
                self.tokens[i..i + needle.len()]
                    .iter()
                    .zip(&needle)
                    .all(|(t, w)| t.text == *w)
            })
            .map(|i| Span::new(i, i + needle.len()))
    }
}

/// Half-open token range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index < self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }

    /// Checks `0 <= start < end <= len`.
    pub fn check(&self, len: usize) -> Result<()> {
        if self.is_empty() || self.end > len {
            return Err(Error::SpanOutOfBounds { span: *self, len });
        }
        Ok(())
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

impl Serialize for Span {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.start, self.end].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Span {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [start, end] = <[usize; 2]>::deserialize(d)?;
        if start >= end {
            return Err(serde::de::Error::custom(format!(
                "span [{start},{end}) is empty"
            )));
        }
        Ok(Span { start, end })
    }
}

/// The four triple elements, one tagger head each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementKind {
    #[serde(rename = "S")]
    Subject,
    #[serde(rename = "P")]
    Predicate,
    #[serde(rename = "O")]
    Object,
    #[serde(rename = "A")]
    Argument,
}

impl ElementKind {
    pub const ALL: [ElementKind; 4] = [
        ElementKind::Subject,
        ElementKind::Predicate,
        ElementKind::Object,
        ElementKind::Argument,
    ];

    /// Kinds that can be marked in the input.
    pub const CORE: [ElementKind; 3] = [
        ElementKind::Subject,
        ElementKind::Predicate,
        ElementKind::Object,
    ];

    pub fn code(self) -> char {
        match self {
            ElementKind::Subject => 'S',
            ElementKind::Predicate => 'P',
            ElementKind::Object => 'O',
            ElementKind::Argument => 'A',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'S' => Some(ElementKind::Subject),
            'P' => Some(ElementKind::Predicate),
            'O' => Some(ElementKind::Object),
            'A' => Some(ElementKind::Argument),
            _ => None,
        }
    }

    /// Dense index in `0..4`.
    pub fn head_index(self) -> usize {
        match self {
            ElementKind::Subject => 0,
            ElementKind::Predicate => 1,
            ElementKind::Object => 2,
            ElementKind::Argument => 3,
        }
    }

    pub fn is_core(self) -> bool {
        self != ElementKind::Argument
    }
}

/// A triple under construction. Arguments are never used for conditioning.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialTriple {
    pub subject: Option<Span>,
    pub predicate: Option<Span>,
    pub object: Option<Span>,
    pub args: Vec<Span>,
}

impl PartialTriple {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, kind: ElementKind) -> Option<Span> {
        match kind {
            ElementKind::Subject => self.subject,
            ElementKind::Predicate => self.predicate,
            ElementKind::Object => self.object,
            ElementKind::Argument => None,
        }
    }

    /// Sets a core element. Panics on `Argument`.
    pub fn set(&mut self, kind: ElementKind, span: Span) {
        match kind {
            ElementKind::Subject => self.subject = Some(span),
            ElementKind::Predicate => self.predicate = Some(span),
            ElementKind::Object => self.object = Some(span),
            ElementKind::Argument => panic!("arguments are not a single-span element"),
        }
    }

    pub fn with(mut self, kind: ElementKind, span: Span) -> Self {
        self.set(kind, span);
        self
    }

    /// Present core elements in S, P, O order.
    pub fn core(&self) -> impl Iterator<Item = (ElementKind, Span)> + '_ {
        ElementKind::CORE
            .into_iter()
            .filter_map(|k| self.get(k).map(|s| (k, s)))
    }

    pub fn present_count(&self) -> usize {
        self.core().count()
    }

    pub fn is_empty(&self) -> bool {
        self.present_count() == 0
    }

    /// Whether a full triple agrees with every present core element.
    pub fn consistent_with(&self, triple: &Triple) -> bool {
        self.core().all(|(k, s)| triple.get(k) == s)
    }

    /// Converts to a full triple when S, P and O are present.
    pub fn complete(&self, sentence_id: &str) -> Option<Triple> {
        Some(Triple {
            sentence_id: sentence_id.to_string(),
            subject: self.subject?,
            predicate: self.predicate?,
            object: self.object?,
            args: self.args.clone(),
            confidence: 1.0,
        })
    }
}

/// An extraction: subject, predicate, object and optional arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    pub sentence_id: String,
    pub subject: Span,
    pub predicate: Span,
    pub object: Span,
    pub args: Vec<Span>,
    pub confidence: f64,
}

impl Triple {
    pub fn new(sentence_id: impl Into<String>, subject: Span, predicate: Span, object: Span) -> Self {
        Triple {
            sentence_id: sentence_id.into(),
            subject,
            predicate,
            object,
            args: Vec::new(),
            confidence: 1.0,
        }
    }

    pub fn with_args(mut self, args: Vec<Span>) -> Self {
        self.args = args;
        self
    }

    pub fn get(&self, kind: ElementKind) -> Span {
        match kind {
            ElementKind::Subject => self.subject,
            ElementKind::Predicate => self.predicate,
            ElementKind::Object => self.object,
            ElementKind::Argument => panic!("arguments are not a single-span element"),
        }
    }

    /// Spans of one kind: a single span for core kinds, all args for `Argument`.
    pub fn spans(&self, kind: ElementKind) -> Vec<Span> {
        match kind {
            ElementKind::Argument => self.args.clone(),
            k => vec![self.get(k)],
        }
    }

    pub fn as_partial(&self) -> PartialTriple {
        PartialTriple {
            subject: Some(self.subject),
            predicate: Some(self.predicate),
            object: Some(self.object),
            args: self.args.clone(),
        }
    }

    /// Drops the arguments.
    pub fn binary(&self) -> Triple {
        Triple {
            args: Vec::new(),
            ..self.clone()
        }
    }

    pub fn check(&self, sentence: &Sentence) -> Result<()> {
        for span in [self.subject, self.predicate, self.object]
            .iter()
            .chain(&self.args)
        {
            span.check(sentence.len())?;
        }
        Ok(())
    }

    pub fn key(&self) -> TripleKey {
        let mut args = self.args.clone();
        args.sort();
        TripleKey {
            sentence_id: self.sentence_id.clone(),
            subject: self.subject,
            predicate: self.predicate,
            object: self.object,
            args,
        }
    }

    /// `(subject; predicate; object; args...)` rendered with the sentence's words.
    pub fn display(&self, sentence: &Sentence) -> String {
        let mut out = format!(
            "({}; {}; {}",
            sentence.surface(self.subject),
            sentence.surface(self.predicate),
            sentence.surface(self.object)
        );
        for a in &self.args {
            out.push_str("; ");
            out.push_str(&sentence.surface(*a));
        }
        out.push(')');
        out
    }
}

/// Identity of an extraction used for vote counting.
///
/// Spans are contiguous, so comparing spans is the same as comparing token-index
/// sets. Arguments form a multiset and are kept sorted. Confidence is excluded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleKey {
    pub sentence_id: String,
    pub subject: Span,
    pub predicate: Span,
    pub object: Span,
    pub args: Vec<Span>,
}

/// Canonical key of a triple within its sentence.
pub fn normalize(triple: &Triple, sentence: &Sentence) -> TripleKey {
    let mut key = triple.key();
    key.sentence_id = sentence.id().to_string();
    key
}
