//! Conditioning markers.
//!
//! Previously extracted elements are surrounded by reserved symbol pairs
//! (`<S> … <S>`, `<P> … <P>`, `<O> … <O>`) so that the next prediction can see
//! them. Arguments are never marked.

use crate::error::{Error, Result};
use crate::types::{ElementKind, PartialTriple, Sentence, Span, Token};

/// Tag carried by marker positions in both tag families.
pub const MARKER_TAG: &str = "MARKER";

pub fn marker_symbol(kind: ElementKind) -> Option<&'static str> {
    match kind {
        ElementKind::Subject => Some("<S>"),
        ElementKind::Predicate => Some("<P>"),
        ElementKind::Object => Some("<O>"),
        ElementKind::Argument => None,
    }
}

pub fn marker_kind(text: &str) -> Option<ElementKind> {
    match text {
        "<S>" => Some(ElementKind::Subject),
        "<P>" => Some(ElementKind::Predicate),
        "<O>" => Some(ElementKind::Object),
        _ => None,
    }
}

pub fn is_marker_symbol(text: &str) -> bool {
    marker_kind(text).is_some()
}

/// One position of a rendered sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rendered {
    Marker(ElementKind),
    /// Index into the base sentence.
    Token(usize),
}

/// A sentence with marker pairs inserted around conditioned elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedSentence {
    base: Sentence,
    markers: PartialTriple,
    rendered: Vec<Rendered>,
    base_to_rendered: Vec<usize>,
}

impl MarkedSentence {
    pub fn base(&self) -> &Sentence {
        &self.base
    }

    /// Conditioned elements (arguments always empty).
    pub fn markers(&self) -> &PartialTriple {
        &self.markers
    }

    pub fn rendered(&self) -> &[Rendered] {
        &self.rendered
    }

    pub fn len(&self) -> usize {
        self.rendered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rendered.is_empty()
    }

    /// Rendered position of a base token.
    pub fn to_rendered(&self, base_index: usize) -> usize {
        self.base_to_rendered[base_index]
    }

    /// Base index of a rendered position, `None` for markers.
    pub fn to_base(&self, rendered_index: usize) -> Option<usize> {
        match self.rendered[rendered_index] {
            Rendered::Token(i) => Some(i),
            Rendered::Marker(_) => None,
        }
    }

    pub fn is_marker(&self, rendered_index: usize) -> bool {
        matches!(self.rendered[rendered_index], Rendered::Marker(_))
    }

    pub fn text(&self, rendered_index: usize) -> &str {
        match self.rendered[rendered_index] {
            Rendered::Marker(k) => marker_symbol(k).unwrap(),
            Rendered::Token(i) => &self.base.tokens()[i].text,
        }
    }

    pub fn dep(&self, rendered_index: usize) -> &str {
        match self.rendered[rendered_index] {
            Rendered::Marker(_) => MARKER_TAG,
            Rendered::Token(i) => &self.base.tokens()[i].dep,
        }
    }

    pub fn pos(&self, rendered_index: usize) -> Option<&str> {
        match self.rendered[rendered_index] {
            Rendered::Marker(_) => Some(MARKER_TAG),
            Rendered::Token(i) => self.base.tokens()[i].pos.as_deref(),
        }
    }

    /// Rendered token texts.
    pub fn texts(&self) -> Vec<&str> {
        (0..self.len()).map(|i| self.text(i)).collect()
    }

    /// Rendered sequence joined by single spaces.
    pub fn joined(&self) -> String {
        self.texts().join(" ")
    }

    /// Maps a base span to the rendered range covering the same tokens.
    ///
    /// Fails if the span encloses a marker, i.e. overlaps a conditioned element
    /// without being contained in it.
    pub fn span_to_rendered(&self, span: Span) -> Result<Span> {
        span.check(self.base.len())?;
        let start = self.to_rendered(span.start);
        let end = self.to_rendered(span.end - 1) + 1;
        if end - start != span.len() {
            return Err(Error::Alignment(start));
        }
        Ok(Span::new(start, end))
    }

    /// Rebuilds a marked sentence from rendered `(text, dep, pos)` triples.
    ///
    /// Marker symbols are recognised by their text; the base sentence gets `id`.
    pub fn from_rendered(
        id: impl Into<String>,
        rendered: impl IntoIterator<Item = (String, String, Option<String>)>,
        max_len: usize,
    ) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut markers = PartialTriple::new();
        let mut open: Option<(ElementKind, usize)> = None;
        let mut seen = Vec::new();
        for (text, dep, pos) in rendered {
            if let Some(kind) = marker_kind(&text) {
                match open {
                    None => {
                        if seen.contains(&kind) {
                            return Err(Error::MalformedMarking(format!(
                                "marker {text} occurs more than once"
                            )));
                        }
                        open = Some((kind, tokens.len()));
                    }
                    Some((k, start)) if k == kind => {
                        if start == tokens.len() {
                            return Err(Error::MalformedMarking(format!(
                                "empty {text} marker pair"
                            )));
                        }
                        markers.set(kind, Span::new(start, tokens.len()));
                        seen.push(kind);
                        open = None;
                    }
                    Some((k, _)) => {
                        return Err(Error::MalformedMarking(format!(
                            "{text} inside an open {} pair",
                            marker_symbol(k).unwrap()
                        )));
                    }
                }
            } else {
                let mut tok = Token::new(text, dep);
                tok.pos = pos;
                tokens.push(tok);
            }
        }
        if let Some((k, _)) = open {
            return Err(Error::MalformedMarking(format!(
                "unbalanced {} marker",
                marker_symbol(k).unwrap()
            )));
        }
        let base = Sentence::new(id, tokens)?;
        mark(&base, &markers, max_len)
    }
}

/// Inserts marker pairs around every conditioned core element.
pub fn mark(sentence: &Sentence, conditioned: &PartialTriple, max_len: usize) -> Result<MarkedSentence> {
    let spans: Vec<(ElementKind, Span)> = conditioned.core().collect();
    for (_, s) in &spans {
        s.check(sentence.len())?;
    }
    for (i, (_, a)) in spans.iter().enumerate() {
        for (_, b) in &spans[i + 1..] {
            if a.overlaps(b) {
                return Err(Error::Overlap(*a, *b));
            }
        }
    }
    let len = sentence.len() + 2 * spans.len();
    if len > max_len {
        return Err(Error::Length { len, max_len });
    }

    let mut rendered = Vec::with_capacity(len);
    let mut base_to_rendered = Vec::with_capacity(sentence.len());
    for i in 0..sentence.len() {
        if let Some((k, _)) = spans.iter().find(|(_, s)| s.start == i) {
            rendered.push(Rendered::Marker(*k));
        }
        base_to_rendered.push(rendered.len());
        rendered.push(Rendered::Token(i));
        if let Some((k, _)) = spans.iter().find(|(_, s)| s.end == i + 1) {
            rendered.push(Rendered::Marker(*k));
        }
    }

    let mut markers = conditioned.clone();
    markers.args.clear();
    Ok(MarkedSentence {
        base: sentence.clone(),
        markers,
        rendered,
        base_to_rendered,
    })
}

/// Removes the markers, returning the base sentence.
pub fn strip(marked: &MarkedSentence) -> Sentence {
    marked.base.clone()
}
