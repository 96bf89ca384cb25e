use std::collections::HashMap;

use crate::types::{Sentence, Span, Triple};

use super::ScoreReport;

/// Syntactic head of a span: the first token whose head lies outside the span
/// (the root counts as outside). Without head annotations this is the first token.
pub fn head_token(sentence: &Sentence, span: Span) -> usize {
    span.indices()
        .find(|&i| match sentence.tokens()[i].head {
            None => true,
            Some(h) => !span.contains(h),
        })
        .unwrap_or(span.start)
}

/// Lexical match by head containment.
///
/// A prediction matches a gold triple of the same sentence when its subject,
/// predicate and object each contain the head token of the corresponding gold
/// element. Each gold triple is matched at most once (maximum bipartite matching).
/// Triples of unknown sentences never match.
pub fn score_lexical(preds: &[Triple], gold: &[Triple], sentences: &HashMap<String, Sentence>) -> ScoreReport {
    let heads: Vec<Option<[usize; 3]>> = gold
        .iter()
        .map(|g| {
            sentences.get(&g.sentence_id).map(|s| {
                [
                    head_token(s, g.subject),
                    head_token(s, g.predicate),
                    head_token(s, g.object),
                ]
            })
        })
        .collect();
    let edges: Vec<Vec<usize>> = preds
        .iter()
        .map(|p| {
            gold.iter()
                .zip(&heads)
                .enumerate()
                .filter(|(_, (g, h))| {
                    g.sentence_id == p.sentence_id
                        && h.is_some_and(|[s, r, o]| {
                            p.subject.contains(s) && p.predicate.contains(r) && p.object.contains(o)
                        })
                })
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    let mut owner: Vec<Option<usize>> = vec![None; gold.len()];
    let mut matched = 0;
    for i in 0..preds.len() {
        let mut visited = vec![false; gold.len()];
        if augment(i, &edges, &mut owner, &mut visited) {
            matched += 1;
        }
    }
    ScoreReport::from_counts("lexical (head-containment)", matched, preds.len(), matched, gold.len())
}

fn augment(i: usize, edges: &[Vec<usize>], owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for &j in &edges[i] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        if owner[j].is_none_or(|k| augment(k, edges, owner, visited)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}
