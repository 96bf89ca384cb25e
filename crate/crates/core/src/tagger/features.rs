//! Sparse per-token features for the windowed tagger.

use crate::marker::MarkedSentence;
use crate::types::{ElementKind, Span};
use crate::util::fnv1a;

/// 64-bit FNV-1a hash of a feature string.
pub type FeatureId = u64;


fn bucket(d: usize) -> &'static str {
    match d {
        0 => "0",
        1 => "1",
        2 => "2",
        3 => "3",
        4..=5 => "4",
        6..=9 => "6",
        _ => "10",
    }
}

/// Position of a token relative to a marked span.
fn relation(b: usize, span: Option<Span>) -> String {
    match span {
        None => "-".into(),
        Some(s) if s.contains(b) => {
            if s.len() == 1 {
                "in1".into()
            } else if b == s.start {
                "inB".into()
            } else if b + 1 == s.end {
                "inE".into()
            } else {
                "inM".into()
            }
        }
        Some(s) if b < s.start => format!("L{}", bucket(s.start - b)),
        Some(s) => format!("R{}", bucket(b + 1 - s.end)),
    }
}

fn shape(word: &str) -> &'static str {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_digit() => "d",
        Some(c) if c.is_uppercase() => "X",
        Some(c) if c.is_alphabetic() => "x",
        _ => ".",
    }
}

/// Feature ids for every rendered position; marker positions get none.
///
/// Uses the token, its dep and pos tags, a ±2 token window, the token's
/// relation to each marked span, and sentence-level descriptors of the
/// conditioning (which kinds are marked, their order, and their tags).
pub fn extract_features(marked: &MarkedSentence) -> Vec<Vec<FeatureId>> {
    let base = marked.base();
    let tokens = base.tokens();
    let n = tokens.len();
    let markers = marked.markers();

    let word = |i: isize| -> String {
        if i < 0 {
            "<s>".into()
        } else if i as usize >= n {
            "</s>".into()
        } else {
            tokens[i as usize].text.to_lowercase()
        }
    };
    let dep = |i: isize| -> &str {
        if i < 0 {
            "<s>"
        } else if i as usize >= n {
            "</s>"
        } else {
            &tokens[i as usize].dep
        }
    };
    let pos = |i: isize| -> &str {
        if i < 0 {
            "<s>"
        } else if i as usize >= n {
            "</s>"
        } else {
            tokens[i as usize].pos.as_deref().unwrap_or("-")
        }
    };

    let sig: String = ElementKind::CORE
        .iter()
        .map(|k| if markers.get(*k).is_some() { k.code() } else { '_' })
        .collect();

    // Sentence-level conditioning descriptors.
    let mut global: Vec<String> = vec![format!("sig={sig}")];
    let present: Vec<(ElementKind, Span)> = markers.core().collect();
    for (i, (ka, sa)) in present.iter().enumerate() {
        let first = sa.start as isize;
        let last = sa.end as isize - 1;
        let c = ka.code();
        global.push(format!("m{c}.fd={}", dep(first)));
        global.push(format!("m{c}.ld={}", dep(last)));
        global.push(format!("m{c}.fp={}", pos(first)));
        global.push(format!("m{c}.fw={}", word(first)));
        global.push(format!("m{c}.len={}", bucket(sa.len())));
        global.push(format!("m{c}.fd={}|sig={sig}", dep(first)));
        global.push(format!("m{c}.prev={}", dep(first - 1)));
        for (kb, sb) in &present[i + 1..] {
            let (l, r) = if sa.start < sb.start { (c, kb.code()) } else { (kb.code(), c) };
            let gap = if sa.start < sb.start {
                sb.start - sa.end
            } else {
                sa.start - sb.end
            };
            global.push(format!("ord={l}<{r}"));
            global.push(format!("gap{l}{r}={}", bucket(gap)));
            let between: Vec<&str> = (sa.end.min(sb.end)..sa.start.max(sb.start))
                .map(|j| dep(j as isize))
                .collect();
            let has_root = between.contains(&"root");
            global.push(format!("btw{l}{r}.root={has_root}"));
        }
    }

    let mut out = vec![Vec::new(); marked.len()];
    for (r, feats) in out.iter_mut().enumerate() {
        let Some(b) = marked.to_base(r) else {
            continue;
        };
        let bi = b as isize;
        let w = word(bi);
        let d = dep(bi);
        let p = pos(bi);
        let mut f: Vec<String> = Vec::with_capacity(64);
        f.push("bias".into());
        f.push(format!("w={w}"));
        f.push(format!("d={d}"));
        f.push(format!("p={p}"));
        f.push(format!("shape={}", shape(&tokens[b].text)));
        f.push(format!("d={d}|p={p}"));
        for off in [-2isize, -1, 1, 2] {
            f.push(format!("w{off}={}", word(bi + off)));
            f.push(format!("d{off}={}", dep(bi + off)));
            f.push(format!("p{off}={}", pos(bi + off)));
        }
        f.push(format!("d-1={}|d={d}", dep(bi - 1)));
        f.push(format!("d={d}|d+1={}", dep(bi + 1)));
        f.push(format!("p-1={}|p={p}", pos(bi - 1)));
        if let Some(h) = tokens[b].head {
            f.push(format!("hd={}", tokens[h].dep));
            f.push(format!("d={d}|hd={}", tokens[h].dep));
            let dir = if h < b { "L" } else { "R" };
            f.push(format!("hdir={dir}{}", bucket(h.abs_diff(b))));
        } else {
            f.push("hd=ROOT".into());
        }
        if r > 0 && marked.is_marker(r - 1) {
            f.push(format!("prevM={}", marked.text(r - 1)));
        }
        if r + 1 < marked.len() && marked.is_marker(r + 1) {
            f.push(format!("nextM={}", marked.text(r + 1)));
        }

        let mut rels = String::new();
        for k in ElementKind::CORE {
            let rel = relation(b, markers.get(k));
            let c = k.code();
            f.push(format!("r{c}={rel}"));
            f.push(format!("r{c}={rel}|d={d}"));
            f.push(format!("r{c}={rel}|p={p}"));
            f.push(format!("r{c}={rel}|w={w}"));
            rels.push_str(&rel);
            rels.push('/');
        }
        f.push(format!("rels={rels}"));
        f.push(format!("rels={rels}|d={d}"));
        f.push(format!("sig={sig}|d={d}"));
        f.push(format!("sig={sig}|w={w}"));
        f.push(format!("sig={sig}|d-1={}|d={d}", dep(bi - 1)));
        f.extend(global.iter().cloned());
        for g in &global[1..] {
            f.push(format!("{g}|d={d}"));
        }

        *feats = f.iter().map(|s| fnv1a(s.as_bytes())).collect();
    }
    out
}
