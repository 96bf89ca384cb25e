//! Templated synthetic corpus with dependency, POS and head annotations.
//!
//! Gold element spans exclude leading determiners. Fact synsets accept the
//! gold surface form and, where the object carries a determiner, the
//! determiner-prefixed variant.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::{FactSynset, SurfaceTriple};
use crate::traindata::GoldRecord;
use crate::types::{Sentence, Span, Token, Triple};
use crate::util::stream_seed;

const FIRST: &[&str] = &[
    "Ada", "Maria", "Omar", "Kenji", "Lucia", "Pavel", "Amara", "Jonas", "Leila", "Tomas", "Ingrid", "Rahul",
    "Sofia", "Marek", "Yuki", "Elena", "Hugo", "Nadia", "Felix", "Zara",
];
const LAST: &[&str] = &[
    "Lovelace", "Curie", "Haddad", "Tanaka", "Rossi", "Novak", "Okafor", "Berg", "Karimi", "Silva", "Larsen",
    "Mehta", "Moreau", "Kowalski", "Sato", "Petrova",
];
const NOUNS: &[&str] = &[
    "bridge", "company", "museum", "library", "theory", "engine", "garden", "school", "novel", "hospital",
    "tower", "station", "painting", "festival", "journal", "laboratory", "orchestra", "vaccine",
];
const ADJS: &[&str] = &["old", "famous", "new", "large", "small", "modern", "public", "national"];
const VERBS: &[(&str, &str)] = &[
    ("founded", "founded"),
    ("built", "built"),
    ("designed", "designed"),
    ("discovered", "discovered"),
    ("funded", "funded"),
    ("wrote", "written"),
    ("led", "led"),
    ("restored", "restored"),
    ("opened", "opened"),
    ("sold", "sold"),
];
const PLACES: &[&str] = &[
    "Paris", "Cairo", "Lima", "Oslo", "Delhi", "Kyoto", "Nairobi", "Quito", "Vienna", "Dakar", "Hanoi", "Porto",
];
const ROLES: &[&str] = &["mayor", "director", "founder", "president", "curator", "architect"];

pub const TEMPLATE_COUNT: usize = 7;

/// Accumulates tokens and heads; heads may be set after the governor is added.
#[derive(Default)]
struct Builder {
    tokens: Vec<Token>,
}

impl Builder {
    fn add(&mut self, text: &str, dep: &str, pos: &str) -> usize {
        self.tokens.push(Token::new(text, dep).with_pos(pos));
        self.tokens.len() - 1
    }

    fn attach(&mut self, child: usize, head: usize) {
        self.tokens[child].head = Some(head);
    }

    fn next(&self) -> usize {
        self.tokens.len()
    }

    /// A person name of one or two tokens; returns (span, head).
    fn name(&mut self, rng: &mut ChaCha8Rng, dep: &str) -> (Span, usize) {
        let start = self.next();
        if rng.gen_bool(0.5) {
            let f = self.add(FIRST.choose(rng).unwrap(), "compound", "PROPN");
            let l = self.add(LAST.choose(rng).unwrap(), dep, "PROPN");
            self.attach(f, l);
            (Span::new(start, start + 2), l)
        } else {
            let h = self.add(FIRST.choose(rng).unwrap(), dep, "PROPN");
            (Span::new(start, start + 1), h)
        }
    }

    /// `the [adj] noun`; the returned span excludes the determiner.
    fn noun_phrase(&mut self, rng: &mut ChaCha8Rng, dep: &str) -> (Span, usize) {
        let det = if rng.gen_bool(0.7) {
            Some(self.add("the", "det", "DET"))
        } else {
            None
        };
        let start = self.next();
        let adj = rng.gen_bool(0.4).then(|| self.add(ADJS.choose(rng).unwrap(), "amod", "ADJ"));
        let h = self.add(NOUNS.choose(rng).unwrap(), dep, "NOUN");
        for c in det.into_iter().chain(adj) {
            self.attach(c, h);
        }
        (Span::new(start, h + 1), h)
    }

    fn place(&mut self, rng: &mut ChaCha8Rng, dep: &str) -> (Span, usize) {
        let i = self.add(PLACES.choose(rng).unwrap(), dep, "PROPN");
        (Span::new(i, i + 1), i)
    }

    fn year(&mut self, rng: &mut ChaCha8Rng, dep: &str) -> (Span, usize) {
        let y = rng.gen_range(1800..2024).to_string();
        let i = self.add(&y, dep, "NUM");
        (Span::new(i, i + 1), i)
    }
}

fn verb(rng: &mut ChaCha8Rng) -> (&'static str, &'static str) {
    *VERBS.choose(rng).unwrap()
}

/// One generated sentence with its gold triples.
struct Draft {
    builder: Builder,
    triples: Vec<(Span, Span, Span, Vec<Span>)>,
}

fn template(t: usize, rng: &mut ChaCha8Rng) -> Draft {
    let mut b = Builder::default();
    let mut triples = Vec::new();
    let sp = |i: usize| Span::new(i, i + 1);
    match t {
        // NAME VERB the NOUN
        0 => {
            let (s, sh) = b.name(rng, "nsubj");
            let v = b.add(verb(rng).0, "root", "VERB");
            let (o, oh) = b.noun_phrase(rng, "obj");
            b.attach(sh, v);
            b.attach(oh, v);
            triples.push((s, sp(v), o, vec![]));
        }
        // the NOUN was VERBed by NAME
        1 => {
            let (s, sh) = b.noun_phrase(rng, "nsubj:pass");
            let aux = b.add("was", "aux:pass", "AUX");
            let v = b.add(verb(rng).1, "root", "VERB");
            let by = b.add("by", "case", "ADP");
            let (o, oh) = b.name(rng, "obl:agent");
            b.attach(sh, v);
            b.attach(aux, v);
            b.attach(by, oh);
            b.attach(oh, v);
            triples.push((s, Span::new(aux, by + 1), o, vec![]));
        }
        // NAME VERB the NOUN in PLACE  (n-ary: place is an argument)
        2 => {
            let (s, sh) = b.name(rng, "nsubj");
            let v = b.add(verb(rng).0, "root", "VERB");
            let (o, oh) = b.noun_phrase(rng, "obj");
            let inn = b.add("in", "case", "ADP");
            let (a, ah) = b.place(rng, "obl");
            b.attach(sh, v);
            b.attach(oh, v);
            b.attach(inn, ah);
            b.attach(ah, v);
            triples.push((s, sp(v), o, vec![a]));
        }
        // NAME and NAME VERB the NOUN
        3 => {
            let (s1, h1) = b.name(rng, "nsubj");
            let cc = b.add("and", "cc", "CCONJ");
            let (s2, h2) = b.name(rng, "conj");
            let v = b.add(verb(rng).0, "root", "VERB");
            let (o, oh) = b.noun_phrase(rng, "obj");
            b.attach(h1, v);
            b.attach(cc, h2);
            b.attach(h2, h1);
            b.attach(oh, v);
            triples.push((s1, sp(v), o, vec![]));
            triples.push((s2, sp(v), o, vec![]));
        }
        // NAME VERB the NOUN and VERB the NOUN
        4 => {
            let (s, sh) = b.name(rng, "nsubj");
            let v1 = b.add(verb(rng).0, "root", "VERB");
            let (o1, oh1) = b.noun_phrase(rng, "obj");
            let cc = b.add("and", "cc", "CCONJ");
            let mut w2 = verb(rng).0;
            while w2 == b.tokens[v1].text {
                w2 = verb(rng).0;
            }
            let v2 = b.add(w2, "conj", "VERB");
            let (o2, oh2) = b.noun_phrase(rng, "obj");
            b.attach(sh, v1);
            b.attach(oh1, v1);
            b.attach(cc, v2);
            b.attach(v2, v1);
            b.attach(oh2, v2);
            triples.push((s, sp(v1), o1, vec![]));
            triples.push((s, sp(v2), o2, vec![]));
        }
        // NAME is the ROLE of PLACE
        5 => {
            let (s, sh) = b.name(rng, "nsubj");
            let is = b.add("is", "cop", "AUX");
            let the = b.add("the", "det", "DET");
            let role = b.add(ROLES.choose(rng).unwrap(), "root", "NOUN");
            let of = b.add("of", "case", "ADP");
            let (o, oh) = b.place(rng, "nmod");
            b.attach(sh, role);
            b.attach(is, role);
            b.attach(the, role);
            b.attach(of, oh);
            b.attach(oh, role);
            triples.push((s, Span::new(is, of + 1), o, vec![]));
        }
        // In YEAR , NAME VERB the NOUN  (n-ary: year is an argument)
        _ => {
            let inn = b.add("In", "case", "ADP");
            let (a, ah) = b.year(rng, "obl");
            let comma = b.add(",", "punct", "PUNCT");
            let (s, sh) = b.name(rng, "nsubj");
            let v = b.add(verb(rng).0, "root", "VERB");
            let (o, oh) = b.noun_phrase(rng, "obj");
            b.attach(inn, ah);
            b.attach(ah, v);
            b.attach(comma, v);
            b.attach(sh, v);
            b.attach(oh, v);
            triples.push((s, sp(v), o, vec![a]));
        }
    }
    let end = b.add(".", "punct", "PUNCT");
    let root = b.tokens.iter().position(|t| t.dep == "root").unwrap();
    b.attach(end, root);
    Draft {
        builder: b,
        triples,
    }
}

/// Generates `count` records, cycling through the templates in a seeded order.
///
/// Record ids are `{prefix}{index}`; each record draws from its own stream so
/// a corpus prefix does not depend on its length.
pub fn generate(seed: u64, count: usize, prefix: &str) -> Vec<GoldRecord> {
    (0..count)
        .map(|i| {
            let id = format!("{prefix}{i}");
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, &id, "synth"));
            let t = rng.gen_range(0..TEMPLATE_COUNT);
            let draft = template(t, &mut rng);
            let sentence = Sentence::new(id.clone(), draft.builder.tokens).expect("template yields valid sentence");
            let triples = draft
                .triples
                .into_iter()
                .map(|(s, p, o, a)| Triple::new(id.clone(), s, p, o).with_args(a))
                .collect();
            GoldRecord::new(sentence, triples).expect("template yields valid triples")
        })
        .collect()
}

/// Fact synsets of a record's gold triples (binary view).
pub fn synsets(record: &GoldRecord) -> Vec<FactSynset> {
    let s = &record.sentence;
    let mut out: Vec<FactSynset> = Vec::new();
    for t in &record.triples {
        let base = SurfaceTriple::of(t, s);
        let mut variants = vec![base.clone()];
        if t.object.start > 0 && s.tokens()[t.object.start - 1].dep == "det" {
            let with_det = Span::new(t.object.start - 1, t.object.end);
            variants.push(SurfaceTriple::new(
                s.id(),
                &base.subject,
                &base.predicate,
                &s.surface(with_det),
            ));
        }
        if !out.iter().any(|f| f.variants[0] == base) {
            out.push(FactSynset {
                sentence_id: s.id().to_string(),
                variants,
            });
        }
    }
    out
}
