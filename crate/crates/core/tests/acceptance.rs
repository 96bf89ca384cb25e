//! Acceptance checks. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use iterie::eval::{self, FactSynset, SurfaceTriple, TagFamily};
use iterie::tagger::oracle_from_gold;
use iterie::traindata::{self, GoldRecord};
use iterie::{
    binarize, complete, decode_bio, encode_bio, extract, extract_all, mark, strip, water_fill, BioSequence,
    DecodeLimits, ElementKind, PartialTriple, Pathway, SamplerConfig, Sentence, Span, Token, TrainConfig, Triple,
    TripleKey,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use ElementKind::{Argument as A, Object as O, Predicate as P, Subject as S};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:?}, limit {limit:?}"));
    }
    Ok(took)
}

fn marker_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut marked_any = 0;
    for i in 0..1000 {
        let s = random_sentence(&mut rng, &format!("r{i}"), 40);
        let c = random_partial(&mut rng, s.len());
        let m = mark(&s, &c, 200).map_err(|e| format!("mark failed on case {i}: {e}"))?;
        ensure!(strip(&m) == s, "round trip failed on case {i}");
        ensure!(m.len() == s.len() + 2 * c.present_count(), "length mismatch on case {i}");
        marked_any += usize::from(c.present_count() > 0);
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("1000/1000 round trips ({marked_any} with markers) in {took:?}"))
}

fn bio_codec() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..10_000 {
        let n = rng.gen_range(1..60);
        let k = rng.gen_range(0..6);
        let spans = random_disjoint_spans(&mut rng, n, k);
        let s = Sentence::new("b", (0..n).map(|_| Token::new("w", "dep")).collect()).unwrap();
        let m = mark(&s, &PartialTriple::new(), 200).unwrap();
        let labels = encode_bio(&spans, n).map_err(|e| format!("encode failed on set {i}: {e}"))?;
        let mut expected = spans.clone();
        expected.sort();
        ensure!(decode_bio(&labels, &m).unwrap() == expected, "identity failed on set {i}");
    }
    let stray = [
        ("O I I O", vec![(1, 3)]),
        ("I O", vec![(0, 1)]),
        ("I I B I", vec![(0, 2), (2, 4)]),
        ("B O I I", vec![(0, 1), (2, 4)]),
        ("O O O", vec![]),
    ];
    for (labels, want) in stray {
        let seq: BioSequence = labels.parse().unwrap();
        let s = Sentence::from_text("x", &vec!["w"; seq.len()].join(" ")).unwrap();
        let m = mark(&s, &PartialTriple::new(), 200).unwrap();
        let got = decode_bio(&seq, &m).unwrap();
        let want: Vec<Span> = want.into_iter().map(|(a, b)| Span::new(a, b)).collect();
        ensure!(got == want, "stray-I case {labels:?}: got {got:?}, want {want:?}");
    }
    Ok("10000/10000 span sets, 5/5 stray-I cases".into())
}

fn key_set(triples: &[Triple]) -> BTreeSet<TripleKey> {
    triples.iter().map(Triple::key).collect()
}

fn oracle_end_to_end() -> Outcome {
    let start = Instant::now();
    let records = iterie::synth::generate(3, 200, "o");
    let oracle = oracle_from_gold(records.iter().map(|r| (&r.sentence, r.triples.as_slice())));
    let limits = DecodeLimits::default();
    for r in &records {
        let gold = key_set(&r.triples);
        let all = extract_all(&r.sentence, &oracle, &limits).map_err(|e| e.to_string())?;
        for p in Pathway::ALL {
            let single = extract(&r.sentence, p, &oracle, &limits).map_err(|e| e.to_string())?;
            ensure!(key_set(&single.triples) == gold, "{p} on {} differs from gold", r.sentence.id());
            ensure!(all[&p].triples == single.triples, "extract_all disagrees with extract for {p}");
        }
        let wf = water_fill(all.iter().map(|(p, e)| (*p, e.triples.as_slice())), 1).map_err(|e| e.to_string())?;
        ensure!(wf.len() == gold.len(), "water fill size on {}", r.sentence.id());
        ensure!(key_set(&wf) == gold, "water fill keys on {}", r.sentence.id());
        ensure!(wf.iter().all(|t| t.confidence == 1.0), "confidence below 1 on {}", r.sentence.id());
    }
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("200 sentences x 6 pathways exact, water fill exact at 1.0, {took:?}"))
}

fn taj_instances() -> Outcome {
    let record = taj_record();
    let check = |order: [ElementKind; 3], rows: &[(&str, &str, ElementKind)]| -> Result<(), String> {
        let (inst, diag) = traindata::instances_for_order(&record, 0, order, 120);
        ensure!(diag == Default::default(), "unexpected diagnostics {diag:?}");
        ensure!(inst.len() == 4, "expected 4 instances, got {}", inst.len());
        for (i, (input, target, kind)) in rows.iter().enumerate() {
            let (joined, targets) = traindata::describe(&inst[i]);
            ensure!(joined == *input, "instance {i}: input {joined:?}");
            ensure!(targets == vec![target.to_string()], "instance {i}: targets {targets:?}");
            ensure!(inst[i].target_kind == *kind && !inst[i].is_negative, "instance {i}: kind");
        }
        Ok(())
    };
    check(
        [P, S, O],
        &[
            ("The Taj Mahal was built by Shah Jahan in 1643", "built by", P),
            ("The Taj Mahal was <P> built by <P> Shah Jahan in 1643", "Taj Mahal", S),
            ("The <S> Taj Mahal <S> was <P> built by <P> Shah Jahan in 1643", "Shah Jahan", O),
            ("The <S> Taj Mahal <S> was <P> built by <P> <O> Shah Jahan <O> in 1643", "in 1643", A),
        ],
    )?;
    check(
        [O, S, P],
        &[
            ("The Taj Mahal was built by Shah Jahan in 1643", "Shah Jahan", O),
            ("The Taj Mahal was built by <O> Shah Jahan <O> in 1643", "Taj Mahal", S),
            ("The <S> Taj Mahal <S> was built by <O> Shah Jahan <O> in 1643", "built by", P),
            ("The <S> Taj Mahal <S> was <P> built by <P> <O> Shah Jahan <O> in 1643", "in 1643", A),
        ],
    )?;
    Ok("P,S,O and O,S,P instance inputs and targets match verbatim".into())
}

fn negative_sampling() -> Outcome {
    let mut records = iterie::synth::generate(5, 300, "n");
    records.push(taj_record());
    let config = SamplerConfig {
        seed: 9,
        negatives_per_instance: 4,
        ..Default::default()
    };
    let mut total = 0;
    for r in &records {
        let (neg, _) = traindata::negatives(r, &config);
        for inst in &neg {
            ensure!(inst.is_negative, "negative flag missing");
            ensure!(inst.target_labels.is_all_outside(), "negative with non-O target in {}", r.sentence.id());
            ensure!(
                !r.is_consistent(inst.marked.markers()),
                "negative marking consistent with gold in {}",
                r.sentence.id()
            );
        }
        total += neg.len();
    }
    ensure!(total > 1000, "only {total} negatives generated");

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut counts: BTreeMap<Pathway, usize> = BTreeMap::new();
    let draws = 10_000;
    for _ in 0..draws {
        *counts.entry(Pathway::from_order(traindata::sample_order(&mut rng)).unwrap()).or_default() += 1;
    }
    let mut worst: f64 = 0.0;
    for p in Pathway::ALL {
        let f = counts.get(&p).copied().unwrap_or(0) as f64 / draws as f64;
        worst = worst.max((f - 1.0 / 6.0).abs());
    }
    ensure!(worst <= 0.02, "order frequency deviates by {worst:.4}");
    Ok(format!("{total}/{total} negatives all-O and inconsistent; max order deviation {worst:.4}"))
}

fn random_pathway_map(rng: &mut ChaCha8Rng) -> Vec<(Pathway, Vec<Triple>)> {
    let pool: Vec<Triple> = (0..rng.gen_range(1..8))
        .map(|_| {
            let s = rng.gen_range(0..3);
            let p = rng.gen_range(3..5);
            let o = rng.gen_range(5..8);
            let args = if rng.gen_bool(0.3) { vec![Span::new(8, 9)] } else { vec![] };
            Triple::new("w", Span::new(s, s + 1), Span::new(p, p + 1), Span::new(o, o + 1)).with_args(args)
        })
        .collect();
    let present: Vec<Pathway> = Pathway::ALL.into_iter().filter(|_| rng.gen_bool(0.8)).collect();
    present
        .into_iter()
        .map(|p| {
            let k = rng.gen_range(0..=pool.len());
            let mut v: Vec<Triple> = pool.choose_multiple(rng, k).cloned().collect();
            if !v.is_empty() && rng.gen_bool(0.2) {
                v.push(v[0].clone());
            }
            (p, v)
        })
        .collect()
}

fn water_filling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..1000 {
        let map = random_pathway_map(&mut rng);
        let out = water_fill(map.iter().map(|(p, v)| (*p, v.as_slice())), 1).unwrap();
        let mut brute: HashMap<TripleKey, usize> = HashMap::new();
        for (_, v) in &map {
            let keys: HashSet<TripleKey> = v.iter().map(Triple::key).collect();
            for k in keys {
                *brute.entry(k).or_default() += 1;
            }
        }
        ensure!(out.len() == brute.len(), "case {case}: {} triples, brute {}", out.len(), brute.len());
        for t in &out {
            let votes = brute[&t.key()];
            ensure!(t.confidence == votes as f64 / 6.0, "case {case}: confidence {} for {votes} votes", t.confidence);
        }
        ensure!(out.windows(2).all(|w| w[0].confidence >= w[1].confidence), "case {case}: not non-increasing");
        let mut shuffled: Vec<(Pathway, Vec<Triple>)> = map.clone();
        shuffled.shuffle(&mut rng);
        for (_, v) in shuffled.iter_mut() {
            v.shuffle(&mut rng);
        }
        let again = water_fill(shuffled.iter().map(|(p, v)| (*p, v.as_slice())), 1).unwrap();
        ensure!(again == out, "case {case}: permutation changed output");
    }
    Ok("1000/1000 maps: votes, ordering and permutation invariance hold".into())
}

fn binarization() -> Outcome {
    let s = obama_sentence();
    let with_second = oracle_from_gold([(&s, &[obama_nary(), obama_second()][..])]);
    let (out, diag) = binarize(&obama_nary(), &s, &with_second, 120).map_err(|e| e.to_string())?;
    let want = vec![obama_nary().binary(), obama_second()];
    ensure!(key_set(&out) == key_set(&want) && out.len() == 2, "got {out:?}");
    ensure!(out[0] == obama_nary().binary(), "base triple not first");
    ensure!(diag.accepted == 1 && diag.rejected == 0, "diagnostics {diag:?}");

    let without = oracle_from_gold([(&s, &[obama_nary()][..])]);
    let (out, diag) = binarize(&obama_nary(), &s, &without, 120).map_err(|e| e.to_string())?;
    ensure!(out == vec![obama_nary().binary()], "rejected argument produced {out:?}");
    ensure!(diag.rejected == 1, "diagnostics {diag:?}");

    let records = iterie::synth::generate(8, 100, "b");
    let oracle = oracle_from_gold(records.iter().map(|r| (&r.sentence, r.triples.as_slice())));
    for r in &records {
        for t in &r.triples {
            let (out, _) = binarize(t, &r.sentence, &oracle, 120).map_err(|e| e.to_string())?;
            ensure!(out.first() == Some(&t.binary()), "base triple missing in {}", r.sentence.id());
            ensure!(out.iter().all(|b| b.args.is_empty()), "non-binary output in {}", r.sentence.id());
        }
    }
    Ok("Obama construction exact; rejection yields base only; base kept on 100 records".into())
}

fn hybrid_completion() -> Outcome {
    let limits = DecodeLimits::default();
    let taj = taj_record();
    let oracle = oracle_from_gold([(&taj.sentence, taj.triples.as_slice())]);
    let prior = PartialTriple::new().with(O, Span::new(6, 8));
    let got = complete(&taj.sentence, &prior, &oracle, &limits).unwrap().triples;
    ensure!(got == vec![taj_triple()], "Taj object prior gave {got:?}");
    let wrong = PartialTriple::new().with(O, Span::new(8, 9));
    ensure!(complete(&taj.sentence, &wrong, &oracle, &limits).unwrap().triples.is_empty(), "Taj wrong prior");

    let records = iterie::synth::generate(12, 100, "h");
    let oracle = oracle_from_gold(records.iter().map(|r| (&r.sentence, r.triples.as_slice())));
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut consistent, mut inconsistent) = (0, 0);
    for r in &records {
        let t = r.triples.choose(&mut rng).unwrap();
        let prior = PartialTriple::new().with(O, t.object);
        let got = complete(&r.sentence, &prior, &oracle, &limits).unwrap().triples;
        let want: BTreeSet<TripleKey> = r.triples.iter().filter(|g| g.object == t.object).map(Triple::key).collect();
        ensure!(key_set(&got) == want && got.len() == want.len(), "object prior on {}: {got:?}", r.sentence.id());
        ensure!(got.iter().any(|g| g.key() == t.key()), "gold triple missing on {}", r.sentence.id());
        consistent += 1;

        // a span that is no gold object
        let n = r.sentence.len();
        let bad = loop {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(a + 1..=n);
            let sp = Span::new(a, b);
            if r.triples.iter().all(|g| g.object != sp) {
                break sp;
            }
        };
        let prior = PartialTriple::new().with(O, bad);
        let got = complete(&r.sentence, &prior, &oracle, &limits).unwrap().triples;
        ensure!(got.is_empty(), "inconsistent prior {bad} on {} gave {got:?}", r.sentence.id());
        inconsistent += 1;
    }
    Ok(format!(
        "Taj exact; {consistent}/100 consistent object priors complete to gold, {inconsistent}/100 inconsistent give []"
    ))
}

fn trained_tagger() -> Outcome {
    ensure!(iterie::synth::TEMPLATE_COUNT >= 5, "grammar has fewer than 5 templates");
    let train_records = iterie::synth::generate(21, 700, "train");
    let seen: HashSet<Vec<String>> = train_records
        .iter()
        .map(|r| r.sentence.words().iter().map(|w| w.to_string()).collect())
        .collect();
    let held: Vec<GoldRecord> = iterie::synth::generate(22, 300, "held")
        .into_iter()
        .filter(|r| !seen.contains(&r.sentence.words().iter().map(|w| w.to_string()).collect::<Vec<_>>()))
        .collect();
    let (instances, _) = traindata::build_instances(&train_records, &SamplerConfig::default()).unwrap();
    let n_inst = instances.len();
    ensure!(n_inst >= 2000, "only {n_inst} instances");

    let start = Instant::now();
    let config = TrainConfig {
        epochs: 3,
        ..Default::default()
    };
    let model = iterie::tagger::train(instances, &config).map_err(|e| e.to_string())?;
    let took = within(start, Duration::from_secs(600))?;

    let limits = DecodeLimits::default();
    let mut preds = Vec::new();
    for r in &held {
        let all = extract_all(&r.sentence, &model, &limits).map_err(|e| e.to_string())?;
        preds.extend(water_fill(all.iter().map(|(p, e)| (*p, e.triples.as_slice())), 1).unwrap());
    }
    let sentences = sentence_map(&held);
    let gold: Vec<FactSynset> = held.iter().flat_map(iterie::synth::synsets).collect();
    let report = eval::score_benchie(&eval::surfaces(&preds, &sentences), &gold);
    ensure!(report.f1 >= 0.90, "BenchIE F1 {:.4} below 0.90", report.f1);
    Ok(format!(
        "{n_inst} instances, {} held-out sentences, F1 {:.4} (P {:.4}, R {:.4}), training {took:?}",
        held.len(),
        report.f1,
        report.precision,
        report.recall
    ))
}

fn fixture_sentences() -> Vec<Sentence> {
    let build = |id: &str, words: &[(&str, &str, Option<usize>)]| {
        Sentence::new(
            id,
            words
                .iter()
                .map(|(w, d, h)| {
                    let t = Token::new(*w, *d);
                    match h {
                        Some(h) => t.with_head(*h),
                        None => t,
                    }
                })
                .collect(),
        )
        .unwrap()
    };
    vec![
        build(
            "a",
            &[
                ("Ada", "nsubj", Some(1)),
                ("built", "root", None),
                ("the", "det", Some(4)),
                ("old", "amod", Some(4)),
                ("bridge", "obj", Some(1)),
                ("in", "case", Some(6)),
                ("Paris", "obl", Some(1)),
            ],
        ),
        build(
            "b",
            &[("Omar", "nsubj", Some(1)), ("wrote", "root", None), ("a", "det", Some(3)), ("novel", "obj", Some(1))],
        ),
        build(
            "c",
            &[
                ("Lima", "nsubj", Some(3)),
                ("is", "cop", Some(3)),
                ("the", "det", Some(3)),
                ("capital", "root", None),
                ("of", "case", Some(5)),
                ("Peru", "nmod", Some(3)),
            ],
        ),
    ]
}

fn tr(id: &str, s: (usize, usize), p: (usize, usize), o: (usize, usize)) -> Triple {
    Triple::new(id, Span::new(s.0, s.1), Span::new(p.0, p.1), Span::new(o.0, o.1))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

fn scorers() -> Outcome {
    let sentences: HashMap<String, Sentence> =
        fixture_sentences().into_iter().map(|s| (s.id().to_string(), s)).collect();
    let gold = vec![
        tr("a", (0, 1), (1, 2), (3, 5)).with_args(vec![Span::new(6, 7)]),
        tr("b", (0, 1), (1, 2), (3, 4)),
        tr("c", (0, 1), (1, 5), (5, 6)),
        tr("c", (0, 1), (1, 2), (2, 4)),
    ];
    let preds = vec![
        tr("a", (0, 1), (1, 2), (2, 5)),
        tr("b", (0, 1), (1, 2), (2, 4)),
        tr("c", (0, 1), (1, 2), (3, 6)),
        tr("c", (3, 4), (4, 5), (5, 6)),
        tr("c", (0, 1), (1, 2), (3, 4)),
    ];
    let synsets = vec![
        FactSynset::new("a", &[("Ada", "built", "old bridge"), ("Ada", "built", "the old bridge")]),
        FactSynset::new("b", &[("Omar", "wrote", "novel")]),
        FactSynset::new("c", &[("Lima", "is the capital of", "Peru")]),
        FactSynset::new("c", &[("Lima", "is", "the capital"), ("Lima", "is", "capital")]),
    ];
    let f1 = |p: f64, r: f64| 2.0 * p * r / (p + r);

    // identical and disjoint inputs
    let identical: Vec<SurfaceTriple> = synsets.iter().map(|f| f.variants[0].clone()).collect();
    let b = eval::score_benchie(&identical, &synsets);
    let c = eval::score_carb(&gold, &gold);
    let l = eval::score_lexical(&gold, &gold, &sentences);
    for r in [&b, &c, &l] {
        ensure!((r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0), "{} identical: {r:?}", r.metric);
    }
    let far: Vec<Triple> = gold
        .iter()
        .map(|g| Triple::new(g.sentence_id.clone(), Span::new(7, 8), Span::new(8, 9), Span::new(9, 10)))
        .collect();
    let far_sentences: HashMap<String, Sentence> = sentences
        .keys()
        .map(|k| (k.clone(), Sentence::from_text(k.clone(), "w w w w w w w w w w").unwrap()))
        .collect();
    let b = eval::score_benchie(&eval::surfaces(&far, &far_sentences), &synsets);
    let c = eval::score_carb(&far, &gold);
    let l = eval::score_lexical(&far, &gold, &sentences);
    for r in [&b, &c, &l] {
        ensure!((r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0), "{} disjoint: {r:?}", r.metric);
    }

    // hand-computed fixtures
    let b = eval::score_benchie(&eval::surfaces(&preds, &sentences), &synsets);
    let (bp, br) = (2.0 / 5.0, 2.0 / 4.0);
    ensure!(close(b.precision, bp) && close(b.recall, br) && close(b.f1, f1(bp, br)), "benchie fixture {b:?}");

    // matched pairs: a (8/9, 8/9), b (5/6, 1), c: p3-g3 (7/9, 3/4) and p5-g4 (1, 5/6)
    let c = eval::score_carb(&preds, &gold);
    let cp = (8.0 / 9.0 + 5.0 / 6.0 + 7.0 / 9.0 + 1.0) / 5.0;
    let cr = (8.0 / 9.0 + 1.0 + 3.0 / 4.0 + 5.0 / 6.0) / 4.0;
    ensure!(close(c.precision, cp) && close(c.recall, cr) && close(c.f1, f1(cp, cr)), "carb fixture {c:?}");

    // heads: a (0, 1, 4), b (0, 1, 3), c1 (0, 3, 5), c2 (0, 1, 3); p3 and p5 compete for c2
    let l = eval::score_lexical(&preds, &gold, &sentences);
    let (lp, lr) = (3.0 / 5.0, 3.0 / 4.0);
    ensure!(close(l.precision, lp) && close(l.recall, lr) && close(l.f1, f1(lp, lr)), "lexical fixture {l:?}");
    ensure!(l.metric == "lexical (head-containment)", "lexical report label {}", l.metric);
    Ok("identical 1/1/1, disjoint 0/0/0, 3-sentence fixtures within 1e-9 for all three".into())
}

fn brute_entropy(records: &[GoldRecord], kind: ElementKind, pos: bool) -> f64 {
    let mut counts: HashMap<String, f64> = HashMap::new();
    let mut total = 0.0;
    for r in records {
        let spans: BTreeSet<(usize, usize)> = r
            .triples
            .iter()
            .map(|t| t.get(kind))
            .map(|s| (s.start, s.end))
            .collect();
        for (a, b) in spans {
            for tok in &r.sentence.tokens()[a..b] {
                let tag = if pos { tok.pos.clone().unwrap() } else { tok.dep.clone() };
                *counts.entry(tag).or_default() += 1.0;
                total += 1.0;
            }
        }
    }
    counts.values().map(|c| -(c / total) * (c / total).ln() / 2f64.ln()).sum()
}

fn entropy_check() -> Outcome {
    ensure!(eval::entropy([5]) == 0.0, "single tag");
    ensure!(eval::entropy([1, 1, 1, 1]) == 2.0, "uniform over four");
    ensure!(eval::entropy([2, 1, 1]) == 1.5, "1/2, 1/4, 1/4");
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst: f64 = 0.0;
    for c in 0..50 {
        let records: Vec<GoldRecord> = (0..rng.gen_range(1..30))
            .map(|i| {
                let s = random_sentence(&mut rng, &format!("e{c}-{i}"), 25);
                let triples: Vec<Triple> = (0..rng.gen_range(0..4))
                    .filter_map(|_| {
                        let p = random_partial(&mut rng, s.len());
                        p.complete(s.id())
                    })
                    .collect();
                GoldRecord::new(s, triples).unwrap()
            })
            .collect();
        let table = eval::entropy_profile(&records, &[TagFamily::Dep, TagFamily::Pos]).unwrap();
        for kind in ElementKind::CORE {
            for (family, pos) in [(TagFamily::Dep, false), (TagFamily::Pos, true)] {
                let got = table.get(kind, family).unwrap();
                let want = brute_entropy(&records, kind, pos);
                worst = worst.max((got - want).abs());
            }
        }
    }
    ensure!(worst <= 1e-9, "max deviation {worst:e}");
    Ok(format!("closed forms exact; 50 random corpora, max deviation {worst:e}"))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_iterie")
}

/// Runs the CLI twice. Arguments of the form `@name` are outputs: round `r`
/// writes `name.r`, both rounds must match, and round 0 is kept as `name`.
fn run_twice(dir: &Path, args: &[&str]) -> Result<(), String> {
    let outputs: Vec<&str> = args.iter().filter_map(|a| a.strip_prefix('@')).collect();
    for round in 0..2 {
        let full: Vec<String> = args
            .iter()
            .map(|a| match a.strip_prefix('@') {
                Some(name) => format!("{name}.{round}"),
                None => a.to_string(),
            })
            .collect();
        let run = Command::new(bin()).args(&full).current_dir(dir).output().map_err(|e| e.to_string())?;
        ensure!(run.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&run.stderr));
    }
    for name in outputs {
        let first = std::fs::read(dir.join(format!("{name}.0"))).map_err(|e| e.to_string())?;
        let second = std::fs::read(dir.join(format!("{name}.1"))).map_err(|e| e.to_string())?;
        ensure!(first == second, "{name} differs between runs");
        ensure!(!first.is_empty(), "{name} is empty");
        std::fs::write(dir.join(name), first).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Object priors for the first gold triple of every sentence, plus one unalignable string.
fn write_priors(dir: &Path) -> Result<(), String> {
    let gold = std::fs::read_to_string(dir.join("gold.jsonl")).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for line in gold.lines() {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let id = &v["sentence"]["id"];
        let object = &v["triples"][0]["object"];
        lines.push(serde_json::json!({"sentence_id": id, "object": object}).to_string());
    }
    lines.push(r#"{"sentence_id":"g1","object":"no such words"}"#.to_string());
    std::fs::write(dir.join("priors.jsonl"), lines.join("\n") + "\n").map_err(|e| e.to_string())
}

fn cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = tmp.path();
    let runs: &[&[&str]] = &[
        &["synth", "--seed", "4", "--count", "150", "--prefix", "g", "-o", "@gold.jsonl", "--facts", "@facts.jsonl"],
        &["traindata", "gold.jsonl", "--seed", "7", "-o", "@inst.jsonl"],
        &["train", "inst.jsonl", "--seed", "3", "--epochs", "1", "--hidden", "16", "-o", "@model.bin"],
        &["oracle", "gold.jsonl", "-o", "@oracle.bin"],
        &["extract", "gold.jsonl", "--model", "model.bin", "-o", "@pred.jsonl"],
        &["--jobs", "3", "extract", "gold.jsonl", "--model", "model.bin", "--binarize", "-o", "@pred_bin.jsonl"],
        &["extract", "gold.jsonl", "--model", "oracle.bin", "--pathways", "OSPA", "--aggregate", "none", "-o", "@ospa.jsonl"],
        &["complete", "gold.jsonl", "priors.jsonl", "--model", "oracle.bin", "-o", "@completed.jsonl"],
        &["score", "pred.jsonl", "facts.jsonl", "--sentences", "gold.jsonl", "-o", "@benchie.json"],
        &["score", "pred.jsonl", "gold.jsonl", "--metric", "carb", "-o", "@carb.json"],
        &["score", "pred.jsonl", "gold.jsonl", "--metric", "lexical", "--format", "table", "-o", "@lexical.txt"],
        &["entropy", "gold.jsonl", "-o", "@entropy.txt"],
    ];
    for args in runs {
        run_twice(d, args)?;
        if args[0] == "synth" {
            write_priors(d)?;
        }
    }

    // worker count does not change output order
    let a = std::fs::read(d.join("pred.jsonl")).unwrap();
    let out = d.join("pred_j1.jsonl");
    let st = Command::new(bin())
        .args(["--jobs", "1", "extract", "gold.jsonl", "--model", "model.bin", "-o"])
        .arg(&out)
        .current_dir(d)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(st.status.success() && std::fs::read(&out).unwrap() == a, "--jobs 1 output differs");
    Ok("synth, traindata, train, oracle, extract, complete, score x3, entropy byte-identical".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("marker codec round trip", marker_round_trip),
        ("BIO codec", bio_codec),
        ("oracle end-to-end", oracle_end_to_end),
        ("Taj Mahal instance sequences", taj_instances),
        ("negative sampling", negative_sampling),
        ("water filling properties", water_filling),
        ("binarization", binarization),
        ("hybrid completion", hybrid_completion),
        ("trainable tagger", trained_tagger),
        ("scorers", scorers),
        ("entropy", entropy_check),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS {n:>2} {name}: {detail}"),
            Ok(Err(why)) => {
                println!("FAIL {n:>2} {name}: {why}");
                failed.push(n);
            }
            Err(_) => {
                println!("FAIL {n:>2} {name}: panicked");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
