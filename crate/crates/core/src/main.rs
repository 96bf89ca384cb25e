use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use iterie::eval::{self, FactSynset, TagFamily};
use iterie::io::{
    read_jsonl, to_line, FactSynsetRecord, GoldRecordJson, InstanceRecord, PriorRecord, SentenceLine, TripleRecord,
};
use iterie::pathway::Diagnostics;
use iterie::postprocess::BinarizeDiagnostics;
use iterie::tagger::oracle_from_gold;
use iterie::traindata::{self, SampleDiagnostics};
use iterie::{
    binarize, complete, extract, extract_all, water_fill, DecodeLimits, GoldRecord, Pathway, SamplerConfig,
    Sentence, TaggerModel, TrainConfig, Triple, DEFAULT_MAX_LEN,
};

const SCHEMA_VERSIONS: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    "\nschemas: sentence 1, gold 1, instance 1, triple 1, facts 1, prior 1, model 1"
);

const CHUNK: usize = 512;

#[derive(Parser)]
#[command(name = "iterie", version = SCHEMA_VERSIONS, about = "Iterative open information extraction")]
struct Cli {
    /// TOML file of `flag = value` defaults for the subcommand. Must precede the subcommand.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate training instances from gold records.
    Traindata(TraindataArgs),
    /// Train a windowed tagger on instance JSONL.
    Train(TrainArgs),
    /// Build an oracle model from gold records.
    Oracle(OracleArgs),
    /// Extract triples from sentences.
    Extract(ExtractArgs),
    /// Complete partial extractions supplied as priors.
    Complete(CompleteArgs),
    /// Score predictions against gold.
    Score(ScoreArgs),
    /// Tag entropy inside gold subject, predicate and object spans.
    Entropy(EntropyArgs),
    /// Write a synthetic gold corpus and its fact synsets.
    Synth(SynthArgs),
}

#[derive(Args)]
#[command(args_override_self = true)]
struct TraindataArgs {
    gold: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    negatives_per_instance: usize,
    #[arg(long, default_value_t = 1.0)]
    negative_fraction: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
    max_len: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct TrainArgs {
    instances: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f32,
    #[arg(long, default_value_t = 1.0)]
    negative_weight: f32,
    #[arg(long, default_value_t = 64)]
    hidden: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
    max_len: usize,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct OracleArgs {
    gold: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Aggregate {
    Wf,
    None,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct LimitArgs {
    #[arg(long, default_value_t = 8)]
    max_branch: usize,
    #[arg(long, default_value_t = 64)]
    max_triples: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
    max_len: usize,
}

impl LimitArgs {
    fn limits(&self) -> DecodeLimits {
        DecodeLimits {
            max_branch: self.max_branch,
            max_triples: self.max_triples,
            max_len: self.max_len,
        }
    }
}

#[derive(Args)]
#[command(args_override_self = true)]
struct ExtractArgs {
    /// Sentence or gold-record JSONL.
    sentences: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// `all` or one pathway name such as PSOA.
    #[arg(long, default_value = "all")]
    pathways: String,
    #[arg(long, value_enum, default_value_t = Aggregate::Wf)]
    aggregate: Aggregate,
    #[arg(long)]
    binarize: bool,
    #[arg(long, default_value_t = 1)]
    min_votes: usize,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct CompleteArgs {
    sentences: PathBuf,
    priors: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Benchie,
    Carb,
    Lexical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct ScoreArgs {
    /// Predicted triple JSONL.
    preds: PathBuf,
    /// Fact synsets for benchie, gold records otherwise.
    gold: PathBuf,
    #[arg(long, value_enum, default_value_t = Metric::Benchie)]
    metric: Metric,
    /// Sentence or gold-record JSONL; required for benchie.
    #[arg(long)]
    sentences: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct EntropyArgs {
    gold: PathBuf,
    /// Comma-separated tag families: dep, pos.
    #[arg(long, default_value = "dep,pos")]
    families: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value = "s")]
    prefix: String,
    /// Gold record JSONL.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Fact synset JSONL.
    #[arg(long)]
    facts: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Model(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Model(_) => 3,
            Failure::Other(_) => 1,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Model(e) | Failure::Other(e) => e,
        }
    }
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn other<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Other(e.into())
}

/// Library errors from running a model are model failures when the model is at fault.
fn run_err(e: iterie::Error) -> Failure {
    if e.is_model_error() {
        Failure::Model(e.into())
    } else {
        Failure::Input(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}

/// Splices `--key value` flags from the config file right after the
/// subcommand name, so explicit flags given later override them.
fn apply_config(mut args: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut config = None;
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if let Some(v) = a.strip_prefix("--config=") {
            config = Some((PathBuf::from(v), i, 1));
            i += 1;
        } else if a == "--config" {
            let v = args.get(i + 1).ok_or_else(|| anyhow!("--config needs a file"))?;
            config = Some((PathBuf::from(v), i, 2));
            i += 2;
        } else if a == "--jobs" {
            i += 2;
        } else if a.starts_with('-') {
            i += 1;
        } else {
            break;
        }
    }
    let Some((path, at, width)) = config else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let table: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
    args.drain(at..at + width);
    let sub = i - width;
    if sub >= args.len() {
        return Ok(args);
    }
    let mut flags = Vec::new();
    for (key, value) in &table {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => flags.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => flags.extend([flag, s.clone()]),
            toml::Value::Integer(n) => flags.extend([flag, n.to_string()]),
            toml::Value::Float(x) => flags.extend([flag, x.to_string()]),
            _ => return Err(anyhow!("config key {key}: unsupported value type")),
        }
    }
    args.splice(sub + 1..sub + 1, flags);
    Ok(args)
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Traindata(a) => cmd_traindata(a),
        Command::Train(a) => cmd_train(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Complete(a) => cmd_complete(a),
        Command::Score(a) => cmd_score(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("opening {}", path.display()))
        .map_err(input)
}

fn load_model(path: &Path) -> Result<TaggerModel, Failure> {
    TaggerModel::load_from(path)
        .with_context(|| format!("loading model {}", path.display()))
        .map_err(Failure::Model)
}

/// Output sink: a file written under a temporary name and renamed on
/// success, or stdout.
struct Output {
    target: Option<PathBuf>,
    partial: Option<PathBuf>,
    writer: Box<dyn Write>,
}

impl Output {
    fn create(target: Option<&Path>) -> Result<Output, Failure> {
        match target {
            None => Ok(Output {
                target: None,
                partial: None,
                writer: Box::new(BufWriter::new(std::io::stdout().lock())),
            }),
            Some(p) => {
                let mut name = p.as_os_str().to_owned();
                name.push(".partial");
                let partial = PathBuf::from(name);
                let f = File::create(&partial)
                    .with_context(|| format!("creating {}", partial.display()))
                    .map_err(other)?;
                Ok(Output {
                    target: Some(p.to_path_buf()),
                    partial: Some(partial),
                    writer: Box::new(BufWriter::new(f)),
                })
            }
        }
    }

    fn line(&mut self, s: &str) -> CmdResult {
        writeln!(self.writer, "{s}").map_err(other)
    }

    fn raw(&mut self, s: &str) -> CmdResult {
        self.writer.write_all(s.as_bytes()).map_err(other)
    }

    fn finish(mut self) -> CmdResult {
        self.writer.flush().map_err(other)?;
        drop(self.writer);
        if let (Some(partial), Some(target)) = (self.partial, self.target) {
            std::fs::rename(&partial, &target)
                .with_context(|| format!("writing {}", target.display()))
                .map_err(other)?;
        }
        Ok(())
    }
}

/// Streams a JSONL file in chunks: lines are parsed in order, each chunk is
/// mapped in parallel, and results are handed to `write` in input order.
fn stream<T, U, V, P, M, W>(path: &Path, mut parse: P, map: M, mut write: W) -> CmdResult
where
    T: serde::de::DeserializeOwned,
    U: Send + Sync,
    V: Send,
    P: FnMut(usize, T) -> Result<U, Failure>,
    M: Fn(&U) -> Result<V, Failure> + Sync,
    W: FnMut(V) -> CmdResult,
{
    let mut buf: Vec<U> = Vec::with_capacity(CHUNK);
    let mut flush = |buf: &mut Vec<U>| -> CmdResult {
        let results: Vec<Result<V, Failure>> = buf.par_iter().map(&map).collect();
        buf.clear();
        for r in results {
            write(r?)?;
        }
        Ok(())
    };
    for item in read_jsonl::<T, _>(open(path)?) {
        let (line, value) = item.map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
        buf.push(parse(line, value)?);
        if buf.len() == CHUNK {
            flush(&mut buf)?;
        }
    }
    flush(&mut buf)
}

fn at_line(path: &Path, line: usize, e: impl std::fmt::Display) -> Failure {
    input(anyhow!("{}: line {line}: {e}", path.display()))
}

fn read_gold(path: &Path, max_len: usize) -> Result<Vec<GoldRecord>, Failure> {
    let mut out = Vec::new();
    for item in read_jsonl::<GoldRecordJson, _>(open(path)?) {
        let (line, rec) = item.map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
        let r = rec.into_record(max_len).map_err(|e| at_line(path, line, e))?;
        out.push(r);
    }
    Ok(out)
}

fn read_sentences(path: &Path, max_len: usize) -> Result<HashMap<String, Sentence>, Failure> {
    let mut out = HashMap::new();
    for item in read_jsonl::<SentenceLine, _>(open(path)?) {
        let (line, rec) = item.map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
        let s = rec.into_sentence(max_len).map_err(|e| at_line(path, line, e))?;
        out.insert(s.id().to_string(), s);
    }
    Ok(out)
}

fn read_triples(path: &Path) -> Result<Vec<Triple>, Failure> {
    let mut out = Vec::new();
    for item in read_jsonl::<TripleRecord, _>(open(path)?) {
        let (line, rec) = item.map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
        out.push(rec.into_triple().map_err(|e| at_line(path, line, e))?);
    }
    Ok(out)
}

fn cmd_traindata(a: TraindataArgs) -> CmdResult {
    let config = SamplerConfig {
        seed: a.seed,
        negatives_per_instance: a.negatives_per_instance,
        negative_fraction: a.negative_fraction,
        max_len: a.max_len,
    };
    config.validate().map_err(input)?;
    let mut out = Output::create(a.output.as_deref())?;
    let mut diag = SampleDiagnostics::default();
    let mut count = 0;
    stream(
        &a.gold,
        |line, rec: GoldRecordJson| rec.into_record(usize::MAX).map_err(|e| at_line(&a.gold, line, e)),
        |r| {
            let (mut inst, mut d) = traindata::generate(r, &config);
            let (neg, dn) = traindata::negatives(r, &config);
            inst.extend(neg);
            d.merge(&dn);
            let lines: Vec<String> = inst.iter().map(|i| to_line(&InstanceRecord::from(i))).collect();
            Ok((lines, d))
        },
        |(lines, d)| {
            diag.merge(&d);
            count += lines.len();
            lines.iter().try_for_each(|l| out.line(l))
        },
    )?;
    out.finish()?;
    eprintln!(
        "instances: {count}, length skips: {}, overlap drops: {}, negative skips: {}",
        diag.length_skips, diag.overlap_drops, diag.negative_skips
    );
    Ok(())
}

fn cmd_train(a: TrainArgs) -> CmdResult {
    let config = TrainConfig {
        seed: a.seed,
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        negative_weight: a.negative_weight,
        hidden: a.hidden,
        max_len: a.max_len,
    };
    config.validate().map_err(input)?;
    let mut instances = Vec::new();
    for item in read_jsonl::<InstanceRecord, _>(open(&a.instances)?) {
        let (line, rec) = item.map_err(|e| input(anyhow!("{}: {e}", a.instances.display())))?;
        let inst = rec
            .into_instance(format!("line{line}"), a.max_len)
            .map_err(|e| at_line(&a.instances, line, e))?;
        instances.push(inst);
    }
    let n = instances.len();
    let model = iterie::tagger::train(instances, &config).map_err(input)?;
    model.save_to(&a.output).map_err(other)?;
    eprintln!("trained {} tagger on {n} instances", model.kind_name());
    Ok(())
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let gold = read_gold(&a.gold, usize::MAX)?;
    let model = oracle_from_gold(gold.iter().map(|r| (&r.sentence, r.triples.as_slice())));
    model.save_to(&a.output).map_err(other)?;
    eprintln!("oracle over {} sentences", gold.len());
    Ok(())
}

fn write_triples(out: &mut Output, triples: &[Triple]) -> CmdResult {
    triples.iter().try_for_each(|t| out.line(&to_line(&TripleRecord::from(t))))
}

fn cmd_extract(a: ExtractArgs) -> CmdResult {
    let limits = a.limits.limits();
    limits.validate().map_err(input)?;
    let single = match a.pathways.as_str() {
        "all" => None,
        p => Some(p.parse::<Pathway>().map_err(input)?),
    };
    let model = load_model(&a.model)?;
    let mut out = Output::create(a.output.as_deref())?;
    let mut diag = Diagnostics::default();
    let mut bin_diag = BinarizeDiagnostics::default();
    let mut count = 0;
    stream(
        &a.sentences,
        |line, rec: SentenceLine| rec.into_sentence(usize::MAX).map_err(|e| at_line(&a.sentences, line, e)),
        |s| {
            let results = match single {
                Some(p) => vec![(p, extract(s, p, &model, &limits).map_err(run_err)?)],
                None => extract_all(s, &model, &limits).map_err(run_err)?.into_iter().collect(),
            };
            let mut d = Diagnostics::default();
            for (_, e) in &results {
                d.merge(&e.diagnostics);
            }
            let mut triples = match a.aggregate {
                Aggregate::Wf => water_fill(results.iter().map(|(p, e)| (*p, e.triples.as_slice())), a.min_votes)
                    .map_err(run_err)?,
                Aggregate::None => results.into_iter().flat_map(|(_, e)| e.triples).collect(),
            };
            let mut bd = BinarizeDiagnostics::default();
            if a.binarize {
                let mut seen = std::collections::HashSet::new();
                let mut binary = Vec::new();
                for t in &triples {
                    let (bs, d) = binarize(t, s, &model, limits.max_len).map_err(run_err)?;
                    bd.accepted += d.accepted;
                    bd.rejected += d.rejected;
                    bd.skipped += d.skipped;
                    binary.extend(bs.into_iter().filter(|b| seen.insert(b.key())));
                }
                triples = binary;
            }
            Ok((triples, d, bd))
        },
        |(triples, d, bd)| {
            diag.merge(&d);
            bin_diag.accepted += bd.accepted;
            bin_diag.rejected += bd.rejected;
            bin_diag.skipped += bd.skipped;
            count += triples.len();
            write_triples(&mut out, &triples)
        },
    )?;
    out.finish()?;
    eprintln!(
        "triples: {count}, pruned empty: {}, length overflows: {}, overlapping spans: {}, branch limit hits: {}, triple limit drops: {}, duplicates: {}",
        diag.pruned_empty,
        diag.length_overflows,
        diag.overlapping_spans,
        diag.branch_limit_hits,
        diag.triple_limit_drops,
        diag.duplicates
    );
    if a.binarize {
        eprintln!(
            "binarized arguments accepted: {}, rejected: {}, skipped: {}",
            bin_diag.accepted, bin_diag.rejected, bin_diag.skipped
        );
    }
    Ok(())
}

fn cmd_complete(a: CompleteArgs) -> CmdResult {
    let limits = a.limits.limits();
    limits.validate().map_err(input)?;
    let model = load_model(&a.model)?;
    let sentences = read_sentences(&a.sentences, usize::MAX)?;
    let mut out = Output::create(a.output.as_deref())?;
    let (mut unknown, mut unaligned, mut invalid, mut count) = (0, 0, 0, 0);
    stream(
        &a.priors,
        |_, rec: PriorRecord| Ok(rec),
        |p| {
            let Some(s) = sentences.get(&p.sentence_id) else {
                return Ok(Err("unknown"));
            };
            let Some(prior) = p.resolve(s) else {
                return Ok(Err("unaligned"));
            };
            match complete(s, &prior, &model, &limits) {
                Ok(e) => Ok(Ok(e.triples)),
                Err(e) if e.is_model_error() => Err(run_err(e)),
                Err(_) => Ok(Err("invalid")),
            }
        },
        |r| match r {
            Ok(triples) => {
                count += triples.len();
                write_triples(&mut out, &triples)
            }
            Err(kind) => {
                match kind {
                    "unknown" => unknown += 1,
                    "unaligned" => unaligned += 1,
                    _ => invalid += 1,
                }
                Ok(())
            }
        },
    )?;
    out.finish()?;
    eprintln!("triples: {count}, priors skipped: {unknown} unknown sentence, {unaligned} unaligned, {invalid} invalid");
    Ok(())
}

fn cmd_score(a: ScoreArgs) -> CmdResult {
    let preds = read_triples(&a.preds)?;
    let report = match a.metric {
        Metric::Benchie => {
            let sentences_path = a
                .sentences
                .as_deref()
                .ok_or_else(|| input(anyhow!("--sentences is required for benchie")))?;
            let sentences = read_sentences(sentences_path, usize::MAX)?;
            let mut gold: Vec<FactSynset> = Vec::new();
            for item in read_jsonl::<FactSynsetRecord, _>(open(&a.gold)?) {
                let (line, rec) = item.map_err(|e| input(anyhow!("{}: {e}", a.gold.display())))?;
                gold.extend(rec.into_synsets().map_err(|e| at_line(&a.gold, line, e))?);
            }
            eval::score_benchie(&eval::surfaces(&preds, &sentences), &gold)
        }
        Metric::Carb | Metric::Lexical => {
            let records = read_gold(&a.gold, usize::MAX)?;
            let mut sentences = match a.sentences.as_deref() {
                Some(p) => read_sentences(p, usize::MAX)?,
                None => HashMap::new(),
            };
            let mut gold = Vec::new();
            for r in records {
                gold.extend(r.triples);
                sentences.entry(r.sentence.id().to_string()).or_insert(r.sentence);
            }
            for p in &preds {
                if let Some(s) = sentences.get(&p.sentence_id) {
                    p.check(s).map_err(|e| input(anyhow!("prediction for {}: {e}", p.sentence_id)))?;
                }
            }
            if a.metric == Metric::Carb {
                eval::score_carb(&preds, &gold)
            } else {
                eval::score_lexical(&preds, &gold, &sentences)
            }
        }
    };
    let mut out = Output::create(a.output.as_deref())?;
    match a.format {
        Format::Json => out.line(&serde_json::to_string_pretty(&report).map_err(other)?)?,
        Format::Table => out.raw(&report.table())?,
    }
    out.finish()
}

fn cmd_entropy(a: EntropyArgs) -> CmdResult {
    let families = a
        .families
        .split(',')
        .map(|f| match f.trim() {
            "dep" => Ok(TagFamily::Dep),
            "pos" => Ok(TagFamily::Pos),
            other => Err(input(anyhow!("unknown tag family {other:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gold = read_gold(&a.gold, usize::MAX)?;
    let table = eval::entropy_profile(&gold, &families).map_err(input)?;
    let mut out = Output::create(a.output.as_deref())?;
    match a.format {
        Format::Json => out.line(&serde_json::to_string_pretty(&table).map_err(other)?)?,
        Format::Table => out.raw(&table.table())?,
    }
    out.finish()
}

fn cmd_synth(a: SynthArgs) -> CmdResult {
    let records = iterie::synth::generate(a.seed, a.count, &a.prefix);
    let mut out = Output::create(a.output.as_deref())?;
    for r in &records {
        out.line(&to_line(&GoldRecordJson::from(r)))?;
    }
    out.finish()?;
    if let Some(path) = &a.facts {
        let mut facts = Output::create(Some(path))?;
        for r in &records {
            let syn = iterie::synth::synsets(r);
            let rec = FactSynsetRecord {
                sentence_id: r.sentence.id().to_string(),
                facts: syn
                    .iter()
                    .map(|f| {
                        f.variants
                            .iter()
                            .map(|v| iterie::io::FactRecord {
                                s: v.subject.clone(),
                                p: v.predicate.clone(),
                                o: v.object.clone(),
                            })
                            .collect()
                    })
                    .collect(),
            };
            facts.line(&to_line(&rec))?;
        }
        facts.finish()?;
    }
    Ok(())
}
