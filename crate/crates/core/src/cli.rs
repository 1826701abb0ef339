//! Command-line front end: one binary with a subcommand per pipeline stage.
//!
//! Exit status is 0 on success, 1 on a runtime failure and 2 on a usage
//! error. Machine-readable results go to standard output; warnings and
//! progress go to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::{self, prepare_sentence, Preprocessor, Segmenter, StatsAccumulator};
use crate::error::Error;
use crate::eval::{
    self, build_features, contradiction_report, fit_ols, loo_cv, mean_hybrid, BenchmarkPair, CosineFeature, EvalRow,
    ExternalFeatures, FeatureRow, JaccardFeature, PairFeature, QgramFeature,
};
use crate::fmt::g6_row;
use crate::metrics::{self, Metric};
use crate::model::{Algorithm, EmbeddingModel, PvCombine, TrainConfig};
use crate::sentence::{PoolMode, SentenceEncoder};
use crate::train;
use crate::vocab::Vocabulary;

#[derive(Debug, Parser)]
#[command(
    name = "sentsim",
    version,
    about = "Train sentence embeddings and score sentence-pair similarity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment, tokenize and filter raw text into a one-sentence-per-line corpus.
    Preprocess(PreprocessArgs),
    /// Print token and line statistics of a corpus.
    Stats(StatsArgs),
    /// Train an embedding model on a corpus.
    Train(TrainArgs),
    /// Write one sentence vector per input line.
    Embed(EmbedArgs),
    /// Score sentence pairs with one metric.
    Similarity(SimilarityArgs),
    /// Correlate similarity features with benchmark gold scores.
    Evaluate(EvaluateArgs),
    /// Mean similarity of the similar, negation and antonym subsets.
    Contradiction(ContradictionArgs),
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Text file or directory searched recursively for .txt files.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Keep only lines shorter than this many characters.
    #[arg(long, default_value_t = corpus::DEFAULT_MAX_LINE_CHARS)]
    pub max_line_chars: usize,
    /// Split hyphenated compounds into their parts.
    #[arg(long)]
    pub split_hyphens: bool,
    /// Abbreviation list, one per line, replacing the bundled list.
    #[arg(long)]
    pub abbrev: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub corpus: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Cbow,
    Skipgram,
    Sent2vec,
    PvDm,
    PvDbow,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Cbow => Algorithm::Cbow,
            AlgoArg::Skipgram => Algorithm::Skipgram,
            AlgoArg::Sent2vec => Algorithm::Sent2vec,
            AlgoArg::PvDm => Algorithm::PvDm,
            AlgoArg::PvDbow => Algorithm::PvDbow,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CombineArg {
    Mean,
    Concat,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub dim: u32,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub window: u32,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub epochs: u32,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_count: u64,
    /// Negative samples per positive.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub neg: u32,
    /// Initial learning rate [default: 0.05, or 0.025 for skipgram]
    #[arg(long)]
    pub lr: Option<f32>,
    /// Subsampling threshold; 0 disables subsampling.
    #[arg(long, default_value_t = 1e-4)]
    pub sample: f64,
    /// Highest word n-gram order (sent2vec).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub word_ngrams: u32,
    /// Word n-grams removed per sentence (sent2vec).
    #[arg(long, default_value_t = 0)]
    pub dropout_k: u32,
    /// Hash buckets for subword and word n-gram rows.
    #[arg(long, default_value_t = 2_000_000, value_parser = clap::value_parser!(u32).range(1..))]
    pub bucket: u32,
    /// Shortest character n-gram (cbow, skipgram).
    #[arg(long, default_value_t = 3)]
    pub minn: u32,
    /// Longest character n-gram (cbow, skipgram); 0 disables subwords.
    #[arg(long, default_value_t = 6)]
    pub maxn: u32,
    /// How PV-DM combines paragraph and word vectors.
    #[arg(long, value_enum, default_value_t = CombineArg::Mean)]
    pub pv_combine: CombineArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Training threads [default: available parallelism]
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
}

impl TrainArgs {
    pub fn config(&self) -> TrainConfig {
        let algo = Algorithm::from(self.algo);
        let mut c = TrainConfig::new(algo);
        if let Some(lr) = self.lr {
            c = c.with_lr(lr);
        }
        c.dim = self.dim as usize;
        c.window = self.window as usize;
        c.epochs = self.epochs as usize;
        c.min_count = self.min_count;
        c.negatives = self.neg as usize;
        c.sample_t = self.sample;
        c.word_ngrams = self.word_ngrams as usize;
        c.dropout_k = self.dropout_k as usize;
        c.bucket = self.bucket as usize;
        c.minn = self.minn as usize;
        c.maxn = self.maxn as usize;
        c.pv_combine = match self.pv_combine {
            CombineArg::Mean => PvCombine::Mean,
            CombineArg::Concat => PvCombine::Concat,
        };
        c.seed = self.seed;
        c.workers = self
            .workers
            .map(|w| w as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PoolArg {
    Avg,
    Min,
    Max,
    Sum,
}

impl From<PoolArg> for PoolMode {
    fn from(p: PoolArg) -> Self {
        match p {
            PoolArg::Avg => PoolMode::Avg,
            PoolArg::Min => PoolMode::Min,
            PoolArg::Max => PoolMode::Max,
            PoolArg::Sum => PoolMode::Sum,
        }
    }
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Binary model or `<V> <dim>` text vectors.
    #[arg(long)]
    pub model: PathBuf,
    /// One sentence per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Pooling of word vectors (cbow, skipgram).
    #[arg(long, value_enum, default_value_t = PoolArg::Avg)]
    pub pool: PoolArg,
    /// Inference epochs for Paragraph Vector [default: 2 x training epochs]
    #[arg(long)]
    pub infer_epochs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Cosine,
    Jaccard,
    Qgram,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    /// Tab-separated `pair_id sentence1 sentence2 [score]` with header.
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::Cosine)]
    pub metric: MetricArg,
    /// Embedding model, required for cosine.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Q-gram length.
    #[arg(long, default_value_t = metrics::DEFAULT_Q, value_parser = parse_positive)]
    pub q: usize,
    /// Score q-grams of the first sentence only instead of averaging both directions.
    #[arg(long)]
    pub directional: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Single,
    Mean,
    OlsLoo,
    OlsInsample,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Single => "single",
            ModeArg::Mean => "mean",
            ModeArg::OlsLoo => "ols-loo",
            ModeArg::OlsInsample => "ols-insample",
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Tab-separated `pair_id sentence1 sentence2 score` with header.
    #[arg(long)]
    pub benchmark: PathBuf,
    /// Comma-separated feature names [default: jaccard, qgram, every model and every external column]
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,
    /// Tab-separated `pair_id feature value` with header.
    #[arg(long)]
    pub external: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Single)]
    pub mode: ModeArg,
    /// Models as `NAME=PATH` or `PATH`; the feature name defaults to the algorithm.
    #[arg(long, num_args = 1.., action = clap::ArgAction::Append)]
    pub model: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ContradictionArgs {
    /// Tab-separated `pair_id subset sentence1 sentence2` with header.
    #[arg(long)]
    pub subsets: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub json: bool,
}

fn parse_positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure of a subcommand, classified by exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parse `args` (including the program name), run the subcommand and return
/// the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out).and_then(|()| out.flush().map_err(Failure::from)) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn dispatch<W: Write>(command: Command, out: &mut W) -> CliResult<()> {
    match command {
        Command::Preprocess(a) => preprocess(&a),
        Command::Stats(a) => stats(&a, out),
        Command::Train(a) => train_cmd(&a),
        Command::Embed(a) => embed(&a),
        Command::Similarity(a) => similarity(&a, out),
        Command::Evaluate(a) => evaluate(&a, out),
        Command::Contradiction(a) => contradiction(&a, out),
    }
}

fn create(path: &Path) -> CliResult<BufWriter<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io_path(path, e))?;
    Ok(BufWriter::new(file))
}

fn finish(mut w: BufWriter<fs::File>, path: &Path) -> CliResult<()> {
    w.flush().map_err(|e| Error::io_path(path, e))?;
    Ok(())
}

/// Load a binary model, or text vectors when the file lacks the binary magic.
pub fn load_model(path: &Path) -> crate::Result<EmbeddingModel> {
    let mut file = fs::File::open(path).map_err(|e| Error::io_path(path, e))?;
    let mut magic = [0u8; 4];
    let n = file.read(&mut magic).map_err(|e| Error::io_path(path, e))?;
    drop(file);
    if n == 4 && &magic == b"SEMB" {
        EmbeddingModel::load(path)
    } else {
        let file = fs::File::open(path).map_err(|e| Error::io_path(path, e))?;
        EmbeddingModel::read_text_vectors(BufReader::new(file))
    }
}

fn preprocess(a: &PreprocessArgs) -> CliResult<()> {
    let segmenter = match &a.abbrev {
        Some(p) => Segmenter::from_file(p)?,
        None => Segmenter::default(),
    };
    let pre = Preprocessor {
        segmenter,
        split_hyphens: a.split_hyphens,
        max_line_chars: a.max_line_chars,
    };
    let docs = corpus::collect_documents(&a.input)?;
    let mut w = create(&a.output)?;
    let mut acc = StatsAccumulator::default();
    for doc in &docs {
        let lines = pre.process(doc);
        for l in &lines {
            acc.push(l);
        }
        corpus::write_corpus(&mut w, &lines)?;
    }
    finish(w, &a.output)?;
    let s = acc.finish();
    eprintln!(
        "{} documents, {} lines, {} tokens",
        docs.len(),
        s.n_sentences,
        s.n_tokens
    );
    Ok(())
}

fn stats<W: Write>(a: &StatsArgs, out: &mut W) -> CliResult<()> {
    let lines = corpus::read_corpus(&a.corpus)?;
    out.write_all(corpus::corpus_stats(&lines).to_tsv().as_bytes())?;
    Ok(())
}

fn train_cmd(a: &TrainArgs) -> CliResult<()> {
    let config = a.config();
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let lines = corpus::read_corpus(&a.corpus)?;
    let vocab = Vocabulary::build(&lines, config.min_count)?;
    eprintln!(
        "{} lines, {} tokens, {} vocabulary words, {} workers",
        lines.len(),
        vocab.total_tokens(),
        vocab.len(),
        config.workers
    );
    let (model, report) = train::train(&lines, vocab, &config)?;
    for (i, loss) in report.epoch_losses.iter().enumerate() {
        eprintln!("epoch {}: mean loss {:.6}", i + 1, loss);
    }
    model.save(&a.out)?;
    Ok(())
}

/// Errors that make a single sentence or pair unscorable without
/// invalidating the rest of the input.
fn is_skippable(e: &Error) -> bool {
    match e {
        Error::NoRepresentableToken | Error::ZeroVector | Error::DegenerateInput(_) => true,
        Error::Pair { source, .. } => is_skippable(source),
        _ => false,
    }
}

fn embed(a: &EmbedArgs) -> CliResult<()> {
    let model = load_model(&a.model)?;
    let encoder = SentenceEncoder::new(&model, a.pool.into(), a.infer_epochs)?;
    let input = fs::File::open(&a.input).map_err(|e| Error::io_path(&a.input, e))?;
    let mut w = create(&a.out)?;
    let mut skipped = 0usize;
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line.map_err(|e| Error::io_path(&a.input, e))?;
        match encoder.encode(&prepare_sentence(&line)) {
            Ok(v) => writeln!(w, "{}\t{}", i + 1, g6_row(&v.values))?,
            Err(e) if is_skippable(&e) => {
                eprintln!("warning: line {}: {e}; skipped", i + 1);
                skipped += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    finish(w, &a.out)?;
    if skipped > 0 {
        eprintln!("{skipped} lines skipped");
    }
    Ok(())
}

fn similarity<W: Write>(a: &SimilarityArgs, out: &mut W) -> CliResult<()> {
    if a.metric == MetricArg::Cosine && a.model.is_none() {
        return Err(Failure::Usage("--metric cosine requires --model".into()));
    }
    let pairs = eval::load_pairs(&a.pairs)?;
    let model = a.model.as_deref().map(load_model).transpose()?;
    let provider: Box<dyn PairFeature + '_> = match a.metric {
        MetricArg::Jaccard => Box::new(JaccardFeature::default()),
        MetricArg::Qgram => Box::new(QgramFeature {
            q: a.q,
            symmetric: !a.directional,
            ..QgramFeature::default()
        }),
        MetricArg::Cosine => {
            let model = model.as_ref().expect("model checked above");
            Box::new(CosineFeature {
                name: "cosine".into(),
                encoder: SentenceEncoder::new(model, PoolMode::Avg, None)?,
            })
        }
    };
    let metric = match a.metric {
        MetricArg::Cosine => Metric::Cosine,
        MetricArg::Jaccard => Metric::Jaccard,
        MetricArg::Qgram => Metric::Qgram,
    };
    writeln!(out, "pair_id\tmetric\tvalue")?;
    for p in &pairs {
        match provider.score(p) {
            Ok(v) => writeln!(out, "{}\t{}\t{:.6}", p.pair_id, metric, v)?,
            Err(e) if is_skippable(&e) => eprintln!("warning: pair '{}': {e}; skipped", p.pair_id),
            Err(e) => return Err(e.for_pair(&p.pair_id).into()),
        }
    }
    Ok(())
}

/// A `--model` value: `NAME=PATH`, or `PATH` named after its algorithm.
fn parse_model_spec(spec: &str) -> crate::Result<(String, EmbeddingModel)> {
    match spec.split_once('=') {
        Some((name, path)) if !name.is_empty() && !name.contains(['/', '\\']) => {
            Ok((name.to_string(), load_model(Path::new(path))?))
        }
        _ => {
            let model = load_model(Path::new(spec))?;
            Ok((model.config.algo.name().to_string(), model))
        }
    }
}

#[derive(Serialize)]
struct Coefficient<'a> {
    name: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct FusionJson<'a> {
    intercept: f64,
    coefficients: Vec<Coefficient<'a>>,
}

#[derive(Serialize)]
struct EvaluateJson<'a> {
    mode: &'static str,
    features: &'a [String],
    dropped: usize,
    rows: &'a [EvalRow],
    #[serde(skip_serializing_if = "Option::is_none")]
    fusion: Option<FusionJson<'a>>,
}

fn evaluate<W: Write>(a: &EvaluateArgs, out: &mut W) -> CliResult<()> {
    let benchmark: Vec<BenchmarkPair> = eval::load_benchmark(&a.benchmark)?;
    let external = a.external.as_deref().map(ExternalFeatures::load).transpose()?;
    let models = a
        .model
        .iter()
        .map(|s| parse_model_spec(s))
        .collect::<crate::Result<Vec<_>>>()?;

    let mut available: Vec<String> = vec!["jaccard".into(), "qgram".into()];
    available.extend(models.iter().map(|(n, _)| n.clone()));
    if let Some(ext) = &external {
        available.extend(ext.columns().iter().cloned());
    }
    for (i, n) in available.iter().enumerate() {
        if available[..i].contains(n) {
            return Err(Failure::Usage(format!("--model: feature name '{n}' is used twice")));
        }
    }
    let features: Vec<String> = match &a.features {
        Some(f) => f.iter().map(|s| s.trim().to_string()).collect(),
        None => available.clone(),
    };
    if features.is_empty() {
        return Err(Failure::Usage("--features: no feature selected".into()));
    }
    for f in &features {
        if !available.contains(f) {
            return Err(Failure::Usage(format!(
                "--features: unknown feature '{f}'; available: {}",
                available.join(", ")
            )));
        }
    }

    let wanted = |name: &str| features.iter().any(|f| f == name);
    let jaccard = JaccardFeature::default();
    let qgram = QgramFeature::default();
    let mut cosines = Vec::new();
    for (name, model) in &models {
        if wanted(name) {
            cosines.push(CosineFeature {
                name: name.clone(),
                encoder: SentenceEncoder::new(model, PoolMode::Avg, None)?,
            });
        }
    }
    let mut providers: Vec<&dyn PairFeature> = Vec::new();
    if wanted("jaccard") {
        providers.push(&jaccard);
    }
    if wanted("qgram") {
        providers.push(&qgram);
    }
    providers.extend(cosines.iter().map(|c| c as &dyn PairFeature));

    let set = build_features(&benchmark, &providers, external.as_ref())?;
    for (id, reason) in &set.dropped {
        eprintln!("warning: pair '{id}' dropped ({reason})");
    }
    let rows: Vec<FeatureRow> = set
        .rows
        .into_iter()
        .map(|r| FeatureRow {
            features: features
                .iter()
                .map(|f| (f.clone(), r.get(f).expect("every selected feature is scored")))
                .collect(),
            ..r
        })
        .collect();
    let gold: Vec<f64> = rows.iter().map(|r| r.gold).collect();

    let mut fusion = None;
    let results: Vec<EvalRow> = match a.mode {
        ModeArg::Single => features
            .iter()
            .map(|f| {
                let scores: Vec<f64> = rows.iter().map(|r| r.get(f).unwrap_or(f64::NAN)).collect();
                EvalRow::new(f.clone(), &scores, &gold)
            })
            .collect::<crate::Result<_>>()?,
        ModeArg::Mean => {
            let scores = rows
                .iter()
                .map(|r| mean_hybrid(r, &features))
                .collect::<crate::Result<Vec<_>>>()?;
            vec![EvalRow::new("mean", &scores, &gold)?]
        }
        ModeArg::OlsLoo => {
            let cv = loo_cv(&rows)?;
            fusion = Some(fit_ols(&rows)?);
            vec![EvalRow::new("ols-loo", &cv.predictions, &gold)?]
        }
        ModeArg::OlsInsample => {
            let m = fit_ols(&rows)?;
            let scores = rows.iter().map(|r| m.predict(r)).collect::<crate::Result<Vec<_>>>()?;
            fusion = Some(m);
            vec![EvalRow::new("ols-insample", &scores, &gold)?]
        }
    };

    if a.json {
        let doc = EvaluateJson {
            mode: a.mode.name(),
            features: &features,
            dropped: set.dropped.len(),
            rows: &results,
            fusion: fusion.as_ref().map(|m| FusionJson {
                intercept: m.intercept,
                coefficients: m
                    .coefficients
                    .iter()
                    .map(|(n, v)| Coefficient { name: n, value: *v })
                    .collect(),
            }),
        };
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "name\tn\tpearson\tspearman")?;
        for r in &results {
            writeln!(out, "{}\t{}\t{:.6}\t{:.6}", r.name, r.n, r.pearson, r.spearman)?;
        }
        if let Some(m) = &fusion {
            eprintln!("intercept {:.6}", m.intercept);
            for (n, b) in &m.coefficients {
                eprintln!("coefficient {n} {b:.6}");
            }
        }
    }
    Ok(())
}

fn contradiction<W: Write>(a: &ContradictionArgs, out: &mut W) -> CliResult<()> {
    let sets = eval::load_contradictions(&a.subsets)?;
    let model = load_model(&a.model)?;
    let feature = CosineFeature {
        name: "cosine".into(),
        encoder: SentenceEncoder::new(&model, PoolMode::Avg, None)?,
    };
    let rows = contradiction_report(&sets, |p| feature.score(p))?;
    if a.json {
        serde_json::to_writer_pretty(&mut *out, &rows).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "subset\tn\tmean_similarity")?;
        for r in &rows {
            writeln!(out, "{}\t{}\t{:.6}", r.subset, r.n, r.mean_similarity)?;
        }
    }
    Ok(())
}
