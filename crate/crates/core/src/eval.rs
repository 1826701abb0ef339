//! Benchmark evaluation: data loading, per-pair feature assembly, the mean
//! hybrid, least-squares fusion with cross-validation, correlation and the
//! contradiction-subset report.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{normalize_for_string_metrics, prepare_sentence, StopWords};
use crate::error::{Error, Result};
use crate::metrics::{cosine, jaccard, qgram_similarity};
use crate::sentence::SentenceEncoder;

pub const GOLD_MIN: f64 = 0.0;
pub const GOLD_MAX: f64 = 4.0;
/// Gold score from which a benchmark pair counts as highly similar.
pub const SIMILAR_THRESHOLD: f64 = 3.5;

#[derive(Clone, Debug, PartialEq)]
pub struct SentencePair {
    pub pair_id: String,
    pub sentence1: String,
    pub sentence2: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkPair {
    pub pair: SentencePair,
    pub gold: f64,
}

fn open_lines(path: &Path) -> Result<Vec<String>> {
    let file = fs::File::open(path).map_err(|e| Error::io_path(path, e))?;
    BufReader::new(file)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io_path(path, e))
}

fn check_header(lines: &[String], expected: &[&str]) -> Result<()> {
    let header = lines.first().map(|l| l.trim_end_matches('\r')).unwrap_or("");
    if header.split('\t').collect::<Vec<_>>() != expected {
        return Err(Error::FormatAt {
            line: 1,
            message: format!("expected header '{}'", expected.join("\\t")),
        });
    }
    Ok(())
}

/// Data rows as (1-based line number, fields), skipping blank lines.
fn data_rows(lines: &[String], width: usize) -> Result<Vec<(usize, Vec<&str>)>> {
    let mut rows = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != width {
            return Err(Error::FormatAt {
                line: i + 1,
                message: format!("expected {width} tab-separated fields, found {}", fields.len()),
            });
        }
        if fields.iter().any(|f| f.trim().is_empty()) {
            return Err(Error::FormatAt {
                line: i + 1,
                message: "empty field".into(),
            });
        }
        rows.push((i + 1, fields));
    }
    Ok(rows)
}

fn parse_real(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::FormatAt {
        line,
        message: format!("'{field}' is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::FormatAt {
            line,
            message: format!("'{field}' is not finite"),
        });
    }
    Ok(v)
}

/// Parse a `pair_id, sentence1, sentence2, score` benchmark file.
pub fn load_benchmark(path: &Path) -> Result<Vec<BenchmarkPair>> {
    parse_benchmark(&open_lines(path)?)
}

pub fn parse_benchmark(lines: &[String]) -> Result<Vec<BenchmarkPair>> {
    check_header(lines, &["pair_id", "sentence1", "sentence2", "score"])?;
    data_rows(lines, 4)?
        .into_iter()
        .map(|(line, f)| {
            let gold = parse_real(f[3], line)?;
            if !(GOLD_MIN..=GOLD_MAX).contains(&gold) {
                return Err(Error::Range {
                    line,
                    value: gold,
                    min: GOLD_MIN,
                    max: GOLD_MAX,
                });
            }
            Ok(BenchmarkPair {
                pair: SentencePair {
                    pair_id: f[0].to_string(),
                    sentence1: f[1].to_string(),
                    sentence2: f[2].to_string(),
                },
                gold,
            })
        })
        .collect()
}

/// Sentence pairs with or without a trailing score column.
pub fn load_pairs(path: &Path) -> Result<Vec<SentencePair>> {
    let lines = open_lines(path)?;
    if check_header(&lines, &["pair_id", "sentence1", "sentence2", "score"]).is_ok() {
        return Ok(parse_benchmark(&lines)?.into_iter().map(|b| b.pair).collect());
    }
    check_header(&lines, &["pair_id", "sentence1", "sentence2"])?;
    Ok(data_rows(&lines, 3)?
        .into_iter()
        .map(|(_, f)| SentencePair {
            pair_id: f[0].to_string(),
            sentence1: f[1].to_string(),
            sentence2: f[2].to_string(),
        })
        .collect())
}

/// Externally computed feature columns in long `pair_id, feature, value` form.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExternalFeatures {
    columns: Vec<String>,
    values: HashMap<String, HashMap<String, f64>>,
}

impl ExternalFeatures {
    pub fn load(path: &Path) -> Result<Self> {
        ExternalFeatures::parse(&open_lines(path)?)
    }

    pub fn parse(lines: &[String]) -> Result<Self> {
        check_header(lines, &["pair_id", "feature", "value"])?;
        let mut ext = ExternalFeatures::default();
        for (line, f) in data_rows(lines, 3)? {
            let value = parse_real(f[2], line)?;
            ext.insert(f[1], f[0], value);
        }
        Ok(ext)
    }

    pub fn insert(&mut self, feature: &str, pair_id: &str, value: f64) {
        if !self.values.contains_key(feature) {
            self.columns.push(feature.to_string());
        }
        self.values
            .entry(feature.to_string())
            .or_default()
            .insert(pair_id.to_string(), value);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn get(&self, feature: &str, pair_id: &str) -> Option<f64> {
        self.values.get(feature)?.get(pair_id).copied()
    }
}

/// A per-pair similarity score usable as a feature.
pub trait PairFeature {
    fn name(&self) -> &str;
    fn score(&self, pair: &SentencePair) -> Result<f64>;
}

#[derive(Clone, Debug, Default)]
pub struct JaccardFeature {
    pub stopwords: StopWords,
}

impl PairFeature for JaccardFeature {
    fn name(&self) -> &str {
        "jaccard"
    }

    fn score(&self, pair: &SentencePair) -> Result<f64> {
        let a = normalize_for_string_metrics(&prepare_sentence(&pair.sentence1), &self.stopwords);
        let b = normalize_for_string_metrics(&prepare_sentence(&pair.sentence2), &self.stopwords);
        jaccard(&a, &b)
    }
}

#[derive(Clone, Debug)]
pub struct QgramFeature {
    pub stopwords: StopWords,
    pub q: usize,
    pub symmetric: bool,
}

impl Default for QgramFeature {
    fn default() -> Self {
        QgramFeature {
            stopwords: StopWords::default(),
            q: crate::metrics::DEFAULT_Q,
            symmetric: true,
        }
    }
}

impl PairFeature for QgramFeature {
    fn name(&self) -> &str {
        "qgram"
    }

    fn score(&self, pair: &SentencePair) -> Result<f64> {
        let a = normalize_for_string_metrics(&prepare_sentence(&pair.sentence1), &self.stopwords);
        let b = normalize_for_string_metrics(&prepare_sentence(&pair.sentence2), &self.stopwords);
        qgram_similarity(&a.joined(), &b.joined(), self.q, self.symmetric)
    }
}

/// Cosine between the sentence vectors of an embedding model.
#[derive(Clone, Debug)]
pub struct CosineFeature<'m> {
    pub name: String,
    pub encoder: SentenceEncoder<'m>,
}

impl PairFeature for CosineFeature<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn score(&self, pair: &SentencePair) -> Result<f64> {
        let a = self.encoder.encode(&prepare_sentence(&pair.sentence1))?;
        let b = self.encoder.encode(&prepare_sentence(&pair.sentence2))?;
        cosine(&a.values, &b.values)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeatureRow {
    pub pair_id: String,
    /// Feature values in column order.
    pub features: Vec<(String, f64)>,
    pub gold: f64,
}

impl FeatureRow {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.features.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    fn names(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|(n, _)| n.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureSet {
    pub rows: Vec<FeatureRow>,
    /// Pairs left out because a provider could not score them, with the reason.
    pub dropped: Vec<(String, String)>,
}

/// Score every pair with every provider and merge external columns.
pub fn build_features(
    pairs: &[BenchmarkPair],
    providers: &[&dyn PairFeature],
    external: Option<&ExternalFeatures>,
) -> Result<FeatureSet> {
    let mut names: Vec<&str> = providers.iter().map(|p| p.name()).collect();
    if let Some(ext) = external {
        names.extend(ext.columns().iter().map(String::as_str));
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::InvalidConfig(format!("feature '{n}' supplied twice")));
        }
    }

    let mut set = FeatureSet::default();
    'pairs: for bp in pairs {
        let mut features = Vec::with_capacity(names.len());
        for p in providers {
            match p.score(&bp.pair) {
                Ok(v) if v.is_finite() => features.push((p.name().to_string(), v)),
                Ok(_) => {
                    set.dropped
                        .push((bp.pair.pair_id.clone(), format!("{}: non-finite score", p.name())));
                    continue 'pairs;
                }
                Err(e) => {
                    set.dropped
                        .push((bp.pair.pair_id.clone(), format!("{}: {e}", p.name())));
                    continue 'pairs;
                }
            }
        }
        if let Some(ext) = external {
            for col in ext.columns() {
                let v = ext.get(col, &bp.pair.pair_id).ok_or_else(|| Error::MissingFeature {
                    feature: col.clone(),
                    pair_id: bp.pair.pair_id.clone(),
                })?;
                features.push((col.clone(), v));
            }
        }
        set.rows.push(FeatureRow {
            pair_id: bp.pair.pair_id.clone(),
            features,
            gold: bp.gold,
        });
    }
    Ok(set)
}

/// Arithmetic mean of the named features of a row.
pub fn mean_hybrid<S: AsRef<str>>(row: &FeatureRow, subset: &[S]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::DegenerateInput("empty feature subset"));
    }
    let mut sum = 0.0;
    for name in subset {
        sum += row.get(name.as_ref()).ok_or_else(|| Error::MissingFeature {
            feature: name.as_ref().to_string(),
            pair_id: row.pair_id.clone(),
        })?;
    }
    Ok(sum / subset.len() as f64)
}

/// Fitted `y = b0 + Σ b_j x_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionModel {
    pub intercept: f64,
    pub coefficients: Vec<(String, f64)>,
}

impl FusionModel {
    pub fn predict(&self, row: &FeatureRow) -> Result<f64> {
        let mut y = self.intercept;
        for (name, b) in &self.coefficients {
            let x = row.get(name).ok_or_else(|| Error::MissingFeature {
                feature: name.clone(),
                pair_id: row.pair_id.clone(),
            })?;
            y += b * x;
        }
        Ok(y)
    }
}

fn design(rows: &[FeatureRow]) -> Result<(Vec<String>, DMatrix<f64>, DVector<f64>)> {
    let first = rows.first().ok_or(Error::InsufficientData { rows: 0, params: 1 })?;
    let names: Vec<String> = first.names().map(str::to_string).collect();
    for r in rows {
        if !r.names().eq(names.iter().map(String::as_str)) {
            return Err(Error::InvalidConfig(format!(
                "row '{}' has a different feature set",
                r.pair_id
            )));
        }
    }
    let p = names.len();
    let x = DMatrix::from_fn(
        rows.len(),
        p + 1,
        |i, j| if j == 0 { 1.0 } else { rows[i].features[j - 1].1 },
    );
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.gold));
    Ok((names, x, y))
}

/// Least squares through a QR factorization of the design matrix with an
/// intercept column.
fn solve_least_squares(x: DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let (n, k) = x.shape();
    if n <= k {
        return Err(Error::InsufficientData { rows: n, params: k });
    }
    let col_norms: Vec<f64> = x.column_iter().map(|c| c.norm()).collect();
    let qr = x.qr();
    let r = qr.r();
    for j in 0..k {
        if r[(j, j)].abs() <= 1e-10 * col_norms[j] || col_norms[j] == 0.0 {
            return Err(Error::RankDeficient);
        }
    }
    let qty = qr.q().transpose() * y;
    r.solve_upper_triangular(&qty).ok_or(Error::RankDeficient)
}

pub fn fit_ols(rows: &[FeatureRow]) -> Result<FusionModel> {
    let (names, x, y) = design(rows)?;
    let b = solve_least_squares(x, &y)?;
    Ok(FusionModel {
        intercept: b[0],
        coefficients: names.into_iter().zip(b.iter().skip(1).copied()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvResult {
    /// Out-of-fold prediction for every row, in input order.
    pub predictions: Vec<f64>,
    pub pearson: f64,
}

/// Leave-one-out cross-validation of [`fit_ols`].
pub fn loo_cv(rows: &[FeatureRow]) -> Result<CvResult> {
    let p = rows.first().map_or(0, |r| r.features.len());
    if rows.len() < p + 3 {
        return Err(Error::InsufficientData {
            rows: rows.len(),
            params: p + 1,
        });
    }
    let folds: Vec<usize> = (0..rows.len()).collect();
    cross_validate(rows, &folds, rows.len())
}

/// Seeded k-fold cross-validation of [`fit_ols`].
pub fn kfold_cv(rows: &[FeatureRow], k: usize, seed: u64) -> Result<CvResult> {
    if k < 2 || k > rows.len() {
        return Err(Error::InvalidConfig(format!(
            "cannot split {} rows into {k} folds",
            rows.len()
        )));
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![0; rows.len()];
    for (pos, &i) in order.iter().enumerate() {
        folds[i] = pos % k;
    }
    cross_validate(rows, &folds, k)
}

fn cross_validate(rows: &[FeatureRow], folds: &[usize], k: usize) -> Result<CvResult> {
    let mut predictions = vec![0.0; rows.len()];
    for fold in 0..k {
        let train: Vec<FeatureRow> = rows
            .iter()
            .zip(folds)
            .filter(|&(_, &f)| f != fold)
            .map(|(r, _)| r.clone())
            .collect();
        let model = fit_ols(&train)?;
        for (i, r) in rows.iter().enumerate().filter(|&(i, _)| folds[i] == fold) {
            predictions[i] = model.predict(r)?;
        }
    }
    let gold: Vec<f64> = rows.iter().map(|r| r.gold).collect();
    let pearson = pearson(&predictions, &gold)?;
    Ok(CvResult { predictions, pearson })
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData {
            rows: x.len(),
            params: 2,
        });
    }
    Ok(())
}

/// Pearson's product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantInput);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Ranks starting at 1; tied values share the mean of their ranks.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rank correlation (Pearson on average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContradictionLabel {
    Similar,
    Negation,
    Antonym,
}

impl ContradictionLabel {
    /// Report order.
    pub const ALL: [ContradictionLabel; 3] = [
        ContradictionLabel::Similar,
        ContradictionLabel::Negation,
        ContradictionLabel::Antonym,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ContradictionLabel::Similar => "similar",
            ContradictionLabel::Negation => "negation",
            ContradictionLabel::Antonym => "antonym",
        }
    }
}

impl fmt::Display for ContradictionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ContradictionLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ContradictionLabel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown subset '{s}'; valid: negation, antonym, similar"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContradictionSet {
    pub label: ContradictionLabel,
    pub pairs: Vec<SentencePair>,
}

/// Parse a `pair_id, subset, sentence1, sentence2` file into one set per
/// label, in report order.
pub fn load_contradictions(path: &Path) -> Result<Vec<ContradictionSet>> {
    parse_contradictions(&open_lines(path)?)
}

pub fn parse_contradictions(lines: &[String]) -> Result<Vec<ContradictionSet>> {
    check_header(lines, &["pair_id", "subset", "sentence1", "sentence2"])?;
    let mut by_label: HashMap<ContradictionLabel, Vec<SentencePair>> = HashMap::new();
    for (line, f) in data_rows(lines, 4)? {
        let label: ContradictionLabel = f[1].parse().map_err(|message| Error::FormatAt { line, message })?;
        by_label.entry(label).or_default().push(SentencePair {
            pair_id: f[0].to_string(),
            sentence1: f[2].to_string(),
            sentence2: f[3].to_string(),
        });
    }
    Ok(ContradictionLabel::ALL
        .into_iter()
        .filter_map(|label| by_label.remove(&label).map(|pairs| ContradictionSet { label, pairs }))
        .collect())
}

/// Benchmark pairs scored at or above [`SIMILAR_THRESHOLD`].
pub fn similar_reference(pairs: &[BenchmarkPair]) -> ContradictionSet {
    ContradictionSet {
        label: ContradictionLabel::Similar,
        pairs: pairs
            .iter()
            .filter(|p| p.gold >= SIMILAR_THRESHOLD)
            .map(|p| p.pair.clone())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContradictionRow {
    pub subset: ContradictionLabel,
    pub n: usize,
    pub mean_similarity: f64,
}

/// Pair count and mean similarity per subset, ordered similar, negation,
/// antonym.
pub fn contradiction_report<F>(sets: &[ContradictionSet], mut similarity: F) -> Result<Vec<ContradictionRow>>
where
    F: FnMut(&SentencePair) -> Result<f64>,
{
    let mut rows = Vec::new();
    for label in ContradictionLabel::ALL {
        let pairs: Vec<&SentencePair> = sets
            .iter()
            .filter(|s| s.label == label)
            .flat_map(|s| &s.pairs)
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let mut sum = 0.0;
        for p in &pairs {
            sum += similarity(p).map_err(|e| e.for_pair(&p.pair_id))?;
        }
        rows.push(ContradictionRow {
            subset: label,
            n: pairs.len(),
            mean_similarity: sum / pairs.len() as f64,
        });
    }
    Ok(rows)
}

/// One evaluated scorer: correlation of its scores with the gold scores.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRow {
    pub name: String,
    pub n: usize,
    pub pearson: f64,
    pub spearman: f64,
}

impl EvalRow {
    pub fn new(name: impl Into<String>, scores: &[f64], gold: &[f64]) -> Result<Self> {
        Ok(EvalRow {
            name: name.into(),
            n: scores.len(),
            pearson: pearson(scores, gold)?,
            spearman: spearman(scores, gold)?,
        })
    }
}
