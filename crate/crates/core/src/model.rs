//! Training configuration, embedding tables and their serialized forms.
//!
//! Native file layout (little-endian): magic `SEMB`, version byte `1`, the
//! configuration block, the vocabulary (count-prefixed UTF-8 tokens with u64
//! counts) and the matrices as row-major `f32`.

use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fmt::g6_row;
use crate::vocab::{self, subword_ngrams, Vocabulary, Word};

const MAGIC: &[u8; 4] = b"SEMB";
const VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Cbow,
    Skipgram,
    Sent2vec,
    PvDm,
    PvDbow,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Cbow,
        Algorithm::Skipgram,
        Algorithm::Sent2vec,
        Algorithm::PvDm,
        Algorithm::PvDbow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cbow => "cbow",
            Algorithm::Skipgram => "skipgram",
            Algorithm::Sent2vec => "sent2vec",
            Algorithm::PvDm => "pv-dm",
            Algorithm::PvDbow => "pv-dbow",
        }
    }

    pub fn is_word_model(self) -> bool {
        matches!(self, Algorithm::Cbow | Algorithm::Skipgram)
    }

    pub fn is_paragraph_model(self) -> bool {
        matches!(self, Algorithm::PvDm | Algorithm::PvDbow)
    }

    fn code(self) -> u8 {
        match self {
            Algorithm::Cbow => 0,
            Algorithm::Skipgram => 1,
            Algorithm::Sent2vec => 2,
            Algorithm::PvDm => 3,
            Algorithm::PvDbow => 4,
        }
    }

    fn from_code(code: u8) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.code() == code)
            .ok_or_else(|| Error::Format(format!("unknown algorithm code {code}")))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
            format!("unknown algorithm '{s}'; valid: {}", names.join(", "))
        })
    }
}

/// How PV-DM merges the paragraph vector with the preceding word vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PvCombine {
    Mean,
    Concat,
}

impl FromStr for PvCombine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mean" => Ok(PvCombine::Mean),
            "concat" => Ok(PvCombine::Concat),
            _ => Err(format!("unknown combination '{s}'; valid: mean, concat")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub algo: Algorithm,
    pub dim: usize,
    /// Context half-width in tokens.
    pub window: usize,
    pub epochs: usize,
    pub lr0: f32,
    pub lr_min: f32,
    pub negatives: usize,
    pub min_count: u64,
    /// Subsampling threshold; 0 disables subsampling.
    pub sample_t: f64,
    /// Highest word n-gram order (sent2vec).
    pub word_ngrams: usize,
    pub dropout_k: usize,
    pub bucket: usize,
    /// Character n-gram range (cbow / skipgram); `maxn == 0` disables subwords.
    pub minn: usize,
    pub maxn: usize,
    pub pv_combine: PvCombine,
    pub seed: u64,
    pub workers: usize,
    pub neg_exponent: f64,
    /// Use the full window everywhere instead of drawing its width.
    pub fixed_window: bool,
}

impl TrainConfig {
    pub fn new(algo: Algorithm) -> Self {
        let lr0 = if algo == Algorithm::Skipgram { 0.025 } else { 0.05 };
        TrainConfig {
            algo,
            dim: 100,
            window: 5,
            epochs: 5,
            lr0,
            lr_min: lr0 * 1e-4,
            negatives: 5,
            min_count: 5,
            sample_t: 1e-4,
            word_ngrams: 1,
            dropout_k: 0,
            bucket: vocab::DEFAULT_BUCKET,
            minn: vocab::DEFAULT_MINN,
            maxn: vocab::DEFAULT_MAXN,
            pv_combine: PvCombine::Mean,
            seed: 1,
            workers: 1,
            neg_exponent: vocab::DEFAULT_NEG_EXPONENT,
            fixed_window: false,
        }
    }

    /// Set `lr0` and move the floor along with it.
    pub fn with_lr(mut self, lr0: f32) -> Self {
        self.lr0 = lr0;
        self.lr_min = lr0 * 1e-4;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.dim == 0 {
            return fail("dim must be at least 1");
        }
        if self.window == 0 {
            return fail("window must be at least 1");
        }
        if self.epochs == 0 {
            return fail("epochs must be at least 1");
        }
        if !(self.lr_min >= 0.0 && self.lr0 > self.lr_min && self.lr0.is_finite()) {
            return fail("learning rates must satisfy lr0 > lr_min >= 0");
        }
        if self.negatives == 0 {
            return fail("negatives must be at least 1");
        }
        if self.min_count == 0 {
            return fail("min_count must be at least 1");
        }
        if !(self.sample_t >= 0.0 && self.sample_t.is_finite()) {
            return fail("sampling threshold must be non-negative");
        }
        if self.word_ngrams == 0 {
            return fail("word_ngrams must be at least 1");
        }
        if self.maxn > 0 && (self.minn == 0 || self.minn > self.maxn) {
            return fail("character n-gram range needs 1 <= minn <= maxn");
        }
        if self.hashed_rows() > 0 && self.bucket == 0 {
            return fail("bucket must be at least 1");
        }
        if self.workers == 0 {
            return fail("workers must be at least 1");
        }
        if !(self.neg_exponent > 0.0 && self.neg_exponent <= 1.0) {
            return fail("negative-sampling exponent must lie in (0, 1]");
        }
        Ok(())
    }

    pub fn uses_subwords(&self) -> bool {
        self.algo.is_word_model() && self.maxn > 0
    }

    pub fn uses_word_ngrams(&self) -> bool {
        self.algo == Algorithm::Sent2vec && self.word_ngrams >= 2
    }

    /// Rows of the input table reserved for hashed features.
    pub fn hashed_rows(&self) -> usize {
        if self.uses_subwords() || self.uses_word_ngrams() {
            self.bucket
        } else {
            0
        }
    }

    /// Width of the hidden layer; wider than `dim` only for concatenating PV-DM.
    pub fn hidden_width(&self) -> usize {
        if self.algo == Algorithm::PvDm && self.pv_combine == PvCombine::Concat {
            (self.window + 1) * self.dim
        } else {
            self.dim
        }
    }
}

/// Dense row-major `f32` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Entries uniform in `[-0.5/cols, 0.5/cols]`.
    pub fn uniform<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let bound = 0.5 / cols as f32;
        let data = (0..rows * cols).map(|_| rng.random_range(-bound..=bound)).collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Trained tables plus everything needed to compose vectors from them.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingModel {
    pub config: TrainConfig,
    pub vocab: Vocabulary,
    /// Word rows followed by hashed subword / word n-gram rows.
    pub input: Matrix,
    pub output: Matrix,
    /// One row per training sentence (PV models only).
    pub paragraphs: Option<Matrix>,
}

impl EmbeddingModel {
    /// Freshly initialized tables: input (and paragraph) rows uniform from
    /// the seeded generator, output rows zero.
    pub fn initialize(config: TrainConfig, vocab: Vocabulary, n_paragraphs: usize) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let input = Matrix::uniform(vocab.len() + config.hashed_rows(), config.dim, &mut rng);
        let paragraphs = config
            .algo
            .is_paragraph_model()
            .then(|| Matrix::uniform(n_paragraphs, config.dim, &mut rng));
        let output = Matrix::zeros(vocab.len(), config.hidden_width());
        Ok(EmbeddingModel {
            config,
            vocab,
            input,
            output,
            paragraphs,
        })
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    /// Input rows composing `token`: its word row and, when the model has a
    /// subword space, its hashed character n-gram rows. Unknown tokens get
    /// only the n-gram rows.
    pub fn token_rows(&self, token: &str) -> Vec<usize> {
        let mut rows = Vec::new();
        if let Some(id) = self.vocab.id(token) {
            rows.push(id as usize);
        }
        if self.config.uses_subwords() {
            let base = self.vocab.len();
            rows.extend(
                subword_ngrams(token, self.config.minn, self.config.maxn, self.config.bucket)
                    .into_iter()
                    .map(|h| base + h as usize),
            );
        }
        rows
    }

    /// Mean of the rows composing `token`, or `None` when it has none.
    pub fn word_vector(&self, token: &str) -> Option<Vec<f32>> {
        let rows = self.token_rows(token);
        if rows.is_empty() {
            return None;
        }
        Some(mean_rows(&self.input, &rows))
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        let expect_input = self.vocab.len() + self.config.hashed_rows();
        let ok = self.input.rows() == expect_input
            && self.input.cols() == self.config.dim
            && self.output.rows() == self.vocab.len()
            && self.output.cols() == self.config.hidden_width()
            && match &self.paragraphs {
                Some(p) => self.config.algo.is_paragraph_model() && p.cols() == self.config.dim,
                None => !self.config.algo.is_paragraph_model(),
            };
        if !ok {
            return Err(Error::Format("table shapes do not match the configuration".into()));
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| Error::io_path(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io_path(path, e))?;
        EmbeddingModel::read_from(&mut BufReader::new(file))
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_u8(VERSION)?;
        write_config(w, &self.config)?;

        w.write_u64::<LittleEndian>(self.vocab.len() as u64)?;
        w.write_u64::<LittleEndian>(self.vocab.total_tokens())?;
        w.write_u64::<LittleEndian>(self.vocab.min_count())?;
        for word in self.vocab.words() {
            w.write_u32::<LittleEndian>(word.token.len() as u32)?;
            w.write_all(word.token.as_bytes())?;
            w.write_u64::<LittleEndian>(word.count)?;
        }

        write_matrix(w, &self.input)?;
        write_matrix(w, &self.output)?;
        match &self.paragraphs {
            Some(p) => {
                w.write_u8(1)?;
                write_matrix(w, p)?;
            }
            None => w.write_u8(0)?,
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        read_model(r).map_err(|e| match e {
            Error::Io(io) if io.kind() == io::ErrorKind::UnexpectedEof => Error::Format("truncated model file".into()),
            other => other,
        })
    }

    /// Word rows in the `<V> <dim>` text interchange format.
    pub fn write_text_vectors<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "{} {}", self.vocab.len(), self.dim())?;
        for (i, word) in self.vocab.words().iter().enumerate() {
            let vec = self
                .word_vector(&word.token)
                .unwrap_or_else(|| self.input.row(i).to_vec());
            writeln!(w, "{} {}", word.token, g6_row(&vec))?;
        }
        Ok(())
    }

    /// Import externally trained vectors as a word model without subwords.
    /// File order is kept as id order.
    pub fn read_text_vectors<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Format("empty vector file".into()))?;
        let header = header?;
        let mut parts = header.split_whitespace();
        let parse_usize = |s: Option<&str>| -> Result<usize> {
            s.and_then(|v| v.parse().ok()).ok_or_else(|| Error::FormatAt {
                line: 1,
                message: "header must be '<count> <dim>'".into(),
            })
        };
        let n = parse_usize(parts.next())?;
        let dim = parse_usize(parts.next())?;
        if dim == 0 || parts.next().is_some() {
            return Err(Error::FormatAt {
                line: 1,
                message: "header must be '<count> <dim>'".into(),
            });
        }

        let mut words = Vec::with_capacity(n);
        let mut data = Vec::with_capacity(n * dim);
        for (idx, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let mut fields = line.split_whitespace();
            let token = fields.next().unwrap().to_string();
            let values: Vec<f32> = fields
                .map(|f| f.parse::<f32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::FormatAt {
                    line: lineno,
                    message: e.to_string(),
                })?;
            if values.len() != dim || values.iter().any(|v| !v.is_finite()) {
                return Err(Error::FormatAt {
                    line: lineno,
                    message: format!("expected {dim} finite values"),
                });
            }
            words.push(Word {
                token,
                count: (n - words.len().min(n)) as u64,
            });
            data.extend(values);
        }
        if words.len() != n {
            return Err(Error::Format(format!(
                "header announces {n} vectors, found {}",
                words.len()
            )));
        }
        let vocab = Vocabulary::from_words(words, 1, n as u64)?;
        let mut config = TrainConfig::new(Algorithm::Cbow);
        config.dim = dim;
        config.min_count = 1;
        config.maxn = 0;
        let model = EmbeddingModel {
            config,
            vocab,
            input: Matrix::from_vec(n, dim, data)?,
            output: Matrix::zeros(n, dim),
            paragraphs: None,
        };
        Ok(model)
    }
}

pub(crate) fn mean_rows(m: &Matrix, rows: &[usize]) -> Vec<f32> {
    let mut out = vec![0.0f32; m.cols()];
    for &r in rows {
        for (o, v) in out.iter_mut().zip(m.row(r)) {
            *o += v;
        }
    }
    let scale = 1.0 / rows.len() as f32;
    out.iter_mut().for_each(|o| *o *= scale);
    out
}

fn write_config<W: Write>(w: &mut W, c: &TrainConfig) -> io::Result<()> {
    w.write_u8(c.algo.code())?;
    w.write_u32::<LittleEndian>(c.dim as u32)?;
    w.write_u32::<LittleEndian>(c.window as u32)?;
    w.write_u32::<LittleEndian>(c.epochs as u32)?;
    w.write_f32::<LittleEndian>(c.lr0)?;
    w.write_f32::<LittleEndian>(c.lr_min)?;
    w.write_u32::<LittleEndian>(c.negatives as u32)?;
    w.write_u64::<LittleEndian>(c.min_count)?;
    w.write_f64::<LittleEndian>(c.sample_t)?;
    w.write_u32::<LittleEndian>(c.word_ngrams as u32)?;
    w.write_u32::<LittleEndian>(c.dropout_k as u32)?;
    w.write_u64::<LittleEndian>(c.bucket as u64)?;
    w.write_u32::<LittleEndian>(c.minn as u32)?;
    w.write_u32::<LittleEndian>(c.maxn as u32)?;
    w.write_u8(match c.pv_combine {
        PvCombine::Mean => 0,
        PvCombine::Concat => 1,
    })?;
    w.write_u64::<LittleEndian>(c.seed)?;
    w.write_u32::<LittleEndian>(c.workers as u32)?;
    w.write_f64::<LittleEndian>(c.neg_exponent)?;
    w.write_u8(u8::from(c.fixed_window))?;
    Ok(())
}

fn read_config<R: Read>(r: &mut R) -> Result<TrainConfig> {
    let algo = Algorithm::from_code(r.read_u8()?)?;
    let mut c = TrainConfig::new(algo);
    c.dim = r.read_u32::<LittleEndian>()? as usize;
    c.window = r.read_u32::<LittleEndian>()? as usize;
    c.epochs = r.read_u32::<LittleEndian>()? as usize;
    c.lr0 = r.read_f32::<LittleEndian>()?;
    c.lr_min = r.read_f32::<LittleEndian>()?;
    c.negatives = r.read_u32::<LittleEndian>()? as usize;
    c.min_count = r.read_u64::<LittleEndian>()?;
    c.sample_t = r.read_f64::<LittleEndian>()?;
    c.word_ngrams = r.read_u32::<LittleEndian>()? as usize;
    c.dropout_k = r.read_u32::<LittleEndian>()? as usize;
    c.bucket = r.read_u64::<LittleEndian>()? as usize;
    c.minn = r.read_u32::<LittleEndian>()? as usize;
    c.maxn = r.read_u32::<LittleEndian>()? as usize;
    c.pv_combine = match r.read_u8()? {
        0 => PvCombine::Mean,
        1 => PvCombine::Concat,
        other => return Err(Error::Format(format!("unknown PV combination code {other}"))),
    };
    c.seed = r.read_u64::<LittleEndian>()?;
    c.workers = r.read_u32::<LittleEndian>()? as usize;
    c.neg_exponent = r.read_f64::<LittleEndian>()?;
    c.fixed_window = match r.read_u8()? {
        0 => false,
        1 => true,
        other => return Err(Error::Format(format!("bad flag byte {other}"))),
    };
    Ok(c)
}

fn write_matrix<W: Write>(w: &mut W, m: &Matrix) -> io::Result<()> {
    w.write_u64::<LittleEndian>(m.rows() as u64)?;
    w.write_u64::<LittleEndian>(m.cols() as u64)?;
    let mut buf = Vec::with_capacity(m.as_slice().len() * 4);
    for v in m.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)
}

fn read_matrix<R: Read>(r: &mut R) -> Result<Matrix> {
    let rows = r.read_u64::<LittleEndian>()? as usize;
    let cols = r.read_u64::<LittleEndian>()? as usize;
    let len = rows
        .checked_mul(cols)
        .filter(|&n| n <= isize::MAX as usize / 4)
        .ok_or_else(|| Error::Format("matrix too large".into()))?;
    let mut data = vec![0.0f32; 0];
    // Read in chunks so a corrupt header cannot force a huge allocation up front.
    let mut remaining = len;
    let mut chunk = vec![0u8; 4 * 65536];
    while remaining > 0 {
        let n = remaining.min(65536);
        r.read_exact(&mut chunk[..4 * n])?;
        data.extend(
            chunk[..4 * n]
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]])),
        );
        remaining -= n;
    }
    Matrix::from_vec(rows, cols, data)
}

fn read_model<R: Read>(r: &mut R) -> Result<EmbeddingModel> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic, not a model file".into()));
    }
    let version = r.read_u8()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported model version {version}")));
    }
    let config = read_config(r)?;

    let n_words = r.read_u64::<LittleEndian>()? as usize;
    let total_tokens = r.read_u64::<LittleEndian>()?;
    let min_count = r.read_u64::<LittleEndian>()?;
    let mut words = Vec::with_capacity(n_words.min(1 << 20));
    for _ in 0..n_words {
        let len = r.read_u32::<LittleEndian>()? as usize;
        let mut bytes = vec![0u8; len.min(1 << 16)];
        if len > bytes.len() {
            return Err(Error::Format("token too long".into()));
        }
        r.read_exact(&mut bytes)?;
        let token = String::from_utf8(bytes).map_err(|_| Error::Format("token is not UTF-8".into()))?;
        let count = r.read_u64::<LittleEndian>()?;
        words.push(Word { token, count });
    }
    let vocab = Vocabulary::from_words(words, min_count, total_tokens)?;
    let input = read_matrix(r)?;
    let output = read_matrix(r)?;
    let paragraphs = match r.read_u8()? {
        0 => None,
        1 => Some(read_matrix(r)?),
        other => return Err(Error::Format(format!("bad flag byte {other}"))),
    };
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after model".into()));
    }
    let model = EmbeddingModel {
        config,
        vocab,
        input,
        output,
        paragraphs,
    };
    model.validate()?;
    Ok(model)
}
