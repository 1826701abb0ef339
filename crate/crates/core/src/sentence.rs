//! Sentence vectors: pooled word vectors, sent2vec composition and Paragraph
//! Vector inference.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::SentenceLine;
use crate::error::{Error, Result};
use crate::model::{Algorithm, EmbeddingModel, Matrix};
use crate::train::infer_paragraph;
use crate::vocab::{fnv1a, word_ngrams, NegativeSampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolMode {
    Min,
    Max,
    Sum,
    Avg,
}

impl PoolMode {
    pub fn name(self) -> &'static str {
        match self {
            PoolMode::Min => "min",
            PoolMode::Max => "max",
            PoolMode::Sum => "sum",
            PoolMode::Avg => "avg",
        }
    }
}

impl fmt::Display for PoolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PoolMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "min" => Ok(PoolMode::Min),
            "max" => Ok(PoolMode::Max),
            "sum" => Ok(PoolMode::Sum),
            "avg" => Ok(PoolMode::Avg),
            _ => Err(format!("unknown pooling '{s}'; valid: avg, min, max, sum")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorSource {
    Pooled,
    Sent2vec,
    PvDm,
    PvDbow,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SentenceVector {
    pub values: Vec<f32>,
    pub source: VectorSource,
}

/// Componentwise reduction of the composed vectors of every token the model
/// can represent.
pub fn pool_sentence(model: &EmbeddingModel, line: &SentenceLine, mode: PoolMode) -> Result<SentenceVector> {
    if !model.config.algo.is_word_model() {
        return Err(Error::UnsupportedModel(model.config.algo.name().into()));
    }
    let vectors: Vec<Vec<f32>> = line.tokens.iter().filter_map(|t| model.word_vector(t)).collect();
    if vectors.is_empty() {
        return Err(Error::NoRepresentableToken);
    }
    Ok(SentenceVector {
        values: pool(&vectors, mode),
        source: VectorSource::Pooled,
    })
}

pub(crate) fn pool(vectors: &[Vec<f32>], mode: PoolMode) -> Vec<f32> {
    let dim = vectors[0].len();
    (0..dim)
        .map(|k| {
            let column = vectors.iter().map(|v| v[k]);
            match mode {
                PoolMode::Min => column.fold(f32::INFINITY, f32::min),
                PoolMode::Max => column.fold(f32::NEG_INFINITY, f32::max),
                PoolMode::Sum => column.map(f64::from).sum::<f64>() as f32,
                PoolMode::Avg => (column.map(f64::from).sum::<f64>() / vectors.len() as f64) as f32,
            }
        })
        .collect()
}

/// Mean of the input rows of all in-vocabulary tokens and of their word
/// n-grams up to the model's order.
pub fn embed_sent2vec(model: &EmbeddingModel, line: &SentenceLine) -> Result<SentenceVector> {
    if model.config.algo != Algorithm::Sent2vec {
        return Err(Error::UnsupportedModel(model.config.algo.name().into()));
    }
    let known: Vec<&str> = line
        .tokens
        .iter()
        .filter(|t| model.vocab.id(t).is_some())
        .map(String::as_str)
        .collect();
    if known.is_empty() {
        return Err(Error::NoRepresentableToken);
    }
    let mut rows: Vec<usize> = known.iter().map(|t| model.vocab.id(t).unwrap() as usize).collect();
    if model.config.uses_word_ngrams() {
        let base = model.vocab.len();
        rows.extend(
            word_ngrams(&known, model.config.word_ngrams, model.config.bucket)
                .into_iter()
                .map(|h| base + h as usize),
        );
    }
    Ok(SentenceVector {
        values: mean_of_rows(&model.input, &rows),
        source: VectorSource::Sent2vec,
    })
}

fn mean_of_rows(m: &Matrix, rows: &[usize]) -> Vec<f32> {
    let mut acc = vec![0.0f64; m.cols()];
    for &r in rows {
        acc.iter_mut().zip(m.row(r)).for_each(|(a, &x)| *a += f64::from(x));
    }
    acc.into_iter().map(|a| (a / rows.len() as f64) as f32).collect()
}

/// Paragraph-vector inference with frozen word and output tables.
#[derive(Clone, Debug)]
pub struct PvInference<'m> {
    model: &'m EmbeddingModel,
    sampler: NegativeSampler,
}

impl<'m> PvInference<'m> {
    pub fn new(model: &'m EmbeddingModel) -> Result<Self> {
        if !model.config.algo.is_paragraph_model() {
            return Err(Error::UnsupportedModel(model.config.algo.name().into()));
        }
        let sampler = NegativeSampler::new(&model.vocab, model.config.neg_exponent)?;
        Ok(PvInference { model, sampler })
    }

    /// Default number of inference passes: twice the training epochs.
    pub fn default_epochs(&self) -> usize {
        2 * self.model.config.epochs
    }

    fn rng_for(&self, line: &SentenceLine) -> ChaCha8Rng {
        let h = u64::from(fnv1a(line.joined().as_bytes()));
        ChaCha8Rng::seed_from_u64(self.model.config.seed.rotate_left(32) ^ h)
    }

    pub fn infer(&self, line: &SentenceLine, epochs: usize) -> Result<SentenceVector> {
        let ids = self.model.vocab.encode(line);
        if ids.is_empty() {
            return Err(Error::NoRepresentableToken);
        }
        let mut rng = self.rng_for(line);
        let init = Matrix::uniform(1, self.model.dim(), &mut rng).row(0).to_vec();
        let values = infer_paragraph(self.model, &self.sampler, &ids, init, epochs, &mut rng)?;
        let source = if self.model.config.algo == Algorithm::PvDm {
            VectorSource::PvDm
        } else {
            VectorSource::PvDbow
        };
        Ok(SentenceVector { values, source })
    }
}

pub fn infer_pv(model: &EmbeddingModel, line: &SentenceLine, infer_epochs: usize) -> Result<SentenceVector> {
    PvInference::new(model)?.infer(line, infer_epochs)
}

/// Embeds sentences with whatever method fits the model: pooling for word
/// models, composition for sent2vec, inference for Paragraph Vector.
#[derive(Clone, Debug)]
pub struct SentenceEncoder<'m> {
    model: &'m EmbeddingModel,
    pool: PoolMode,
    infer_epochs: usize,
    pv: Option<PvInference<'m>>,
}

impl<'m> SentenceEncoder<'m> {
    pub fn new(model: &'m EmbeddingModel, pool: PoolMode, infer_epochs: Option<usize>) -> Result<Self> {
        let pv = if model.config.algo.is_paragraph_model() {
            Some(PvInference::new(model)?)
        } else {
            None
        };
        let infer_epochs = infer_epochs.unwrap_or(2 * model.config.epochs);
        Ok(SentenceEncoder {
            model,
            pool,
            infer_epochs,
            pv,
        })
    }

    pub fn model(&self) -> &EmbeddingModel {
        self.model
    }

    pub fn encode(&self, line: &SentenceLine) -> Result<SentenceVector> {
        match (&self.pv, self.model.config.algo) {
            (Some(pv), _) => pv.infer(line, self.infer_epochs),
            (None, Algorithm::Sent2vec) => embed_sent2vec(self.model, line),
            _ => pool_sentence(self.model, line, self.pool),
        }
    }
}
