//! Word inventory, frequent-word subsampling, the negative-sampling table and
//! the hashed subword / word n-gram feature space.

use std::collections::HashMap;

use rand::Rng;

use crate::corpus::SentenceLine;
use crate::error::{Error, Result};

pub const DEFAULT_BUCKET: usize = 2_000_000;
pub const DEFAULT_MINN: usize = 3;
pub const DEFAULT_MAXN: usize = 6;
pub const DEFAULT_NEG_EXPONENT: f64 = 0.75;

const FNV_OFFSET: u32 = 0x811c_9dc5;
const FNV_PRIME: u32 = 0x0100_0193;

/// Streaming 32-bit FNV-1a.
#[derive(Clone, Copy, Debug)]
pub struct Fnv1a(u32);

impl Default for Fnv1a {
    fn default() -> Self {
        Fnv1a(FNV_OFFSET)
    }
}

impl Fnv1a {
    pub fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u32::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    pub fn finish(self) -> u32 {
        self.0
    }
}

pub fn fnv1a(bytes: &[u8]) -> u32 {
    let mut h = Fnv1a::default();
    h.write(bytes);
    h.finish()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub token: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vocabulary {
    words: Vec<Word>,
    index: HashMap<String, u32>,
    min_count: u64,
    total_tokens: u64,
}

impl Vocabulary {
    /// Count tokens and keep those occurring at least `min_count` times.
    /// Ids are assigned by descending count, ties broken lexicographically.
    pub fn build<'a, I>(corpus: I, min_count: u64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a SentenceLine>,
    {
        if min_count == 0 {
            return Err(Error::InvalidConfig("min_count must be at least 1".into()));
        }
        let mut counts: HashMap<&str, u64> = HashMap::new();
        let mut total = 0u64;
        for line in corpus {
            for token in &line.tokens {
                *counts.entry(token.as_str()).or_default() += 1;
                total += 1;
            }
        }
        let words = counts
            .into_iter()
            .filter(|&(_, c)| c >= min_count)
            .map(|(t, c)| Word {
                token: t.to_string(),
                count: c,
            })
            .collect();
        Vocabulary::from_words(words, min_count, total)
    }

    /// Assemble a vocabulary from already counted words.
    pub fn from_words(mut words: Vec<Word>, min_count: u64, total_tokens: u64) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptyVocabulary {
                min_count: min_count as usize,
            });
        }
        words.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.token.cmp(&b.token)));
        let index: HashMap<String, u32> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.token.clone(), i as u32))
            .collect();
        if index.len() != words.len() {
            return Err(Error::Format("duplicate vocabulary entry".into()));
        }
        Ok(Vocabulary {
            words,
            index,
            min_count,
            total_tokens,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn word(&self, id: u32) -> &Word {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// In-vocabulary ids of a line; unknown tokens are dropped.
    pub fn encode(&self, line: &SentenceLine) -> Vec<u32> {
        line.tokens.iter().filter_map(|t| self.id(t)).collect()
    }

    /// Discard probability of every word for threshold `t`; all zeros when
    /// `t` is 0 (subsampling disabled).
    pub fn discard_probabilities(&self, t: f64) -> Vec<f64> {
        if t <= 0.0 || self.total_tokens == 0 {
            return vec![0.0; self.words.len()];
        }
        let total = self.total_tokens as f64;
        self.words
            .iter()
            .map(|w| discard_probability(w.count as f64 / total, t))
            .collect()
    }
}

/// `max(0, 1 - sqrt(t / f))` for relative word frequency `f`.
pub fn discard_probability(freq: f64, t: f64) -> f64 {
    (1.0 - (t / freq).sqrt()).max(0.0)
}

/// Hashed ids of the character n-grams of `<word>` with lengths `minn..=maxn`.
pub fn subword_ngrams(word: &str, minn: usize, maxn: usize, bucket: usize) -> Vec<u32> {
    if minn == 0 || maxn < minn || bucket == 0 {
        return Vec::new();
    }
    let wrapped: Vec<char> = std::iter::once('<')
        .chain(word.chars())
        .chain(std::iter::once('>'))
        .collect();
    let mut out = Vec::new();
    let mut buf = [0u8; 4];
    for n in minn..=maxn.min(wrapped.len()) {
        for window in wrapped.windows(n) {
            let mut h = Fnv1a::default();
            for c in window {
                h.write(c.encode_utf8(&mut buf).as_bytes());
            }
            out.push(h.finish() % bucket as u32);
        }
    }
    out
}

/// Hashed ids of every contiguous k-gram of `tokens`, for `k` in `2..=n`.
/// The hash is FNV-1a of the k tokens joined by single spaces.
pub fn word_ngrams<S: AsRef<str>>(tokens: &[S], n: usize, bucket: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if bucket == 0 {
        return out;
    }
    for k in 2..=n {
        for window in tokens.windows(k) {
            out.push(hash_token_window(window) % bucket as u32);
        }
    }
    out
}

pub(crate) fn hash_token_window<S: AsRef<str>>(window: &[S]) -> u32 {
    let mut h = Fnv1a::default();
    for (i, t) in window.iter().enumerate() {
        if i > 0 {
            h.write(b" ");
        }
        h.write(t.as_ref().as_bytes());
    }
    h.finish()
}

/// Unigram table raised to a power, sampled by inverse CDF.
#[derive(Clone, Debug)]
pub struct NegativeSampler {
    cumulative: Vec<f64>,
}

impl NegativeSampler {
    pub fn new(vocab: &Vocabulary, exponent: f64) -> Result<Self> {
        let counts: Vec<u64> = vocab.words().iter().map(|w| w.count).collect();
        NegativeSampler::from_counts(&counts, exponent)
    }

    pub fn from_counts(counts: &[u64], exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "negative-sampling exponent {exponent} outside (0, 1]"
            )));
        }
        if counts.is_empty() || counts.contains(&0) {
            return Err(Error::InvalidConfig("negative sampler needs positive counts".into()));
        }
        let mut acc = 0.0;
        let cumulative = counts
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(exponent);
                acc
            })
            .collect();
        Ok(NegativeSampler { cumulative })
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    /// Probability of drawing `id`.
    pub fn probability(&self, id: usize) -> f64 {
        let total = *self.cumulative.last().unwrap();
        let lo = if id == 0 { 0.0 } else { self.cumulative[id - 1] };
        (self.cumulative[id] - lo) / total
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let total = *self.cumulative.last().unwrap();
        let u = rng.random::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        idx.min(self.cumulative.len() - 1) as u32
    }
}
