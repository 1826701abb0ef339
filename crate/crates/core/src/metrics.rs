//! Jaccard, q-gram and cosine similarity.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::corpus::SentenceLine;
use crate::error::{Error, Result};

pub const DEFAULT_Q: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Jaccard,
    Qgram,
    Cosine,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Jaccard => "jaccard",
            Metric::Qgram => "qgram",
            Metric::Cosine => "cosine",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "jaccard" => Ok(Metric::Jaccard),
            "qgram" => Ok(Metric::Qgram),
            "cosine" => Ok(Metric::Cosine),
            _ => Err(format!("unknown metric '{s}'; valid: cosine, jaccard, qgram")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityScore {
    pub value: f64,
    pub metric: Metric,
}

/// Size of the intersection over the size of the union of the unique tokens.
pub fn jaccard(a: &SentenceLine, b: &SentenceLine) -> Result<f64> {
    let sa: HashSet<&str> = a.tokens.iter().map(String::as_str).collect();
    let sb: HashSet<&str> = b.tokens.iter().map(String::as_str).collect();
    if sa.is_empty() && sb.is_empty() {
        return Err(Error::DegenerateInput("both token sets are empty"));
    }
    let shared = sa.intersection(&sb).count();
    let union = sa.len() + sb.len() - shared;
    Ok(shared as f64 / union as f64)
}

/// Character q-gram profile: q-gram → number of occurrences.
pub fn qgram_profile(s: &str, q: usize) -> HashMap<&str, usize> {
    let bounds: Vec<usize> = s
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(s.len()))
        .collect();
    let mut profile = HashMap::new();
    if q == 0 {
        return profile;
    }
    for w in bounds.windows(q + 1) {
        *profile.entry(&s[w[0]..w[q]]).or_insert(0) += 1;
    }
    profile
}

/// Matched q-grams (profile intersection) over the number of q-grams of `a`.
pub fn qgram_directional(a: &str, b: &str, q: usize) -> Result<f64> {
    if q == 0 {
        return Err(Error::DegenerateInput("q must be at least 1"));
    }
    let pa = qgram_profile(a, q);
    let total: usize = pa.values().sum();
    if total == 0 {
        return Err(Error::DegenerateInput("first string is shorter than q"));
    }
    let pb = qgram_profile(b, q);
    let shared: usize = pa.iter().map(|(g, &n)| n.min(pb.get(g).copied().unwrap_or(0))).sum();
    Ok(shared as f64 / total as f64)
}

/// Q-gram similarity; when `symmetric`, the mean of both directions.
pub fn qgram_similarity(a: &str, b: &str, q: usize, symmetric: bool) -> Result<f64> {
    if symmetric {
        Ok((qgram_directional(a, b, q)? + qgram_directional(b, a, q)?) / 2.0)
    } else {
        qgram_directional(a, b, q)
    }
}

/// `u·v / (‖u‖‖v‖)`, accumulated in double precision and clamped to [-1, 1].
pub fn cosine(u: &[f32], v: &[f32]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let (mut dot, mut nu, mut nv) = (0.0f64, 0.0f64, 0.0f64);
    for (&x, &y) in u.iter().zip(v) {
        let (x, y) = (f64::from(x), f64::from(y));
        dot += x * y;
        nu += x * x;
        nv += y * y;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let value = dot / (nu.sqrt() * nv.sqrt());
    if !value.is_finite() {
        return Err(Error::NonFiniteValue("cosine"));
    }
    Ok(value.clamp(-1.0, 1.0))
}
