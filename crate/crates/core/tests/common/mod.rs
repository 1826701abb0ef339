#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sentsim::corpus::SentenceLine;
use sentsim::metrics::cosine;
use sentsim::{Algorithm, EmbeddingModel, TrainConfig};

pub const TOPIC_WORDS: usize = 20;

/// Tokens of topic `t`: disjoint between topics, no shared prefixes.
pub fn topic_vocabulary(t: usize) -> Vec<String> {
    let stems = ["kel", "mor"];
    (0..TOPIC_WORDS).map(|i| format!("{}{}", stems[t], i)).collect()
}

/// `per_topic` sentences of 6 to 10 tokens drawn from each of two disjoint
/// 20-word vocabularies, interleaved. Returns the corpus and topic labels.
pub fn two_topic_corpus(per_topic: usize, seed: u64) -> (Vec<SentenceLine>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocabs = [topic_vocabulary(0), topic_vocabulary(1)];
    let mut lines = Vec::with_capacity(2 * per_topic);
    let mut labels = Vec::with_capacity(2 * per_topic);
    for _ in 0..per_topic {
        for (t, vocab) in vocabs.iter().enumerate() {
            let len = rng.random_range(6..=10);
            lines.push((0..len).map(|_| vocab.choose(&mut rng).unwrap().clone()).collect());
            labels.push(t);
        }
    }
    (lines, labels)
}

/// 200 sentences of 12 tokens from a 600-word vocabulary.
pub fn toy_corpus(seed: u64) -> Vec<SentenceLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab: Vec<String> = (0..600).map(|i| format!("w{i}")).collect();
    (0..200)
        .map(|_| (0..12).map(|_| vocab.choose(&mut rng).unwrap().clone()).collect())
        .collect()
}

/// `n` sentences of 10 tokens from a 50-word chain in which each word is
/// followed by its successor nine times out of ten.
pub fn chain_corpus(n: usize, seed: u64) -> Vec<SentenceLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut w: usize = rng.random_range(0..50);
            (0..10)
                .map(|_| {
                    let tok = format!("c{w}");
                    w = if rng.random_bool(0.9) {
                        (w + 1) % 50
                    } else {
                        rng.random_range(0..50)
                    };
                    tok
                })
                .collect()
        })
        .collect()
}

pub fn sanity_config(algo: Algorithm) -> TrainConfig {
    let mut c = TrainConfig::new(algo);
    c.dim = 16;
    c.epochs = 5;
    c.min_count = 1;
    c.sample_t = 0.0;
    c.bucket = 10_000;
    c.workers = 1;
    c.seed = 7;
    c
}

/// Mean pairwise cosine within groups and across groups.
pub fn intra_inter(vectors: &[Vec<f32>], labels: &[usize]) -> (f64, f64) {
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let c = cosine(&vectors[i], &vectors[j]).unwrap();
            if labels[i] == labels[j] {
                intra += c;
                ni += 1;
            } else {
                inter += c;
                nx += 1;
            }
        }
    }
    (intra / ni as f64, inter / nx as f64)
}

/// Vectors whose topic separation is checked: word vectors for word and
/// sentence models, stored paragraph vectors (a sample) for Paragraph Vector.
pub fn topic_vectors(model: &EmbeddingModel, labels: &[usize]) -> (Vec<Vec<f32>>, Vec<usize>) {
    if let Some(p) = &model.paragraphs {
        let mut idx: Vec<usize> = Vec::new();
        for t in 0..2 {
            idx.extend((0..p.rows()).filter(|&i| labels[i] == t).take(100));
        }
        (
            idx.iter().map(|&i| p.row(i).to_vec()).collect(),
            idx.iter().map(|&i| labels[i]).collect(),
        )
    } else {
        let mut vecs = Vec::new();
        let mut labs = Vec::new();
        for t in 0..2 {
            for w in topic_vocabulary(t) {
                vecs.push(model.word_vector(&w).expect("topic word in vocabulary"));
                labs.push(t);
            }
        }
        (vecs, labs)
    }
}

/// Mean, over sentences, of the fraction of other stored paragraph vectors
/// that the re-inferred vector scores below its own stored vector.
pub fn self_retrieval(model: &EmbeddingModel, corpus: &[SentenceLine]) -> f64 {
    let p = model.paragraphs.as_ref().expect("paragraph model");
    let inference = sentsim::sentence::PvInference::new(model).unwrap();
    let epochs = inference.default_epochs();
    let mut total = 0.0;
    for (i, line) in corpus.iter().enumerate() {
        let v = inference.infer(line, epochs).unwrap().values;
        let own = cosine(&v, p.row(i)).unwrap();
        let beaten = (0..p.rows())
            .filter(|&j| j != i && cosine(&v, p.row(j)).unwrap() < own)
            .count();
        total += beaten as f64 / (p.rows() - 1) as f64;
    }
    total / corpus.len() as f64
}

pub mod cli {
    use std::fmt::Write as _;
    use std::fs;
    use std::path::{Path, PathBuf};
    use std::process::Command;

    use rand::seq::IndexedRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use sentsim::eval::{CosineFeature, JaccardFeature, PairFeature, SentencePair};
    use sentsim::sentence::{PoolMode, SentenceEncoder};
    use sentsim::EmbeddingModel;

    pub struct Output {
        pub code: i32,
        pub stdout: String,
        pub stderr: String,
    }

    pub fn sentsim<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
        let out = Command::new(env!("CARGO_BIN_EXE_sentsim"))
            .args(args)
            .output()
            .expect("binary runs");
        Output {
            code: out.status.code().expect("exit code"),
            stdout: String::from_utf8(out.stdout).unwrap(),
            stderr: String::from_utf8(out.stderr).unwrap(),
        }
    }

    pub fn write_corpus(path: &Path, lines: &[sentsim::corpus::SentenceLine]) {
        let text: String = lines.iter().map(|l| l.joined() + "\n").collect();
        fs::write(path, text).unwrap();
    }

    /// Train a small CBOW model on the two-topic corpus through the binary.
    pub fn train_topic_model(dir: &Path) -> PathBuf {
        let corpus = dir.join("topics.txt");
        write_corpus(&corpus, &super::two_topic_corpus(1000, 21).0);
        let model = dir.join("cbow.bin");
        let out = sentsim(&[
            "train",
            "--algo",
            "cbow",
            "--corpus",
            corpus.to_str().unwrap(),
            "--out",
            model.to_str().unwrap(),
            "--dim",
            "16",
            "--min-count",
            "1",
            "--sample",
            "0",
            "--maxn",
            "0",
            "--workers",
            "1",
        ]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        model
    }

    /// 20 pairs whose gold score is `1.2 + 1.5·jaccard + 1.0·cosine` plus
    /// uniform noise in ±0.1. Writes the benchmark file and returns its path.
    pub fn synthetic_benchmark(dir: &Path, model: &EmbeddingModel) -> PathBuf {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let vocabs = [super::topic_vocabulary(0), super::topic_vocabulary(1)];
        let jaccard = JaccardFeature::default();
        let cosine = CosineFeature {
            name: "cbow".into(),
            encoder: SentenceEncoder::new(model, PoolMode::Avg, None).unwrap(),
        };
        let mut text = String::from("pair_id\tsentence1\tsentence2\tscore\n");
        for i in 0..20 {
            let t1 = rng.random_range(0..2);
            let t2 = if rng.random_bool(0.5) { t1 } else { 1 - t1 };
            let s1: Vec<&String> = (0..8).map(|_| vocabs[t1].choose(&mut rng).unwrap()).collect();
            let keep = rng.random_range(0..=8);
            let s2: Vec<&String> = s1[..keep]
                .iter()
                .copied()
                .chain((keep..8).map(|_| vocabs[t2].choose(&mut rng).unwrap()))
                .collect();
            let pair = SentencePair {
                pair_id: format!("p{i:02}"),
                sentence1: s1.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "),
                sentence2: s2.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "),
            };
            let j = jaccard.score(&pair).unwrap();
            let c = cosine.score(&pair).unwrap();
            let gold = (1.2 + 1.5 * j + 1.0 * c + rng.random_range(-0.1..0.1)).clamp(0.0, 4.0);
            writeln!(
                text,
                "{}\t{}\t{}\t{gold:.4}",
                pair.pair_id, pair.sentence1, pair.sentence2
            )
            .unwrap();
        }
        let path = dir.join("benchmark.tsv");
        fs::write(&path, text).unwrap();
        path
    }

    /// Hand-specified two-dimensional word vectors.
    pub const VECTORS: [(&str, [f64; 2]); 8] = [
        ("drug", [1.0, 0.0]),
        ("works", [0.8, 0.6]),
        ("fails", [-0.6, 0.8]),
        ("not", [0.0, 1.0]),
        ("never", [-1.0, 0.25]),
        ("helps", [0.6, 0.8]),
        ("harms", [-0.8, -0.6]),
        ("patients", [0.5, 0.5]),
    ];

    pub fn write_vectors(path: &Path) {
        let mut text = format!("{} 2\n", VECTORS.len());
        for (w, v) in VECTORS {
            writeln!(text, "{w} {} {}", v[0], v[1]).unwrap();
        }
        fs::write(path, text).unwrap();
    }

    fn sentence_vector(s: &str) -> [f64; 2] {
        let mut acc = [0.0; 2];
        let words: Vec<&str> = s.split(' ').collect();
        for w in &words {
            let v = VECTORS.iter().find(|(t, _)| t == w).unwrap().1;
            acc[0] += v[0];
            acc[1] += v[1];
        }
        [acc[0] / words.len() as f64, acc[1] / words.len() as f64]
    }

    /// Cosine of averaged word vectors, computed independently of the crate.
    pub fn reference_similarity(a: &str, b: &str) -> f64 {
        let (u, v) = (sentence_vector(a), sentence_vector(b));
        (u[0] * v[0] + u[1] * v[1]) / ((u[0] * u[0] + u[1] * u[1]).sqrt() * (v[0] * v[0] + v[1] * v[1]).sqrt())
    }

    /// Subsets of 11 similar, 13 negation and 7 antonym pairs, shuffled into
    /// one file. Returns the path and the expected (subset, n, mean) rows.
    pub fn contradiction_fixture(dir: &Path) -> (PathBuf, Vec<(String, usize, f64)>) {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let words: Vec<&str> = VECTORS.iter().map(|(w, _)| *w).collect();
        let mut rows = Vec::new();
        let mut expected = Vec::new();
        for (label, n) in [("similar", 11), ("negation", 13), ("antonym", 7)] {
            let mut sum = 0.0;
            for i in 0..n {
                let mut sentence = || {
                    let len = rng.random_range(2..=5);
                    (0..len)
                        .map(|_| *words.choose(&mut rng).unwrap())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let norm = |s: &str| sentence_vector(s).iter().map(|x| x * x).sum::<f64>().sqrt();
                let (a, b) = loop {
                    let (a, b) = (sentence(), sentence());
                    if norm(&a) > 0.1 && norm(&b) > 0.1 {
                        break (a, b);
                    }
                };
                sum += reference_similarity(&a, &b);
                rows.push(format!("{label}{i}\t{label}\t{a}\t{b}"));
            }
            expected.push((label.to_string(), n, sum / n as f64));
        }
        let mut shuffled = rows.clone();
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut rng);
        let path = dir.join("contradiction.tsv");
        fs::write(
            &path,
            format!("pair_id\tsubset\tsentence1\tsentence2\n{}\n", shuffled.join("\n")),
        )
        .unwrap();
        (path, expected)
    }

    /// Parse `subset n mean` rows from contradiction output.
    pub fn parse_report(stdout: &str) -> Vec<(String, usize, f64)> {
        stdout
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split('\t').collect();
                (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap())
            })
            .collect()
    }
}
