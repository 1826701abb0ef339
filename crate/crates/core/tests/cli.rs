mod common;

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use common::cli::*;
use common::{chain_corpus, two_topic_corpus};
use sentsim::EmbeddingModel;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn preprocess_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("corpus.txt");
    let r = sentsim(&[
        "preprocess",
        "--input",
        s(&fixture("pipeline/raw.txt")),
        "--output",
        s(&out),
        "--split-hyphens",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let expected = fs::read_to_string(fixture("pipeline/expected.txt")).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), expected);

    let r = sentsim(&["stats", "--corpus", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        fs::read_to_string(fixture("pipeline/expected_stats.tsv")).unwrap()
    );
}

#[test]
fn preprocess_reads_directories_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("docs");
    fs::create_dir_all(docs.join("sub")).unwrap();
    fs::write(docs.join("b.txt"), "Second file. It has two sentences.\n").unwrap();
    fs::write(docs.join("a.txt"), "First file.\n").unwrap();
    fs::write(docs.join("sub/c.txt"), "Nested file.\n").unwrap();
    fs::write(docs.join("notes.md"), "Ignored.\n").unwrap();
    let out = dir.path().join("corpus.txt");
    let r = sentsim(&["preprocess", "--input", s(&docs), "--output", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "first file .\nsecond file .\nit has two sentences .\nnested file .\n"
    );
}

#[test]
fn train_is_byte_identical_with_one_worker() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.txt");
    write_corpus(&corpus, &two_topic_corpus(300, 8).0);
    for algo in ["cbow", "skipgram", "sent2vec", "pv-dm", "pv-dbow"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{algo}-{run}.bin"));
            let r = sentsim(&[
                "train",
                "--algo",
                algo,
                "--corpus",
                s(&corpus),
                "--out",
                s(&out),
                "--dim",
                "8",
                "--bucket",
                "5000",
                "--word-ngrams",
                "2",
                "--workers",
                "1",
                "--seed",
                "42",
            ]);
            assert_eq!(r.code, 0, "{algo}: {}", r.stderr);
            outputs.push(fs::read(&out).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{algo}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let r = sentsim(&["train", "--algo", "bogus", "--corpus", "c", "--out", "m"]);
    assert_eq!(r.code, 2);
    for name in ["cbow", "skipgram", "sent2vec", "pv-dm", "pv-dbow"] {
        assert!(r.stderr.contains(name), "{}", r.stderr);
    }

    let r = sentsim(&["stats", "--corpus", "c", "--frobnicate"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--frobnicate"), "{}", r.stderr);

    let r = sentsim(&["train", "--algo", "cbow", "--corpus", "c", "--out", "m", "--dim", "0"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--dim"), "{}", r.stderr);

    let r = sentsim(&["embed", "--model", "m"]);
    assert_eq!(r.code, 2);

    let r = sentsim(&["similarity", "--pairs", "p.tsv", "--metric", "cosine"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--model"), "{}", r.stderr);

    let r = sentsim::<&str>(&[]);
    assert_eq!(r.code, 2);
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let r = sentsim(&["stats", "--corpus", s(&missing)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error:"), "{}", r.stderr);
    assert!(!r.stderr.contains("panicked"));

    let garbage = dir.path().join("garbage.bin");
    fs::write(&garbage, b"SEMB\x01\x02").unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "a sentence\n").unwrap();
    let r = sentsim(&[
        "embed",
        "--model",
        s(&garbage),
        "--input",
        s(&input),
        "--out",
        s(&dir.path().join("o")),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("format"), "{}", r.stderr);

    let corpus = dir.path().join("rare.txt");
    fs::write(&corpus, "once only\n").unwrap();
    let r = sentsim(&[
        "train",
        "--algo",
        "cbow",
        "--corpus",
        s(&corpus),
        "--out",
        s(&dir.path().join("m")),
    ]);
    assert_eq!(r.code, 1);
}

#[test]
fn help_and_version_exit_zero() {
    for sub in [
        "preprocess",
        "stats",
        "train",
        "embed",
        "similarity",
        "evaluate",
        "contradiction",
    ] {
        let r = sentsim(&[sub, "--help"]);
        assert_eq!(r.code, 0, "{sub}");
    }
    assert_eq!(sentsim(&["--version"]).code, 0);
}

/// `--flag` → text of its `[default: …]` annotation, from `--help` output.
fn help_defaults(help: &str) -> HashMap<String, String> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for line in help.lines() {
        let t = line.trim_start();
        if let Some(rest) = t.strip_prefix("--") {
            let name: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '-').collect();
            entries.push((name, t.to_string()));
        } else if let Some(last) = entries.last_mut() {
            last.1.push(' ');
            last.1.push_str(t);
        }
    }
    entries
        .into_iter()
        .filter_map(|(name, text)| {
            let start = text.find("[default: ")? + "[default: ".len();
            let end = start + text[start..].find(']')?;
            Some((name, text[start..end].to_string()))
        })
        .collect()
}

#[test]
fn help_lists_every_flag() {
    let grammar: [(&str, &[&str]); 7] = [
        (
            "preprocess",
            &["input", "output", "max-line-chars", "split-hyphens", "abbrev"],
        ),
        ("stats", &["corpus"]),
        (
            "train",
            &[
                "algo",
                "corpus",
                "out",
                "dim",
                "window",
                "epochs",
                "min-count",
                "neg",
                "lr",
                "sample",
                "word-ngrams",
                "dropout-k",
                "bucket",
                "minn",
                "maxn",
                "pv-combine",
                "seed",
                "workers",
            ],
        ),
        ("embed", &["model", "input", "pool", "infer-epochs", "out"]),
        ("similarity", &["pairs", "metric", "model", "q", "directional"]),
        (
            "evaluate",
            &["benchmark", "features", "external", "mode", "model", "json"],
        ),
        ("contradiction", &["subsets", "model", "json"]),
    ];
    for (sub, flags) in grammar {
        let help = sentsim(&[sub, "--help"]).stdout;
        for f in flags {
            assert!(help.contains(&format!("--{f}")), "{sub} --{f}");
        }
    }
    let embed = help_defaults(&sentsim(&["embed", "--help"]).stdout);
    assert_eq!(embed["pool"], "avg");
    assert!(embed["infer-epochs"].contains("2 x training epochs"));
    let sim = help_defaults(&sentsim(&["similarity", "--help"]).stdout);
    assert_eq!(sim["metric"], "cosine");
    assert_eq!(sim["q"], "3");
    let pre = help_defaults(&sentsim(&["preprocess", "--help"]).stdout);
    assert_eq!(pre["max-line-chars"], "200");
    let eval = help_defaults(&sentsim(&["evaluate", "--help"]).stdout);
    assert_eq!(eval["mode"], "single");
}

#[test]
fn documented_train_defaults_are_the_executed_defaults() {
    let help = sentsim(&["train", "--help"]).stdout;
    let defaults = help_defaults(&help);
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.txt");
    write_corpus(&corpus, &chain_corpus(200, 1));

    for algo in ["pv-dbow", "pv-dm", "sent2vec"] {
        let out = dir.path().join(format!("{algo}.bin"));
        let r = sentsim(&["train", "--algo", algo, "--corpus", s(&corpus), "--out", s(&out)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let c = EmbeddingModel::load(&out).unwrap().config;
        let num = |flag: &str| -> f64 {
            defaults[flag]
                .split([' ', ','])
                .next()
                .unwrap()
                .parse()
                .unwrap_or_else(|_| panic!("--{flag}"))
        };
        assert_eq!(c.dim as f64, num("dim"));
        assert_eq!(c.window as f64, num("window"));
        assert_eq!(c.epochs as f64, num("epochs"));
        assert_eq!(c.min_count as f64, num("min-count"));
        assert_eq!(c.negatives as f64, num("neg"));
        assert_eq!(c.lr0, num("lr") as f32);
        assert_eq!(c.sample_t, num("sample"));
        assert_eq!(c.word_ngrams as f64, num("word-ngrams"));
        assert_eq!(c.dropout_k as f64, num("dropout-k"));
        assert_eq!(c.bucket as f64, num("bucket"));
        assert_eq!(c.minn as f64, num("minn"));
        assert_eq!(c.maxn as f64, num("maxn"));
        assert_eq!(c.seed as f64, num("seed"));
        assert_eq!(format!("{:?}", c.pv_combine).to_lowercase(), defaults["pv-combine"]);
        assert_eq!(defaults["workers"], "available parallelism");
        assert_eq!(c.workers, std::thread::available_parallelism().unwrap().get());
    }
    assert!(defaults["lr"].contains("0.025 for skipgram"));
}

#[test]
fn embed_writes_one_row_per_representable_line() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = dir.path().join("vectors.txt");
    write_vectors(&vectors);
    let input = dir.path().join("in.txt");
    fs::write(&input, "Drug works.\nunknown words only\nNot harms\n").unwrap();
    let out = dir.path().join("out.tsv");
    let r = sentsim(&["embed", "--model", s(&vectors), "--input", s(&input), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.contains("line 2"));
    assert_eq!(fs::read_to_string(&out).unwrap(), "1\t0.9 0.3\n3\t-0.4 0.2\n");

    let r = sentsim(&[
        "embed",
        "--model",
        s(&vectors),
        "--input",
        s(&input),
        "--out",
        s(&out),
        "--pool",
        "max",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), "1\t1 0.6\n3\t0 1\n");
}

#[test]
fn similarity_scores_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.tsv");
    fs::write(
        &pairs,
        "pair_id\tsentence1\tsentence2\np1\tCell growth rate\tcell growth\np2\tthe of\tand a\np3\tdrug works\tdrug fails\n",
    )
    .unwrap();
    let r = sentsim(&["similarity", "--pairs", s(&pairs), "--metric", "jaccard"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "pair_id\tmetric\tvalue\np1\tjaccard\t0.666667\np3\tjaccard\t0.333333\n"
    );
    assert!(r.stderr.contains("p2"));

    let vectors = dir.path().join("vectors.txt");
    write_vectors(&vectors);
    let r = sentsim(&["similarity", "--pairs", s(&pairs), "--model", s(&vectors)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let want = reference_similarity("drug works", "drug fails");
    let line = r.stdout.lines().find(|l| l.starts_with("p3")).unwrap();
    let got: f64 = line.split('\t').nth(2).unwrap().parse().unwrap();
    assert!((got - want).abs() < 1e-6);

    let r = sentsim(&["similarity", "--pairs", s(&pairs), "--metric", "qgram", "--q", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.lines().any(|l| l.starts_with("p1\tqgram\t")));
}

#[test]
fn evaluate_ols_loo_on_synthetic_benchmark() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = train_topic_model(dir.path());
    let model = EmbeddingModel::load(&model_path).unwrap();
    let bench = synthetic_benchmark(dir.path(), &model);
    let spec = format!("cbow={}", s(&model_path));
    let r = sentsim(&[
        "evaluate",
        "--benchmark",
        s(&bench),
        "--mode",
        "ols-loo",
        "--features",
        "jaccard,cbow",
        "--model",
        &spec,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("name\tn\tpearson\tspearman"));
    let row: Vec<&str> = lines.next().unwrap().split('\t').collect();
    assert_eq!(row[0], "ols-loo");
    assert_eq!(row[1], "20");
    let pearson: f64 = row[2].parse().unwrap();
    assert!(pearson >= 0.9, "{pearson}");

    let r = sentsim(&[
        "evaluate",
        "--benchmark",
        s(&bench),
        "--mode",
        "ols-insample",
        "--model",
        s(&model_path),
        "--json",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["features"], serde_json::json!(["jaccard", "qgram", "cbow"]));
    assert_eq!(v["fusion"]["coefficients"].as_array().unwrap().len(), 3);

    let r = sentsim(&["evaluate", "--benchmark", s(&bench), "--features", "jaccard,nope"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("nope"));

    let r = sentsim(&[
        "evaluate",
        "--benchmark",
        s(&bench),
        "--mode",
        "mean",
        "--features",
        "jaccard,qgram",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().count(), 2);
}

#[test]
fn contradiction_report_matches_hand_computed_means() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = dir.path().join("vectors.txt");
    write_vectors(&vectors);
    let (subsets, expected) = contradiction_fixture(dir.path());
    let r = sentsim(&["contradiction", "--subsets", s(&subsets), "--model", s(&vectors)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("subset\tn\tmean_similarity\n"));
    let got = parse_report(&r.stdout);
    assert_eq!(got.len(), 3);
    for ((gl, gn, gm), (el, en, em)) in got.iter().zip(&expected) {
        assert_eq!(gl, el);
        assert_eq!(gn, en);
        assert!((gm - em).abs() <= 1e-6, "{gl}: {gm} vs {em}");
    }
    let ns: Vec<usize> = got.iter().map(|r| r.1).collect();
    assert_eq!(ns, [11, 13, 7]);

    let r = sentsim(&[
        "contradiction",
        "--subsets",
        s(&subsets),
        "--model",
        s(&vectors),
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v[1]["subset"], "negation");
    assert_eq!(v[1]["n"], 13);
}
