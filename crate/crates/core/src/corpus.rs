//! Corpus preparation: sentence segmentation, tokenization, hyphen splitting,
//! long-line filtering, string-metric normalization and corpus statistics.
//!
//! The canonical on-disk corpus is UTF-8 with LF terminators, one sentence per
//! line and tokens joined by exactly one ASCII space.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");
const BUNDLED_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

/// Default line-length cut-off: lines must be strictly shorter than this.
pub const DEFAULT_MAX_LINE_CHARS: usize = 200;

/// Punctuation tokens removed before computing string metrics: full stop,
/// comma, colon, semicolon, question mark, exclamation mark, slash and the
/// three dash variants.
pub const METRIC_PUNCTUATION: [&str; 10] = [".", ",", ":", ";", "?", "!", "/", "-", "\u{2013}", "\u{2014}"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawDocument {
    pub doc_id: String,
    pub text: String,
}

impl RawDocument {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        RawDocument {
            doc_id: doc_id.into(),
            text: text.into(),
        }
    }
}

/// One tokenized sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SentenceLine {
    pub tokens: Vec<String>,
}

impl SentenceLine {
    pub fn new(tokens: Vec<String>) -> Self {
        SentenceLine { tokens }
    }

    /// Split a canonical corpus line on whitespace.
    pub fn from_canonical(line: &str) -> Self {
        SentenceLine {
            tokens: line.split_whitespace().map(str::to_string).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens joined by single spaces.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }

    /// Character length of [`SentenceLine::joined`], without allocating.
    pub fn char_len(&self) -> usize {
        if self.tokens.is_empty() {
            return 0;
        }
        self.tokens.iter().map(|t| t.chars().count()).sum::<usize>() + self.tokens.len() - 1
    }
}

impl<S: Into<String>> FromIterator<S> for SentenceLine {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        SentenceLine {
            tokens: iter.into_iter().map(Into::into).collect(),
        }
    }
}

/// Rule-based sentence splitter.
///
/// A boundary is placed after `.`, `?` or `!` (plus any closing quotes or
/// brackets) when followed by whitespace and then an uppercase letter or a
/// digit, unless the word ending in `.` is a known abbreviation. Blank lines
/// are hard boundaries.
#[derive(Clone, Debug)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Segmenter::with_abbreviations(parse_word_list(BUNDLED_ABBREVIATIONS))
    }
}

impl Segmenter {
    pub fn with_abbreviations(abbreviations: HashSet<String>) -> Self {
        Segmenter {
            abbreviations: abbreviations.into_iter().map(|a| a.to_lowercase()).collect(),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io_path(path, e))?;
        Ok(Segmenter::with_abbreviations(parse_word_list(&text)))
    }

    pub fn segment(&self, doc: &RawDocument) -> Vec<String> {
        let mut out = Vec::new();
        for block in split_blocks(&doc.text) {
            self.segment_block(block, &mut out);
        }
        out
    }

    fn segment_block(&self, text: &str, out: &mut Vec<String>) {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if !matches!(c, '.' | '?' | '!') {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < chars.len() && is_closing(chars[j].1) {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            let boundary = k > j
                && k < chars.len()
                && (chars[k].1.is_uppercase() || chars[k].1.is_ascii_digit())
                && !(c == '.' && self.is_abbreviation(text, pos));
            if boundary {
                let end = chars[j - 1].0 + chars[j - 1].1.len_utf8();
                push_collapsed(&text[start..end], out);
                start = end;
                i = k;
            } else {
                i += 1;
            }
        }
        push_collapsed(&text[start..], out);
    }

    /// Whether the whitespace-delimited word ending at the `.` at byte `dot` is
    /// an abbreviation.
    fn is_abbreviation(&self, text: &str, dot: usize) -> bool {
        let before = &text[..dot];
        let word_start = before
            .char_indices()
            .rev()
            .find(|(_, c)| c.is_whitespace() || matches!(c, '(' | '[' | '"'))
            .map(|(p, c)| p + c.len_utf8())
            .unwrap_or(0);
        let word = text[word_start..=dot].to_lowercase();
        self.abbreviations.contains(&word)
    }
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn split_blocks(text: &str) -> Vec<&str> {
    let mut blocks = Vec::new();
    let mut start = 0usize;
    let mut blank_run = false;
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() {
            if !blank_run {
                blocks.push(&text[start..offset]);
            }
            blank_run = true;
            start = offset + line.len();
        } else {
            blank_run = false;
        }
        offset += line.len();
    }
    blocks.push(&text[start..]);
    blocks
}

fn push_collapsed(segment: &str, out: &mut Vec<String>) {
    let collapsed = segment.split_whitespace().collect::<Vec<_>>().join(" ");
    if !collapsed.is_empty() {
        out.push(collapsed);
    }
}

/// Split a document into sentences with the bundled abbreviation list.
pub fn segment_sentences(doc: &RawDocument) -> Vec<String> {
    Segmenter::default().segment(doc)
}

/// Characters that always form a token of their own.
fn is_split_punct(c: char) -> bool {
    if c == '-' {
        return false;
    }
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2013}'
                | '\u{2014}'
                | '\u{2026}'
                | '\u{201c}'
                | '\u{201d}'
                | '\u{2018}'
                | '\u{2019}'
                | '\u{00ab}'
                | '\u{00bb}'
                | '\u{2022}'
                | '\u{00b7}'
                | '\u{2032}'
                | '\u{2033}'
                | '\u{00a1}'
                | '\u{00bf}'
        )
}

/// Lowercase and split a sentence into tokens.
///
/// Whitespace separates tokens, punctuation characters become tokens of their
/// own, hyphens stay inside words and a `.` or `,` between two digits stays
/// inside the number.
pub fn tokenize(sentence: &str) -> SentenceLine {
    let mut tokens = Vec::new();
    for chunk in sentence.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut current = String::new();
        for (i, &c) in chars.iter().enumerate() {
            let numeric_sep = matches!(c, '.' | ',')
                && i > 0
                && i + 1 < chars.len()
                && chars[i - 1].is_ascii_digit()
                && chars[i + 1].is_ascii_digit();
            if is_split_punct(c) && !numeric_sep {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current).to_lowercase());
                }
                tokens.push(c.to_string());
            } else {
                current.push(c);
            }
        }
        if !current.is_empty() {
            tokens.push(current.to_lowercase());
        }
    }
    SentenceLine { tokens }
}

fn has_interior_hyphen(token: &str) -> bool {
    let chars: Vec<char> = token.chars().collect();
    chars
        .windows(3)
        .any(|w| w[1] == '-' && w[0].is_alphanumeric() && w[2].is_alphanumeric())
}

/// Replace every compound token such as `anti-her2` by its hyphen-separated
/// parts. Leading and trailing hyphens of such tokens are dropped; tokens
/// without an interior hyphen are kept as they are.
pub fn split_hyphen_compounds(line: SentenceLine) -> SentenceLine {
    let mut tokens = Vec::with_capacity(line.tokens.len());
    for token in line.tokens {
        if has_interior_hyphen(&token) {
            tokens.extend(token.split('-').filter(|p| !p.is_empty()).map(str::to_string));
        } else {
            tokens.push(token);
        }
    }
    SentenceLine { tokens }
}

/// Keep lines whose joined length is strictly below `max_chars`.
pub fn filter_long_lines<I>(lines: I, max_chars: usize) -> impl Iterator<Item = SentenceLine>
where
    I: IntoIterator<Item = SentenceLine>,
{
    lines.into_iter().filter(move |l| l.char_len() < max_chars)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl Default for StopWords {
    fn default() -> Self {
        StopWords(parse_word_list(BUNDLED_STOPWORDS))
    }
}

impl StopWords {
    pub fn new(words: impl IntoIterator<Item = String>) -> Self {
        StopWords(words.into_iter().map(|w| w.to_lowercase()).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Drop stop words and the punctuation listed in [`METRIC_PUNCTUATION`].
pub fn normalize_for_string_metrics(line: &SentenceLine, stopwords: &StopWords) -> SentenceLine {
    line.tokens
        .iter()
        .filter(|t| !stopwords.contains(t) && !METRIC_PUNCTUATION.contains(&t.as_str()))
        .cloned()
        .collect()
}

fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusStats {
    pub n_sentences: u64,
    pub n_tokens: u64,
    pub n_unique_words: u64,
    pub avg_line_chars: f64,
    pub max_line_chars: u64,
}

impl CorpusStats {
    /// `metric<TAB>value` rows with a header line.
    pub fn to_tsv(&self) -> String {
        format!(
            "metric\tvalue\nn_sentences\t{}\nn_tokens\t{}\nn_unique_words\t{}\navg_line_chars\t{:.6}\nmax_line_chars\t{}\n",
            self.n_sentences, self.n_tokens, self.n_unique_words, self.avg_line_chars, self.max_line_chars
        )
    }
}

/// Partial statistics; merge is associative so shards can be aggregated in
/// any grouping.
#[derive(Clone, Debug, Default)]
pub struct StatsAccumulator {
    n_sentences: u64,
    n_tokens: u64,
    total_chars: u64,
    max_chars: u64,
    words: HashSet<String>,
}

impl StatsAccumulator {
    pub fn push(&mut self, line: &SentenceLine) {
        let chars = line.char_len() as u64;
        self.n_sentences += 1;
        self.n_tokens += line.len() as u64;
        self.total_chars += chars;
        self.max_chars = self.max_chars.max(chars);
        for t in &line.tokens {
            if !self.words.contains(t) {
                self.words.insert(t.clone());
            }
        }
    }

    pub fn merge(mut self, other: StatsAccumulator) -> StatsAccumulator {
        self.n_sentences += other.n_sentences;
        self.n_tokens += other.n_tokens;
        self.total_chars += other.total_chars;
        self.max_chars = self.max_chars.max(other.max_chars);
        self.words.extend(other.words);
        self
    }

    pub fn finish(&self) -> CorpusStats {
        let avg = if self.n_sentences == 0 {
            0.0
        } else {
            self.total_chars as f64 / self.n_sentences as f64
        };
        CorpusStats {
            n_sentences: self.n_sentences,
            n_tokens: self.n_tokens,
            n_unique_words: self.words.len() as u64,
            avg_line_chars: avg,
            max_line_chars: self.max_chars,
        }
    }
}

pub fn corpus_stats<'a, I>(lines: I) -> CorpusStats
where
    I: IntoIterator<Item = &'a SentenceLine>,
{
    let mut acc = StatsAccumulator::default();
    for line in lines {
        acc.push(line);
    }
    acc.finish()
}

/// Full preparation pipeline from raw documents to corpus lines.
#[derive(Clone, Debug)]
pub struct Preprocessor {
    pub segmenter: Segmenter,
    pub split_hyphens: bool,
    pub max_line_chars: usize,
}

impl Default for Preprocessor {
    fn default() -> Self {
        Preprocessor {
            segmenter: Segmenter::default(),
            split_hyphens: false,
            max_line_chars: DEFAULT_MAX_LINE_CHARS,
        }
    }
}

impl Preprocessor {
    pub fn process(&self, doc: &RawDocument) -> Vec<SentenceLine> {
        let lines = self.segmenter.segment(doc).into_iter().map(|s| {
            let line = tokenize(&s);
            if self.split_hyphens {
                split_hyphen_compounds(line)
            } else {
                line
            }
        });
        filter_long_lines(lines, self.max_line_chars)
            .filter(|l| !l.is_empty())
            .collect()
    }
}

/// Tokenization applied to benchmark sentences before embedding or scoring.
pub fn prepare_sentence(sentence: &str) -> SentenceLine {
    split_hyphen_compounds(tokenize(sentence))
}

/// All `.txt` files under `path` (or `path` itself if it is a file), sorted.
pub fn collect_documents(path: &Path) -> Result<Vec<RawDocument>> {
    let mut files = Vec::new();
    if path.is_dir() {
        walk_txt(path, &mut files)?;
        files.sort();
    } else {
        files.push(path.to_path_buf());
    }
    files
        .into_iter()
        .map(|f| {
            let text = fs::read_to_string(&f).map_err(|e| Error::io_path(&f, e))?;
            let id = f
                .strip_prefix(path)
                .ok()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or(&f)
                .to_string_lossy()
                .into_owned();
            Ok(RawDocument::new(id, text))
        })
        .collect()
}

fn walk_txt(dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir).map_err(|e| Error::io_path(dir, e))? {
        let p = entry?.path();
        if p.is_dir() {
            walk_txt(&p, files)?;
        } else if p.extension().is_some_and(|e| e == "txt") {
            files.push(p);
        }
    }
    Ok(())
}

pub fn read_corpus(path: &Path) -> Result<Vec<SentenceLine>> {
    let file = fs::File::open(path).map_err(|e| Error::io_path(path, e))?;
    let mut lines = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = SentenceLine::from_canonical(&line?);
        if !line.is_empty() {
            lines.push(line);
        }
    }
    Ok(lines)
}

pub fn write_corpus<'a, W, I>(out: &mut W, lines: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a SentenceLine>,
{
    for line in lines {
        out.write_all(line.joined().as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(tokens: &[&str]) -> SentenceLine {
        tokens.iter().copied().collect()
    }

    fn doc(text: &str) -> RawDocument {
        RawDocument::new("d", text)
    }

    #[test]
    fn segments_on_terminators() {
        assert_eq!(segment_sentences(&doc("A b. C d.")), vec!["A b.", "C d."]);
        assert!(segment_sentences(&doc("")).is_empty());
        assert_eq!(
            segment_sentences(&doc("No terminator here")),
            vec!["No terminator here"]
        );
    }

    #[test]
    fn segmenter_respects_abbreviations_and_lowercase() {
        let got = segment_sentences(&doc("As shown in Fig. 2 the rate rose. it was high! Then 3 fell."));
        assert_eq!(
            got,
            vec!["As shown in Fig. 2 the rate rose. it was high!", "Then 3 fell."]
        );
        let got = segment_sentences(&doc("Smith et al. Reported it (see e.g. Table 1)."));
        assert_eq!(got, vec!["Smith et al. Reported it (see e.g. Table 1)."]);
    }

    #[test]
    fn segmenter_blank_lines_and_closers() {
        let got = segment_sentences(&doc("Title line\n\n  \nHe said \"stop.\" Then left.\nnext"));
        assert_eq!(got, vec!["Title line", "He said \"stop.\"", "Then left. next"]);
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("Rip1 was reported to interact with rip3.").tokens,
            vec!["rip1", "was", "reported", "to", "interact", "with", "rip3", "."]
        );
        assert_eq!(tokenize("a,b").tokens, vec!["a", ",", "b"]);
        assert!(tokenize("   ").is_empty());
    }

    #[test]
    fn tokenize_keeps_hyphens_and_decimals() {
        assert_eq!(
            tokenize("The up-regulation (p<0.05) of miR-146a, 1,000 cells.").tokens,
            vec![
                "the",
                "up-regulation",
                "(",
                "p",
                "<",
                "0.05",
                ")",
                "of",
                "mir-146a",
                ",",
                "1,000",
                "cells",
                "."
            ]
        );
        assert_eq!(
            tokenize("don't \u{2014} stop").tokens,
            vec!["don", "'", "t", "\u{2014}", "stop"]
        );
    }

    #[test]
    fn hyphen_examples() {
        assert_eq!(
            split_hyphen_compounds(line(&["anti-her2", "therapy"])),
            line(&["anti", "her2", "therapy"])
        );
        assert_eq!(
            split_hyphen_compounds(line(&["up-regulated"])),
            line(&["up", "regulated"])
        );
        assert_eq!(split_hyphen_compounds(line(&["cancer"])), line(&["cancer"]));
        assert_eq!(
            split_hyphen_compounds(line(&["-a-b-", "-", "x-"])),
            line(&["a", "b", "-", "x-"])
        );
    }

    #[test]
    fn long_line_filter_boundary() {
        let l150 = line(&[&"x".repeat(150)]);
        let l200 = line(&[&"y".repeat(100), &"z".repeat(99)]);
        assert_eq!(l200.char_len(), 200);
        let kept: Vec<_> = filter_long_lines(vec![l150.clone(), l200], 200).collect();
        assert_eq!(kept, vec![l150]);
        assert_eq!(filter_long_lines(Vec::new(), 200).count(), 0);
    }

    #[test]
    fn normalization_examples() {
        let sw = StopWords::default();
        assert_eq!(sw.len(), 153);
        assert_eq!(
            normalize_for_string_metrics(&line(&["the", "expression", "of", "mir", "146a", "."]), &sw),
            line(&["expression", "mir", "146a"])
        );
        assert!(normalize_for_string_metrics(&line(&["."]), &sw).is_empty());
        assert_eq!(normalize_for_string_metrics(&line(&["kras"]), &sw), line(&["kras"]));
        assert!(normalize_for_string_metrics(&line(&["\u{2013}", "\u{2014}", "-", "/"]), &sw).is_empty());
    }

    #[test]
    fn stats_examples() {
        let s = corpus_stats(&[line(&["a", "b"]), line(&["a"])]);
        assert_eq!(
            (s.n_sentences, s.n_tokens, s.n_unique_words, s.max_line_chars),
            (2, 3, 2, 3)
        );
        assert_eq!(s.avg_line_chars, 2.0);
        assert_eq!(corpus_stats(&[]), CorpusStats::default());
    }

    #[test]
    fn stats_tsv_layout() {
        let s = corpus_stats(&[line(&["a", "b"])]);
        assert_eq!(
            s.to_tsv(),
            "metric\tvalue\nn_sentences\t1\nn_tokens\t2\nn_unique_words\t2\navg_line_chars\t3.000000\nmax_line_chars\t3\n"
        );
    }

    fn arb_line() -> impl Strategy<Value = SentenceLine> {
        prop::collection::vec("[a-c0-9-]{1,6}", 0..8).prop_map(SentenceLine::new)
    }

    proptest! {
        #[test]
        fn filter_is_idempotent(lines in prop::collection::vec(arb_line(), 0..20), max in 1usize..40) {
            let once: Vec<_> = filter_long_lines(lines, max).collect();
            let twice: Vec<_> = filter_long_lines(once.clone(), max).collect();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn hyphen_split_leaves_no_compounds(l in arb_line()) {
            let mass = |l: &SentenceLine| l.tokens.iter().flat_map(|t| t.chars()).filter(|&c| c != '-').count();
            let out = split_hyphen_compounds(l.clone());
            prop_assert!(out.tokens.iter().all(|t| !has_interior_hyphen(t) && !t.is_empty()));
            prop_assert_eq!(mass(&l), mass(&out));
        }

        #[test]
        fn tokenize_round_trip(s in "[A-Za-z0-9 .,;:!?()'\"/%-]{0,60}") {
            let first = tokenize(&s);
            prop_assert_eq!(tokenize(&first.joined()), first);
        }

        #[test]
        fn tokenize_round_trip_unicode(s in "\\PC{0,40}") {
            let first = tokenize(&s);
            prop_assert_eq!(tokenize(&first.joined()), first);
        }

        #[test]
        fn stats_scale_with_copies(lines in prop::collection::vec(arb_line(), 0..10), n in 1usize..5) {
            let base = corpus_stats(&lines);
            let copies: Vec<_> = std::iter::repeat_n(lines.iter(), n).flatten().cloned().collect();
            let s = corpus_stats(&copies);
            prop_assert_eq!(s.n_sentences, base.n_sentences * n as u64);
            prop_assert_eq!(s.n_tokens, base.n_tokens * n as u64);
            prop_assert_eq!(s.n_unique_words, base.n_unique_words);
        }

        #[test]
        fn stats_independent_of_partition(lines in prop::collection::vec(arb_line(), 0..20), cut in 0usize..20) {
            let cut = cut.min(lines.len());
            let mut a = StatsAccumulator::default();
            let mut b = StatsAccumulator::default();
            lines[..cut].iter().for_each(|l| a.push(l));
            lines[cut..].iter().for_each(|l| b.push(l));
            prop_assert_eq!(b.merge(a).finish(), corpus_stats(&lines));
        }

        #[test]
        fn segmentation_covers_input(s in "[A-Za-z0-9 .?!\n]{0,80}") {
            let sentences = segment_sentences(&doc(&s));
            let joined: String = sentences.concat().chars().filter(|c| !c.is_whitespace()).collect();
            let expected: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert!(sentences.iter().all(|x| !x.is_empty()));
            prop_assert_eq!(joined, expected);
        }
    }
}
