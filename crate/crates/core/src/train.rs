//! Negative-sampling SGD for CBOW, skip-gram, sent2vec and Paragraph Vector.
//!
//! Every objective reduces to the same step: a hidden vector `h` (a mean or
//! concatenation of input rows) is scored against one positive and several
//! sampled negative output rows with the logistic loss
//! `-log σ(u⁺·h) - Σ log σ(-u⁻·h)`.
//!
//! With more than one worker the tables are updated without locks; workers
//! own disjoint corpus shards and races between their writes are tolerated.
//! A single worker is bitwise reproducible.

use std::marker::PhantomData;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::SentenceLine;
use crate::error::{Error, Result};
use crate::model::{Algorithm, EmbeddingModel, Matrix, PvCombine, TrainConfig};
use crate::vocab::{hash_token_window, subword_ngrams, NegativeSampler, Vocabulary};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    /// Mean loss per negative-sampling step, one entry per epoch.
    pub epoch_losses: Vec<f64>,
    /// Number of negative-sampling steps taken over all epochs.
    pub steps: u64,
}

#[inline]
fn sigmoid<F: Float>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus<F: Float>(x: F) -> F {
    x.max(F::zero()) + (-x.abs()).exp().ln_1p()
}

#[inline]
fn dot<F: Float>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Negative-sampling loss `-log σ(u⁺·v) - Σ log σ(-u⁻·v)`.
pub fn ns_loss<F: Float>(center: &[F], positive: &[F], negatives: &[Vec<F>]) -> F {
    let mut loss = softplus(-dot(positive, center));
    for u in negatives {
        loss = loss + softplus(dot(u, center));
    }
    loss
}

/// One SGD step on [`ns_loss`] for all vectors at once. Returns the loss
/// before the update.
pub fn ns_step<F: Float>(center: &mut [F], positive: &mut [F], negatives: &mut [Vec<F>], lr: F) -> Result<F> {
    let dim = center.len();
    for u in std::iter::once(&*positive).chain(negatives.iter().map(|n| n.as_slice())) {
        if u.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: u.len(),
            });
        }
    }
    let mut grad_center = vec![F::zero(); dim];
    let mut loss = F::zero();

    let mut score = |u: &mut [F], label: F, grad_center: &mut [F]| -> Result<()> {
        let d = dot(u, center);
        if !d.is_finite() {
            return Err(Error::NonFiniteValue("dot product"));
        }
        loss = loss + if label > F::zero() { softplus(-d) } else { softplus(d) };
        // ∂loss/∂d = σ(d) - label
        let coeff = sigmoid(d) - label;
        for (g, &x) in grad_center.iter_mut().zip(u.iter()) {
            *g = *g + coeff * x;
        }
        for (x, &c) in u.iter_mut().zip(center.iter()) {
            *x = *x - lr * coeff * c;
        }
        Ok(())
    };
    score(positive, F::one(), &mut grad_center)?;
    for u in negatives.iter_mut() {
        score(u, F::zero(), &mut grad_center)?;
    }
    for (c, g) in center.iter_mut().zip(grad_center) {
        *c = *c - lr * g;
    }
    Ok(loss)
}

/// Learning rate after a fraction `progress` of all work, decaying linearly
/// from `lr0` and never below `lr_min`.
pub fn learning_rate(lr0: f32, lr_min: f32, progress: f64) -> f32 {
    let rho = progress.clamp(0.0, 1.0) as f32;
    (lr0 + rho * (lr_min - lr0)).max(lr_min)
}

/// (center, context) positions for skip-gram over a sentence of `len`
/// tokens. The half-width is drawn from `1..=window` per center unless
/// `fixed` is set.
pub fn context_pairs<R: Rng>(len: usize, window: usize, fixed: bool, rng: &mut R) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..len {
        let half = if fixed { window } else { rng.random_range(1..=window) };
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(len - 1);
        pairs.extend((lo..=hi).filter(|&j| j != i).map(|j| (i, j)));
    }
    pairs
}

/// Matrix shared between training workers without synchronization.
pub(crate) struct SharedTable<'a> {
    ptr: *mut f32,
    rows: usize,
    cols: usize,
    _marker: PhantomData<&'a mut [f32]>,
}

// Workers write rows concurrently; lost updates are accepted as part of the
// lock-free training contract.
unsafe impl Send for SharedTable<'_> {}
unsafe impl Sync for SharedTable<'_> {}

impl<'a> SharedTable<'a> {
    pub(crate) fn new(m: &'a mut Matrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        SharedTable {
            ptr: m.as_mut_slice().as_mut_ptr(),
            rows,
            cols,
            _marker: PhantomData,
        }
    }

    /// The caller must not hold another reference to the same row on this
    /// thread while the returned slice is alive.
    #[allow(clippy::mut_from_ref)]
    #[inline]
    pub(crate) fn row(&self, i: usize) -> &mut [f32] {
        assert!(i < self.rows, "row {i} out of {}", self.rows);
        unsafe { std::slice::from_raw_parts_mut(self.ptr.add(i * self.cols), self.cols) }
    }
}

#[inline]
fn logistic(d: f32, positive: bool, lr: f32) -> Result<(f64, f32)> {
    if !d.is_finite() {
        return Err(Error::NonFiniteValue("dot product"));
    }
    let (label, loss) = if positive {
        (1.0, softplus(-f64::from(d)))
    } else {
        (0.0, softplus(f64::from(d)))
    };
    Ok((loss, lr * (label - sigmoid(d))))
}

/// Score `hidden` against target and negatives, updating the output rows
/// and accumulating `-lr · ∂loss/∂hidden` into `grad`.
#[inline]
fn ns_shared(
    hidden: &[f32],
    grad: &mut [f32],
    output: &SharedTable,
    target: u32,
    negatives: &[u32],
    lr: f32,
) -> Result<f64> {
    let mut loss = 0.0;
    let labelled = std::iter::once((target, true)).chain(negatives.iter().map(|&n| (n, false)));
    for (id, positive) in labelled {
        let u = output.row(id as usize);
        let (l, g) = logistic(dot(u, hidden), positive, lr)?;
        loss += l;
        for (gr, &x) in grad.iter_mut().zip(u.iter()) {
            *gr += g * x;
        }
        for (x, &h) in u.iter_mut().zip(hidden) {
            *x += g * h;
        }
    }
    Ok(loss)
}

/// As [`ns_shared`] with the output table frozen.
#[inline]
fn ns_frozen(
    hidden: &[f32],
    grad: &mut [f32],
    output: &Matrix,
    target: u32,
    negatives: &[u32],
    lr: f32,
) -> Result<f64> {
    let mut loss = 0.0;
    let labelled = std::iter::once((target, true)).chain(negatives.iter().map(|&n| (n, false)));
    for (id, positive) in labelled {
        let u = output.row(id as usize);
        let (l, g) = logistic(dot(u, hidden), positive, lr)?;
        loss += l;
        for (gr, &x) in grad.iter_mut().zip(u) {
            *gr += g * x;
        }
    }
    Ok(loss)
}

fn draw_negatives<R: Rng>(sampler: &NegativeSampler, target: u32, k: usize, rng: &mut R, out: &mut Vec<u32>) {
    out.clear();
    for _ in 0..k {
        let id = sampler.sample(rng);
        if id != target {
            out.push(id);
        }
    }
}

fn mean_into(hidden: &mut [f32], table: &SharedTable, rows: &[u32]) {
    hidden.iter_mut().for_each(|h| *h = 0.0);
    for &r in rows {
        for (h, &x) in hidden.iter_mut().zip(table.row(r as usize).iter()) {
            *h += x;
        }
    }
    let scale = 1.0 / rows.len() as f32;
    hidden.iter_mut().for_each(|h| *h *= scale);
}

fn add_scaled(table: &SharedTable, rows: &[u32], grad: &[f32], scale: f32) {
    for &r in rows {
        for (x, &g) in table.row(r as usize).iter_mut().zip(grad) {
            *x += scale * g;
        }
    }
}

struct Context<'a> {
    config: &'a TrainConfig,
    vocab: &'a Vocabulary,
    encoded: &'a [Vec<u32>],
    /// Input rows composing each vocabulary word.
    word_rows: Vec<Vec<u32>>,
    sampler: NegativeSampler,
    discard: Vec<f64>,
    input: SharedTable<'a>,
    output: SharedTable<'a>,
    paragraphs: Option<SharedTable<'a>>,
    processed: AtomicU64,
    total_work: u64,
    stop: AtomicBool,
}

struct Worker<'c, 'a> {
    ctx: &'c Context<'a>,
    rng: ChaCha8Rng,
    hidden: Vec<f32>,
    grad: Vec<f32>,
    negatives: Vec<u32>,
    rows: Vec<u32>,
    kept: Vec<u32>,
    loss: f64,
    steps: u64,
}

impl<'c, 'a> Worker<'c, 'a> {
    fn new(ctx: &'c Context<'a>, worker: usize) -> Self {
        let width = ctx.config.hidden_width();
        // Worker 0 keeps the plain seed so a single worker is reproducible.
        let seed = ctx
            .config
            .seed
            .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(worker as u64 + 1));
        Worker {
            ctx,
            rng: ChaCha8Rng::seed_from_u64(seed),
            hidden: vec![0.0; width],
            grad: vec![0.0; width],
            negatives: Vec::new(),
            rows: Vec::new(),
            kept: Vec::new(),
            loss: 0.0,
            steps: 0,
        }
    }

    fn lr(&self, offset: usize) -> f32 {
        let done = self.ctx.processed.load(Ordering::Relaxed) + offset as u64;
        learning_rate(
            self.ctx.config.lr0,
            self.ctx.config.lr_min,
            done as f64 / self.ctx.total_work.max(1) as f64,
        )
    }

    fn subsample(&mut self, ids: &[u32]) {
        self.kept.clear();
        for &id in ids {
            let p = self.ctx.discard[id as usize];
            if p <= 0.0 || self.rng.random::<f64>() >= p {
                self.kept.push(id);
            }
        }
    }

    fn keep_target(&mut self, id: u32) -> bool {
        let p = self.ctx.discard[id as usize];
        p <= 0.0 || self.rng.random::<f64>() >= p
    }

    /// One step against `target` with `self.hidden`; `self.grad` receives the
    /// hidden-layer update.
    fn step(&mut self, target: u32, lr: f32) -> Result<()> {
        draw_negatives(
            &self.ctx.sampler,
            target,
            self.ctx.config.negatives,
            &mut self.rng,
            &mut self.negatives,
        );
        self.grad.iter_mut().for_each(|g| *g = 0.0);
        let loss = ns_shared(
            &self.hidden,
            &mut self.grad,
            &self.ctx.output,
            target,
            &self.negatives,
            lr,
        )?;
        self.loss += loss;
        self.steps += 1;
        Ok(())
    }

    fn sentence(&mut self, idx: usize) -> Result<()> {
        let ids = &self.ctx.encoded[idx];
        match self.ctx.config.algo {
            Algorithm::Cbow => self.cbow(ids),
            Algorithm::Skipgram => self.skipgram(ids),
            Algorithm::Sent2vec => self.sent2vec(ids),
            Algorithm::PvDm => self.pv_dm(idx, ids),
            Algorithm::PvDbow => self.pv_dbow(idx, ids),
        }
    }

    fn cbow(&mut self, ids: &[u32]) -> Result<()> {
        self.subsample(ids);
        let kept = std::mem::take(&mut self.kept);
        let window = self.ctx.config.window;
        for i in 0..kept.len() {
            let half = if self.ctx.config.fixed_window {
                window
            } else {
                self.rng.random_range(1..=window)
            };
            self.rows.clear();
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(kept.len() - 1);
            for j in (lo..=hi).filter(|&j| j != i) {
                self.rows.extend_from_slice(&self.ctx.word_rows[kept[j] as usize]);
            }
            if self.rows.is_empty() {
                continue;
            }
            mean_into(&mut self.hidden, &self.ctx.input, &self.rows);
            let lr = self.lr(i);
            self.step(kept[i], lr)?;
            add_scaled(&self.ctx.input, &self.rows, &self.grad, 1.0 / self.rows.len() as f32);
        }
        self.kept = kept;
        Ok(())
    }

    fn skipgram(&mut self, ids: &[u32]) -> Result<()> {
        self.subsample(ids);
        let kept = std::mem::take(&mut self.kept);
        let pairs = context_pairs(
            kept.len(),
            self.ctx.config.window,
            self.ctx.config.fixed_window,
            &mut self.rng,
        );
        for (center, context) in pairs {
            let rows = &self.ctx.word_rows[kept[center] as usize];
            mean_into(&mut self.hidden, &self.ctx.input, rows);
            let lr = self.lr(center);
            self.step(kept[context], lr)?;
            add_scaled(&self.ctx.input, rows, &self.grad, 1.0 / rows.len() as f32);
        }
        self.kept = kept;
        Ok(())
    }

    fn sent2vec(&mut self, ids: &[u32]) -> Result<()> {
        if ids.len() < 2 {
            return Ok(());
        }
        let cfg = self.ctx.config;
        let base = self.ctx.vocab.len() as u32;
        // (start, order, row) of every word n-gram of the sentence.
        let mut ngrams: Vec<(usize, usize, u32)> = Vec::new();
        if cfg.uses_word_ngrams() {
            let tokens: Vec<&str> = ids.iter().map(|&id| self.ctx.vocab.word(id).token.as_str()).collect();
            for k in 2..=cfg.word_ngrams {
                for (start, w) in tokens.windows(k).enumerate() {
                    ngrams.push((start, k, base + hash_token_window(w) % cfg.bucket as u32));
                }
            }
        }
        let mut candidates: Vec<u32> = Vec::new();
        for i in 0..ids.len() {
            if !self.keep_target(ids[i]) {
                continue;
            }
            self.rows.clear();
            self.rows
                .extend(ids.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &id)| id));
            candidates.clear();
            candidates.extend(
                ngrams
                    .iter()
                    .filter(|&&(start, k, _)| i < start || i >= start + k)
                    .map(|&(_, _, row)| row),
            );
            let drop = cfg.dropout_k.min(candidates.len());
            for d in 0..drop {
                let j = self.rng.random_range(d..candidates.len());
                candidates.swap(d, j);
            }
            self.rows.extend_from_slice(&candidates[drop..]);
            if self.rows.is_empty() {
                continue;
            }
            mean_into(&mut self.hidden, &self.ctx.input, &self.rows);
            let lr = self.lr(i);
            self.step(ids[i], lr)?;
            add_scaled(&self.ctx.input, &self.rows, &self.grad, 1.0 / self.rows.len() as f32);
        }
        Ok(())
    }

    fn pv_dm(&mut self, idx: usize, ids: &[u32]) -> Result<()> {
        self.subsample(ids);
        let kept = std::mem::take(&mut self.kept);
        let ctx = self.ctx;
        let paragraphs = ctx.paragraphs.as_ref().expect("paragraph table");
        let cfg = ctx.config;
        let dim = cfg.dim;
        for i in 0..kept.len() {
            let lo = i.saturating_sub(cfg.window);
            let lr = self.lr(i);
            match cfg.pv_combine {
                PvCombine::Mean => {
                    let n = (i - lo + 1) as f32;
                    self.hidden.copy_from_slice(paragraphs.row(idx));
                    for &w in &kept[lo..i] {
                        for (h, &x) in self.hidden.iter_mut().zip(self.ctx.input.row(w as usize).iter()) {
                            *h += x;
                        }
                    }
                    self.hidden.iter_mut().for_each(|h| *h /= n);
                    self.step(kept[i], lr)?;
                    let scale = 1.0 / n;
                    for (x, &g) in paragraphs.row(idx).iter_mut().zip(&self.grad) {
                        *x += scale * g;
                    }
                    add_scaled(&self.ctx.input, &kept[lo..i], &self.grad, scale);
                }
                PvCombine::Concat => {
                    fill_concat(&mut self.hidden, paragraphs.row(idx), &kept, i, cfg.window, dim, |w| {
                        ctx.input.row(w as usize)
                    });
                    self.step(kept[i], lr)?;
                    for (x, &g) in paragraphs.row(idx).iter_mut().zip(&self.grad[..dim]) {
                        *x += g;
                    }
                    for slot in 0..cfg.window {
                        if let Some(pos) = (i + slot).checked_sub(cfg.window) {
                            let g = &self.grad[(slot + 1) * dim..(slot + 2) * dim];
                            for (x, &gv) in self.ctx.input.row(kept[pos] as usize).iter_mut().zip(g) {
                                *x += gv;
                            }
                        }
                    }
                }
            }
        }
        self.kept = kept;
        Ok(())
    }

    fn pv_dbow(&mut self, idx: usize, ids: &[u32]) -> Result<()> {
        self.subsample(ids);
        let kept = std::mem::take(&mut self.kept);
        let paragraphs = self.ctx.paragraphs.as_ref().expect("paragraph table");
        for i in 0..kept.len() {
            let target = kept[self.rng.random_range(0..kept.len())];
            self.hidden.copy_from_slice(paragraphs.row(idx));
            let lr = self.lr(i);
            self.step(target, lr)?;
            for (x, &g) in paragraphs.row(idx).iter_mut().zip(&self.grad) {
                *x += g;
            }
        }
        self.kept = kept;
        Ok(())
    }
}

/// Hidden layer of concatenating PV-DM: the paragraph vector followed by the
/// `window` preceding word vectors, zero-padded at the sentence start.
fn fill_concat<'r>(
    hidden: &mut [f32],
    paragraph: &[f32],
    ids: &[u32],
    i: usize,
    window: usize,
    dim: usize,
    row: impl Fn(u32) -> &'r [f32],
) {
    hidden[..dim].copy_from_slice(paragraph);
    for slot in 0..window {
        let dst = &mut hidden[(slot + 1) * dim..(slot + 2) * dim];
        match (i + slot).checked_sub(window) {
            Some(pos) => dst.copy_from_slice(row(ids[pos])),
            None => dst.iter_mut().for_each(|x| *x = 0.0),
        }
    }
}

/// Per-epoch (loss, steps) of one worker and its total step count.
type WorkerTotals = (Vec<(f64, u64)>, u64);

/// Train a model of `config.algo` on `corpus`. For Paragraph Vector every
/// corpus line is one paragraph, in order.
pub fn train(
    corpus: &[SentenceLine],
    vocab: Vocabulary,
    config: &TrainConfig,
) -> Result<(EmbeddingModel, TrainReport)> {
    config.validate()?;
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary {
            min_count: config.min_count as usize,
        });
    }
    let encoded: Vec<Vec<u32>> = corpus.iter().map(|l| vocab.encode(l)).collect();
    let mut model = EmbeddingModel::initialize(config.clone(), vocab, corpus.len())?;
    let sampler = NegativeSampler::new(&model.vocab, config.neg_exponent)?;
    let discard = model.vocab.discard_probabilities(config.sample_t);
    let word_rows: Vec<Vec<u32>> = if config.algo.is_word_model() {
        let base = model.vocab.len() as u32;
        model
            .vocab
            .words()
            .iter()
            .enumerate()
            .map(|(id, w)| {
                let mut rows = vec![id as u32];
                if config.uses_subwords() {
                    rows.extend(
                        subword_ngrams(&w.token, config.minn, config.maxn, config.bucket)
                            .into_iter()
                            .map(|h| base + h),
                    );
                }
                rows
            })
            .collect()
    } else {
        Vec::new()
    };
    let raw_tokens: u64 = corpus.iter().map(|l| l.len() as u64).sum();
    let total_work = raw_tokens * config.epochs as u64;

    let EmbeddingModel {
        vocab,
        input,
        output,
        paragraphs,
        ..
    } = &mut model;
    let ctx = Context {
        config,
        vocab,
        encoded: &encoded,
        word_rows,
        sampler,
        discard,
        input: SharedTable::new(input),
        output: SharedTable::new(output),
        paragraphs: paragraphs.as_mut().map(SharedTable::new),
        processed: AtomicU64::new(0),
        total_work,
        stop: AtomicBool::new(false),
    };

    let workers = config.workers.min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(workers).max(1);
    let run = |w: usize| -> Result<(Vec<(f64, u64)>, u64)> {
        let mut worker = Worker::new(&ctx, w);
        let shard = (w * chunk).min(corpus.len())..((w + 1) * chunk).min(corpus.len());
        let mut per_epoch = Vec::with_capacity(config.epochs);
        for _ in 0..config.epochs {
            let (loss0, steps0) = (worker.loss, worker.steps);
            for idx in shard.clone() {
                if ctx.stop.load(Ordering::Relaxed) {
                    return Err(Error::NonFiniteValue("aborted after another worker diverged"));
                }
                if let Err(e) = worker.sentence(idx) {
                    ctx.stop.store(true, Ordering::Relaxed);
                    return Err(e);
                }
                ctx.processed.fetch_add(corpus[idx].len() as u64, Ordering::Relaxed);
            }
            per_epoch.push((worker.loss - loss0, worker.steps - steps0));
        }
        Ok((per_epoch, worker.steps))
    };

    let results: Vec<Result<WorkerTotals>> = if workers == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|w| s.spawn(move || run(w))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training worker panicked"))
                .collect()
        })
    };
    drop(ctx);

    let mut sums = vec![(0.0f64, 0u64); config.epochs];
    let mut steps = 0;
    for r in results {
        let (per_epoch, s) = r?;
        steps += s;
        for (acc, (l, n)) in sums.iter_mut().zip(per_epoch) {
            acc.0 += l;
            acc.1 += n;
        }
    }
    let report = TrainReport {
        epoch_losses: sums
            .into_iter()
            .map(|(l, n)| if n == 0 { 0.0 } else { l / n as f64 })
            .collect(),
        steps,
    };

    let finite = model.input.all_finite()
        && model.output.all_finite()
        && model.paragraphs.as_ref().is_none_or(Matrix::all_finite);
    if !finite {
        return Err(Error::NonFiniteValue("embedding table"));
    }
    Ok((model, report))
}

fn check_algo(config: &TrainConfig, expected: &[Algorithm]) -> Result<()> {
    if expected.contains(&config.algo) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "configuration is for {}, expected {}",
            config.algo,
            expected.iter().map(|a| a.name()).collect::<Vec<_>>().join(" or ")
        )))
    }
}

pub fn train_cbow(corpus: &[SentenceLine], vocab: Vocabulary, config: &TrainConfig) -> Result<EmbeddingModel> {
    check_algo(config, &[Algorithm::Cbow])?;
    train(corpus, vocab, config).map(|(m, _)| m)
}

pub fn train_skipgram(corpus: &[SentenceLine], vocab: Vocabulary, config: &TrainConfig) -> Result<EmbeddingModel> {
    check_algo(config, &[Algorithm::Skipgram])?;
    train(corpus, vocab, config).map(|(m, _)| m)
}

pub fn train_sent2vec(corpus: &[SentenceLine], vocab: Vocabulary, config: &TrainConfig) -> Result<EmbeddingModel> {
    check_algo(config, &[Algorithm::Sent2vec])?;
    train(corpus, vocab, config).map(|(m, _)| m)
}

pub fn train_pv(corpus: &[SentenceLine], vocab: Vocabulary, config: &TrainConfig) -> Result<EmbeddingModel> {
    check_algo(config, &[Algorithm::PvDm, Algorithm::PvDbow])?;
    train(corpus, vocab, config).map(|(m, _)| m)
}

/// Fit a fresh paragraph vector for `ids` against the frozen tables of a
/// Paragraph Vector model, starting from `init`.
pub(crate) fn infer_paragraph(
    model: &EmbeddingModel,
    sampler: &NegativeSampler,
    ids: &[u32],
    mut vector: Vec<f32>,
    epochs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f32>> {
    let cfg = &model.config;
    let dim = cfg.dim;
    let width = cfg.hidden_width();
    let mut hidden = vec![0.0f32; width];
    let mut grad = vec![0.0f32; width];
    let mut negatives = Vec::new();
    let total = (epochs * ids.len()).max(1) as f64;
    let mut done = 0usize;
    for _ in 0..epochs {
        for i in 0..ids.len() {
            let lr = learning_rate(cfg.lr0, cfg.lr_min, done as f64 / total);
            done += 1;
            grad.iter_mut().for_each(|g| *g = 0.0);
            match cfg.algo {
                Algorithm::PvDbow => {
                    let target = ids[rng.random_range(0..ids.len())];
                    hidden.copy_from_slice(&vector);
                    draw_negatives(sampler, target, cfg.negatives, rng, &mut negatives);
                    ns_frozen(&hidden, &mut grad, &model.output, target, &negatives, lr)?;
                    vector.iter_mut().zip(&grad).for_each(|(x, &g)| *x += g);
                }
                Algorithm::PvDm => {
                    let lo = i.saturating_sub(cfg.window);
                    match cfg.pv_combine {
                        PvCombine::Mean => {
                            let n = (i - lo + 1) as f32;
                            hidden.copy_from_slice(&vector);
                            for &w in &ids[lo..i] {
                                hidden
                                    .iter_mut()
                                    .zip(model.input.row(w as usize))
                                    .for_each(|(h, &x)| *h += x);
                            }
                            hidden.iter_mut().for_each(|h| *h /= n);
                            draw_negatives(sampler, ids[i], cfg.negatives, rng, &mut negatives);
                            ns_frozen(&hidden, &mut grad, &model.output, ids[i], &negatives, lr)?;
                            vector.iter_mut().zip(&grad).for_each(|(x, &g)| *x += g / n);
                        }
                        PvCombine::Concat => {
                            fill_concat(&mut hidden, &vector, ids, i, cfg.window, dim, |w| {
                                model.input.row(w as usize)
                            });
                            draw_negatives(sampler, ids[i], cfg.negatives, rng, &mut negatives);
                            ns_frozen(&hidden, &mut grad, &model.output, ids[i], &negatives, lr)?;
                            vector.iter_mut().zip(&grad[..dim]).for_each(|(x, &g)| *x += g);
                        }
                    }
                }
                other => return Err(Error::UnsupportedModel(other.name().into())),
            }
        }
    }
    if vector.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue("inferred paragraph vector"));
    }
    Ok(vector)
}
