//! Per-layer link-prediction embeddings driven by sampled neighbor layers.
//!
//! Each layer owns an embedding table over the shared node set and one
//! sampler over its `L - 1` neighboring layers. One training epoch of one
//! layer:
//!
//! 1. the sampler picks a neighbor layer `j` (bandit or uniform baseline);
//! 2. a logistic link-prediction pass runs over the layer's training edges
//!    against sampled negatives, with each node represented by the average
//!    of its own vector and its vector in layer `j`, so a relevant neighbor
//!    sharpens the pass and an unrelated one dilutes it;
//! 3. the distance between the two layers' mean embeddings (Euclidean or
//!    cosine) is fed back to the sampler as the round's loss.
//!
//! Neighbor vectors are read from a start-of-epoch snapshot and every layer
//! writes only its own table, so layers can be processed in any order (or in
//! parallel) without changing the result.
//!
//! All layer tables start from the *same* seeded draw: inter-layer distances
//! begin at zero and grow only with structural divergence between the
//! layers, which is exactly the signal the samplers are meant to pick up.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bandit::{BanditState, ProbDist};
use crate::error::Error;
use crate::graph::{Edge, EdgeSplit, MultiplexNetwork};
use crate::rng::{mix, stream_rng};
use crate::trace::RoundTrace;
use crate::Result;

/// Distance between layer-mean embeddings used as the bandit loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossMetric {
    Euclidean,
    Cosine,
}

impl fmt::Display for LossMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Euclidean => "euclidean",
            Self::Cosine => "cosine",
        })
    }
}

impl std::str::FromStr for LossMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Self::Euclidean),
            "cosine" => Ok(Self::Cosine),
            other => Err(Error::InvalidConfig(format!(
                "unknown loss metric {other:?} (expected euclidean or cosine)"
            ))),
        }
    }
}

/// How each layer picks its neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    /// Adaptive bandit over the neighboring layers.
    Bandit,
    /// Uniform baseline; draws through the same stream but never learns.
    Uniform,
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bandit => "bandit",
            Self::Uniform => "uniform",
        })
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bandit" => Ok(Self::Bandit),
            "uniform" => Ok(Self::Uniform),
            other => Err(Error::InvalidConfig(format!(
                "unknown sampler {other:?} (expected bandit or uniform)"
            ))),
        }
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Embedding dimension.
    pub dim: usize,
    /// SGD step size.
    pub learning_rate: f64,
    /// Epochs; one bandit round per layer per epoch.
    pub epochs: usize,
    /// Negative samples per positive edge.
    pub negatives_per_positive: usize,
    pub metric: LossMetric,
    pub sampler: SamplerKind,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            dim: 32,
            learning_rate: 0.5,
            epochs: 150,
            negatives_per_positive: 2,
            metric: LossMetric::Euclidean,
            sampler: SamplerKind::Bandit,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be positive".into()));
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.negatives_per_positive == 0 {
            return Err(Error::InvalidConfig(
                "need at least one negative per positive".into(),
            ));
        }
        Ok(())
    }
}

/// Euclidean distance `‖a − b‖`.
pub fn euclidean_loss(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sq.sqrt())
}

/// Cosine distance `1 − ⟨a, b⟩ / (‖a‖‖b‖)`, clamped to `[0, 2]`.
///
/// A zero vector has no direction; the distance is defined as the neutral
/// value 1 there (callers that care can count occurrences via
/// [`is_zero_vector`]).
pub fn cosine_loss(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let norm_a = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Ok(1.0);
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok((1.0 - dot / (norm_a * norm_b)).clamp(0.0, 2.0))
}

/// True when every coordinate is zero (the degenerate case of
/// [`cosine_loss`]).
pub fn is_zero_vector(v: &[f64]) -> bool {
    v.iter().all(|x| *x == 0.0)
}

/// Per-layer, per-node embedding vectors of one fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    num_layers: usize,
    num_nodes: usize,
    dim: usize,
    data: Vec<f64>,
}

impl EmbeddingTable {
    /// Seeded init, i.i.d. uniform in `[-0.5/dim, 0.5/dim]`, with the same
    /// node block replicated into every layer.
    pub fn init_shared(num_layers: usize, num_nodes: usize, dim: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, u64::MAX);
        let half = 0.5 / dim as f64;
        let block: Vec<f64> = (0..num_nodes * dim)
            .map(|_| rng.random_range(-half..half))
            .collect();
        let mut data = Vec::with_capacity(num_layers * block.len());
        for _ in 0..num_layers {
            data.extend_from_slice(&block);
        }
        Self {
            num_layers,
            num_nodes,
            dim,
            data,
        }
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, layer: usize, node: u32) -> usize {
        (layer * self.num_nodes + node as usize) * self.dim
    }

    pub fn node(&self, layer: usize, node: u32) -> &[f64] {
        let o = self.offset(layer, node);
        &self.data[o..o + self.dim]
    }

    /// Mean of the layer's node vectors; the layer-level embedding the
    /// bandit losses compare.
    pub fn layer_mean(&self, layer: usize) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for node in 0..self.num_nodes as u32 {
            for (m, x) in mean.iter_mut().zip(self.node(layer, node)) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= self.num_nodes as f64;
        }
        mean
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// One layer's neighbor sampler: arms are the other layers in ascending
/// index order. With a single neighbor there is nothing to learn and the
/// draw is skipped entirely.
#[derive(Debug, Clone)]
struct LayerSampler {
    arms: Vec<usize>,
    /// `None` for the uniform baseline and for single-neighbor layers,
    /// where there is nothing to learn.
    bandit: Option<BanditState>,
    draw_rng: ChaCha8Rng,
}

impl LayerSampler {
    fn new(layer: usize, num_layers: usize, kind: SamplerKind, seed: u64) -> Result<Self> {
        let arms: Vec<usize> = (0..num_layers).filter(|j| *j != layer).collect();
        let bandit = if kind == SamplerKind::Bandit && arms.len() >= 2 {
            Some(BanditState::new(arms.len())?)
        } else {
            None
        };
        Ok(Self {
            arms,
            bandit,
            draw_rng: stream_rng(seed, layer as u64),
        })
    }

    /// Distribution over the arms as played this round.
    fn distribution(&self) -> ProbDist {
        match &self.bandit {
            Some(state) => state.distribution(),
            None => ProbDist::uniform(self.arms.len()),
        }
    }
}

/// What one layer did in one epoch.
#[derive(Debug, Clone)]
pub struct LayerEpochRecord {
    pub layer: usize,
    /// Neighbor layer index that was sampled.
    pub sampled_neighbor: usize,
    /// Loss fed back to the sampler (always ≥ 0).
    pub bandit_loss: f64,
    pub trace: RoundTrace,
}

/// Link-prediction quality of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerEval {
    pub layer: usize,
    pub train_acc: f64,
    pub test_acc: f64,
    pub test_auc: f64,
}

/// Evaluation over all layers plus their means.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub layers: Vec<LayerEval>,
    pub mean_train_acc: f64,
    pub mean_test_acc: f64,
    pub mean_test_auc: f64,
}

/// Training state for one (network, split, held-out fold, config) run.
pub struct Trainer<'a> {
    net: &'a MultiplexNetwork,
    split: &'a EdgeSplit,
    heldout_fold: usize,
    cfg: TrainConfig,
    tables: EmbeddingTable,
    samplers: Vec<LayerSampler>,
    train_pos: Vec<Vec<Edge>>,
    train_neg: Vec<Vec<Edge>>,
    epoch: usize,
    degenerate_cosine: u64,
}

impl<'a> Trainer<'a> {
    pub fn new(
        net: &'a MultiplexNetwork,
        split: &'a EdgeSplit,
        heldout_fold: usize,
        cfg: TrainConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        if heldout_fold >= split.num_folds() {
            return Err(Error::InvalidConfig(format!(
                "held-out fold {heldout_fold} out of range for {} folds",
                split.num_folds()
            )));
        }
        let num_layers = net.num_layers();
        let samplers = (0..num_layers)
            .map(|l| LayerSampler::new(l, num_layers, cfg.sampler, cfg.seed))
            .collect::<Result<Vec<_>>>()?;
        let train_pos: Vec<Vec<Edge>> = (0..num_layers)
            .map(|l| split.train_positives(l, heldout_fold))
            .collect();
        let train_neg: Vec<Vec<Edge>> = (0..num_layers)
            .map(|l| split.train_negatives(l, heldout_fold))
            .collect();
        let tables = EmbeddingTable::init_shared(num_layers, net.num_nodes(), cfg.dim, cfg.seed);
        Ok(Self {
            net,
            split,
            heldout_fold,
            cfg,
            tables,
            samplers,
            train_pos,
            train_neg,
            epoch: 0,
            degenerate_cosine: 0,
        })
    }

    pub fn config(&self) -> &TrainConfig {
        &self.cfg
    }

    pub fn epochs_run(&self) -> usize {
        self.epoch
    }

    pub fn tables(&self) -> &EmbeddingTable {
        &self.tables
    }

    /// Cosine-loss evaluations that hit a zero vector so far.
    pub fn degenerate_cosine_count(&self) -> u64 {
        self.degenerate_cosine
    }

    /// The sampler's current arms (neighbor layer indices) and probabilities.
    pub fn sampler_distribution(&self, layer: usize) -> (Vec<usize>, Vec<f64>) {
        let s = &self.samplers[layer];
        (s.arms.clone(), s.distribution().into_probs())
    }

    /// Bandit state of a layer's sampler, when it has one.
    pub fn bandit_state(&self, layer: usize) -> Option<&BanditState> {
        self.samplers[layer].bandit.as_ref()
    }

    /// One epoch over all layers in index order.
    pub fn train_epoch(&mut self) -> Result<Vec<LayerEpochRecord>> {
        let order: Vec<usize> = (0..self.net.num_layers()).collect();
        self.train_epoch_with_order(&order)
    }

    /// One epoch processing layers in the given order. Every layer reads
    /// neighbors from the start-of-epoch snapshot and writes only itself, so
    /// the order does not affect the outcome.
    pub fn train_epoch_with_order(&mut self, order: &[usize]) -> Result<Vec<LayerEpochRecord>> {
        let snapshot = self.tables.clone();
        let mut records: Vec<Option<LayerEpochRecord>> = vec![None; self.net.num_layers()];
        for &layer in order {
            records[layer] = Some(self.train_layer_epoch(layer, &snapshot)?);
        }
        self.epoch += 1;
        Ok(records.into_iter().map(|r| r.expect("every layer ran")).collect())
    }

    fn train_layer_epoch(
        &mut self,
        layer: usize,
        snapshot: &EmbeddingTable,
    ) -> Result<LayerEpochRecord> {
        let round = self.epoch as u64 + 1;
        let (learning_rate, dist) = {
            let s = &self.samplers[layer];
            let eta = s.bandit.as_ref().map_or(0.0, BanditState::learning_rate);
            (eta, s.distribution())
        };
        let arm = if dist.len() == 1 {
            0
        } else {
            dist.sample(&mut self.samplers[layer].draw_rng)
        };
        let neighbor = self.samplers[layer].arms[arm];

        self.sgd_pass(layer, neighbor, snapshot);

        // both means at the same time step (epoch start), so the loss is the
        // current distance between the layers, not this epoch's drift
        let own_mean = snapshot.layer_mean(layer);
        let neighbor_mean = snapshot.layer_mean(neighbor);
        let loss = match self.cfg.metric {
            LossMetric::Euclidean => euclidean_loss(&own_mean, &neighbor_mean)?,
            LossMetric::Cosine => {
                if is_zero_vector(&own_mean) || is_zero_vector(&neighbor_mean) {
                    self.degenerate_cosine += 1;
                }
                cosine_loss(&own_mean, &neighbor_mean)?
            }
        };

        let est = dist.estimate_loss(arm, loss)?;
        let sampler = &mut self.samplers[layer];
        let (loss_range, cum_variance) = if let Some(state) = sampler.bandit.as_mut() {
            state.update(&est, &dist);
            (state.loss_range(), state.cum_variance())
        } else {
            (1.0, 0.0)
        };

        Ok(LayerEpochRecord {
            layer,
            sampled_neighbor: neighbor,
            bandit_loss: loss,
            trace: RoundTrace {
                round,
                learning_rate,
                dist: dist.into_probs(),
                arm,
                observed_loss: loss,
                est_loss: est.value(),
                loss_range,
                cum_variance,
                true_losses: None,
            },
        })
    }

    /// One logistic SGD pass over the layer's training edges. Node `u` is
    /// represented as `(v_layer[u] + v_neighbor[u]) / 2` with the neighbor
    /// rows taken from the snapshot; only the layer's own rows move.
    ///
    /// Edges are visited in their set order and negatives are drawn from a
    /// stream keyed by `(seed, epoch, edge)`, so an edge shared by two layers
    /// triggers the same updates in both. Layer tables therefore diverge only
    /// where the layers structurally differ, which is what the distance
    /// losses are meant to measure.
    fn sgd_pass(&mut self, layer: usize, neighbor: usize, snapshot: &EmbeddingTable) {
        let Self {
            net,
            cfg,
            tables,
            train_pos,
            epoch,
            ..
        } = self;
        let num_nodes = net.num_nodes() as u32;
        let layer_edges = net.layer(layer);

        for e in &train_pos[layer] {
            update_pair(tables, snapshot, cfg, layer, neighbor, e.lo(), e.hi(), 1.0);
            let anchor = e.lo();
            let edge_key = mix(mix(*epoch as u64, e.lo() as u64), e.hi() as u64);
            let mut rng = stream_rng(cfg.seed, edge_key);
            for _ in 0..cfg.negatives_per_positive {
                let mut candidate = None;
                for _ in 0..64 {
                    let w = rng.random_range(0..num_nodes);
                    if w == anchor {
                        continue;
                    }
                    if let Ok(pair) = Edge::new(anchor, w) {
                        if !layer_edges.contains(&pair) {
                            candidate = Some(w);
                            break;
                        }
                    }
                }
                if let Some(w) = candidate {
                    update_pair(tables, snapshot, cfg, layer, neighbor, anchor, w, 0.0);
                }
            }
        }
    }

    fn score(&self, layer: usize, e: &Edge) -> f64 {
        let a = self.tables.node(layer, e.lo());
        let b = self.tables.node(layer, e.hi());
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        sigmoid(dot)
    }

    /// Link-prediction accuracy and AUC per layer, on the held-out fold and
    /// the training folds.
    pub fn evaluate(&self) -> Result<EvalReport> {
        let mut layers = Vec::with_capacity(self.net.num_layers());
        for layer in 0..self.net.num_layers() {
            let test_pos = self.split.positives(layer, self.heldout_fold);
            let test_neg = self.split.negatives(layer, self.heldout_fold);
            if test_pos.is_empty() {
                return Err(Error::EmptyTestFold {
                    layer,
                    fold: self.heldout_fold,
                });
            }
            let pos_scores: Vec<f64> = test_pos.iter().map(|e| self.score(layer, e)).collect();
            let neg_scores: Vec<f64> = test_neg.iter().map(|e| self.score(layer, e)).collect();
            let test_acc = accuracy(&pos_scores, &neg_scores);
            let test_auc = auc(&pos_scores, &neg_scores);

            let train_pos_scores: Vec<f64> = self.train_pos[layer]
                .iter()
                .map(|e| self.score(layer, e))
                .collect();
            let train_neg_scores: Vec<f64> = self.train_neg[layer]
                .iter()
                .map(|e| self.score(layer, e))
                .collect();
            let train_acc = accuracy(&train_pos_scores, &train_neg_scores);

            layers.push(LayerEval {
                layer,
                train_acc,
                test_acc,
                test_auc,
            });
        }
        let n = layers.len() as f64;
        Ok(EvalReport {
            mean_train_acc: layers.iter().map(|l| l.train_acc).sum::<f64>() / n,
            mean_test_acc: layers.iter().map(|l| l.test_acc).sum::<f64>() / n,
            mean_test_auc: layers.iter().map(|l| l.test_auc).sum::<f64>() / n,
            layers,
        })
    }
}

/// One logistic step on the pair `(u, v)` in `layer`, with both endpoints
/// represented as the average of their own row and their snapshot row in
/// `neighbor`. Gradients use the pre-step rows of both endpoints.
#[allow(clippy::too_many_arguments)]
fn update_pair(
    tables: &mut EmbeddingTable,
    snapshot: &EmbeddingTable,
    cfg: &TrainConfig,
    layer: usize,
    neighbor: usize,
    u: u32,
    v: u32,
    label: f64,
) {
    let dim = cfg.dim;
    let iu = tables.offset(layer, u);
    let iv = tables.offset(layer, v);
    let ju = snapshot.offset(neighbor, u);
    let jv = snapshot.offset(neighbor, v);

    let mut dot = 0.0;
    for k in 0..dim {
        let ru = 0.5 * (tables.data[iu + k] + snapshot.data[ju + k]);
        let rv = 0.5 * (tables.data[iv + k] + snapshot.data[jv + k]);
        dot += ru * rv;
    }
    let g = sigmoid(dot) - label;
    let step = cfg.learning_rate * 0.5 * g;
    for k in 0..dim {
        let tu = tables.data[iu + k];
        let tv = tables.data[iv + k];
        let ru = 0.5 * (tu + snapshot.data[ju + k]);
        let rv = 0.5 * (tv + snapshot.data[jv + k]);
        tables.data[iu + k] = tu - step * rv;
        tables.data[iv + k] = tv - step * ru;
    }
}

/// Classification accuracy at threshold 0.5: positives should score above
/// it, negatives at or below.
pub fn accuracy(pos_scores: &[f64], neg_scores: &[f64]) -> f64 {
    let correct = pos_scores.iter().filter(|s| **s > 0.5).count()
        + neg_scores.iter().filter(|s| **s <= 0.5).count();
    correct as f64 / (pos_scores.len() + neg_scores.len()) as f64
}

/// Rank-based AUC with average ranks over ties: the probability a random
/// positive outscores a random negative, ties counting half.
pub fn auc(pos_scores: &[f64], neg_scores: &[f64]) -> f64 {
    let p = pos_scores.len();
    let n = neg_scores.len();
    if p == 0 || n == 0 {
        return 0.5;
    }
    let mut all: Vec<(f64, bool)> = pos_scores
        .iter()
        .map(|s| (*s, true))
        .chain(neg_scores.iter().map(|s| (*s, false)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        // 1-based ranks i+1 ..= j share the average
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        for item in &all[i..j] {
            if item.1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }
    (rank_sum_pos - (p * (p + 1)) as f64 / 2.0) / (p as f64 * n as f64)
}

/// One-sided sign test: probability of at least `wins` successes in
/// `wins + losses` fair coin flips (ties must be dropped by the caller).
pub fn sign_test_p(wins: usize, losses: usize) -> f64 {
    let m = wins + losses;
    if m == 0 {
        return 1.0;
    }
    let mut tail = 0.0;
    for k in wins..=m {
        let mut c = 1.0f64;
        for i in 0..k {
            c *= (m - i) as f64 / (i + 1) as f64;
        }
        tail += c;
    }
    (tail / 2f64.powi(m as i32)).min(1.0)
}

/// Full multi-trial, multi-fold experiment protocol.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub trials: usize,
    pub folds: usize,
    /// Samplers run on identical seeds/splits, for paired comparison.
    pub samplers: Vec<SamplerKind>,
    /// Evaluate after every epoch (for curves) or only at the end.
    pub record_epochs: bool,
}

/// Per-epoch, per-layer metrics row of an experiment.
#[derive(Debug, Clone)]
pub struct EpochRow {
    pub trial: usize,
    pub fold: usize,
    pub sampler: SamplerKind,
    pub epoch: usize,
    pub layer: usize,
    pub train_acc: f64,
    pub test_acc: f64,
    pub auc: f64,
    /// Neighbor layer index sampled this epoch.
    pub sampled_arm: usize,
    pub bandit_loss: f64,
}

/// Final (post-training) metrics of one run.
#[derive(Debug, Clone)]
pub struct FinalRow {
    pub trial: usize,
    pub fold: usize,
    pub sampler: SamplerKind,
    pub mean_train_acc: f64,
    pub mean_test_acc: f64,
    pub mean_test_auc: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub epoch_rows: Vec<EpochRow>,
    pub finals: Vec<FinalRow>,
}

/// Run the paired protocol: for every (trial, fold, sampler), a fresh
/// trainer with a seed shared across samplers, the split drawn per trial.
/// Runs fan out across threads; outputs are ordered deterministically.
pub fn run_experiment(
    net: &MultiplexNetwork,
    base: &TrainConfig,
    plan: &ExperimentPlan,
) -> Result<ExperimentResult> {
    base.validate()?;
    if plan.trials == 0 || plan.samplers.is_empty() {
        return Err(Error::InvalidConfig(
            "need at least one trial and one sampler".into(),
        ));
    }
    if plan.folds < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 folds, got {}",
            plan.folds
        )));
    }
    let mut jobs = Vec::new();
    for trial in 0..plan.trials {
        for fold in 0..plan.folds {
            for &sampler in &plan.samplers {
                jobs.push((trial, fold, sampler));
            }
        }
    }

    let outcomes: Vec<(Vec<EpochRow>, FinalRow)> = jobs
        .par_iter()
        .map(|&(trial, fold, sampler)| {
            let split = crate::graph::make_split(net, plan.folds, mix(base.seed, trial as u64))?;
            let mut cfg = base.clone();
            cfg.sampler = sampler;
            cfg.seed = mix(base.seed, (trial * plan.folds + fold) as u64 + 1);
            let mut trainer = Trainer::new(net, &split, fold, cfg)?;
            let mut rows = Vec::new();
            for epoch in 1..=base.epochs {
                let records = trainer.train_epoch()?;
                if plan.record_epochs {
                    let eval = trainer.evaluate()?;
                    for rec in &records {
                        let le = &eval.layers[rec.layer];
                        rows.push(EpochRow {
                            trial,
                            fold,
                            sampler,
                            epoch,
                            layer: rec.layer,
                            train_acc: le.train_acc,
                            test_acc: le.test_acc,
                            auc: le.test_auc,
                            sampled_arm: rec.sampled_neighbor,
                            bandit_loss: rec.bandit_loss,
                        });
                    }
                }
            }
            let eval = trainer.evaluate()?;
            let final_row = FinalRow {
                trial,
                fold,
                sampler,
                mean_train_acc: eval.mean_train_acc,
                mean_test_acc: eval.mean_test_acc,
                mean_test_auc: eval.mean_test_auc,
            };
            Ok((rows, final_row))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut epoch_rows = Vec::new();
    let mut finals = Vec::new();
    for (rows, final_row) in outcomes {
        epoch_rows.extend(rows);
        finals.push(final_row);
    }
    Ok(ExperimentResult { epoch_rows, finals })
}

/// Paired comparison of two samplers' final test AUC over shared
/// (trial, fold) runs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedComparison {
    pub mean_auc_a: f64,
    pub mean_auc_b: f64,
    pub wins_a: usize,
    pub wins_b: usize,
    pub ties: usize,
    /// One-sided sign-test p-value for "a beats b".
    pub p_value: f64,
}

/// Compare sampler `a` against sampler `b` on final mean test AUC.
pub fn compare_finals(finals: &[FinalRow], a: SamplerKind, b: SamplerKind) -> PairedComparison {
    let mut wins_a = 0;
    let mut wins_b = 0;
    let mut ties = 0;
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut count = 0usize;
    for fa in finals.iter().filter(|f| f.sampler == a) {
        if let Some(fb) = finals
            .iter()
            .find(|f| f.sampler == b && f.trial == fa.trial && f.fold == fa.fold)
        {
            count += 1;
            sum_a += fa.mean_test_auc;
            sum_b += fb.mean_test_auc;
            if fa.mean_test_auc > fb.mean_test_auc {
                wins_a += 1;
            } else if fb.mean_test_auc > fa.mean_test_auc {
                wins_b += 1;
            } else {
                ties += 1;
            }
        }
    }
    PairedComparison {
        mean_auc_a: if count > 0 { sum_a / count as f64 } else { f64::NAN },
        mean_auc_b: if count > 0 { sum_b / count as f64 } else { f64::NAN },
        wins_a,
        wins_b,
        ties,
        p_value: sign_test_p(wins_a, wins_b),
    }
}
