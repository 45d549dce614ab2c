//! Parameter-free adversarial bandit over a fixed arm set.
//!
//! One round of the learner:
//!
//! 1. learning rate `η_t = min{1/E_{t-1}, √(ln n / V_{t-1})}` (0 at `t = 1`);
//! 2. play the exponential-weights distribution `p_t ∝ exp(-η_t L_i)` over
//!    the cumulative loss estimates `L`;
//! 3. sample one arm from `p_t` and observe only that arm's loss;
//! 4. form the importance-weighted estimate `ℓ̂` (observed loss divided by the
//!    sampling probability, zero elsewhere), which is unbiased for the full
//!    loss vector;
//! 5. fold `ℓ̂` back into `L`, grow the loss-range envelope `E_t` to the next
//!    power of two covering the estimate's spread, and add the estimate's
//!    variance under `p_t` to the running total `V_t`.
//!
//! `E_t` and `V_t` drive the learning rate, so nothing has to be known about
//! the scale of the losses up front: the learner adapts to whatever range it
//! actually observes, unlike fixed-rate Exp3 variants that assume losses in
//! `[0, 1]`.

use rand::Rng;

use crate::error::Error;
use crate::trace::RoundTrace;
use crate::Result;

/// Online state of one bandit instance.
///
/// Single-writer: one round at a time. Distinct instances are independent and
/// may live on different threads.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditState {
    num_arms: usize,
    round: u64,
    cum_est_loss: Vec<f64>,
    loss_range: f64,
    cum_variance: f64,
}

impl BanditState {
    /// Fresh state over `num_arms ≥ 2` arms: zero cumulative losses, loss
    /// range 1, zero variance, round counter at 1.
    pub fn new(num_arms: usize) -> Result<Self> {
        if num_arms < 2 {
            return Err(Error::TooFewArms(num_arms));
        }
        Ok(Self {
            num_arms,
            round: 1,
            cum_est_loss: vec![0.0; num_arms],
            loss_range: 1.0,
            cum_variance: 0.0,
        })
    }

    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    /// Current round `t`, starting at 1.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Cumulative importance-weighted loss estimates `L`.
    pub fn cum_est_loss(&self) -> &[f64] {
        &self.cum_est_loss
    }

    /// Loss-range envelope `E_{t-1}`: a power of two, ≥ 1, nondecreasing.
    pub fn loss_range(&self) -> f64 {
        self.loss_range
    }

    /// Cumulative variance `V_{t-1}` of the loss estimates under the played
    /// distributions. Nondecreasing.
    pub fn cum_variance(&self) -> f64 {
        self.cum_variance
    }

    /// Adaptive learning rate `η_t`.
    ///
    /// Zero in the first round; afterwards `min{1/E_{t-1}, √(ln n / V_{t-1})}`
    /// with the variance term treated as +∞ while `V_{t-1} = 0`.
    pub fn learning_rate(&self) -> f64 {
        if self.round <= 1 {
            return 0.0;
        }
        let inv_range = 1.0 / self.loss_range;
        if self.cum_variance <= 0.0 {
            return inv_range;
        }
        let var_rate = ((self.num_arms as f64).ln() / self.cum_variance).sqrt();
        inv_range.min(var_rate)
    }

    /// Exponential-weights distribution `p_t ∝ exp(-η_t L_i)`.
    ///
    /// Weights are computed against the shifted losses `L_i - min_j L_j`,
    /// which leaves the distribution unchanged but keeps the exponentials
    /// bounded by 1 however large `L` grows.
    pub fn distribution(&self) -> ProbDist {
        let eta = self.learning_rate();
        let min_loss = self
            .cum_est_loss
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = self
            .cum_est_loss
            .iter()
            .map(|&l| (-eta * (l - min_loss)).exp())
            .collect();
        // the minimizing arm has weight exp(0) = 1, so total ≥ 1
        let total: f64 = weights.iter().sum();
        ProbDist {
            probs: weights.into_iter().map(|w| w / total).collect(),
        }
    }

    /// Fold one round's loss estimate back into the state (cumulative losses,
    /// loss range, cumulative variance, round counter).
    ///
    /// `dist` must be the distribution the estimate was sampled under.
    pub fn update(&mut self, est: &EstLossVector, dist: &ProbDist) {
        assert_eq!(est.num_arms(), self.num_arms, "estimate arity mismatch");
        assert_eq!(dist.len(), self.num_arms, "distribution arity mismatch");

        self.cum_est_loss[est.sampled_arm()] += est.value();

        // max pairwise gap of a one-hot nonnegative vector with n ≥ 2 entries
        let spread = est.value();
        if spread > 0.0 {
            let envelope = pow2_ceil(spread);
            if envelope > self.loss_range {
                self.loss_range = envelope;
            }
        }

        // Var_{p}(ℓ̂) = Σ_i p_i (ℓ̂_i - ⟨ℓ̂, p⟩)², expanded for a one-hot ℓ̂;
        // sum-of-squares form, so the increment cannot go negative in floats
        let p = dist.probs[est.sampled_arm()];
        let mean = est.value() * p;
        let increment = (1.0 - p) * mean * mean + p * (est.value() - mean) * (est.value() - mean);
        self.cum_variance += increment;

        self.round += 1;
    }

    /// Run one full round: distribution, sample, observe, estimate, update.
    ///
    /// `loss_fn` is queried for the sampled arm only (partial information).
    /// Fails if it returns a negative loss.
    pub fn step<R, F>(&mut self, rng: &mut R, mut loss_fn: F) -> Result<RoundTrace>
    where
        R: Rng + ?Sized,
        F: FnMut(usize) -> f64,
    {
        let round = self.round;
        let learning_rate = self.learning_rate();
        let dist = self.distribution();
        let arm = dist.sample(rng);
        let observed_loss = loss_fn(arm);
        let est = dist.estimate_loss(arm, observed_loss)?;
        self.update(&est, &dist);
        Ok(RoundTrace {
            round,
            learning_rate,
            dist: dist.probs,
            arm,
            observed_loss,
            est_loss: est.value(),
            loss_range: self.loss_range,
            cum_variance: self.cum_variance,
            true_losses: None,
        })
    }
}

/// Smallest power of two ≥ `x` for `x > 0`, computed as `2^⌈log2 x⌉`.
fn pow2_ceil(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    let exp = x.log2().ceil();
    let mut pow = 2f64.powi(exp as i32);
    // log2 of values a hair above a power of two can round down to the
    // exact exponent; bump once so the envelope always covers x
    if pow < x {
        pow *= 2.0;
    }
    pow
}

/// A probability distribution over arms.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// The uniform distribution over `n` arms.
    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Validate and wrap an explicit probability vector: entries in `[0, 1]`,
    /// summing to 1 within 1e-9.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidDistribution(format!(
                "entry {p} outside [0, 1]"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("sums to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// Draw an arm index with the distribution's probabilities.
    ///
    /// Inverse CDF over arms in index order: the first arm whose cumulative
    /// probability exceeds the uniform draw wins, so equal cumulative sums
    /// (zero-probability arms) resolve toward the lower index and the draw
    /// sequence is reproducible given the generator seed.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut cum = 0.0;
        for (i, p) in self.probs.iter().enumerate() {
            cum += p;
            if u < cum {
                return i;
            }
        }
        // cumulative sum fell short of 1 by rounding; take the last arm
        // that actually carries mass
        self.probs
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(self.probs.len() - 1)
    }

    /// Importance-weighted loss estimate for an observed loss on one arm:
    /// `observed / p[arm]` there, zero elsewhere. Unbiased for the full loss
    /// vector under sampling from `self`.
    pub fn estimate_loss(&self, arm: usize, observed_loss: f64) -> Result<EstLossVector> {
        if observed_loss < 0.0 || observed_loss.is_nan() {
            return Err(Error::NegativeLoss(observed_loss));
        }
        let p = self.probs[arm];
        if p <= 0.0 {
            return Err(Error::ZeroProbability { arm });
        }
        Ok(EstLossVector {
            num_arms: self.probs.len(),
            arm,
            value: observed_loss / p,
        })
    }
}

/// One-hot importance-weighted loss estimate: `value` at `arm`, zero
/// elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstLossVector {
    num_arms: usize,
    arm: usize,
    value: f64,
}

impl EstLossVector {
    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    pub fn sampled_arm(&self) -> usize {
        self.arm
    }

    /// The single (possibly zero) nonzero entry, at `sampled_arm`.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Materialize the dense vector.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.num_arms];
        v[self.arm] = self.value;
        v
    }
}
