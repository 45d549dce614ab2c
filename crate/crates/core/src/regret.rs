//! Full-information regret evaluation.
//!
//! The simulators know the entire loss vector every round, which makes the
//! realized play directly comparable against the best fixed arm in
//! hindsight. Over the simplex the best fixed distribution is a point mass,
//! so the hindsight term reduces to the arm with least cumulative loss.
//!
//! [`theorem_bound`](FullInfoTrace::theorem_bound) reports the
//! instance-dependent quantities the adaptive learner's regret guarantee is
//! stated in: the cumulative variance of the true losses under the played
//! distributions `V_T`, the largest per-round loss spread `M`, and the bound
//! value `6·√(V_T · ln n) + 10·M·ln n`.

use serde::Serialize;

use crate::error::Error;
use crate::trace::RoundTrace;
use crate::Result;

/// One round as the full-information evaluator sees it.
#[derive(Debug, Clone, PartialEq)]
pub struct FullInfoRound {
    /// True loss vector `ℓ_t`, all entries ≥ 0.
    pub losses: Vec<f64>,
    /// Distribution `p_t` that was played.
    pub dist: Vec<f64>,
    /// Arm that was actually sampled.
    pub arm: usize,
}

/// A nonempty sequence of full-information rounds with consistent arity.
#[derive(Debug, Clone, PartialEq)]
pub struct FullInfoTrace {
    rounds: Vec<FullInfoRound>,
    num_arms: usize,
}

/// Regret, bound, and the quantities the bound is built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// Expected regret of the played distributions.
    pub expected_regret: f64,
    /// `6·√(cum_variance · ln num_arms) + 10·max_gap·ln num_arms`.
    pub bound: f64,
    /// `V_T`: summed per-round variance of the true losses under `p_t`.
    pub cum_variance: f64,
    /// `M`: largest per-round spread `max_{i,j} |ℓ_{t,i} − ℓ_{t,j}|`.
    pub max_gap: f64,
    pub num_arms: usize,
    pub rounds: usize,
}

impl FullInfoTrace {
    /// Validate and wrap rounds: nonempty, consistent lengths, nonnegative
    /// losses, arms in range.
    pub fn new(rounds: Vec<FullInfoRound>) -> Result<Self> {
        let first = rounds.first().ok_or(Error::EmptyTrace)?;
        let num_arms = first.losses.len();
        if num_arms == 0 {
            return Err(Error::InconsistentTrace("zero arms".into()));
        }
        for (t, r) in rounds.iter().enumerate() {
            if r.losses.len() != num_arms || r.dist.len() != num_arms {
                return Err(Error::InconsistentTrace(format!(
                    "round {}: arity mismatch",
                    t + 1
                )));
            }
            if r.arm >= num_arms {
                return Err(Error::InconsistentTrace(format!(
                    "round {}: arm {} out of range",
                    t + 1,
                    r.arm
                )));
            }
            if r.losses.iter().any(|l| *l < 0.0 || l.is_nan()) {
                return Err(Error::InconsistentTrace(format!(
                    "round {}: negative or NaN loss",
                    t + 1
                )));
            }
        }
        Ok(Self { rounds, num_arms })
    }

    /// Build from recorded bandit rounds; every round must carry its true
    /// loss vector.
    pub fn from_round_traces(traces: &[RoundTrace]) -> Result<Self> {
        let rounds = traces
            .iter()
            .map(|t| {
                let losses = t
                    .true_losses
                    .clone()
                    .ok_or(Error::MissingTrueLosses { round: t.round })?;
                Ok(FullInfoRound {
                    losses,
                    dist: t.dist.clone(),
                    arm: t.arm,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rounds)
    }

    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn rounds(&self) -> &[FullInfoRound] {
        &self.rounds
    }

    /// Cumulative true loss of each fixed arm over the whole horizon.
    fn cumulative_per_arm(&self) -> Vec<f64> {
        let mut totals = vec![0.0; self.num_arms];
        for r in &self.rounds {
            for (total, loss) in totals.iter_mut().zip(&r.losses) {
                *total += loss;
            }
        }
        totals
    }

    /// Cumulative loss of the best fixed arm in hindsight.
    fn hindsight_loss(&self) -> f64 {
        self.cumulative_per_arm()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Expected regret: `Σ_t ⟨p_t, ℓ_t⟩ − min_i Σ_t ℓ_{t,i}`.
    pub fn expected_regret(&self) -> f64 {
        let played: f64 = self
            .rounds
            .iter()
            .map(|r| r.dist.iter().zip(&r.losses).map(|(p, l)| p * l).sum::<f64>())
            .sum();
        played - self.hindsight_loss()
    }

    /// Realized regret: the sampled arms' losses against the same hindsight
    /// term. A diagnostic; its expectation over the sampling is
    /// [`expected_regret`](Self::expected_regret).
    pub fn realized_regret(&self) -> f64 {
        let suffered: f64 = self.rounds.iter().map(|r| r.losses[r.arm]).sum();
        suffered - self.hindsight_loss()
    }

    /// Instance-dependent regret bound report over the true losses.
    pub fn theorem_bound(&self) -> BoundReport {
        let mut cum_variance = 0.0;
        let mut max_gap: f64 = 0.0;
        for r in &self.rounds {
            let mean: f64 = r.dist.iter().zip(&r.losses).map(|(p, l)| p * l).sum();
            let var: f64 = r
                .dist
                .iter()
                .zip(&r.losses)
                .map(|(p, l)| p * (l - mean) * (l - mean))
                .sum();
            cum_variance += var;
            let hi = r.losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = r.losses.iter().copied().fold(f64::INFINITY, f64::min);
            max_gap = max_gap.max(hi - lo);
        }
        let log_n = (self.num_arms as f64).ln();
        let bound = 6.0 * (cum_variance * log_n).sqrt() + 10.0 * max_gap * log_n;
        BoundReport {
            expected_regret: self.expected_regret(),
            bound,
            cum_variance,
            max_gap,
            num_arms: self.num_arms,
            rounds: self.rounds.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn round(losses: Vec<f64>, dist: Vec<f64>, arm: usize) -> FullInfoRound {
        FullInfoRound { losses, dist, arm }
    }

    #[test]
    fn empty_trace_is_rejected() {
        assert!(matches!(
            FullInfoTrace::new(Vec::new()),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn single_round_expected_regret() {
        let trace =
            FullInfoTrace::new(vec![round(vec![0.0, 1.0], vec![0.5, 0.5], 0)]).unwrap();
        assert_eq!(trace.expected_regret(), 0.5);
    }

    #[test]
    fn point_mass_on_oracle_arm_has_zero_regret() {
        let rounds = (0..20)
            .map(|_| round(vec![0.3, 1.0, 2.0], vec![1.0, 0.0, 0.0], 0))
            .collect();
        let trace = FullInfoTrace::new(rounds).unwrap();
        assert_eq!(trace.expected_regret(), 0.0);
    }

    #[test]
    fn hindsight_term_matches_exhaustive_enumeration() {
        // independent oracle: try every fixed arm by brute force
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let num_arms = 5;
        let rounds: Vec<FullInfoRound> = (0..50)
            .map(|_| {
                let losses: Vec<f64> = (0..num_arms).map(|_| rng.random::<f64>() * 3.0).collect();
                let raw: Vec<f64> = (0..num_arms).map(|_| rng.random::<f64>()).collect();
                let total: f64 = raw.iter().sum();
                let dist: Vec<f64> = raw.iter().map(|w| w / total).collect();
                round(losses, dist, 0)
            })
            .collect();
        let trace = FullInfoTrace::new(rounds.clone()).unwrap();

        let mut best = f64::INFINITY;
        for arm in 0..num_arms {
            let cum: f64 = rounds.iter().map(|r| r.losses[arm]).sum();
            best = best.min(cum);
        }
        let played: f64 = rounds
            .iter()
            .map(|r| r.dist.iter().zip(&r.losses).map(|(p, l)| p * l).sum::<f64>())
            .sum();
        assert!((trace.expected_regret() - (played - best)).abs() < 1e-12);
    }

    #[test]
    fn realized_regret_single_round() {
        let trace =
            FullInfoTrace::new(vec![round(vec![0.0, 1.0], vec![0.5, 0.5], 1)]).unwrap();
        assert_eq!(trace.realized_regret(), 1.0);
    }

    #[test]
    fn realized_regret_zero_when_oracle_arm_always_sampled() {
        let rounds = (0..10)
            .map(|_| round(vec![0.1, 0.9], vec![0.5, 0.5], 0))
            .collect();
        let trace = FullInfoTrace::new(rounds).unwrap();
        assert_eq!(trace.realized_regret(), 0.0);
    }

    #[test]
    fn realized_regret_matches_expected_in_mean() {
        // fixed (ℓ_t, p_t); resample the arms many times
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let base: Vec<FullInfoRound> = (0..30)
            .map(|t| {
                let losses = vec![0.2, 1.0 + (t % 3) as f64, 0.7];
                round(losses, vec![0.5, 0.2, 0.3], 0)
            })
            .collect();
        let expected = FullInfoTrace::new(base.clone()).unwrap().expected_regret();

        let runs = 10_000;
        let mut sum = 0.0;
        let mut sq_sum = 0.0;
        for _ in 0..runs {
            let resampled: Vec<FullInfoRound> = base
                .iter()
                .map(|r| {
                    let u: f64 = rng.random();
                    let mut cum = 0.0;
                    let mut arm = r.dist.len() - 1;
                    for (i, p) in r.dist.iter().enumerate() {
                        cum += p;
                        if u < cum {
                            arm = i;
                            break;
                        }
                    }
                    round(r.losses.clone(), r.dist.clone(), arm)
                })
                .collect();
            let realized = FullInfoTrace::new(resampled).unwrap().realized_regret();
            sum += realized;
            sq_sum += realized * realized;
        }
        let mean = sum / runs as f64;
        let var = (sq_sum / runs as f64 - mean * mean).max(0.0);
        let se = (var / runs as f64).sqrt();
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "mean {mean} vs expected {expected} (se {se})"
        );
    }

    #[test]
    fn arm_constant_losses_give_zero_variance_bound() {
        // every round's vector is flat across arms: zero variance, zero gap
        let rounds = (0..8)
            .map(|t| round(vec![t as f64; 3], vec![0.2, 0.3, 0.5], 1))
            .collect();
        let report = FullInfoTrace::new(rounds).unwrap().theorem_bound();
        assert_eq!(report.cum_variance, 0.0);
        assert_eq!(report.max_gap, 0.0);
        assert_eq!(report.bound, 0.0);
    }

    #[test]
    fn point_mass_play_gives_zero_variance_bound() {
        // heterogeneous losses but a deterministic distribution: the
        // variance term vanishes and only the gap term remains
        let rounds = (0..8)
            .map(|_| round(vec![2.0, 5.0, 3.0], vec![0.0, 1.0, 0.0], 1))
            .collect();
        let report = FullInfoTrace::new(rounds).unwrap().theorem_bound();
        assert_eq!(report.cum_variance, 0.0);
        assert_eq!(report.max_gap, 3.0);
        let log_n = 3f64.ln();
        assert!((report.bound - 10.0 * 3.0 * log_n).abs() < 1e-12);
    }

    #[test]
    fn bound_report_matches_hand_computation() {
        // ℓ = (0, 1), p = (1/2, 1/2), T = 4: V_T = 4 · 1/4 = 1, M = 1
        let rounds = (0..4)
            .map(|_| round(vec![0.0, 1.0], vec![0.5, 0.5], 0))
            .collect();
        let report = FullInfoTrace::new(rounds).unwrap().theorem_bound();
        assert!((report.cum_variance - 1.0).abs() < 1e-12);
        assert_eq!(report.max_gap, 1.0);
        let log2 = 2f64.ln();
        let expected = 6.0 * log2.sqrt() + 10.0 * log2;
        assert!((report.bound - expected).abs() < 1e-12);
    }

    fn random_trace(seed: u64, num_arms: usize, rounds: usize, scale: f64) -> FullInfoTrace {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rs: Vec<FullInfoRound> = (0..rounds)
            .map(|_| {
                let losses: Vec<f64> =
                    (0..num_arms).map(|_| rng.random::<f64>() * scale).collect();
                let raw: Vec<f64> = (0..num_arms).map(|_| rng.random::<f64>() + 0.01).collect();
                let total: f64 = raw.iter().sum();
                let dist: Vec<f64> = raw.iter().map(|w| w / total).collect();
                let arm = rng.random_range(0..num_arms);
                round(losses, dist, arm)
            })
            .collect();
        FullInfoTrace::new(rs).unwrap()
    }

    #[test]
    fn quantities_scale_linearly_with_the_losses() {
        let base = random_trace(5, 4, 60, 1.0);
        let c = 37.5;
        let scaled_rounds: Vec<FullInfoRound> = base
            .rounds()
            .iter()
            .map(|r| FullInfoRound {
                losses: r.losses.iter().map(|l| l * c).collect(),
                dist: r.dist.clone(),
                arm: r.arm,
            })
            .collect();
        let scaled = FullInfoTrace::new(scaled_rounds).unwrap();
        let b0 = base.theorem_bound();
        let b1 = scaled.theorem_bound();
        assert!((b1.expected_regret - c * b0.expected_regret).abs() < 1e-9 * c);
        assert!((b1.max_gap - c * b0.max_gap).abs() < 1e-9 * c);
        assert!((b1.cum_variance.sqrt() - c * b0.cum_variance.sqrt()).abs() < 1e-9 * c);
        assert!(
            (scaled.realized_regret() - c * base.realized_regret()).abs() < 1e-9 * c
        );
    }

    #[test]
    fn per_round_variance_obeys_popoviciu() {
        // V_T ≤ T·M²/4 for any trace
        for seed in 0..20 {
            let trace = random_trace(seed, 5, 40, 10.0);
            let report = trace.theorem_bound();
            let cap = trace.len() as f64 * report.max_gap * report.max_gap / 4.0;
            assert!(
                report.cum_variance <= cap + 1e-9,
                "V_T {} vs cap {cap}",
                report.cum_variance
            );
        }
    }

    #[test]
    fn bounded_losses_cap_variance_at_quarter_t() {
        for seed in 0..20 {
            let trace = random_trace(seed, 6, 50, 1.0);
            let report = trace.theorem_bound();
            assert!(report.cum_variance <= trace.len() as f64 / 4.0 + 1e-9);
        }
    }

    #[test]
    fn from_round_traces_requires_true_losses() {
        let t = RoundTrace {
            round: 1,
            learning_rate: 0.0,
            dist: vec![0.5, 0.5],
            arm: 0,
            observed_loss: 0.3,
            est_loss: 0.6,
            loss_range: 1.0,
            cum_variance: 0.1,
            true_losses: None,
        };
        assert!(matches!(
            FullInfoTrace::from_round_traces(&[t]),
            Err(Error::MissingTrueLosses { round: 1 })
        ));
    }
}
