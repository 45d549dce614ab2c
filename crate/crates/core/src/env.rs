//! Loss-generating adversaries for exercising the bandit without a graph.
//!
//! Losses are deliberately *not* confined to `[0, 1]`: scaled environments
//! exist precisely to push the loss-range envelope past its initial value.
//! Generation is stateless: the loss vector of round `t` depends only on
//! `(seed, t)`, so rounds can be generated in any order or in parallel.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bandit::BanditState;
use crate::error::Error;
use crate::rng::stream_rng;
use crate::trace::RoundTrace;
use crate::Result;

/// One segment of a drifting schedule: from `start_round` (1-based,
/// inclusive) onward, arms draw Bernoulli losses with these means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftPhase {
    pub start_round: u64,
    pub means: Vec<f64>,
}

/// A loss-generating adversary.
#[derive(Clone)]
pub enum Environment {
    /// Independent Bernoulli losses with per-arm means.
    IidBernoulli { means: Vec<f64>, seed: u64 },
    /// Bernoulli losses scaled by a constant range, so losses live in
    /// `{0, range}`.
    IidScaled {
        means: Vec<f64>,
        range: f64,
        seed: u64,
    },
    /// Bernoulli losses whose means switch at scheduled change points.
    Drifting { phases: Vec<DriftPhase>, seed: u64 },
    /// Programmatic losses, for tests and embedding into other harnesses.
    Callback {
        num_arms: usize,
        losses: Arc<dyn Fn(u64) -> Vec<f64> + Send + Sync>,
    },
}

impl fmt::Debug for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IidBernoulli { means, seed } => f
                .debug_struct("IidBernoulli")
                .field("means", means)
                .field("seed", seed)
                .finish(),
            Self::IidScaled { means, range, seed } => f
                .debug_struct("IidScaled")
                .field("means", means)
                .field("range", range)
                .field("seed", seed)
                .finish(),
            Self::Drifting { phases, seed } => f
                .debug_struct("Drifting")
                .field("phases", phases)
                .field("seed", seed)
                .finish(),
            Self::Callback { num_arms, .. } => f
                .debug_struct("Callback")
                .field("num_arms", num_arms)
                .finish_non_exhaustive(),
        }
    }
}

fn check_means(means: &[f64]) -> Result<()> {
    if means.len() < 2 {
        return Err(Error::InvalidEnvironment(format!(
            "need at least 2 arms, got {}",
            means.len()
        )));
    }
    if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(Error::InvalidEnvironment(format!(
            "Bernoulli mean {m} outside [0, 1]"
        )));
    }
    Ok(())
}

impl Environment {
    pub fn iid_bernoulli(means: Vec<f64>, seed: u64) -> Result<Self> {
        check_means(&means)?;
        Ok(Self::IidBernoulli { means, seed })
    }

    pub fn iid_scaled(means: Vec<f64>, range: f64, seed: u64) -> Result<Self> {
        check_means(&means)?;
        if !(range > 0.0) || !range.is_finite() {
            return Err(Error::InvalidEnvironment(format!(
                "range must be positive and finite, got {range}"
            )));
        }
        Ok(Self::IidScaled { means, range, seed })
    }

    pub fn drifting(phases: Vec<DriftPhase>, seed: u64) -> Result<Self> {
        let first = phases
            .first()
            .ok_or_else(|| Error::InvalidEnvironment("empty drift schedule".into()))?;
        if first.start_round != 1 {
            return Err(Error::InvalidEnvironment(format!(
                "first phase must start at round 1, got {}",
                first.start_round
            )));
        }
        let num_arms = first.means.len();
        let mut prev_start = 0;
        for phase in &phases {
            check_means(&phase.means)?;
            if phase.means.len() != num_arms {
                return Err(Error::InvalidEnvironment(
                    "phases disagree on the number of arms".into(),
                ));
            }
            if phase.start_round <= prev_start {
                return Err(Error::InvalidEnvironment(
                    "phase start rounds must be strictly increasing".into(),
                ));
            }
            prev_start = phase.start_round;
        }
        Ok(Self::Drifting { phases, seed })
    }

    pub fn from_callback<F>(num_arms: usize, losses: F) -> Result<Self>
    where
        F: Fn(u64) -> Vec<f64> + Send + Sync + 'static,
    {
        if num_arms < 2 {
            return Err(Error::InvalidEnvironment(format!(
                "need at least 2 arms, got {num_arms}"
            )));
        }
        Ok(Self::Callback {
            num_arms,
            losses: Arc::new(losses),
        })
    }

    pub fn num_arms(&self) -> usize {
        match self {
            Self::IidBernoulli { means, .. } => means.len(),
            Self::IidScaled { means, .. } => means.len(),
            Self::Drifting { phases, .. } => phases[0].means.len(),
            Self::Callback { num_arms, .. } => *num_arms,
        }
    }

    /// Full loss vector of round `t ≥ 1`. The harness sees all entries; the
    /// bandit is only ever shown the entry it sampled.
    pub fn gen_losses(&self, t: u64) -> Vec<f64> {
        assert!(t >= 1, "rounds are 1-based");
        match self {
            Self::IidBernoulli { means, seed } => bernoulli_row(means, 1.0, *seed, t),
            Self::IidScaled { means, range, seed } => bernoulli_row(means, *range, *seed, t),
            Self::Drifting { phases, seed } => {
                let active = phases
                    .iter()
                    .rev()
                    .find(|p| p.start_round <= t)
                    .expect("schedule starts at round 1");
                bernoulli_row(&active.means, 1.0, *seed, t)
            }
            Self::Callback { num_arms, losses } => {
                let row = losses(t);
                debug_assert_eq!(row.len(), *num_arms);
                debug_assert!(row.iter().all(|l| *l >= 0.0));
                row
            }
        }
    }
}

fn bernoulli_row(means: &[f64], scale: f64, seed: u64, t: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, t);
    means
        .iter()
        .map(|&m| if rng.random::<f64>() < m { scale } else { 0.0 })
        .collect()
}

/// A finished simulation: every round's trace (with true losses attached)
/// and the bandit's final state.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub traces: Vec<RoundTrace>,
    pub final_state: BanditState,
}

/// Run a fresh bandit against an environment for `rounds` rounds.
///
/// `bandit_seed` drives only the arm draws; the environment carries its own
/// seed. Deterministic given both.
pub fn simulate(env: &Environment, rounds: u64, bandit_seed: u64) -> Result<SimRun> {
    let mut state = BanditState::new(env.num_arms())?;
    let mut rng = stream_rng(bandit_seed, 0);
    let mut traces = Vec::with_capacity(rounds as usize);
    for t in 1..=rounds {
        let losses = env.gen_losses(t);
        let mut trace = state.step(&mut rng, |arm| losses[arm])?;
        trace.true_losses = Some(losses);
        traces.push(trace);
    }
    Ok(SimRun {
        traces,
        final_state: state,
    })
}

/// Serializable environment description, e.g. from a TOML config file.
///
/// ```toml
/// kind = "iid-scaled"
/// means = [0.1, 0.9]
/// range = 100.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnvSpec {
    IidBernoulli {
        means: Vec<f64>,
    },
    IidScaled {
        means: Vec<f64>,
        range: f64,
    },
    Drifting {
        phases: Vec<DriftPhase>,
    },
}

impl EnvSpec {
    /// Instantiate the described environment with an explicit seed.
    pub fn build(&self, seed: u64) -> Result<Environment> {
        match self {
            Self::IidBernoulli { means } => Environment::iid_bernoulli(means.clone(), seed),
            Self::IidScaled { means, range } => {
                Environment::iid_scaled(means.clone(), *range, seed)
            }
            Self::Drifting { phases } => Environment::drifting(phases.clone(), seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(Environment::iid_bernoulli(vec![0.5], 0).is_err());
        assert!(Environment::iid_bernoulli(vec![0.5, -0.1], 0).is_err());
        assert!(Environment::iid_bernoulli(vec![0.5, 1.1], 0).is_err());
        assert!(Environment::iid_scaled(vec![0.5, 0.5], 0.0, 0).is_err());
        assert!(Environment::drifting(Vec::new(), 0).is_err());
        assert!(Environment::drifting(
            vec![DriftPhase {
                start_round: 2,
                means: vec![0.1, 0.9],
            }],
            0
        )
        .is_err());
        assert!(Environment::drifting(
            vec![
                DriftPhase {
                    start_round: 1,
                    means: vec![0.1, 0.9],
                },
                DriftPhase {
                    start_round: 1,
                    means: vec![0.9, 0.1],
                },
            ],
            0
        )
        .is_err());
    }

    #[test]
    fn bernoulli_empirical_mean_is_close() {
        let env = Environment::iid_bernoulli(vec![0.1, 0.9], 5).unwrap();
        let rounds = 20_000u64;
        let mut hits = 0u64;
        for t in 1..=rounds {
            if env.gen_losses(t)[0] > 0.0 {
                hits += 1;
            }
        }
        let mean = hits as f64 / rounds as f64;
        // 3σ for Bernoulli(0.1) at N = 2e4 ≈ 0.0064
        assert!((mean - 0.1).abs() < 0.0064, "mean {mean}");
    }

    #[test]
    fn scaled_losses_respect_the_declared_range() {
        let env = Environment::iid_scaled(vec![0.4, 0.6], 100.0, 7).unwrap();
        let mut saw_top = false;
        for t in 1..=500 {
            for l in env.gen_losses(t) {
                assert!(l == 0.0 || l == 100.0);
                saw_top |= l == 100.0;
            }
        }
        assert!(saw_top);
    }

    #[test]
    fn drifting_schedule_switches_the_best_arm() {
        let horizon = 4_000u64;
        let env = Environment::drifting(
            vec![
                DriftPhase {
                    start_round: 1,
                    means: vec![0.1, 0.9],
                },
                DriftPhase {
                    start_round: horizon / 2 + 1,
                    means: vec![0.9, 0.1],
                },
            ],
            3,
        )
        .unwrap();
        // direct summation oracle over each half
        let mut first = [0.0f64; 2];
        let mut second = [0.0f64; 2];
        for t in 1..=horizon {
            let row = env.gen_losses(t);
            let half = if t <= horizon / 2 {
                &mut first
            } else {
                &mut second
            };
            half[0] += row[0];
            half[1] += row[1];
        }
        assert!(first[0] < first[1], "{first:?}");
        assert!(second[0] > second[1], "{second:?}");
    }

    #[test]
    fn generation_is_stateless_and_order_independent() {
        let env = Environment::iid_bernoulli(vec![0.3, 0.7], 11).unwrap();
        let forward: Vec<Vec<f64>> = (1..=50).map(|t| env.gen_losses(t)).collect();
        let backward: Vec<Vec<f64>> = (1..=50).rev().map(|t| env.gen_losses(t)).collect();
        let reversed: Vec<Vec<f64>> = backward.into_iter().rev().collect();
        assert_eq!(forward, reversed);
        assert_eq!(forward, (1..=50).map(|t| env.gen_losses(t)).collect::<Vec<_>>());
    }

    #[test]
    fn simulate_is_deterministic_and_attaches_true_losses() {
        let env = Environment::iid_scaled(vec![0.2, 0.5, 0.8], 10.0, 21).unwrap();
        let a = simulate(&env, 200, 4).unwrap();
        let b = simulate(&env, 200, 4).unwrap();
        assert_eq!(a.traces, b.traces);
        assert_eq!(a.final_state, b.final_state);
        assert!(a.traces.iter().all(|t| t.true_losses.is_some()));
        let c = simulate(&env, 200, 5).unwrap();
        assert_ne!(a.traces, c.traces);
    }

    #[test]
    fn spec_round_trips_through_toml_like_serde() {
        let spec = EnvSpec::Drifting {
            phases: vec![
                DriftPhase {
                    start_round: 1,
                    means: vec![0.1, 0.2],
                },
                DriftPhase {
                    start_round: 50,
                    means: vec![0.2, 0.1],
                },
            ],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: EnvSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        assert!(back.build(9).is_ok());
    }
}
