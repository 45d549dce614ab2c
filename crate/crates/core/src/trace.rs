//! Per-round records and their CSV form.
//!
//! A [`RoundTrace`] is the unit of persistence: everything one bandit round
//! produced, plus the full true loss vector when the harness knows it (only
//! simulators do; live training observes a single arm per round).
//!
//! CSV schema, one row per round:
//!
//! ```text
//! round,learning_rate,arm,observed_loss,est_loss,loss_range,cum_variance,dist,true_losses
//! ```
//!
//! `dist` and `true_losses` are `;`-joined float lists; `true_losses` is
//! empty when unknown. Floats use Rust's shortest round-trip formatting, so
//! write → read is lossless.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Everything recorded about one bandit round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    /// Round counter `t`, starting at 1.
    pub round: u64,
    /// Learning rate `η_t` used this round.
    pub learning_rate: f64,
    /// Distribution `p_t` the arm was drawn from.
    pub dist: Vec<f64>,
    /// Sampled arm `i_t`.
    pub arm: usize,
    /// Loss observed on the sampled arm.
    pub observed_loss: f64,
    /// The nonzero entry of the importance-weighted estimate.
    pub est_loss: f64,
    /// Loss-range envelope `E_t` after the round's update.
    pub loss_range: f64,
    /// Cumulative variance `V_t` after the round's update.
    pub cum_variance: f64,
    /// Full loss vector `ℓ_t`, when the generator of the losses exposed it.
    pub true_losses: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    round: u64,
    learning_rate: f64,
    arm: usize,
    observed_loss: f64,
    est_loss: f64,
    loss_range: f64,
    cum_variance: f64,
    dist: String,
    true_losses: String,
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn split(field: &str, line: u64) -> Result<Vec<f64>> {
    field
        .split(';')
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::InconsistentTrace(format!(
                "row {line}: bad float {tok:?}"
            )))
        })
        .collect()
}

/// Write traces as CSV with a header row.
pub fn write_csv<W: Write>(writer: W, traces: &[RoundTrace]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for t in traces {
        out.serialize(Row {
            round: t.round,
            learning_rate: t.learning_rate,
            arm: t.arm,
            observed_loss: t.observed_loss,
            est_loss: t.est_loss,
            loss_range: t.loss_range,
            cum_variance: t.cum_variance,
            dist: join(&t.dist),
            true_losses: t.true_losses.as_deref().map(join).unwrap_or_default(),
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Read traces back from CSV produced by [`write_csv`].
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<RoundTrace>> {
    let mut input = csv::Reader::from_reader(reader);
    let mut traces = Vec::new();
    for (i, row) in input.deserialize::<Row>().enumerate() {
        let row = row?;
        let line = i as u64 + 2; // header is line 1
        let dist = split(&row.dist, line)?;
        let true_losses = if row.true_losses.is_empty() {
            None
        } else {
            let v = split(&row.true_losses, line)?;
            if v.len() != dist.len() {
                return Err(Error::InconsistentTrace(format!(
                    "row {line}: {} true losses for {} arms",
                    v.len(),
                    dist.len()
                )));
            }
            Some(v)
        };
        if row.arm >= dist.len() {
            return Err(Error::InconsistentTrace(format!(
                "row {line}: arm {} out of range",
                row.arm
            )));
        }
        traces.push(RoundTrace {
            round: row.round,
            learning_rate: row.learning_rate,
            arm: row.arm,
            observed_loss: row.observed_loss,
            est_loss: row.est_loss,
            loss_range: row.loss_range,
            cum_variance: row.cum_variance,
            dist,
            true_losses,
        });
    }
    Ok(traces)
}
