//! Exact simulators for the three application processes.
//!
//! Each simulator returns a [`ProcessTrace`]: the martingale decomposition
//! (increments and conditional second moments), the [`MartingalePath`] built
//! from it, and process-specific statistics. Traces are deterministic
//! functions of `(spec, StreamKey)`.

mod ar1;
mod idla;
mod learn;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::martingale::{MartingaleError, MartingalePath};
use crate::rng::StreamKey;

pub use ar1::{ar1_simulate, Ar1Spec, Ar1Stats};
pub use idla::{idla_exact_moments, idla_simulate, IdlaSpec, IdlaStats};
pub use learn::{learning_simulate, true_risk, LearnSpec, LearnStats};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProcessError {
    #[error("invalid process parameter: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Martingale(#[from] MartingaleError),
    #[error("trace export failed: {0}")]
    Export(String),
}

impl From<csv::Error> for ProcessError {
    fn from(e: csv::Error) -> Self {
        ProcessError::Export(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> ProcessError {
    ProcessError::InvalidSpec(msg.into())
}

/// Which process to simulate, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "lowercase")]
pub enum ProcessSpec {
    Ar1(Ar1Spec),
    Idla(IdlaSpec),
    Learn(LearnSpec),
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<(), ProcessError> {
        match self {
            ProcessSpec::Ar1(s) => s.validate(),
            ProcessSpec::Idla(s) => s.validate(),
            ProcessSpec::Learn(s) => s.validate(),
        }
    }

    pub fn horizon(&self) -> u64 {
        match self {
            ProcessSpec::Ar1(s) => s.n,
            ProcessSpec::Idla(s) => s.n,
            ProcessSpec::Learn(s) => s.n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProcessSpec::Ar1(_) => "ar1",
            ProcessSpec::Idla(_) => "idla",
            ProcessSpec::Learn(_) => "learn",
        }
    }

    pub fn simulate(&self, key: impl Into<StreamKey>) -> Result<ProcessTrace, ProcessError> {
        let key = key.into();
        match self {
            ProcessSpec::Ar1(s) => ar1_simulate(s, key),
            ProcessSpec::Idla(s) => idla_simulate(s, key),
            ProcessSpec::Learn(s) => learning_simulate(s, key),
        }
    }
}

/// Process-specific series. State arrays are indexed `0..=n`; per-step
/// arrays are indexed `k - 1` for step `k = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessStats {
    Ar1(Ar1Stats),
    Idla(IdlaStats),
    Learn(LearnStats),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTrace {
    pub path: MartingalePath,
    /// `ΔM_k`, `k = 1..=n`.
    pub increments: Vec<f64>,
    /// `E[ΔM_k^2 | F_{k-1}]`, `k = 1..=n`.
    pub cond_second_moments: Vec<f64>,
    pub stats: ProcessStats,
}

impl ProcessTrace {
    pub(crate) fn new(
        increments: Vec<f64>,
        cond_second_moments: Vec<f64>,
        stats: ProcessStats,
    ) -> Result<Self, ProcessError> {
        let path = MartingalePath::accumulate(&increments, &cond_second_moments)?;
        Ok(Self { path, increments, cond_second_moments, stats })
    }

    pub fn horizon(&self) -> usize {
        self.path.horizon()
    }

    pub fn ar1(&self) -> Option<&Ar1Stats> {
        match &self.stats {
            ProcessStats::Ar1(s) => Some(s),
            _ => None,
        }
    }

    pub fn idla(&self) -> Option<&IdlaStats> {
        match &self.stats {
            ProcessStats::Idla(s) => Some(s),
            _ => None,
        }
    }

    pub fn learn(&self) -> Option<&LearnStats> {
        match &self.stats {
            ProcessStats::Learn(s) => Some(s),
            _ => None,
        }
    }

    /// Column names of [`Self::write_csv`].
    pub fn csv_columns(&self) -> Vec<&'static str> {
        let mut cols = vec!["k", "m", "qv", "pqv", "increment", "cond_second_moment"];
        cols.extend_from_slice(match &self.stats {
            ProcessStats::Ar1(_) => &["x", "theta_hat"][..],
            ProcessStats::Idla(_) => &["x", "left", "right"][..],
            ProcessStats::Learn(_) => &[
                "threshold",
                "true_risk",
                "loss",
                "empirical_risk",
                "average_risk",
                "second_moment_avg",
            ][..],
        });
        cols
    }

    /// One CSV row per `k = 0..=n`. Quantities undefined at `k = 0` are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ProcessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.csv_columns())?;
        let n = self.horizon();
        let p = &self.path;
        let step = |v: &[f64], k: usize| if k == 0 { String::new() } else { v[k - 1].to_string() };
        for k in 0..=n {
            let mut row = vec![
                k.to_string(),
                p.m()[k].to_string(),
                p.qv()[k].to_string(),
                p.pqv()[k].to_string(),
                step(&self.increments, k),
                step(&self.cond_second_moments, k),
            ];
            match &self.stats {
                ProcessStats::Ar1(s) => {
                    row.push(s.x[k].to_string());
                    row.push(step(&s.theta_hat, k));
                }
                ProcessStats::Idla(s) => {
                    row.push(s.x[k].to_string());
                    row.push(s.left(k).to_string());
                    row.push(s.right(k).to_string());
                }
                ProcessStats::Learn(s) => {
                    row.push(s.threshold[k].to_string());
                    row.push(step(&s.true_risk, k));
                    row.push(step(&s.loss, k));
                    row.push(step(&s.empirical_risk, k));
                    row.push(step(&s.average_risk, k));
                    row.push(step(&s.second_moment_avg, k));
                }
            }
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| ProcessError::Export(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specs() -> Vec<ProcessSpec> {
        vec![
            ProcessSpec::Ar1(Ar1Spec { p: 1.0 / 3.0, theta: 0.5, n: 30 }),
            ProcessSpec::Idla(IdlaSpec { n: 30 }),
            ProcessSpec::Learn(LearnSpec { theta_star: 0.5, eta: 0.1, gamma0: 0.5, c0: 0.0, n: 30 }),
        ]
    }

    #[test]
    fn traces_are_deterministic() {
        for spec in specs() {
            let a = spec.simulate(StreamKey::new(11, 3)).unwrap();
            let b = spec.simulate(StreamKey::new(11, 3)).unwrap();
            assert_eq!(a, b);
            let c = spec.simulate(StreamKey::new(11, 4)).unwrap();
            assert_ne!(a.increments, c.increments, "{}", spec.name());
        }
    }

    #[test]
    fn path_rebuilds_from_decomposition() {
        for spec in specs() {
            for rep in 0..20 {
                let t = spec.simulate(StreamKey::new(5, rep)).unwrap();
                let p = MartingalePath::accumulate(&t.increments, &t.cond_second_moments).unwrap();
                assert_eq!(p.m(), t.path.m());
                assert_eq!(p.qv(), t.path.qv());
                assert_eq!(p.pqv(), t.path.pqv());
            }
        }
    }

    #[test]
    fn csv_has_one_row_per_step() {
        for spec in specs() {
            let t = spec.simulate(1).unwrap();
            let mut buf = Vec::new();
            t.write_csv(&mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            let lines: Vec<&str> = text.lines().collect();
            assert_eq!(lines.len(), 32);
            assert!(text.ends_with('\n'));
            let ncols = t.csv_columns().len();
            for l in &lines {
                assert_eq!(l.split(',').count(), ncols);
            }
            assert!(lines[1].starts_with("0,0,0,0,,"));
        }
    }
}
