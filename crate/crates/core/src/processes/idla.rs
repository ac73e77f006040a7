//! One-dimensional internal diffusion-limited aggregation.
//!
//! The cluster after `n` arrivals is the interval `[L_n, R_n]` with
//! `R_n - L_n = n`, so it is characterized by `X_n = L_n + R_n`. By the
//! gambler's-ruin argument, given `X_{k-1}` the next explorer exits on the
//! right with probability `(k + 1 - X_{k-1}) / (2(k + 1))`, which moves
//! `X` by `+1`; otherwise `X` moves by `-1`.
//!
//! `M_k = (k + 1) X_k` is a martingale with
//! `ΔM_k = (k + 1) X_k - k X_{k-1}` and
//! `E[ΔM_k^2 | F_{k-1}] = (k + 1)^2 - X_{k-1}^2`.

use serde::{Deserialize, Serialize};

use super::{invalid, ProcessError, ProcessStats, ProcessTrace};
use crate::rng::StreamKey;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdlaSpec {
    pub n: u64,
}

impl IdlaSpec {
    pub fn validate(&self) -> Result<(), ProcessError> {
        if self.n < 1 {
            return Err(invalid("idla: horizon n must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdlaStats {
    /// `X_0..=X_n`.
    pub x: Vec<i64>,
}

impl IdlaStats {
    /// `L_k = (X_k - k) / 2`.
    pub fn left(&self, k: usize) -> i64 {
        (self.x[k] - k as i64) / 2
    }

    /// `R_k = (X_k + k) / 2`.
    pub fn right(&self, k: usize) -> i64 {
        (self.x[k] + k as i64) / 2
    }

    pub fn x_n(&self) -> i64 {
        *self.x.last().expect("x is never empty")
    }
}

pub fn idla_simulate(spec: &IdlaSpec, key: StreamKey) -> Result<ProcessTrace, ProcessError> {
    spec.validate()?;
    let rng = key.stream();
    let n = spec.n as usize;
    let mut x = Vec::with_capacity(n + 1);
    let mut increments = Vec::with_capacity(n);
    let mut moments = Vec::with_capacity(n);
    x.push(0i64);
    for k in 1..=n {
        let prev = x[k - 1];
        let kp1 = (k + 1) as f64;
        let p_right = (kp1 - prev as f64) / (2.0 * kp1);
        let step = if rng.uniform(k as u64, 0) < p_right { 1 } else { -1 };
        let cur = prev + step;
        x.push(cur);
        increments.push(kp1 * cur as f64 - k as f64 * prev as f64);
        moments.push(kp1 * kp1 - (prev * prev) as f64);
    }
    ProcessTrace::new(increments, moments, ProcessStats::Idla(IdlaStats { x }))
}

/// `(E[X_n^2], E[M_n^2]) = ((n + 2) / 3, (n + 1)^2 (n + 2) / 3)`.
pub fn idla_exact_moments(n: u64) -> Result<(f64, f64), ProcessError> {
    if n < 1 {
        return Err(invalid("idla: horizon n must be at least 1"));
    }
    let nf = n as f64;
    let ex2 = (nf + 2.0) / 3.0;
    Ok((ex2, (nf + 1.0) * (nf + 1.0) * ex2))
}
