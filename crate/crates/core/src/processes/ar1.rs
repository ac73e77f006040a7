//! First-order autoregression with centered two-point noise.
//!
//! `X_k = theta X_{k-1} + eps_k`, where `eps_k = 2q` with probability `p` and
//! `-2p` with probability `q = 1 - p`, so `E[eps] = 0` and `Var[eps] = 4pq`.
//! The least-squares error is a self-normalized martingale:
//! `theta_hat_n - theta = sigma^2 M_n / <M>_n` with `M_n = sum X_{k-1} eps_k`.

use serde::{Deserialize, Serialize};

use super::{invalid, ProcessError, ProcessStats, ProcessTrace};
use crate::rng::StreamKey;
use crate::sum::CompensatedSum;

/// Deterministic starting value. Needs `|X_0| >= 2p`, and `2p <= 1`.
pub const AR1_X0: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ar1Spec {
    pub p: f64,
    pub theta: f64,
    pub n: u64,
}

impl Ar1Spec {
    pub fn validate(&self) -> Result<(), ProcessError> {
        if !(self.p > 0.0 && self.p <= 0.5) {
            return Err(invalid(format!("ar1: p = {} must lie in (0, 1/2]", self.p)));
        }
        if !self.theta.is_finite() {
            return Err(invalid("ar1: theta must be finite"));
        }
        if self.n < 1 {
            return Err(invalid("ar1: horizon n must be at least 1"));
        }
        Ok(())
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// Noise variance `4pq`.
    pub fn sigma2(&self) -> f64 {
        4.0 * self.p * self.q()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ar1Stats {
    /// The true coefficient.
    pub theta: f64,
    /// `X_0..=X_n`.
    pub x: Vec<f64>,
    /// Noise draws `eps_1..=eps_n`.
    pub noise: Vec<f64>,
    /// Least-squares estimates `theta_hat_1..=theta_hat_n`.
    pub theta_hat: Vec<f64>,
}

impl Ar1Stats {
    pub fn theta_hat_n(&self) -> f64 {
        *self.theta_hat.last().expect("horizon >= 1")
    }

    /// `|theta_hat_n - theta|`.
    pub fn estimation_error(&self) -> f64 {
        (self.theta_hat_n() - self.theta).abs()
    }
}

pub fn ar1_simulate(spec: &Ar1Spec, key: StreamKey) -> Result<ProcessTrace, ProcessError> {
    spec.validate()?;
    let rng = key.stream();
    let n = spec.n as usize;
    let (p, q) = (spec.p, spec.q());
    let sigma2 = spec.sigma2();

    let mut x = Vec::with_capacity(n + 1);
    let mut noise = Vec::with_capacity(n);
    let mut theta_hat = Vec::with_capacity(n);
    let mut increments = Vec::with_capacity(n);
    let mut moments = Vec::with_capacity(n);
    let mut cross = CompensatedSum::new();
    let mut sq = CompensatedSum::new();

    x.push(AR1_X0);
    for k in 1..=n {
        let prev = x[k - 1];
        let eps = if rng.uniform(k as u64, 0) < p { 2.0 * q } else { -2.0 * p };
        let cur = spec.theta * prev + eps;
        x.push(cur);
        noise.push(eps);
        increments.push(prev * eps);
        moments.push(sigma2 * prev * prev);
        cross.add(prev * cur);
        sq.add(prev * prev);
        theta_hat.push(cross.value() / sq.value());
    }

    ProcessTrace::new(increments, moments, ProcessStats::Ar1(Ar1Stats { theta: spec.theta, x, noise, theta_hat }))
}
