//! Online learning of a one-dimensional threshold classifier.
//!
//! Inputs are `X ~ Uniform[0, 1]`; the clean label is `1{X >= theta_star}`
//! and is flipped with probability `eta`. Hypotheses are thresholds
//! `h_c(x) = 1{x >= c}` under 0-1 loss, whose true risk is
//! `eta + (1 - 2 eta) |c - theta_star|`. After a mistake on step `k` the
//! threshold moves by `gamma0 / sqrt(k)` toward the observed label and is
//! clamped to `[0, 1]`.
//!
//! `M_n = sum_k (R(H_{k-1}) - loss_k)`, so `M_n / n = R_bar_n - R_hat_n`.

use serde::{Deserialize, Serialize};

use super::{invalid, ProcessError, ProcessStats, ProcessTrace};
use crate::rng::StreamKey;
use crate::sum::CompensatedSum;

const LANE_INPUT: u32 = 0;
const LANE_FLIP: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnSpec {
    pub theta_star: f64,
    pub eta: f64,
    pub gamma0: f64,
    pub c0: f64,
    pub n: u64,
}

impl LearnSpec {
    pub fn validate(&self) -> Result<(), ProcessError> {
        if !(0.0..=1.0).contains(&self.theta_star) {
            return Err(invalid(format!("learn: theta_star = {} must lie in [0, 1]", self.theta_star)));
        }
        if !(self.eta >= 0.0 && self.eta < 0.5) {
            return Err(invalid(format!("learn: eta = {} must lie in [0, 1/2)", self.eta)));
        }
        if !(self.gamma0.is_finite() && self.gamma0 > 0.0) {
            return Err(invalid(format!("learn: gamma0 = {} must be positive", self.gamma0)));
        }
        if !(0.0..=1.0).contains(&self.c0) {
            return Err(invalid(format!("learn: c0 = {} must lie in [0, 1]", self.c0)));
        }
        if self.n < 1 {
            return Err(invalid("learn: horizon n must be at least 1"));
        }
        Ok(())
    }
}

/// True 0-1 risk of `h_c` under the noisy threshold model.
pub fn true_risk(c: f64, theta_star: f64, eta: f64) -> f64 {
    eta + (1.0 - 2.0 * eta) * (c - theta_star).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnStats {
    /// Thresholds `c_0..=c_n`; `H_k = h_{c_k}`.
    pub threshold: Vec<f64>,
    /// `R(H_{k-1})`, `k = 1..=n`.
    pub true_risk: Vec<f64>,
    /// `loss(H_{k-1}(X_k), Y_k)`.
    pub loss: Vec<f64>,
    /// `R_hat_k`.
    pub empirical_risk: Vec<f64>,
    /// `R_bar_k`.
    pub average_risk: Vec<f64>,
    /// `(1/k) sum_j E[loss^2 of H_{j-1}]`; equals `average_risk` under 0-1 loss.
    pub second_moment_avg: Vec<f64>,
}

impl LearnStats {
    pub fn empirical_risk_n(&self) -> f64 {
        *self.empirical_risk.last().expect("horizon >= 1")
    }

    pub fn average_risk_n(&self) -> f64 {
        *self.average_risk.last().expect("horizon >= 1")
    }

    pub fn second_moment_avg_n(&self) -> f64 {
        *self.second_moment_avg.last().expect("horizon >= 1")
    }
}

pub fn learning_simulate(spec: &LearnSpec, key: StreamKey) -> Result<ProcessTrace, ProcessError> {
    spec.validate()?;
    let rng = key.stream();
    let n = spec.n as usize;

    let mut threshold = Vec::with_capacity(n + 1);
    let mut risk = Vec::with_capacity(n);
    let mut loss = Vec::with_capacity(n);
    let mut emp = Vec::with_capacity(n);
    let mut avg = Vec::with_capacity(n);
    let mut increments = Vec::with_capacity(n);
    let mut moments = Vec::with_capacity(n);
    let mut loss_sum = CompensatedSum::new();
    let mut risk_sum = CompensatedSum::new();

    threshold.push(spec.c0);
    for k in 1..=n {
        let c = threshold[k - 1];
        let r = true_risk(c, spec.theta_star, spec.eta);
        let x = rng.uniform(k as u64, LANE_INPUT);
        let clean = x >= spec.theta_star;
        let label = if rng.uniform(k as u64, LANE_FLIP) < spec.eta { !clean } else { clean };
        let pred = x >= c;
        let l = if pred != label { 1.0 } else { 0.0 };
        let next = if pred != label {
            let gamma = spec.gamma0 / (k as f64).sqrt();
            let dir = f64::from(u8::from(pred)) - f64::from(u8::from(label));
            (c + gamma * dir).clamp(0.0, 1.0)
        } else {
            c
        };
        threshold.push(next);
        risk.push(r);
        loss.push(l);
        increments.push(r - l);
        moments.push(r * (1.0 - r));
        loss_sum.add(l);
        risk_sum.add(r);
        emp.push(loss_sum.value() / k as f64);
        avg.push(risk_sum.value() / k as f64);
    }

    let stats = LearnStats {
        threshold,
        true_risk: risk,
        loss,
        empirical_risk: emp,
        second_moment_avg: avg.clone(),
        average_risk: avg,
    };
    ProcessTrace::new(increments, moments, ProcessStats::Learn(stats))
}
