//! Martingale path bookkeeping.

use thiserror::Error;

use crate::bounds::{BoundsError, WeightParam};
use crate::sum::prefix_sums;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MartingaleError {
    #[error("{increments} increments but {moments} conditional moments")]
    LengthMismatch { increments: usize, moments: usize },
    #[error("conditional second moment at step {step} is negative ({value})")]
    NegativeMoment { step: usize, value: f64 },
    #[error("index {index} out of range for a path of horizon {horizon}")]
    IndexOutOfRange { index: usize, horizon: usize },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Cumulative `M_k`, `[M]_k` and `<M>_k` for `k = 0..=n`.
///
/// Immutable once built. All three traces start at zero; the two variations
/// are nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingalePath {
    m: Vec<f64>,
    qv: Vec<f64>,
    pqv: Vec<f64>,
}

impl MartingalePath {
    /// Builds a path from increments `ΔM_k` and their conditional second
    /// moments `E[ΔM_k^2 | F_{k-1}]`.
    pub fn accumulate(increments: &[f64], cond_second_moments: &[f64]) -> Result<Self, MartingaleError> {
        if increments.len() != cond_second_moments.len() {
            return Err(MartingaleError::LengthMismatch {
                increments: increments.len(),
                moments: cond_second_moments.len(),
            });
        }
        if let Some((step, &value)) = cond_second_moments
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0))
        {
            return Err(MartingaleError::NegativeMoment { step: step + 1, value });
        }
        let squares: Vec<f64> = increments.iter().map(|d| d * d).collect();
        Ok(Self {
            m: prefix_sums(increments),
            qv: prefix_sums(&squares),
            pqv: prefix_sums(cond_second_moments),
        })
    }

    pub fn zero() -> Self {
        Self { m: vec![0.0], qv: vec![0.0], pqv: vec![0.0] }
    }

    /// The horizon `n`; traces have `n + 1` entries.
    pub fn horizon(&self) -> usize {
        self.m.len() - 1
    }

    pub fn m(&self) -> &[f64] {
        &self.m
    }

    /// Total quadratic variation `[M]_k`.
    pub fn qv(&self) -> &[f64] {
        &self.qv
    }

    /// Predictable quadratic variation `<M>_k`.
    pub fn pqv(&self) -> &[f64] {
        &self.pqv
    }

    pub fn last_m(&self) -> f64 {
        self.m[self.horizon()]
    }

    pub fn last_qv(&self) -> f64 {
        self.qv[self.horizon()]
    }

    pub fn last_pqv(&self) -> f64 {
        self.pqv[self.horizon()]
    }

    fn check_index(&self, k: usize) -> Result<(), MartingaleError> {
        if k <= self.horizon() {
            Ok(())
        } else {
            Err(MartingaleError::IndexOutOfRange { index: k, horizon: self.horizon() })
        }
    }

    /// `S_k(a) = [M]_k + c(a) <M>_k`.
    pub fn s_weighted(&self, a: f64, k: usize) -> Result<f64, MartingaleError> {
        let w = WeightParam::new(a)?;
        self.check_index(k)?;
        Ok(self.s_weighted_with(&w, k))
    }

    /// Same as [`Self::s_weighted`] with a prevalidated weight; panics on a bad index.
    pub fn s_weighted_with(&self, w: &WeightParam, k: usize) -> f64 {
        self.qv[k] + w.c() * self.pqv[k]
    }

    /// `log V_k(t) = t M_k - (a t^2 / 2) [M]_k - (b(a) t^2 / 2) <M>_k`.
    pub fn log_supermartingale_weight(&self, t: f64, a: f64, k: usize) -> Result<f64, MartingaleError> {
        let w = WeightParam::new(a)?;
        self.check_index(k)?;
        Ok(self.log_supermartingale_weight_with(t, &w, k))
    }

    pub fn log_supermartingale_weight_with(&self, t: f64, w: &WeightParam, k: usize) -> f64 {
        let half_t2 = 0.5 * t * t;
        t * self.m[k] - half_t2 * (w.a() * self.qv[k] + w.b() * self.pqv[k])
    }

    /// `V_k(t)`, exponentiated once from log space.
    pub fn supermartingale_weight(&self, t: f64, a: f64, k: usize) -> Result<f64, MartingaleError> {
        Ok(self.log_supermartingale_weight(t, a, k)?.exp())
    }
}
