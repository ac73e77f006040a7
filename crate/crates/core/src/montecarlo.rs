//! Monte Carlo estimation of tail events and expectations.
//!
//! Replicate `r` of a run with seed `s` always uses stream
//! `StreamKey { seed: s, replicate: r }`. Per-replicate results are
//! collected in replicate order and reduced sequentially, so estimates are
//! bit-identical for any number of rayon workers.
//!
//! Tail probabilities carry the two-sided Hoeffding interval
//! `p_hat ± sqrt(log(2 / alpha) / (2 N))`, clipped to `[0, 1]`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BaselineKind, BoundsError, WeightParam};
use crate::processes::{idla_exact_moments, ProcessError, ProcessSpec, ProcessTrace};
use crate::rng::{CounterRng, StreamKey};
use crate::sum::mean_and_se;

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_TAIL_SAMPLES: usize = 100_000;
pub const DEFAULT_EXPECTATION_SAMPLES: usize = 10_000;
pub const MIN_SAMPLES: usize = 100;

/// Exponents over which `inf_{p > 1}` of the Laplace-transform bound is taken.
pub const LAPLACE_P_GRID: [f64; 5] = [1.5, 2.0, 3.0, 4.0, 8.0];

/// Number of standard errors used when a Monte Carlo expectation feeds a bound.
const AUX_SE_MULTIPLIER: f64 = 3.0;

/// Offsets the seed of auxiliary estimates (moments, Laplace transforms) so
/// they never reuse the replicate streams of the event being tested.
const AUX_SEED_SALT: u64 = 0x5EED_A11C_E000_0001;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("alpha = {0} must lie in (0, 1)")]
    BadAlpha(f64),
    #[error("{what} is not defined for the {process} process")]
    WrongProcess { what: &'static str, process: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty threshold grid")]
    EmptyGrid,
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

pub type Result<T> = std::result::Result<T, McError>;

/// Sample size, seed and confidence parameter of one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub alpha: f64,
}

impl McConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { n_samples, seed, alpha: DEFAULT_ALPHA }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(McError::TooFewSamples(self.n_samples));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(McError::BadAlpha(self.alpha));
        }
        Ok(())
    }

    fn aux(&self) -> Self {
        Self { seed: self.seed ^ AUX_SEED_SALT, ..*self }
    }
}

/// Hoeffding radius `sqrt(log(2 / alpha) / (2 n))`.
pub fn hoeffding_radius(n_samples: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n_samples as f64)).sqrt()
}

/// Empirical frequency with its Hoeffding interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub p_hat: f64,
    pub hits: u64,
    pub n_samples: usize,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl MCEstimate {
    pub fn from_hits(hits: u64, cfg: &McConfig) -> Self {
        let p_hat = hits as f64 / cfg.n_samples as f64;
        let eps = hoeffding_radius(cfg.n_samples, cfg.alpha);
        Self {
            p_hat,
            hits,
            n_samples: cfg.n_samples,
            ci_lo: (p_hat - eps).max(0.0),
            ci_hi: (p_hat + eps).min(1.0),
            alpha: cfg.alpha,
            seed: cfg.seed,
        }
    }

    pub fn radius(&self) -> f64 {
        hoeffding_radius(self.n_samples, self.alpha)
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl ExpectationEstimate {
    pub fn from_values(values: &[f64], cfg: &McConfig) -> Self {
        let (mean, std_error) = mean_and_se(values);
        Self { mean, std_error, n_samples: values.len(), seed: cfg.seed }
    }

    /// `mean <= target + k * se`.
    pub fn within_upper(&self, target: f64, k: f64) -> bool {
        self.mean <= target + k * self.std_error
    }

    /// `|mean - target| <= k * se`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// Runs `f` on `n_samples` independent traces, returning results in replicate order.
pub fn replicate_map<T, F>(spec: &ProcessSpec, n_samples: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&ProcessTrace) -> T + Sync,
{
    spec.validate()?;
    (0..n_samples as u64)
        .into_par_iter()
        .map(|r| {
            spec.simulate(StreamKey::new(seed, r))
                .map(|t| f(&t))
                .map_err(McError::from)
        })
        .collect()
}

/// Frequency of an arbitrary indicator over counter-based streams.
pub fn estimate_indicator<F>(cfg: &McConfig, f: F) -> Result<MCEstimate>
where
    F: Fn(CounterRng) -> bool + Sync,
{
    cfg.validate()?;
    let hits = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|r| u64::from(f(StreamKey::new(cfg.seed, r).stream())))
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(MCEstimate::from_hits(hits, cfg))
}

fn require_kind(spec: &ProcessSpec, want: &'static str, what: &'static str) -> Result<()> {
    if spec.name() == want {
        Ok(())
    } else {
        Err(McError::WrongProcess { what, process: spec.name() })
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(McError::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

/// A tail event evaluated at the horizon `n` of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TailEvent {
    /// `|M_n| >= x` and `S_n(a) <= y`.
    Deviation { x: f64, y: f64, a: f64 },
    /// `|M_n| >= x S_n(a)` and `S_n(a) >= y`.
    SelfNormalized { x: f64, y: f64, a: f64 },
    /// `|M_n| >= x S_n(a)`.
    SelfNormalizedAny { x: f64, a: f64 },
    /// `|M_n| >= x <M>_n` and `c(a) <M>_n >= [M]_n + y`.
    PqvNormalized { x: f64, y: f64, a: f64 },
    /// `|M_n| >= (x / sqrt(B_q)) sqrt(a S_n(a) + moment)`, with
    /// `moment = E[|M_n|^p]^(2/p)`.
    MissingFactor { x: f64, a: f64, p: f64, moment: f64 },
    /// AR(1): `|theta_hat_n - theta| >= x`.
    ArEstimator { x: f64 },
    /// IDLA: `|X_n| / n >= x`.
    IdlaScaled { x: f64 },
    /// IDLA: `|X_n| / sqrt(n) >= x`.
    IdlaSqrtScaled { x: f64 },
    /// Learning: `R_bar_n >= R_hat_n + x`.
    LearningExcess { x: f64 },
    /// Learning: `R_bar_n >= R_hat_n + sqrt(-2a (1 + c(a) v) log(delta) / n)`,
    /// with `v = v_bar` or, when absent, the path's own second-moment average.
    LearningOslr2 { a: f64, delta: f64, v_bar: Option<f64> },
    /// Learning: `R_bar_n >= Phi_a^{-1}(R_hat_n)`.
    LearningOslr3 { a: f64, delta: f64 },
    /// Learning: `R_bar_n >= ` the Cesa-Bianchi & Gentile threshold.
    LearningCbg { delta: f64 },
}

impl TailEvent {
    /// Checks parameters and process compatibility.
    pub fn check(&self, spec: &ProcessSpec) -> Result<()> {
        let n = spec.horizon();
        match *self {
            TailEvent::Deviation { x, y, a }
            | TailEvent::SelfNormalized { x, y, a }
            | TailEvent::PqvNormalized { x, y, a } => {
                positive("x", x)?;
                positive("y", y)?;
                WeightParam::new(a)?;
            }
            TailEvent::SelfNormalizedAny { x, a } => {
                positive("x", x)?;
                WeightParam::new(a)?;
            }
            TailEvent::MissingFactor { x, a, p, moment } => {
                positive("x", x)?;
                WeightParam::new(a)?;
                bounds::HolderPair::new(p)?;
                if !(moment >= 0.0 && moment.is_finite()) {
                    return Err(McError::InvalidParameter(format!("moment = {moment}")));
                }
            }
            TailEvent::ArEstimator { x } => {
                require_kind(spec, "ar1", "the estimator deviation event")?;
                positive("x", x)?;
            }
            TailEvent::IdlaScaled { x } | TailEvent::IdlaSqrtScaled { x } => {
                require_kind(spec, "idla", "the cluster asymmetry event")?;
                positive("x", x)?;
            }
            TailEvent::LearningExcess { x } => {
                require_kind(spec, "learn", "the risk excess event")?;
                positive("x", x)?;
            }
            TailEvent::LearningOslr2 { a, delta, v_bar } => {
                require_kind(spec, "learn", "the risk threshold event")?;
                bounds::learning_threshold(n, a, delta, v_bar.unwrap_or(1.0))?;
            }
            TailEvent::LearningOslr3 { a, delta } => {
                require_kind(spec, "learn", "the risk threshold event")?;
                bounds::learning_phi_inverse(0.0, n, a, delta)?;
            }
            TailEvent::LearningCbg { delta } => {
                require_kind(spec, "learn", "the risk threshold event")?;
                bounds::cbg_threshold(0.0, n, delta)?;
            }
        }
        Ok(())
    }

    /// Indicator of the event on one trace. Call [`Self::check`] first.
    pub fn occurs(&self, trace: &ProcessTrace) -> bool {
        let path = &trace.path;
        let n = path.horizon();
        let m = path.last_m().abs();
        let weighted = |a: f64| {
            let w = WeightParam::new(a).expect("checked weight");
            path.s_weighted_with(&w, n)
        };
        match *self {
            TailEvent::Deviation { x, y, a } => m >= x && weighted(a) <= y,
            TailEvent::SelfNormalized { x, y, a } => {
                let s = weighted(a);
                m >= x * s && s >= y
            }
            TailEvent::SelfNormalizedAny { x, a } => m >= x * weighted(a),
            TailEvent::PqvNormalized { x, y, a } => {
                let c = bounds::weight_c(a).expect("checked weight");
                let pqv = path.last_pqv();
                m >= x * pqv && c * pqv >= path.last_qv() + y
            }
            TailEvent::MissingFactor { x, a, p, moment } => {
                let h = bounds::HolderPair::new(p).expect("checked order");
                m >= x / h.b.sqrt() * (a * weighted(a) + moment).sqrt()
            }
            TailEvent::ArEstimator { x } => {
                trace.ar1().expect("checked process").estimation_error() >= x
            }
            TailEvent::IdlaScaled { x } => {
                let st = trace.idla().expect("checked process");
                st.x_n().unsigned_abs() as f64 / n as f64 >= x
            }
            TailEvent::IdlaSqrtScaled { x } => {
                let st = trace.idla().expect("checked process");
                st.x_n().unsigned_abs() as f64 / (n as f64).sqrt() >= x
            }
            TailEvent::LearningExcess { x } => {
                let st = trace.learn().expect("checked process");
                st.average_risk_n() >= st.empirical_risk_n() + x
            }
            TailEvent::LearningOslr2 { a, delta, v_bar } => {
                let st = trace.learn().expect("checked process");
                let v = v_bar.unwrap_or_else(|| st.second_moment_avg_n());
                let w = bounds::learning_threshold(n as u64, a, delta, v).expect("checked");
                st.average_risk_n() >= st.empirical_risk_n() + w
            }
            TailEvent::LearningOslr3 { a, delta } => {
                let st = trace.learn().expect("checked process");
                let t = bounds::learning_phi_inverse(st.empirical_risk_n(), n as u64, a, delta)
                    .expect("checked");
                st.average_risk_n() >= t
            }
            TailEvent::LearningCbg { delta } => {
                let st = trace.learn().expect("checked process");
                let t = bounds::cbg_threshold(st.empirical_risk_n(), n as u64, delta).expect("checked");
                st.average_risk_n() >= t
            }
        }
    }
}

/// Frequency of `event` over `cfg.n_samples` independent traces of `spec`.
pub fn estimate_event(spec: &ProcessSpec, event: &TailEvent, cfg: &McConfig) -> Result<MCEstimate> {
    Ok(estimate_events(spec, std::slice::from_ref(event), cfg)?[0])
}

/// Several events on the same replicates; one simulation per replicate.
pub fn estimate_events(spec: &ProcessSpec, events: &[TailEvent], cfg: &McConfig) -> Result<Vec<MCEstimate>> {
    cfg.validate()?;
    spec.validate()?;
    for e in events {
        e.check(spec)?;
    }
    let flags = replicate_map(spec, cfg.n_samples, cfg.seed, |t| {
        events.iter().map(|e| e.occurs(t)).collect::<Vec<bool>>()
    })?;
    let mut hits = vec![0u64; events.len()];
    for row in &flags {
        for (h, &f) in hits.iter_mut().zip(row) {
            *h += u64::from(f);
        }
    }
    Ok(hits.into_iter().map(|h| MCEstimate::from_hits(h, cfg)).collect())
}

/// A per-path functional whose mean is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "functional", rename_all = "snake_case")]
pub enum Functional {
    /// `V_k(t)`; `k = None` means the horizon.
    SupermartingaleWeight { t: f64, a: f64, k: Option<usize> },
    /// `2 min_p (E[exp(-(p - 1) x^2 S_n(a) / 2a)])^(1/p)` over [`LAPLACE_P_GRID`].
    LaplaceS { x: f64, a: f64 },
    /// `exp(t <M>_n)`.
    LaplacePqv { t: f64 },
    /// `M_k^2`.
    SecondMoment { k: Option<usize> },
    /// `|M_k|^p`.
    PthMoment { p: f64, k: Option<usize> },
    /// `X_n^2` for the AR(1) and IDLA state.
    StateSquare,
}

impl Functional {
    fn check(&self, spec: &ProcessSpec) -> Result<()> {
        let n = spec.horizon() as usize;
        let check_k = |k: Option<usize>| match k {
            Some(k) if k > n => Err(McError::InvalidParameter(format!("index k = {k} exceeds horizon {n}"))),
            _ => Ok(()),
        };
        match *self {
            Functional::SupermartingaleWeight { t, a, k } => {
                if !t.is_finite() {
                    return Err(McError::InvalidParameter(format!("t = {t}")));
                }
                WeightParam::new(a)?;
                check_k(k)
            }
            Functional::LaplaceS { x, a } => {
                positive("x", x)?;
                WeightParam::new(a)?;
                Ok(())
            }
            Functional::LaplacePqv { t } => {
                if t.is_finite() {
                    Ok(())
                } else {
                    Err(McError::InvalidParameter(format!("t = {t}")))
                }
            }
            Functional::SecondMoment { k } => check_k(k),
            Functional::PthMoment { p, k } => {
                positive("p", p)?;
                check_k(k)
            }
            Functional::StateSquare => match spec {
                ProcessSpec::Learn(_) => Err(McError::WrongProcess {
                    what: "the state square",
                    process: spec.name(),
                }),
                _ => Ok(()),
            },
        }
    }

    fn values(&self, t: &ProcessTrace) -> Vec<f64> {
        let path = &t.path;
        let n = path.horizon();
        match *self {
            Functional::SupermartingaleWeight { t: tt, a, k } => {
                let w = WeightParam::new(a).expect("checked weight");
                vec![path.log_supermartingale_weight_with(tt, &w, k.unwrap_or(n)).exp()]
            }
            Functional::LaplaceS { x, a } => {
                let w = WeightParam::new(a).expect("checked weight");
                let s = path.s_weighted_with(&w, n);
                LAPLACE_P_GRID
                    .iter()
                    .map(|p| (-(p - 1.0) * x * x * s / (2.0 * a)).exp())
                    .collect()
            }
            Functional::LaplacePqv { t: tt } => vec![(tt * path.last_pqv()).exp()],
            Functional::SecondMoment { k } => {
                let m = path.m()[k.unwrap_or(n)];
                vec![m * m]
            }
            Functional::PthMoment { p, k } => vec![path.m()[k.unwrap_or(n)].abs().powf(p)],
            Functional::StateSquare => {
                let x = match (t.ar1(), t.idla()) {
                    (Some(s), _) => s.x[n],
                    (_, Some(s)) => s.x[n] as f64,
                    _ => unreachable!("checked process"),
                };
                vec![x * x]
            }
        }
    }
}

/// One point of the Laplace-transform bound profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplacePoint {
    pub p: f64,
    pub expectation: ExpectationEstimate,
    /// `2 E^(1/p)` at the point estimate.
    pub bound: f64,
    /// `2 (E + 3 se)^(1/p)`.
    pub bound_upper: f64,
}

fn per_path(spec: &ProcessSpec, functional: &Functional, cfg: &McConfig) -> Result<Vec<Vec<f64>>> {
    if cfg.n_samples < MIN_SAMPLES {
        return Err(McError::TooFewSamples(cfg.n_samples));
    }
    spec.validate()?;
    functional.check(spec)?;
    replicate_map(spec, cfg.n_samples, cfg.seed, |t| functional.values(t))
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

/// Mean and standard error of a functional.
///
/// For [`Functional::LaplaceS`] the returned mean is the grid minimum of the
/// bound and the standard error comes from the delta method at that `p`.
pub fn estimate_expectation(spec: &ProcessSpec, functional: &Functional, cfg: &McConfig) -> Result<ExpectationEstimate> {
    if let Functional::LaplaceS { .. } = functional {
        let profile = laplace_profile_from(per_path(spec, functional, cfg)?, cfg);
        let best = profile
            .iter()
            .min_by(|a, b| a.bound.total_cmp(&b.bound))
            .expect("nonempty grid");
        let e = best.expectation;
        let p = best.p;
        let deriv = if e.mean > 0.0 { 2.0 / p * e.mean.powf(1.0 / p - 1.0) } else { 0.0 };
        return Ok(ExpectationEstimate {
            mean: best.bound,
            std_error: deriv * e.std_error,
            n_samples: e.n_samples,
            seed: cfg.seed,
        });
    }
    let rows = per_path(spec, functional, cfg)?;
    Ok(ExpectationEstimate::from_values(&column(&rows, 0), cfg))
}

fn laplace_profile_from(rows: Vec<Vec<f64>>, cfg: &McConfig) -> Vec<LaplacePoint> {
    LAPLACE_P_GRID
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let e = ExpectationEstimate::from_values(&column(&rows, j), cfg);
            LaplacePoint {
                p,
                expectation: e,
                bound: (2.0 * e.mean.powf(1.0 / p)).min(1.0),
                bound_upper: (2.0 * (e.mean + AUX_SE_MULTIPLIER * e.std_error).powf(1.0 / p)).min(1.0),
            }
        })
        .collect()
}

/// The Laplace-transform bound at every `p` of [`LAPLACE_P_GRID`].
pub fn laplace_profile(spec: &ProcessSpec, x: f64, a: f64, cfg: &McConfig) -> Result<Vec<LaplacePoint>> {
    let f = Functional::LaplaceS { x, a };
    Ok(laplace_profile_from(per_path(spec, &f, cfg)?, cfg))
}

/// A named theoretical bound in a comparison row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedBound {
    pub name: String,
    pub value: f64,
    /// Whether theory says the bound must dominate the event probability.
    /// Reference curves for other noise models set this to false.
    pub dominates: bool,
}

impl NamedBound {
    fn new(name: &str, value: f64, dominates: bool) -> Self {
        Self { name: name.to_string(), value, dominates }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub x: f64,
    pub bounds: Vec<NamedBound>,
    pub empirical: MCEstimate,
    /// `ci_lo <= ` every dominating bound.
    pub satisfied: bool,
}

impl BoundRow {
    pub fn new(x: f64, bounds: Vec<NamedBound>, empirical: MCEstimate) -> Self {
        let satisfied = bounds
            .iter()
            .filter(|b| b.dominates)
            .all(|b| empirical.ci_lo <= b.value);
        Self { x, bounds, empirical, satisfied }
    }

    pub fn bound(&self, name: &str) -> Option<f64> {
        self.bounds.iter().find(|b| b.name == name).map(|b| b.value)
    }
}

/// Which inequality a comparison table exercises. The threshold grid is
/// interpreted per suite: a deviation level for most, `delta` for the three
/// learning coverage suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "suite", rename_all = "snake_case")]
pub enum Suite {
    Deviation { y: f64 },
    SelfNormalized { y: f64 },
    SelfNormalizedLaplace,
    PqvNormalized { y: f64 },
    MissingFactor { p: f64 },
    ArEstimator,
    IdlaScaled,
    IdlaSqrtScaled,
    LearningExcess,
    LearningOslr2 { v_bar: Option<f64> },
    LearningOslr3,
    LearningCbg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareConfig {
    pub a: f64,
    pub mc: McConfig,
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

/// One [`BoundRow`] per threshold.
pub fn compare_bounds(spec: &ProcessSpec, suite: Suite, x_grid: &[f64], config: &CompareConfig) -> Result<Vec<BoundRow>> {
    if x_grid.is_empty() {
        return Err(McError::EmptyGrid);
    }
    config.mc.validate()?;
    spec.validate()?;
    let a = config.a;
    let n = spec.horizon();

    // suite-level auxiliary quantities
    let moment = match suite {
        Suite::MissingFactor { p } => Some(match spec {
            ProcessSpec::Idla(s) if same(p, 2.0) => idla_exact_moments(s.n)?.1,
            _ => {
                let f = Functional::PthMoment { p, k: None };
                estimate_expectation(spec, &f, &config.mc.aux())?.mean.powf(2.0 / p)
            }
        }),
        _ => None,
    };

    let mut events = Vec::with_capacity(x_grid.len());
    let mut rows_bounds = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let (event, named) = match suite {
            Suite::Deviation { y } => {
                let mut b = vec![NamedBound::new("weighted", bounds::exp_tail_bound(x, y, a)?, true)];
                if same(a, 9.0 / 16.0) {
                    b.push(NamedBound::new("bt2008", bounds::baseline_bound(BaselineKind::Bt2008, x, y)?, true));
                    b.push(NamedBound::new("improved", bounds::baseline_bound(BaselineKind::Improved, x, y)?, true));
                }
                if same(a, 1.0 / 3.0) {
                    b.push(NamedBound::new("delyon", bounds::baseline_bound(BaselineKind::Delyon, x, y)?, true));
                }
                (TailEvent::Deviation { x, y, a }, b)
            }
            Suite::SelfNormalized { y } => (
                TailEvent::SelfNormalized { x, y, a },
                vec![NamedBound::new("weighted_ratio", bounds::ratio_tail_bound(x, y, a)?, true)],
            ),
            Suite::SelfNormalizedLaplace => {
                let profile = laplace_profile(spec, x, a, &config.mc.aux())?;
                let upper = profile.iter().map(|p| p.bound_upper).fold(1.0, f64::min);
                let point = profile.iter().map(|p| p.bound).fold(1.0, f64::min);
                (
                    TailEvent::SelfNormalizedAny { x, a },
                    vec![
                        NamedBound::new("laplace_grid_upper", upper, true),
                        NamedBound::new("laplace_grid", point, false),
                    ],
                )
            }
            Suite::PqvNormalized { y } => (
                TailEvent::PqvNormalized { x, y, a },
                vec![NamedBound::new("pqv_ratio", bounds::pqv_ratio_bound(x, y, a)?, true)],
            ),
            Suite::MissingFactor { p } => {
                let mf = bounds::missing_factor_bound(x, p)?;
                (
                    TailEvent::MissingFactor { x, a, p, moment: moment.expect("computed above") },
                    vec![NamedBound::new("missing_factor", mf.bound, true)],
                )
            }
            Suite::ArEstimator => {
                let ProcessSpec::Ar1(s) = spec else {
                    return Err(McError::WrongProcess { what: "the estimator suite", process: spec.name() });
                };
                (
                    TailEvent::ArEstimator { x },
                    vec![
                        NamedBound::new("weighted_ar", bounds::ar_bound(x, n, s.p, a)?, true),
                        NamedBound::new(
                            "gauss_ar",
                            bounds::baseline_bound(BaselineKind::GaussAr, x, n as f64)?,
                            false,
                        ),
                    ],
                )
            }
            Suite::IdlaScaled => (
                TailEvent::IdlaScaled { x },
                vec![
                    NamedBound::new("weighted_idla", bounds::idla_bounds(x, n, a)?.scaled, true),
                    NamedBound::new("azuma", bounds::baseline_bound(BaselineKind::AzumaIdla, x, n as f64)?, true),
                ],
            ),
            Suite::IdlaSqrtScaled => (
                TailEvent::IdlaSqrtScaled { x },
                vec![NamedBound::new("weighted_idla_sqrt", bounds::idla_bounds(x, n, a)?.sqrt_scaled, true)],
            ),
            Suite::LearningExcess => (
                TailEvent::LearningExcess { x },
                vec![
                    NamedBound::new("oslr1", bounds::learning_tail_bound(x, n, a, 1.0)?, true),
                    NamedBound::new("cbc2004", (-(n as f64) * x * x / 2.0).exp().min(1.0), true),
                ],
            ),
            Suite::LearningOslr2 { v_bar } => (
                TailEvent::LearningOslr2 { a, delta: x, v_bar },
                vec![NamedBound::new("delta", x, true)],
            ),
            Suite::LearningOslr3 => (
                TailEvent::LearningOslr3 { a, delta: x },
                vec![NamedBound::new("delta", x, true)],
            ),
            Suite::LearningCbg => (TailEvent::LearningCbg { delta: x }, vec![NamedBound::new("delta", x, true)]),
        };
        events.push(event);
        rows_bounds.push(named);
    }

    let estimates = estimate_events(spec, &events, &config.mc)?;
    Ok(x_grid
        .iter()
        .zip(rows_bounds)
        .zip(estimates)
        .map(|((&x, b), e)| BoundRow::new(x, b, e))
        .collect())
}
