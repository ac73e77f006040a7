//! The `verify` suites: grid checks of pointwise inequalities and Monte Carlo
//! checks of tail bounds and supermartingale properties.

use selfnorm_core::bounds::{self, WeightParam};
use selfnorm_core::montecarlo::{
    self, compare_bounds, estimate_expectation, replicate_map, CompareConfig, Functional, McConfig, Suite,
    DEFAULT_EXPECTATION_SAMPLES, DEFAULT_TAIL_SAMPLES,
};
use selfnorm_core::processes::Ar1Spec;
use selfnorm_core::sum::CompensatedSum;
use selfnorm_core::ProcessSpec;

use crate::commands::{linspace, process_spec, ProcessKind, MARGIN_TOL};
use crate::config::{ConfigError, RunConfig};
use crate::report::{Cell, Table};
use crate::CliError;

/// Grid used for the pointwise margin suite.
pub const HERMITE_A_GRID: [f64; 7] = [0.13, 0.2, 1.0 / 3.0, 9.0 / 16.0, 1.0, 2.0, 10.0];
pub const HERMITE_X_RANGE: (f64, f64) = (-50.0, 50.0);
pub const HERMITE_X_POINTS: usize = 100_001;
pub const DISCRIMINANT_TOL: f64 = 1e-10;

pub const KS_P_GRID: [f64; 5] = [0.01, 0.1, 1.0 / 3.0, 0.499, 0.5];
pub const KS_S_POINTS: usize = 40_001;
pub const KS_REL_TOL: f64 = 1e-12;

pub const SUPERMG_T_GRID: [f64; 6] = [-0.05, -0.01, -0.001, 0.001, 0.01, 0.05];
pub const SUPERMG_A: [f64; 2] = [1.0 / 3.0, 9.0 / 16.0];
pub const SUPERMG_N: u64 = 200;

/// Standard errors of slack for expectation checks.
pub const SE_SLACK: f64 = 3.0;

const PILOT_REPS: usize = 1000;
const PILOT_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Multiples of the natural scale used when no `--x-grid` is given.
const SCALE_MULTIPLES: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    /// Pointwise margin of the weighted exponential inequality over a dense grid.
    Hermite,
    /// Mean of the exponential supermartingale stays below one.
    Supermartingale,
    /// Two-point Laplace transform against its Gaussian-type majorant.
    KearnsSaul,
    /// `|M_n| >= x` with `S_n(a) <= y`.
    Deviation,
    /// `|M_n| >= x S_n(a)` with `S_n(a) >= y`.
    Ratio,
    /// `|M_n| >= x S_n(a)` against the Monte Carlo Laplace-transform bound.
    RatioLaplace,
    /// `|M_n| >= x <M>_n` with `c(a) <M>_n >= [M]_n + y`.
    PqvRatio,
    /// Normalization by `sqrt(a S_n(a) + moment)`.
    MissingFactor,
    /// Least-squares estimator deviation for AR(1).
    Ar,
    /// Laplace transform of `<M>_n` and the variation sandwich for AR(1).
    ArLaplace,
    /// IDLA asymmetry `|X_n| / n`.
    IdlaScaled,
    /// IDLA asymmetry `|X_n| / sqrt(n)`.
    IdlaSqrt,
    /// Excess of the average risk over the empirical risk.
    LearnExcess,
    /// Coverage of the explicit risk threshold.
    LearnOslr2,
    /// Coverage of the inverted risk threshold.
    LearnOslr3,
    /// Coverage of the Cesa-Bianchi & Gentile threshold.
    LearnCbg,
}

fn mc(cfg: &RunConfig, default_reps: usize) -> Result<McConfig, CliError> {
    let m = McConfig::new(cfg.reps.unwrap_or(default_reps), cfg.seed())
        .with_alpha(cfg.alpha.unwrap_or(montecarlo::DEFAULT_ALPHA));
    m.validate()?;
    Ok(m)
}

fn kind_or(cfg: &RunConfig, default: ProcessKind) -> Result<ProcessKind, CliError> {
    match &cfg.process {
        Some(s) => Ok(ProcessKind::parse(s)?),
        None => Ok(default),
    }
}

fn require(cfg: &RunConfig, kind: ProcessKind) -> Result<(), CliError> {
    match &cfg.process {
        Some(s) if ProcessKind::parse(s)? != kind => {
            Err(ConfigError::Invalid(format!("this check runs on the {kind:?} process only, not {s}")).into())
        }
        _ => Ok(()),
    }
}

pub fn run(check: Check, cfg: &RunConfig) -> Result<Table, CliError> {
    match check {
        Check::Hermite => hermite_suite(cfg),
        Check::KearnsSaul => kearns_saul_suite(cfg),
        Check::Supermartingale => supermartingale_suite(cfg),
        Check::ArLaplace => ar_laplace_suite(cfg),
        Check::Deviation | Check::Ratio | Check::RatioLaplace | Check::PqvRatio => {
            let spec = process_spec(cfg, kind_or(cfg, ProcessKind::Ar1)?, None)?;
            normalized_suite(check, &spec, cfg)
        }
        Check::MissingFactor => {
            let spec = process_spec(cfg, kind_or(cfg, ProcessKind::Idla)?, None)?;
            let p = cfg.holder_p.unwrap_or(2.0);
            tail_suite(&spec, cfg, &[1.0 / 3.0], |_| {
                Ok((Suite::MissingFactor { p }, cfg.x_list(&[1.0, 1.5, 2.0, 2.5, 3.0]), None))
            })
        }
        Check::Ar => {
            require(cfg, ProcessKind::Ar1)?;
            let spec = process_spec(cfg, ProcessKind::Ar1, None)?;
            let p = match spec {
                ProcessSpec::Ar1(s) => s.p,
                _ => unreachable!(),
            };
            tail_suite(&spec, cfg, &[1.0 / 3.0], |a| {
                let top = bounds::ar_max_deviation(a, p)?;
                let grid = [0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0].map(|f| f * top);
                Ok((Suite::ArEstimator, cfg.x_list(&grid), None))
            })
        }
        Check::IdlaScaled | Check::IdlaSqrt => {
            require(cfg, ProcessKind::Idla)?;
            let spec = process_spec(cfg, ProcessKind::Idla, None)?;
            tail_suite(&spec, cfg, &[1.0 / 3.0], |_| {
                Ok(if check == Check::IdlaScaled {
                    (Suite::IdlaScaled, cfg.x_list(&[0.1, 0.2, 0.3, 0.4, 0.5]), None)
                } else {
                    (Suite::IdlaSqrtScaled, cfg.x_list(&[0.5, 1.0, 1.5, 2.0, 2.5, 3.0]), None)
                })
            })
        }
        Check::LearnExcess | Check::LearnOslr2 | Check::LearnOslr3 | Check::LearnCbg => {
            require(cfg, ProcessKind::Learn)?;
            let spec = process_spec(cfg, ProcessKind::Learn, None)?;
            let deltas = match (&cfg.x_grid, cfg.delta) {
                (None, Some(d)) => vec![d],
                _ => cfg.x_list(&[0.05, 0.1, 0.2, 0.3]),
            };
            let v_bar = Some(cfg.v_bar.unwrap_or(1.0));
            tail_suite(&spec, cfg, &[1.0 / 3.0], |_| {
                Ok(match check {
                    Check::LearnExcess => (Suite::LearningExcess, cfg.x_list(&[0.05, 0.1, 0.15, 0.2, 0.3]), None),
                    Check::LearnOslr2 => (Suite::LearningOslr2 { v_bar }, deltas.clone(), None),
                    Check::LearnOslr3 => (Suite::LearningOslr3, deltas.clone(), None),
                    _ => (Suite::LearningCbg, deltas.clone(), None),
                })
            })
        }
    }
}

fn hermite_suite(cfg: &RunConfig) -> Result<Table, CliError> {
    let a_grid = match (&cfg.a_grid, &cfg.a) {
        (Some(g), _) if !g.0.is_empty() => g.0.clone(),
        (_, Some(a)) => a.0.clone(),
        _ => HERMITE_A_GRID.to_vec(),
    };
    let xs = match &cfg.x_grid {
        Some(g) => g.0.clone(),
        None => linspace(HERMITE_X_RANGE.0, HERMITE_X_RANGE.1, HERMITE_X_POINTS),
    };
    let mut t = Table::new(["a", "c", "b", "points", "min_margin", "argmin_x", "discriminant", "satisfied"]);
    for a in a_grid {
        let w = WeightParam::new(a)?;
        let (mut min, mut arg) = (f64::INFINITY, f64::NAN);
        for &x in &xs {
            let m = bounds::hermite_margin(x, a)?;
            if m < min {
                min = m;
                arg = x;
            }
        }
        let disc = bounds::pab_discriminant(a, w.b())?;
        t.push_checked(
            vec![a.into(), w.c().into(), w.b().into(), xs.len().into(), min.into(), arg.into(), disc.into()],
            min >= -MARGIN_TOL && disc.abs() <= DISCRIMINANT_TOL,
        );
    }
    Ok(t)
}

/// `p e^{qs} + q e^{-ps}` against `exp(phi(p) s^2 / 4)`; reports the largest
/// relative excess over the `s` grid.
fn kearns_saul_suite(cfg: &RunConfig) -> Result<Table, CliError> {
    let ps = match &cfg.p {
        Some(p) => vec![*p],
        None => KS_P_GRID.to_vec(),
    };
    let ss = match &cfg.x_grid {
        Some(g) => g.0.clone(),
        None => linspace(-20.0, 20.0, KS_S_POINTS),
    };
    let mut t = Table::new(["p", "phi", "points", "max_rel_excess", "argmax_s", "satisfied"]);
    for p in ps {
        let phi = bounds::kearns_saul_phi(p)?;
        let q = 1.0 - p;
        let (mut worst, mut arg) = (f64::NEG_INFINITY, f64::NAN);
        for &s in &ss {
            let lhs = p * (q * s).exp() + q * (-p * s).exp();
            let rhs = (phi * s * s / 4.0).exp();
            let excess = lhs / rhs - 1.0;
            if excess > worst {
                worst = excess;
                arg = s;
            }
        }
        t.push_checked(
            vec![p.into(), phi.into(), ss.len().into(), worst.into(), arg.into()],
            worst <= KS_REL_TOL,
        );
    }
    Ok(t)
}

fn supermartingale_suite(cfg: &RunConfig) -> Result<Table, CliError> {
    let kinds = match &cfg.process {
        Some(s) => vec![ProcessKind::parse(s)?],
        None => vec![ProcessKind::Idla, ProcessKind::Ar1, ProcessKind::Learn],
    };
    let mc = mc(cfg, DEFAULT_EXPECTATION_SAMPLES)?;
    let ts = cfg.t_grid.as_ref().map(|l| l.0.clone()).unwrap_or_else(|| SUPERMG_T_GRID.to_vec());
    let mut specs = Vec::new();
    for k in kinds {
        let mut spec = process_spec(cfg, k, Some(SUPERMG_N))?;
        // the generic defaults for AR(1) use p = 1/2; this suite exercises the asymmetric case
        if let (ProcessSpec::Ar1(s), None) = (&mut spec, cfg.p) {
            s.p = 1.0 / 3.0;
        }
        specs.push(spec);
    }
    let mut t = Table::new(["process", "a", "t", "mean", "std_error", "bound", "satisfied"]);
    for spec in &specs {
        for a in cfg.a_list(&SUPERMG_A) {
            for &tt in &ts {
                let e = estimate_expectation(spec, &Functional::SupermartingaleWeight { t: tt, a, k: None }, &mc)?;
                t.push_checked(
                    vec![spec.name().into(), a.into(), tt.into(), e.mean.into(), e.std_error.into(), 1.0.into()],
                    e.within_upper(1.0, SE_SLACK),
                );
            }
        }
    }
    Ok(t)
}

fn ar_spec(spec: &ProcessSpec) -> Ar1Spec {
    match spec {
        ProcessSpec::Ar1(s) => *s,
        _ => unreachable!("built as AR(1)"),
    }
}

/// Laplace transform of `<M>_n` at `t < 0` against `exp(4 n t p^2 sigma^2)`,
/// plus the pathwise sandwich of `[M]_n` between multiples of `<M>_n`.
fn ar_laplace_suite(cfg: &RunConfig) -> Result<Table, CliError> {
    require(cfg, ProcessKind::Ar1)?;
    let spec = process_spec(cfg, ProcessKind::Ar1, None)?;
    let s = ar_spec(&spec);
    let sigma2 = s.sigma2();
    let n = s.n as f64;
    let mc = mc(cfg, DEFAULT_EXPECTATION_SAMPLES)?;
    let ts = cfg
        .t_grid
        .as_ref()
        .map(|l| l.0.clone())
        .unwrap_or_else(|| vec![-1.0 / (2.0 * sigma2), -1.0 / (4.0 * sigma2)]);
    let mut t = Table::new(["check", "t", "value", "std_error", "bound", "satisfied"]);
    for &tt in &ts {
        if !(tt < 0.0) {
            return Err(ConfigError::Invalid(format!("t = {tt} must be negative")).into());
        }
        let e = estimate_expectation(&spec, &Functional::LaplacePqv { t: tt }, &mc)?;
        let bound = (4.0 * n * tt * s.p * s.p * sigma2).exp();
        let rel = if e.mean > 0.0 { e.std_error / e.mean } else { 0.0 };
        t.push_checked(
            vec!["laplace_pqv".into(), tt.into(), e.mean.into(), e.std_error.into(), bound.into()],
            e.mean <= bound * (1.0 + SE_SLACK * rel),
        );
    }
    let (lo, hi) = {
        let r = s.p / s.q();
        (r.min(1.0 / r), r.max(1.0 / r))
    };
    let bad = replicate_map(&spec, mc.n_samples, mc.seed, |tr| {
        let (qv, pqv) = (tr.path.last_qv(), tr.path.last_pqv());
        let tol = 1e-12 * pqv;
        !(lo * pqv - tol <= qv && qv <= hi * pqv + tol)
    })?
    .into_iter()
    .filter(|&b| b)
    .count();
    t.push_checked(
        vec!["ratio_sandwich_violations".into(), Cell::Empty, bad.into(), Cell::Empty, 0u64.into()],
        bad == 0,
    );
    Ok(t)
}

/// Pilot means of `S_n(a)` and `c(a) <M>_n - [M]_n` over streams disjoint
/// from the main run; used to pick default `y` values and `x` scales.
fn pilot(spec: &ProcessSpec, a: f64, seed: u64) -> Result<(f64, f64), CliError> {
    let w = WeightParam::new(a)?;
    let n = spec.horizon() as usize;
    let v = replicate_map(spec, PILOT_REPS, seed ^ PILOT_SALT, |t| {
        (t.path.s_weighted_with(&w, n), w.c() * t.path.last_pqv() - t.path.last_qv())
    })?;
    let s: CompensatedSum = v.iter().map(|x| x.0).collect();
    let g: CompensatedSum = v.iter().map(|x| x.1).collect();
    Ok((s.value() / PILOT_REPS as f64, g.value() / PILOT_REPS as f64))
}

fn normalized_suite(check: Check, spec: &ProcessSpec, cfg: &RunConfig) -> Result<Table, CliError> {
    tail_suite(spec, cfg, &[1.0 / 3.0], |a| {
        let (s_mean, gap_mean) = pilot(spec, a, cfg.seed())?;
        let scaled = |scale: f64| cfg.x_list(&SCALE_MULTIPLES.map(|k| k * scale));
        Ok(match check {
            Check::Deviation => {
                let y = cfg.y.unwrap_or(s_mean);
                (Suite::Deviation { y }, scaled((a * y).sqrt()), Some(y))
            }
            Check::Ratio => {
                let y = cfg.y.unwrap_or(0.5 * s_mean);
                (Suite::SelfNormalized { y }, scaled((a / y).sqrt()), Some(y))
            }
            Check::RatioLaplace => (Suite::SelfNormalizedLaplace, scaled((a / s_mean).sqrt()), None),
            _ => {
                let y = cfg.y.unwrap_or(0.5 * gap_mean);
                if !(y > 0.0) {
                    return Err(ConfigError::Invalid(format!(
                        "c(a) <M>_n - [M]_n has nonpositive mean for a = {a}; pass --y"
                    ))
                    .into());
                }
                let c = bounds::weight_c(a)?;
                (Suite::PqvNormalized { y }, scaled(c * (a / y).sqrt()), Some(y))
            }
        })
    })
}

type SuitePlan = (Suite, Vec<f64>, Option<f64>);

/// Runs one comparison table per `a`, with columns
/// `a, [y,] x, p_hat, ci_lo, ci_hi, n_samples, <bounds...>, satisfied`.
fn tail_suite<F>(spec: &ProcessSpec, cfg: &RunConfig, default_a: &[f64], plan: F) -> Result<Table, CliError>
where
    F: Fn(f64) -> Result<SuitePlan, CliError>,
{
    let mc = mc(cfg, DEFAULT_TAIL_SAMPLES)?;
    let mut blocks = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut has_y = false;
    for a in cfg.a_list(default_a) {
        let (suite, grid, y) = plan(a)?;
        has_y |= y.is_some();
        let rows = compare_bounds(spec, suite, &grid, &CompareConfig { a, mc })?;
        for r in &rows {
            for b in &r.bounds {
                if !names.contains(&b.name) {
                    names.push(b.name.clone());
                }
            }
        }
        blocks.push((a, y, rows));
    }
    let mut cols: Vec<String> = vec!["a".into()];
    if has_y {
        cols.push("y".into());
    }
    cols.extend(["x", "p_hat", "ci_lo", "ci_hi", "n_samples"].map(String::from));
    cols.extend(names.iter().cloned());
    cols.push("satisfied".into());
    let mut t = Table::new(cols);
    for (a, y, rows) in blocks {
        for r in rows {
            let mut row: Vec<Cell> = vec![a.into()];
            if has_y {
                row.push(y.map(Cell::Num).unwrap_or(Cell::Empty));
            }
            let e = r.empirical;
            row.extend([r.x.into(), e.p_hat.into(), e.ci_lo.into(), e.ci_hi.into(), e.n_samples.into()]);
            for name in &names {
                row.push(r.bound(name).map(Cell::Num).unwrap_or(Cell::Empty));
            }
            t.push_checked(row, r.satisfied);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NumList;

    fn small(n: u64, reps: usize) -> RunConfig {
        RunConfig { n: Some(n), reps: Some(reps), seed: Some(9), ..Default::default() }
    }

    #[test]
    fn hermite_default_grid_passes() {
        let cfg = RunConfig { x_grid: Some(NumList(linspace(-50.0, 50.0, 2001))), ..Default::default() };
        let t = run(Check::Hermite, &cfg).unwrap();
        assert_eq!(t.rows.len(), HERMITE_A_GRID.len());
        assert_eq!(t.violations, 0);
    }

    #[test]
    fn kearns_saul_passes() {
        let t = run(Check::KearnsSaul, &RunConfig::default()).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert_eq!(t.violations, 0);
    }

    #[test]
    fn idla_table_columns() {
        let t = run(Check::IdlaScaled, &small(50, 2000)).unwrap();
        assert_eq!(t.rows.len(), 5);
        for c in ["a", "x", "p_hat", "ci_lo", "weighted_idla", "azuma", "satisfied"] {
            assert!(t.column(c).is_some(), "{c}");
        }
        assert_eq!(t.violations, 0);
    }

    #[test]
    fn wrong_process_is_rejected() {
        let cfg = RunConfig { process: Some("idla".into()), ..small(10, 200) };
        assert!(run(Check::Ar, &cfg).is_err());
        let cfg = RunConfig { process: Some("nope".into()), ..small(10, 200) };
        assert!(run(Check::Deviation, &cfg).is_err());
    }

    #[test]
    fn normalized_suites_run() {
        for check in [Check::Deviation, Check::Ratio, Check::RatioLaplace, Check::PqvRatio] {
            let t = run(check, &small(50, 500)).unwrap();
            assert_eq!(t.rows.len(), SCALE_MULTIPLES.len(), "{check:?}");
            assert_eq!(t.violations, 0, "{check:?}");
        }
    }

    #[test]
    fn ar_laplace_runs() {
        let cfg = RunConfig { p: Some(1.0 / 3.0), ..small(50, 1000) };
        let t = run(Check::ArLaplace, &cfg).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.violations, 0);
    }
}
