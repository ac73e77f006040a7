//! The non-Monte-Carlo subcommands and shared process construction.

use selfnorm_core::bounds::{self, SPECIAL_WEIGHTS};
use selfnorm_core::processes::{Ar1Spec, IdlaSpec, LearnSpec};
use selfnorm_core::{ProcessSpec, StreamKey};

use crate::config::{ConfigError, RunConfig};
use crate::report::{Cell, Table};
use crate::CliError;

pub const AR1_DEFAULTS: Ar1Spec = Ar1Spec { p: 0.5, theta: 0.5, n: 200 };
pub const IDLA_DEFAULT_N: u64 = 100;
pub const LEARN_DEFAULTS: LearnSpec = LearnSpec { theta_star: 0.5, eta: 0.1, gamma0: 0.5, c0: 0.0, n: 100 };

/// Tolerance below zero accepted for pointwise margins.
pub const MARGIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ProcessKind {
    Ar1,
    Idla,
    Learn,
}

impl ProcessKind {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "ar1" => Ok(Self::Ar1),
            "idla" => Ok(Self::Idla),
            "learn" => Ok(Self::Learn),
            _ => Err(ConfigError::Invalid(format!("unknown process {s:?}; expected ar1, idla or learn"))),
        }
    }
}

/// Builds and validates a process from the config, filling unset parameters
/// from the defaults and `default_n`.
pub fn process_spec(cfg: &RunConfig, kind: ProcessKind, default_n: Option<u64>) -> Result<ProcessSpec, CliError> {
    let spec = match kind {
        ProcessKind::Ar1 => ProcessSpec::Ar1(Ar1Spec {
            p: cfg.p.unwrap_or(AR1_DEFAULTS.p),
            theta: cfg.theta.unwrap_or(AR1_DEFAULTS.theta),
            n: cfg.n.or(default_n).unwrap_or(AR1_DEFAULTS.n),
        }),
        ProcessKind::Idla => ProcessSpec::Idla(IdlaSpec { n: cfg.n.or(default_n).unwrap_or(IDLA_DEFAULT_N) }),
        ProcessKind::Learn => ProcessSpec::Learn(LearnSpec {
            theta_star: cfg.theta_star.unwrap_or(LEARN_DEFAULTS.theta_star),
            eta: cfg.eta.unwrap_or(LEARN_DEFAULTS.eta),
            gamma0: cfg.gamma0.unwrap_or(LEARN_DEFAULTS.gamma0),
            c0: cfg.c0.unwrap_or(LEARN_DEFAULTS.c0),
            n: cfg.n.or(default_n).unwrap_or(LEARN_DEFAULTS.n),
        }),
    };
    spec.validate()?;
    Ok(spec)
}

/// Rows `(a, c(a), b(a))`, or the eight special `(a, c)` pairs.
pub fn weights(cfg: &RunConfig, special: bool) -> Result<Table, CliError> {
    if special {
        let mut t = Table::new(["a", "c"]);
        for (a, _) in SPECIAL_WEIGHTS {
            t.push(vec![a.into(), bounds::weight_c(a)?.into()]);
        }
        return Ok(t);
    }
    let default: Vec<f64> = SPECIAL_WEIGHTS.iter().map(|w| w.0).collect();
    let mut t = Table::new(["a", "c", "b"]);
    for a in cfg.a_list(&default) {
        let w = bounds::WeightParam::new(a)?;
        t.push(vec![a.into(), w.c().into(), w.b().into()]);
    }
    Ok(t)
}

/// Evenly spaced points `lo, lo + step, ..., hi` computed by index.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { hi } else { lo + step * i as f64 }).collect()
}

/// Margin of the pointwise inequality at each `(a, x)`.
pub fn hermite(cfg: &RunConfig) -> Result<Table, CliError> {
    let xs = cfg.x_list(&linspace(-5.0, 5.0, 21));
    let mut t = Table::new(["a", "x", "margin", "satisfied"]);
    for a in cfg.a_list(&[1.0 / 3.0]) {
        for &x in &xs {
            let m = bounds::hermite_margin(x, a)?;
            t.push_checked(vec![a.into(), x.into(), m.into()], m >= -MARGIN_TOL);
        }
    }
    Ok(t)
}

/// One trace of the chosen process, one row per step.
pub fn simulate(cfg: &RunConfig, kind: ProcessKind) -> Result<Table, CliError> {
    let spec = process_spec(cfg, kind, None)?;
    let trace = spec.simulate(StreamKey::new(cfg.seed(), 0))?;
    let mut buf = Vec::new();
    trace.write_csv(&mut buf)?;
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    let mut t = Table::new(trace.csv_columns());
    for rec in rd.records() {
        let rec = rec.map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
        t.push(
            rec.iter()
                .map(|f| {
                    if f.is_empty() {
                        Cell::Empty
                    } else if let Ok(i) = f.parse::<i64>() {
                        Cell::Int(i)
                    } else {
                        f.parse::<f64>().map(Cell::Num).unwrap_or_else(|_| Cell::Text(f.to_string()))
                    }
                })
                .collect(),
        );
    }
    Ok(t)
}

pub const LEARNING_N: u64 = 100;
pub const LEARNING_A: f64 = 1.0 / 3.0;
pub const LEARNING_DELTA: f64 = 0.2;

/// Risk thresholds over a grid of empirical risks. A row is satisfied when
/// the inverted bound is strictly below the Cesa-Bianchi & Gentile value.
pub fn learning_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let n = cfg.n.unwrap_or(LEARNING_N);
    let a = cfg.a.as_ref().map(|l| l.first()).unwrap_or(LEARNING_A);
    let delta = cfg.delta.unwrap_or(LEARNING_DELTA);
    let v_bar = cfg.v_bar.unwrap_or(1.0);
    let floor = bounds::learning_min_horizon(a, delta)?;
    if n == 0 || (n as f64) < floor {
        return Err(ConfigError::Invalid(format!(
            "n = {n} is below the minimum horizon {floor} for a = {a}, delta = {delta}"
        ))
        .into());
    }
    let grid = cfg.r_grid.as_ref().map(|l| l.0.clone()).unwrap_or_else(|| linspace(0.0, 0.5, 11));
    let width2 = bounds::learning_threshold(n, a, delta, v_bar)?;
    let width_cbc = bounds::cbc_threshold(n, delta)?;
    let mut t = Table::new([
        "r_hat",
        "oslr2",
        "cbc2004",
        "oslr3",
        "cbg",
        "cbg_minus_oslr3",
        "cbg_minus_oslr2",
        "oslr2_minus_oslr3",
        "satisfied",
    ]);
    for r in grid {
        let o2 = r + width2;
        let o3 = bounds::learning_phi_inverse(r, n, a, delta)?;
        let cbg = bounds::cbg_threshold(r, n, delta)?;
        t.push_checked(
            vec![
                r.into(),
                o2.into(),
                (r + width_cbc).into(),
                o3.into(),
                cbg.into(),
                (cbg - o3).into(),
                (cbg - o2).into(),
                (o2 - o3).into(),
            ],
            o3 < cbg,
        );
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NumList;

    #[test]
    fn weights_a_third() {
        let cfg = RunConfig { a: Some(NumList(vec![1.0 / 3.0])), ..Default::default() };
        let t = weights(&cfg, false).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.values("c")[0], 2.0);
        assert!((t.values("b")[0] - 2.0 / 3.0).abs() < 1e-15);
        let cfg = RunConfig { a: Some(NumList(vec![0.1])), ..Default::default() };
        assert!(weights(&cfg, false).is_err());
        assert_eq!(weights(&RunConfig::default(), true).unwrap().rows.len(), 8);
    }

    #[test]
    fn linspace_hits_ends() {
        let v = linspace(-50.0, 50.0, 100_001);
        assert_eq!(v[0], -50.0);
        assert_eq!(v[100_000], 50.0);
        assert!((v[50_000]).abs() < 1e-12);
    }

    #[test]
    fn learning_table_floor() {
        let t = learning_table(&RunConfig::default()).unwrap();
        assert_eq!(t.violations, 0);
        assert!((t.values("cbg")[0] - 0.9749).abs() < 5e-4);
        let cfg = RunConfig { n: Some(1), ..Default::default() };
        let e = learning_table(&cfg).unwrap_err();
        assert!(e.to_string().contains("minimum horizon"));
    }

    #[test]
    fn simulate_rows() {
        let cfg = RunConfig { n: Some(12), ..Default::default() };
        let t = simulate(&cfg, ProcessKind::Idla).unwrap();
        assert_eq!(t.rows.len(), 13);
        assert_eq!(t.rows[0][4], Cell::Empty);
        assert!(simulate(&RunConfig { n: Some(0), ..Default::default() }, ProcessKind::Idla).is_err());
    }
}
