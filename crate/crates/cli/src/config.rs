//! Run configuration: flag parsing helpers, JSON config files and merging.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub const SEED_ENV: &str = "SELFNORM_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse number {0:?}")]
    Number(String),
    #[error("cannot read config file {path}: {msg}")]
    File { path: PathBuf, msg: String },
    #[error("invalid {var} value {value:?}")]
    Env { var: &'static str, value: String },
    #[error("{0}")]
    Invalid(String),
}

/// Parses a decimal (`0.5`, `1e-3`) or a ratio of two numbers (`1/3`, `-9/16`).
///
/// Integer ratios are divided once, so the result is the correctly rounded
/// double of the exact fraction.
pub fn parse_number(s: &str) -> Result<f64, ConfigError> {
    let t = s.trim();
    let bad = || ConfigError::Number(s.to_string());
    let v = match t.split_once('/') {
        Some((num, den)) => {
            let (num, den) = (num.trim(), den.trim());
            match (num.parse::<i64>(), den.parse::<i64>()) {
                (Ok(p), Ok(q)) if q != 0 && p.unsigned_abs() < 1 << 53 && q.unsigned_abs() < 1 << 53 => {
                    p as f64 / q as f64
                }
                _ => {
                    let p: f64 = num.parse().map_err(|_| bad())?;
                    let q: f64 = den.parse().map_err(|_| bad())?;
                    p / q
                }
            }
        }
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Comma-separated list of [`parse_number`] values.
pub fn parse_list(s: &str) -> Result<NumList, ConfigError> {
    let v = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(parse_number)
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err(ConfigError::Number(s.to_string()));
    }
    Ok(NumList(v))
}

/// A list of reals. In JSON it may be a number, a string such as
/// `"1/3,9/16"`, or an array of numbers and strings.
#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

impl NumList {
    pub fn first(&self) -> f64 {
        self.0[0]
    }
}

impl Serialize for NumList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = NumList;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number, a string of numbers or an array")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<NumList, E> {
                Ok(NumList(vec![v]))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<NumList, E> {
                Ok(NumList(vec![v as f64]))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<NumList, E> {
                Ok(NumList(vec![v as f64]))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<NumList, E> {
                parse_list(v).map_err(E::custom)
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<NumList, A::Error> {
                let mut out = Vec::new();
                while let Some(item) = seq.next_element::<NumList>()? {
                    out.extend(item.0);
                }
                Ok(NumList(out))
            }
        }
        d.deserialize_any(V)
    }
}

/// A single real that also accepts `"1/3"` in JSON.
fn de_number<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    let l = Option::<NumList>::deserialize(d)?;
    match l {
        None => Ok(None),
        Some(NumList(v)) if v.len() == 1 => Ok(Some(v[0])),
        Some(_) => Err(de::Error::custom("expected a single number")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every tunable of every subcommand. Unset fields take the subcommand's
/// default. Values from flags override values from a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<NumList>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_grid: Option<NumList>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_grid: Option<NumList>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<NumList>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<NumList>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub holder_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub theta_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub gamma0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub c0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_number")]
    pub v_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub process: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Invalid(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        Self::from_json(&text).map_err(|e| ConfigError::File {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })
    }

    /// `self` with every field set in `top` replaced by `top`'s value.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        overlay!(self, top; a, a_grid, n, reps, seed, alpha, x_grid, t_grid, r_grid, y, holder_p,
            p, theta, theta_star, eta, gamma0, c0, delta, v_bar, process, out, format, workers);
        self
    }

    /// Fills `seed` from `SELFNORM_SEED` or the built-in default when unset.
    pub fn resolve_seed(&mut self, env: Option<&str>) -> Result<u64, ConfigError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        let s = match env {
            Some(v) => v.trim().parse().map_err(|_| ConfigError::Env { var: SEED_ENV, value: v.to_string() })?,
            None => DEFAULT_SEED,
        };
        self.seed = Some(s);
        Ok(s)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn a_list(&self, default: &[f64]) -> Vec<f64> {
        self.a.as_ref().map(|l| l.0.clone()).unwrap_or_else(|| default.to_vec())
    }

    pub fn x_list(&self, default: &[f64]) -> Vec<f64> {
        self.x_grid.as_ref().map(|l| l.0.clone()).unwrap_or_else(|| default.to_vec())
    }
}
