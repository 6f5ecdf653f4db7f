//! Command-line flags layered over an optional flat JSON config file.
//!
//! Every flag has a config key of the same name with `-` replaced by `_`
//! (`--rel-tol` is `rel_tol`). Flags given on the command line win.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rabi_core::{Axis, ModelKind, SweepAxis, Truncation};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Qrm,
    AsymQrm,
    Qjc,
    AsymQjc,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Qrm => ModelKind::Qrm,
            Model::AsymQrm => ModelKind::AsymQrm,
            Model::Qjc => ModelKind::Qjc,
            Model::AsymQjc => ModelKind::AsymQjc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    G,
    Epsilon,
    Omega0,
}

impl From<AxisName> for SweepAxis {
    fn from(a: AxisName) -> Self {
        match a {
            AxisName::G => SweepAxis::G,
            AxisName::Epsilon => SweepAxis::Epsilon,
            AxisName::Omega0 => SweepAxis::Omega0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts[..] else {
            return Err(format!("expected min:max:count, got `{s}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let count: usize = count
            .trim()
            .parse()
            .map_err(|e| format!("count `{count}`: {e}"))?;
        if count < 1 {
            return Err("grid count must be at least 1".into());
        }
        Ok(GridSpec {
            min: num(min)?,
            max: num(max)?,
            count,
        })
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl GridSpec {
    pub fn axis(self, name: AxisName) -> Result<Axis> {
        Ok(Axis::new(
            name.into(),
            rabi_core::linspace(self.min, self.max, self.count),
        )?)
    }
}

/// A fixed truncation or `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncSpec {
    Fixed(usize),
    Auto,
}

impl std::str::FromStr for TruncSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(TruncSpec::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(TruncSpec::Fixed(n)),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

impl<'de> Deserialize<'de> for TruncSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => format!("{n}").parse().map_err(serde::de::Error::custom),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! layered {
    ($name:ident { $($field:ident),* $(,)? }) => {
        impl $name {
            /// Fills every field not set on the command line from `file`.
            pub fn or(self, file: &$name) -> $name {
                $name { $($field: self.$field.or_else(|| file.$field.clone()),)* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Qubit splitting in units of the field frequency.
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    /// Static drive amplitude.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fock cutoff, or `auto` to converge it per grid point.
    #[arg(long)]
    pub trunc: Option<TruncSpec>,
    /// Relative tolerance for `--trunc auto`.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Number of lowest levels to record.
    #[arg(long)]
    pub levels: Option<usize>,
}
layered!(ModelArgs {
    model,
    omega0,
    g,
    epsilon,
    trunc,
    rel_tol,
    levels
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub axis: Option<AxisName>,
    /// `min:max:count`.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    /// Fast axis of a two-dimensional sweep.
    #[arg(long, value_enum)]
    pub axis2: Option<AxisName>,
    #[arg(long)]
    pub grid2: Option<GridSpec>,
}
layered!(GridArgs {
    axis,
    grid,
    axis2,
    grid2
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    pub jobs: Option<usize>,
}
layered!(OutputArgs { out, format, jobs });

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct CrossingArgs {
    /// Lower level of the gap to scan (also the upper level of the gap below
    /// unless `--one-sided`).
    #[arg(long)]
    pub level: Option<usize>,
    /// Only gap minima below this value are reported.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, num_args = 0, default_missing_value = "true")]
    pub one_sided: Option<bool>,
}
layered!(CrossingArgs {
    level,
    threshold,
    one_sided
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct JcArgs {
    /// Photon sector of the doublet `|n,+⟩, |n+1,−⟩`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Detuning `ω₀ − ω`.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fock cutoff of the numerical comparison.
    #[arg(long)]
    pub trunc: Option<TruncSpec>,
}
layered!(JcArgs {
    n,
    delta,
    epsilon,
    trunc
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct RegimeArgs {
    #[arg(long)]
    pub g_max: Option<f64>,
}
layered!(RegimeArgs { g_max });

const KNOWN_KEYS: &[&str] = &[
    "model",
    "omega0",
    "g",
    "epsilon",
    "trunc",
    "rel_tol",
    "levels",
    "axis",
    "grid",
    "axis2",
    "grid2",
    "out",
    "format",
    "jobs",
    "level",
    "threshold",
    "one_sided",
    "n",
    "delta",
    "g_max",
];

/// Parsed config file; each group picks out its own keys.
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    pub model: ModelArgs,
    pub grid: GridArgs,
    pub output: OutputArgs,
    pub crossing: CrossingArgs,
    pub jc: JcArgs,
    pub regime: RegimeArgs,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::config(format!("config file: {e}")))?;
        let serde_json::Value::Object(map) = &value else {
            return Err(CliError::config("config file must be a flat JSON object"));
        };
        if let Some(key) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(CliError::config(format!("unknown config key `{key}`")));
        }
        if let Some((key, _)) = map.iter().find(|(_, v)| v.is_object() || v.is_array()) {
            return Err(CliError::config(format!(
                "config key `{key}` must be a scalar"
            )));
        }
        fn group<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
            serde_json::from_value(v.clone())
                .map_err(|e| CliError::config(format!("config file: {e}")))
        }
        Ok(FileConfig {
            model: group(&value)?,
            grid: group(&value)?,
            output: group(&value)?,
            crossing: group(&value)?,
            jc: group(&value)?,
            regime: group(&value)?,
        })
    }
}

/// Fully resolved model settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSettings {
    pub kind: ModelKind,
    pub params: rabi_core::ModelParams,
    pub truncation: Truncation,
    pub n_levels: usize,
}

pub const DEFAULT_TRUNC: usize = 400;
pub const DEFAULT_LEVELS: usize = 8;
pub const DEFAULT_REL_TOL: f64 = 1e-8;

impl ModelArgs {
    pub fn resolve(&self) -> Result<ModelSettings> {
        let params = rabi_core::ModelParams::new(
            self.omega0.unwrap_or(1.0),
            self.g.unwrap_or(0.0),
            self.epsilon.unwrap_or(0.0),
        );
        params.validate()?;
        let truncation = match self.trunc.unwrap_or(TruncSpec::Fixed(DEFAULT_TRUNC)) {
            TruncSpec::Fixed(n) => Truncation::Fixed(n),
            TruncSpec::Auto => {
                let rel_tol = self.rel_tol.unwrap_or(DEFAULT_REL_TOL);
                if !(rel_tol > 0.0) || !rel_tol.is_finite() {
                    return Err(CliError::config(format!(
                        "--rel-tol must be positive (got {rel_tol})"
                    )));
                }
                Truncation::auto(rel_tol)
            }
        };
        let n_levels = self.levels.unwrap_or(DEFAULT_LEVELS);
        if n_levels < 1 {
            return Err(CliError::config("--levels must be at least 1"));
        }
        Ok(ModelSettings {
            kind: self.model.unwrap_or(Model::AsymQrm).into(),
            params,
            truncation,
            n_levels,
        })
    }
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn jobs(&self) -> Result<Option<usize>> {
        match self.jobs {
            Some(0) => Err(CliError::config("--jobs must be at least 1")),
            j => Ok(j),
        }
    }
}
