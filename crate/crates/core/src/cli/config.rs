use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelKind, ChannelSpec, LuttingerParams, OmegaSign};

use super::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    LogOffsetFromThreshold,
}

/// Frequencies at which `spectral` and `dsf` tabulate.
///
/// With `linear` spacing `min`/`max` are absolute frequencies. With
/// `log-offset-from-threshold` they bound `|omega - threshold|`, and
/// particle channels get `count` points on each side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl OmegaGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            Spacing::LogOffsetFromThreshold => {
                let r = (self.max / self.min).ln();
                (0..n)
                    .map(|i| self.min * (r * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub xi: f64,
    pub v: f64,
    #[serde(alias = "m")]
    pub m_eff: f64,
    pub length: f64,
    pub c0: Option<f64>,
    pub ff_norm: Option<f64>,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            xi: 2.0,
            v: 1.0,
            m_eff: 1.0,
            length: 2.0 * std::f64::consts::PI * 1e3,
            c0: None,
            ff_norm: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Everything a run needs. Every field is optional in the JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    pub channel: String,
    pub omega_sign: Option<OmegaSign>,
    pub k_list: Vec<f64>,
    pub omega_grid: Option<OmegaGrid>,
    pub qmax: u32,
    pub bins_per_decade: u32,
    /// Largest `|omega - threshold|` binned by `spectral`; unset bins the
    /// whole reachable range.
    pub max_offset: Option<f64>,
    pub output: OutputConfig,
    /// Recorded in sidecars; no computation is randomized.
    pub seed: u64,
    pub xi_list: Vec<f64>,
    pub m_max: u32,
    pub a_list: Vec<f64>,
    pub p_list: Vec<i64>,
    pub shift_a: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ParamsConfig::default(),
            channel: ChannelKind::FermionParticle.name().to_string(),
            omega_sign: None,
            k_list: vec![0.1],
            omega_grid: None,
            qmax: 2000,
            bins_per_decade: 64,
            max_offset: None,
            output: OutputConfig::default(),
            seed: 0,
            xi_list: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            m_max: 12,
            a_list: vec![0.3, 0.7, 1.25, 1.9],
            p_list: vec![100, 1000, 10000],
            shift_a: 0.7,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn luttinger_params(&self) -> Result<LuttingerParams, CliError> {
        let p = &self.params;
        let base = LuttingerParams::new(p.xi, p.v, p.m_eff, p.length)?;
        Ok(match (p.c0, p.ff_norm) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give at most one of c0 and ff_norm".into()))
            }
            (Some(c0), None) => base.with_c0(c0)?,
            (None, Some(n)) => base.with_ff_norm(n)?,
            (None, None) => base,
        })
    }

    pub fn channel_spec(&self) -> Result<ChannelSpec, CliError> {
        let kind: ChannelKind = self.channel.parse()?;
        Ok(match self.omega_sign {
            Some(sign) => ChannelSpec::with_sign(kind, sign)?,
            None => ChannelSpec::new(kind),
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.luttinger_params()?;
        self.channel_spec()?;
        if self.qmax < 10 {
            return Err(CliError::Config(format!("qmax must be >= 10, got {}", self.qmax)));
        }
        if self.bins_per_decade == 0 {
            return Err(CliError::Config("bins_per_decade must be positive".into()));
        }
        if self.k_list.is_empty() || self.k_list.iter().any(|&k| !(k.is_finite() && k > 0.0)) {
            return Err(CliError::Config("k_list must be non-empty with every k > 0".into()));
        }
        if let Some(c) = self.max_offset {
            if !(c.is_finite() && c > 0.0) {
                return Err(CliError::Config(format!("max_offset must be > 0, got {c}")));
            }
        }
        if let Some(g) = &self.omega_grid {
            if g.count < 2 {
                return Err(CliError::Config("omega_grid.count must be >= 2".into()));
            }
            let ok = match g.spacing {
                Spacing::Linear => g.min.is_finite() && g.max.is_finite() && g.max > g.min,
                Spacing::LogOffsetFromThreshold => g.min > 0.0 && g.max.is_finite() && g.max > g.min,
            };
            if !ok {
                return Err(CliError::Config(format!(
                    "omega_grid range [{}, {}] is invalid for {:?} spacing",
                    g.min, g.max, g.spacing
                )));
            }
        }
        Ok(())
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or(Format::Csv)
    }
}
