//! JSON configuration files.

use std::collections::BTreeSet;
use std::path::Path;

use geonet::analytic::QuadratureSpec;
use geonet::channel::Eta;
use geonet::montecarlo::{ExperimentConfig, Observable, DEFAULT_K_MAX, DEFAULT_TRIALS};
use geonet::{ConnectionModel, Domain};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A list of values or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Grid {
    pub fn values(&self, field: &str) -> Result<Vec<f64>, CliError> {
        let values = match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Range { start, stop, step } => {
                if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
                    return Err(CliError::config(format!(
                        "{field}: step must be positive and bounds finite"
                    )));
                }
                let count = ((stop - start) / step + 1e-9).floor();
                if count < 0.0 {
                    return Err(CliError::config(format!(
                        "{field}: stop {stop} is below start {start}"
                    )));
                }
                if count > 1e6 {
                    return Err(CliError::config(format!(
                        "{field}: range has too many points"
                    )));
                }
                // rounding keeps 1 + 3 * 0.25 from printing as 1.7500000000000002
                (0..=count as usize)
                    .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                    .collect()
            }
        };
        if values.is_empty() {
            return Err(CliError::config(format!("{field}: grid is empty")));
        }
        Ok(values)
    }
}

/// Either an explicit list of models or `eta` values sharing one `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_grid: Option<Vec<ConnectionModel>>,
    /// Path loss exponents; `"inf"` selects the disk of radius `beta^(-1/eta) -> 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<Eta>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl ModelSpec {
    pub fn models(&self) -> Result<Vec<ConnectionModel>, CliError> {
        let models = match (&self.model_grid, &self.eta) {
            (Some(_), Some(_)) => {
                return Err(CliError::config("give either model_grid or eta, not both"))
            }
            (Some(m), None) => {
                if self.beta.is_some() {
                    return Err(CliError::config("beta: only used together with eta"));
                }
                m.clone()
            }
            (None, Some(etas)) => {
                let beta = self.beta.unwrap_or(1.0);
                etas.iter()
                    .enumerate()
                    .map(|(i, e)| {
                        if e.0.is_infinite() {
                            if !(beta > 0.0 && beta.is_finite()) {
                                return Err(CliError::config(format!(
                                    "beta: must be positive, got {beta}"
                                )));
                            }
                            // r0 = beta^(-1/eta) -> 1 as eta -> inf
                            ConnectionModel::disk(1.0)
                                .map_err(|err| CliError::config(format!("eta[{i}]: {err}")))
                        } else {
                            ConnectionModel::rayleigh(beta, e.0)
                                .map_err(|err| CliError::config(format!("eta[{i}]: {err}")))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            (None, None) => return Err(CliError::config("missing model_grid (or eta)")),
        };
        if models.is_empty() {
            return Err(CliError::config("model grid is empty"));
        }
        Ok(models)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub domain: Domain,
    #[serde(flatten)]
    pub models: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_grid: Option<Grid>,
    /// Fixed node count per cell; with no density grid the density is `nodes / V`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<BTreeSet<Observable>>,
    /// Trial rendered by `render-sample`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
}

fn default_k_max() -> u32 {
    DEFAULT_K_MAX
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

impl SimulateConfig {
    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let models = self.models.models()?;
        let densities = match (&self.density_grid, self.nodes) {
            (Some(g), _) => g.values("density_grid")?,
            (None, Some(n)) => vec![n as f64 / self.domain.volume()],
            (None, None) => return Err(CliError::config("missing density_grid (or nodes)")),
        };
        for (i, rho) in densities.iter().enumerate() {
            if !(rho.is_finite() && *rho > 0.0) {
                return Err(CliError::config(format!(
                    "density_grid[{i}]: must be positive, got {rho}"
                )));
            }
        }
        let mut config = ExperimentConfig::new(self.domain, models, densities);
        config.k_max = self.k_max;
        config.trials = self.trials;
        config.master_seed = self.master_seed;
        config.nodes = self.nodes;
        if let Some(o) = &self.observables {
            if o.is_empty() {
                return Err(CliError::config("observables: must not be empty"));
            }
            config.observables = o.clone();
        }
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    MeanDegree,
    PMd,
    PFc1,
    Pi1,
    Pi1Asym,
    IsolatedNode,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::MeanDegree => "mean_degree",
            Formula::PMd => "p_md",
            Formula::PFc1 => "p_fc1",
            Formula::Pi1 => "pi1",
            Formula::Pi1Asym => "pi1_asym",
            Formula::IsolatedNode => "isolated_node",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Formula::MeanDegree,
            Formula::PMd,
            Formula::PFc1,
            Formula::Pi1,
            Formula::Pi1Asym,
            Formula::IsolatedNode,
        ]
        .into_iter()
        .find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<'de, T: for<'a> Deserialize<'a>> Deserialize<'de> for OneOrMany<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        // goes through a Value so the inner error (e.g. an unknown variant) survives
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Array(items) => items
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    serde_json::from_value(v)
                        .map_err(|e| D::Error::custom(format!("item {i}: {e}")))
                })
                .collect::<Result<Vec<T>, _>>()
                .map(OneOrMany::Many),
            v => serde_json::from_value(v)
                .map(OneOrMany::One)
                .map_err(D::Error::custom),
        }
    }
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// How the density handed to the formulas relates to the grid density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityConvention {
    /// `(N - 1) / V` with `N = round(rho V)`, matching a simulation of the same grid.
    #[default]
    Sample,
    /// The grid density itself.
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticConfig {
    pub formula: OneOrMany<Formula>,
    pub domain: Domain,
    #[serde(flatten)]
    pub models: ModelSpec,
    pub density_grid: Grid,
    /// Degree thresholds for `p_md`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<OneOrMany<u32>>,
    #[serde(default)]
    pub density_convention: DensityConvention,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    /// Clamp probabilities to `[0, 1]` in the output.
    #[serde(default)]
    pub clamp: bool,
}

impl AnalyticConfig {
    pub fn formulas(&self) -> Result<Vec<Formula>, CliError> {
        let f = self.formula.to_vec();
        if f.is_empty() {
            return Err(CliError::config("formula: list is empty"));
        }
        Ok(f)
    }

    pub fn ks(&self) -> Result<Vec<u32>, CliError> {
        let ks = self
            .k
            .as_ref()
            .map(OneOrMany::to_vec)
            .unwrap_or_else(|| vec![1]);
        if ks.is_empty() || ks.contains(&0) {
            return Err(CliError::config(
                "k: must be a non-empty list of positive integers",
            ));
        }
        Ok(ks)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}
