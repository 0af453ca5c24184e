//! JSON run configuration: schema-validated description of the model plus
//! command-specific parameters. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use pmax::estimation::{McConfig, McModel};
use pmax::fields::{AlphaMap, Innovation, Location, ModelSpec, ZCoupling};
use pmax::stats::CorrelationModel;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    #[serde(default)]
    pub run: RunSection,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub innovation: InnovationKind,
    pub weights: Vec<f64>,
    pub z_coupling: CouplingKind,
    pub correlation: Option<CorrelationSection>,
    pub locations: Vec<LocationSection>,
    pub alpha: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnovationKind {
    IndependentFrechet,
    Schlather,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    CommonScalar,
    IndependentPerLocation,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSection {
    pub c2: f64,
    pub nu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocationSection {
    pub id: String,
    pub x1: f64,
    pub x2: f64,
}

/// Command-specific parameters; every field optional so one config can
/// serve several commands.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub n_time: Option<usize>,
    pub alphas: Option<Vec<f64>>,
    pub sample_sizes: Option<Vec<usize>>,
    pub replicates: Option<usize>,
    pub percentiles: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn correlation_model(&self) -> CliResult<CorrelationModel> {
        let c = self
            .model
            .correlation
            .as_ref()
            .ok_or_else(|| CliError::Config("schlather innovation requires a correlation section".into()))?;
        CorrelationModel::powered_exponential(c.c2, c.nu).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_model_spec(&self) -> CliResult<ModelSpec> {
        let innovation = match self.model.innovation {
            InnovationKind::IndependentFrechet => {
                if self.model.correlation.is_some() {
                    return Err(CliError::Config(
                        "correlation section is only valid with the schlather innovation".into(),
                    ));
                }
                Innovation::IndependentFrechet
            }
            InnovationKind::Schlather => Innovation::Schlather(self.correlation_model()?),
        };
        let locations: Vec<Location> = self
            .model
            .locations
            .iter()
            .map(|l| Location::new(l.id.clone(), l.x1, l.x2))
            .collect();
        let mut alpha = AlphaMap::new();
        for (id, &a) in &self.model.alpha {
            alpha.insert(id.clone(), a).map_err(|e| CliError::Config(e.to_string()))?;
        }
        let z_coupling = match self.model.z_coupling {
            CouplingKind::CommonScalar => ZCoupling::CommonScalar,
            CouplingKind::IndependentPerLocation => ZCoupling::IndependentPerLocation,
        };
        let mut spec = ModelSpec::independent(locations, alpha);
        spec.innovation = innovation;
        spec.z_coupling = z_coupling;
        spec.temporal_weights = self.model.weights.clone();
        spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(spec)
    }

    /// Study config for `mc-table`; unset run fields fall back to the
    /// built-in study defaults.
    pub fn to_mc_config(&self, master_seed: u64) -> CliResult<McConfig> {
        let model = match self.model.innovation {
            InnovationKind::IndependentFrechet => McModel::IndependentInnovations,
            InnovationKind::Schlather => McModel::SchlatherInnovations(self.correlation_model()?),
        };
        let defaults = McConfig::study_defaults(model, master_seed);
        let run = &self.run;
        let config = McConfig {
            alphas: run.alphas.clone().unwrap_or(defaults.alphas),
            sample_sizes: run.sample_sizes.clone().unwrap_or(defaults.sample_sizes),
            replicates: run.replicates.unwrap_or(defaults.replicates),
            percentiles: run.percentiles.clone().unwrap_or(defaults.percentiles),
            model: defaults.model,
            master_seed,
        };
        config.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }

    /// Effective seed: command-line value, else config, else 0.
    pub fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.seed).unwrap_or(0)
    }

    /// Stable hex digest of the configuration content (FNV-1a over the
    /// canonical debug serialization), echoed by commands for provenance.
    pub fn digest(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in format!("{:?}/{:?}/{:?}", self.model, self.run, self.seed).bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}
