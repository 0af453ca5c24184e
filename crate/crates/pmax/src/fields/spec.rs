use std::collections::BTreeMap;

use super::Location;
use crate::error::{Error, Result};
use crate::stats::CorrelationModel;

/// Per-location tail-shape parameters `α(x) > 0`, keyed by location id.
///
/// Lookup of an unknown location is an error, never a default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlphaMap {
    values: BTreeMap<String, f64>,
}

impl AlphaMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, alpha: f64) -> Result<()> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Spec(format!("alpha must be a positive real, got {alpha}")));
        }
        self.values.insert(id.into(), alpha);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<f64> {
        self.values
            .get(id)
            .copied()
            .ok_or_else(|| Error::Spec(format!("no alpha configured for location '{id}'")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl FromIterator<(String, f64)> for AlphaMap {
    fn from_iter<T: IntoIterator<Item = (String, f64)>>(iter: T) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

/// Innovation family for the base layer X̂.
#[derive(Debug, Clone, PartialEq)]
pub enum Innovation {
    /// Independent unit Fréchet margins at every location.
    IndependentFrechet,
    /// Schlather max-stable field with the given spatial correlation;
    /// unit Fréchet margins.
    Schlather(CorrelationModel),
}

/// Coupling of the Z layer across locations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZCoupling {
    /// One scalar Z per time index, shared by every location.
    CommonScalar,
    /// Independent Z draws per (time, location).
    IndependentPerLocation,
}

/// Truncation policy for the Schlather spectral series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchlatherTruncation {
    /// Relative tail-mass bound for the stopping rule.
    pub epsilon: f64,
    /// Hard cap on Poisson points per draw.
    pub max_points: usize,
}

impl Default for SchlatherTruncation {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            max_points: 100_000,
        }
    }
}

impl SchlatherTruncation {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Spec(format!(
                "truncation epsilon must be in (0,1), got {}",
                self.epsilon
            )));
        }
        if self.max_points < 1 {
            return Err(Error::Spec("truncation max_points must be >= 1".into()));
        }
        Ok(())
    }
}

/// Full generative description of a pMAX random field.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub innovation: Innovation,
    /// Moving-maxima weights (w_0, …, w_q); must sum to 1 so the X layer
    /// keeps standard Fréchet margins. The reference configurations use (2/3, 1/3).
    pub temporal_weights: Vec<f64>,
    pub z_coupling: ZCoupling,
    pub alpha: AlphaMap,
    pub locations: Vec<Location>,
    pub truncation: SchlatherTruncation,
}

pub const WEIGHT_SUM_TOL: f64 = 1e-12;

impl ModelSpec {
    /// Reference configuration with independent Fréchet innovations:
    /// weights (2/3, 1/3), one shared scalar Z per time index.
    pub fn independent(locations: Vec<Location>, alpha: AlphaMap) -> Self {
        Self {
            innovation: Innovation::IndependentFrechet,
            temporal_weights: vec![2.0 / 3.0, 1.0 / 3.0],
            z_coupling: ZCoupling::CommonScalar,
            alpha,
            locations,
            truncation: SchlatherTruncation::default(),
        }
    }

    /// Reference configuration with Schlather innovations of the given
    /// correlation: weights (2/3, 1/3), one shared scalar Z per time index.
    pub fn schlather(locations: Vec<Location>, alpha: AlphaMap, corr: CorrelationModel) -> Self {
        Self {
            innovation: Innovation::Schlather(corr),
            ..Self::independent(locations, alpha)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.locations.is_empty() {
            return Err(Error::Spec("model needs at least one location".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for loc in &self.locations {
            if !seen.insert(loc.id.as_str()) {
                return Err(Error::Spec(format!("duplicate location id '{}'", loc.id)));
            }
            self.alpha.get(&loc.id)?;
        }
        if self.temporal_weights.is_empty() {
            return Err(Error::Spec("temporal weights must be non-empty".into()));
        }
        if self.temporal_weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::Spec("temporal weights must be non-negative".into()));
        }
        if !self.temporal_weights.iter().any(|&w| w > 0.0) {
            return Err(Error::Spec("at least one temporal weight must be positive".into()));
        }
        let sum: f64 = self.temporal_weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Spec(format!(
                "temporal weights must sum to 1 within {WEIGHT_SUM_TOL:.0e}, got {sum}"
            )));
        }
        self.truncation.validate()
    }

    /// Moving-maxima order q (number of warm-up rows needed).
    pub fn order(&self) -> usize {
        self.temporal_weights.len() - 1
    }

    pub fn location_index(&self, id: &str) -> Result<usize> {
        self.locations
            .iter()
            .position(|l| l.id == id)
            .ok_or_else(|| Error::Domain(format!("unknown location '{id}'")))
    }
}

/// Which generative layer a sample represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    /// Raw innovations X̂.
    Innovation,
    /// Moving-maxima output X.
    X,
    /// Power-layer input Z.
    Z,
    /// The pMAX composition Y.
    Y,
}

/// A simulated panel of positive values indexed by (time, location), with
/// provenance metadata. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldSample {
    values: Vec<Vec<f64>>,
    spec: ModelSpec,
    seed: crate::stats::RngStream,
    layer: Layer,
}

impl FieldSample {
    pub fn new(
        values: Vec<Vec<f64>>,
        spec: ModelSpec,
        seed: crate::stats::RngStream,
        layer: Layer,
    ) -> Result<Self> {
        let m = spec.locations.len();
        for row in &values {
            if row.len() != m {
                return Err(Error::Spec(format!(
                    "row width {} does not match location count {m}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::Numeric("field values must be strictly positive and finite".into()));
            }
        }
        Ok(Self {
            values,
            spec,
            seed,
            layer,
        })
    }

    pub fn n_time(&self) -> usize {
        self.values.len()
    }

    pub fn n_locations(&self) -> usize {
        self.spec.locations.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn column(&self, loc_index: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[loc_index]).collect()
    }

    pub fn value(&self, t: usize, loc_index: usize) -> f64 {
        self.values[t][loc_index]
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn seed(&self) -> crate::stats::RngStream {
        self.seed
    }

    pub fn layer(&self) -> Layer {
        self.layer
    }
}
