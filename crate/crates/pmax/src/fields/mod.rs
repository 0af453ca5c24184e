//! Simulators for every generative layer of the pMAX model: i.i.d. Fréchet
//! innovation fields, the moving-maxima temporal filter, the common-Z spatial
//! coupling, the Schlather max-stable field and the pMAX composition.

mod location;
mod schlather;
mod simulate;
mod spec;

pub use location::Location;
pub use schlather::{schlather_field, SchlatherSampler};
pub use simulate::{
    frechet_transformed_pairs, lagged_pairs, moving_max, simulate_innovations, simulate_pmax,
};
pub use spec::{
    AlphaMap, FieldSample, Innovation, Layer, ModelSpec, SchlatherTruncation, ZCoupling,
};
