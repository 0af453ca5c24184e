//! Tail dependence coefficients λ and residual coefficients η: closed-form
//! branch tables for the two worked model configurations, the general
//! layer-composition formulas, and independent numerical oracles that
//! recompute both coefficients from exact joint distribution functions.

mod closed;
mod context;
mod joint;
mod oracle;

pub use closed::{
    eta_independent, eta_composed, g_factor, lambda_independent, lambda_schlather, lambda_composed, lambda_z_common,
    s_factor, schlather_bivariate_cdf,
};
pub use context::{CoeffKind, Regime, TailCoefficient, TailContext};
pub use joint::{joint_cdf_builder, x_layer_lambda, JointSurvivalFn};
pub use oracle::{
    default_eta_grid, default_lambda_grid, eta_oracle, lambda_oracle, log_grid, EtaEstimate,
    LambdaEstimate,
};
