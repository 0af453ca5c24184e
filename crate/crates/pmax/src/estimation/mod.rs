//! Marginal shape estimation, empirical dependence estimators, and the
//! Monte Carlo study harness aggregating bias / sd / RMSE per design cell.

mod alpha;
mod empirical_dep;
mod mc;

pub use alpha::{alpha_from_cdf, estimate_alpha, AlphaEstimate, DropCounts, GridSpec};
pub use empirical_dep::{empirical_eta, empirical_lambda, EmpiricalLambda};
pub use mc::{mc_study, McConfig, McModel, McReport, McRow, MC_CONVENTION};
