use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::Serialize;

use pmax::estimation::{estimate_alpha, mc_study, GridSpec};
use pmax::fields::{frechet_transformed_pairs, lagged_pairs, simulate_pmax, Innovation, ModelSpec, ZCoupling};
use pmax::stats::{percentile, RngStream};
use pmax::tail::{
    default_eta_grid, default_lambda_grid, eta_independent, eta_oracle, eta_composed, joint_cdf_builder,
    lambda_independent, lambda_schlather, lambda_oracle, lambda_composed, lambda_z_common, x_layer_lambda,
    TailContext,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io;

fn write_json<T: Serialize>(value: &T, path: &Path) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Compute(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn cmd_simulate(
    cfg: &RunConfig,
    n_time: Option<usize>,
    seed_flag: Option<u64>,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let spec = cfg.to_model_spec()?;
    let n_time = n_time
        .or(cfg.run.n_time)
        .ok_or_else(|| CliError::Config("n_time missing: pass --n-time or set run.n_time".into()))?;
    let seed = cfg.seed(seed_flag);
    let sample = simulate_pmax(&spec, n_time, RngStream::new(seed, 0))?;
    let out = out.unwrap_or_else(|| PathBuf::from("field.csv"));
    io::write_field_csv(&sample, &out)?;
    println!(
        "seed={seed} digest={} rows={} locations={} file={}",
        cfg.digest(),
        sample.n_time(),
        sample.n_locations(),
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct BranchLabels {
    lambda_closed: Option<String>,
    eta_closed: Option<String>,
    lambda_composed: String,
    eta_composed: Option<String>,
    joint: String,
}

#[derive(Serialize)]
struct ConvergenceFlags {
    lambda_converged: bool,
    lambda_sequence_tail: Vec<f64>,
    eta_residual_rms: Option<f64>,
    eta_points: Option<usize>,
}

#[derive(Serialize)]
struct CoeffReport {
    regime: String,
    r: usize,
    x: String,
    xp: String,
    alpha_x: f64,
    alpha_xp: f64,
    h: f64,
    lambda_closed: Option<f64>,
    lambda_oracle: f64,
    eta_closed: Option<f64>,
    eta_oracle: Option<f64>,
    lambda_composed: f64,
    eta_composed: Option<f64>,
    branch_labels: BranchLabels,
    convergence_flags: ConvergenceFlags,
}

fn context_for(spec: &ModelSpec, r: usize, x_id: &str, xp_id: &str) -> CliResult<TailContext> {
    let x = spec.locations[spec.location_index(x_id)?].clone();
    let xp = spec.locations[spec.location_index(xp_id)?].clone();
    let ax = spec.alpha.get(&x.id)?;
    let axp = spec.alpha.get(&xp.id)?;
    Ok(TailContext::new(r, x, xp, ax, axp)?)
}

pub fn cmd_coeffs(
    cfg: &RunConfig,
    r: usize,
    x_id: &str,
    xp_id: &str,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let spec = cfg.to_model_spec()?;
    let ctx = context_for(&spec, r, x_id, xp_id)?;
    let regime = ctx.regime()?;
    let h = ctx.h();

    // Closed forms for the configured innovation family.
    let lambda_closed = match &spec.innovation {
        Innovation::IndependentFrechet => lambda_independent(&ctx)?,
        Innovation::Schlather(corr) => lambda_schlather(&ctx, h, corr)?,
    };
    // There is no closed η table for the Schlather configuration;
    // the field stays null there and the oracle carries the value.
    let eta_closed = match &spec.innovation {
        Innovation::IndependentFrechet => match eta_independent(&ctx) {
            Ok(c) => Some(c),
            Err(pmax::Error::Unsupported(_)) => None,
            Err(e) => return Err(e.into()),
        },
        Innovation::Schlather(_) => None,
    };

    // Layer inputs for the general composition formulas.
    let lambda_x = x_layer_lambda(&spec, &ctx)?;
    let lambda_z = if r > 0 {
        0.0
    } else {
        match spec.z_coupling {
            ZCoupling::CommonScalar => lambda_z_common(ctx.alpha_x, ctx.alpha_xp)?,
            ZCoupling::IndependentPerLocation => 0.0,
        }
    };
    let lam_composed = lambda_composed(&ctx, lambda_x, lambda_z)?;
    // The X layer is max-stable: residual dependence is total when tail
    // dependent, exact independence otherwise. The shared power layer gives
    // eta_Z = alpha_x / max(alpha_x, alpha_xp); independent draws give
    // alpha_x / (alpha_x + alpha_xp).
    let eta_x = if lambda_x > 0.0 { 1.0 } else { 0.5 };
    let eta_z = match spec.z_coupling {
        ZCoupling::CommonScalar => (ctx.alpha_x / ctx.alpha_xp).min(1.0),
        ZCoupling::IndependentPerLocation => ctx.alpha_x / (ctx.alpha_x + ctx.alpha_xp),
    };
    let eta_comp = eta_composed(&ctx, eta_x, (r == 0).then_some(eta_z))?;

    // Oracles on the exact joint law.
    let joint = joint_cdf_builder(&spec, &ctx)?;
    let lam = lambda_oracle(&joint, &default_lambda_grid())?;
    let eta = match eta_oracle(&joint, &default_eta_grid()) {
        Ok(e) => Some(e),
        Err(pmax::Error::Precision(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let tail_start = lam.sequence.len().saturating_sub(3);
    let report = CoeffReport {
        regime: regime.to_string(),
        r,
        x: x_id.to_string(),
        xp: xp_id.to_string(),
        alpha_x: ctx.alpha_x,
        alpha_xp: ctx.alpha_xp,
        h,
        lambda_closed: Some(lambda_closed.value),
        lambda_oracle: lam.value,
        eta_closed: eta_closed.as_ref().map(|c| c.value),
        eta_oracle: eta.as_ref().map(|e| e.value),
        lambda_composed: lam_composed.value,
        eta_composed: Some(eta_comp.value),
        branch_labels: BranchLabels {
            lambda_closed: Some(lambda_closed.derivation),
            eta_closed: eta_closed.map(|c| c.derivation),
            lambda_composed: lam_composed.derivation,
            eta_composed: Some(eta_comp.derivation),
            joint: joint.label().to_string(),
        },
        convergence_flags: ConvergenceFlags {
            lambda_converged: lam.converged,
            lambda_sequence_tail: lam.sequence[tail_start..].iter().map(|&(_, v)| v).collect(),
            eta_residual_rms: eta.as_ref().map(|e| e.residual_rms),
            eta_points: eta.as_ref().map(|e| e.n_points),
        },
    };
    let out = out.unwrap_or_else(|| PathBuf::from("coeffs.json"));
    write_json(&report, &out)?;
    println!(
        "regime={} lambda_closed={:?} lambda_oracle={:.6} file={}",
        report.regime,
        report.lambda_closed,
        report.lambda_oracle,
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct EstimateReport {
    location: String,
    value: f64,
    n_valid: usize,
    n_dropped: usize,
    drops: DropReport,
    grid: GridReport,
}

#[derive(Serialize)]
struct DropReport {
    z_not_above_one: usize,
    cdf_one: usize,
    cdf_zero: usize,
    nonpositive_log_arg: usize,
}

#[derive(Serialize)]
struct GridReport {
    k: f64,
    start: f64,
    count: usize,
    upper: f64,
}

pub fn cmd_estimate(
    input: &Path,
    location: &str,
    k: f64,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let table = io::read_field_csv(input)?;
    let values = table.column(location)?;
    let grid = GridSpec::with_defaults(k, table.n_time);
    let est = estimate_alpha(values, &grid)?;
    let report = EstimateReport {
        location: location.to_string(),
        value: est.value,
        n_valid: est.n_valid,
        n_dropped: est.n_dropped(),
        drops: DropReport {
            z_not_above_one: est.drops.z_not_above_one,
            cdf_one: est.drops.cdf_one,
            cdf_zero: est.drops.cdf_zero,
            nonpositive_log_arg: est.drops.nonpositive_log_arg,
        },
        grid: GridReport {
            k,
            start: grid.start,
            count: grid.count,
            upper: percentile(values, k)?,
        },
    };
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Compute(format!("serialization failed: {e}")))?;
    println!("{text}");
    if let Some(out) = out {
        write_json(&report, &out)?;
    }
    Ok(())
}

pub fn cmd_mc_table(cfg: &RunConfig, seed_flag: Option<u64>, out: Option<PathBuf>) -> CliResult<()> {
    let config = cfg.to_mc_config(cfg.seed(seed_flag))?;
    let started = Instant::now();
    let report = mc_study(&config)?;
    let out = out.unwrap_or_else(|| PathBuf::from("mc_table.csv"));
    std::fs::write(&out, report.to_csv())?;
    let failures: usize = report.rows.iter().map(|r| r.failures).sum();
    println!(
        "cells={} replicates={} failures={failures} elapsed={:.2}s file={}",
        report.rows.len(),
        report.replicates,
        started.elapsed().as_secs_f64(),
        out.display()
    );
    Ok(())
}

/// Subsample cap for the SVG; the full pair set always lands in the CSV.
pub const SVG_POINT_CAP: usize = 5000;
/// Fixed seed for the SVG subsample so reruns are byte-identical.
const SVG_SUBSAMPLE_SEED: u64 = 0x5c7a11e5;

pub fn cmd_figures(
    cfg: &RunConfig,
    r: usize,
    x_id: &str,
    xp_id: &str,
    n_time: Option<usize>,
    max_points: Option<usize>,
    seed_flag: Option<u64>,
    out_prefix: Option<PathBuf>,
) -> CliResult<()> {
    let spec = cfg.to_model_spec()?;
    let n_time = n_time.or(cfg.run.n_time).unwrap_or(10_000);
    let seed = cfg.seed(seed_flag);
    let sample = simulate_pmax(&spec, n_time, RngStream::new(seed, 0))?;
    let pairs = lagged_pairs(&sample, r, x_id, xp_id)?;
    if pairs.is_empty() {
        return Err(CliError::Compute("no pairs: sample too short for the requested lag".into()));
    }
    let transformed = frechet_transformed_pairs(&pairs)?;

    let prefix = out_prefix.unwrap_or_else(|| PathBuf::from("figure"));
    let csv_path = prefix.with_extension("csv");
    let svg_path = prefix.with_extension("svg");
    io::write_pair_csv(&transformed, &csv_path)?;

    let cap = max_points.unwrap_or(SVG_POINT_CAP);
    let shown: Vec<(f64, f64)> = if transformed.len() > cap {
        let mut idx: Vec<usize> = (0..transformed.len()).collect();
        idx.shuffle(&mut RngStream::new(SVG_SUBSAMPLE_SEED, 0).rng());
        let mut take: Vec<usize> = idx.into_iter().take(cap).collect();
        take.sort_unstable();
        take.into_iter().map(|i| transformed[i]).collect()
    } else {
        transformed.clone()
    };
    let ax = spec.alpha.get(x_id)?;
    let axp = spec.alpha.get(xp_id)?;
    let title = format!("r={r} x={x_id} x'={xp_id} alpha=({ax},{axp})");
    io::write_scatter_svg(&shown, &title, &svg_path)?;
    println!(
        "pairs={} shown={} csv={} svg={}",
        transformed.len(),
        shown.len(),
        csv_path.display(),
        svg_path.display()
    );
    Ok(())
}
