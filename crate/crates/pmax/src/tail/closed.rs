//! Closed-form tail dependence coefficients for the pMAX model and its two
//! worked configurations: independent-innovation moving maxima with a common
//! scalar power layer, and Schlather-innovation moving maxima.

use num_traits::Float;

use super::context::{boundary_warning, CoeffKind, Regime, TailCoefficient, TailContext};
use crate::error::{Error, Result};
use crate::stats::CorrelationModel;

/// Lag-1 tail dependence of the (2/3, 1/3) Schlather moving maximum:
/// `g(ρ) = (1 − √(1 − (4/9)(ρ+1)))/2`. At ρ = 1 this is 1/3, the
/// independent-innovation lag-1 value.
pub fn g_factor<F: Float>(rho: F) -> F {
    let one = F::one();
    let two = F::from(2.0).unwrap();
    let c = F::from(4.0 / 9.0).unwrap();
    (one - (one - c * (rho + one)).max(F::zero()).sqrt()) / two
}

/// Contemporaneous factor `s(ρ) = (1 − √(1 − ½(ρ+1)))/2` appearing in the
/// spatial tail dependence of the Schlather configuration.
pub fn s_factor<F: Float>(rho: F) -> F {
    let one = F::one();
    let two = F::from(2.0).unwrap();
    let half = F::from(0.5).unwrap();
    (one - (one - half * (rho + one)).max(F::zero()).sqrt()) / two
}

/// Bivariate CDF of a Schlather pair at correlation ρ:
/// `exp(−½(1/z + 1/z′)(1 + √(1 − 2(ρ+1)·zz′/(z+z′)²)))`.
///
/// The square-root argument is clamped at 0 against rounding at ρ = 1, z = z′.
pub fn schlather_bivariate_cdf<F: Float>(z: F, zp: F, rho: F) -> Result<F> {
    if !(z > F::zero() && zp > F::zero()) {
        return Err(Error::Domain("schlather_bivariate_cdf needs z, z' > 0".into()));
    }
    if rho < F::from(-1.0).unwrap() || rho > F::one() {
        return Err(Error::Domain("correlation must be in [-1, 1]".into()));
    }
    let one = F::one();
    let two = F::from(2.0).unwrap();
    let half = F::from(0.5).unwrap();
    let s = z + zp;
    let arg = (one - two * (rho + one) * z * zp / (s * s)).max(F::zero());
    Ok((-(half) * (one / z + one / zp) * (one + arg.sqrt())).exp())
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

/// Tail dependence of the composed field from the layer coefficients.
///
/// For r > 0: 0 when α(x) < 1, λ_X/2 when α(x) = 1, λ_X when α(x) > 1.
/// For r = 0 (distinct locations): λ_Z when α(x) < 1, (λ_X + λ_Z)/2 when
/// α(x) = 1, λ_X when α(x) > 1. λ_Z is the tail dependence of the pair
/// `(Z^{1/α(x)}, Z^{1/α(x')})` and is only consulted when r = 0.
pub fn lambda_composed(ctx: &TailContext, lambda_x: f64, lambda_z: f64) -> Result<TailCoefficient> {
    check_unit_interval("lambda_x", lambda_x)?;
    check_unit_interval("lambda_z", lambda_z)?;
    let regime = ctx.regime()?;
    let a = ctx.alpha_x;
    let (value, branch) = if ctx.r > 0 {
        if a < 1.0 {
            (0.0, "layer-composition r>0, alpha_x<1")
        } else if a == 1.0 {
            (lambda_x / 2.0, "layer-composition r>0, alpha_x=1")
        } else {
            (lambda_x, "layer-composition r>0, alpha_x>1")
        }
    } else if a < 1.0 {
        (lambda_z, "layer-composition r=0, alpha_x<1")
    } else if a == 1.0 {
        ((lambda_x + lambda_z) / 2.0, "layer-composition r=0, alpha_x=1")
    } else {
        (lambda_x, "layer-composition r=0, alpha_x>1")
    };
    let derivation = format!("{branch}{}", boundary_warning(a));
    TailCoefficient::new(CoeffKind::Lambda, value, derivation, regime)
}

/// Tail dependence of `(Z^{1/α(x)}, Z^{1/α(x')})` for one shared Fréchet Z:
/// 1 when α(x') ≤ α(x) (the x'-exceedance event contains the x one in the
/// limit), 0 otherwise (the shared Z clears the higher threshold with
/// vanishing relative probability).
pub fn lambda_z_common(alpha_x: f64, alpha_xp: f64) -> Result<f64> {
    for (name, a) in [("alpha_x", alpha_x), ("alpha_xp", alpha_xp)] {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("{name} must be a positive real, got {a}")));
        }
    }
    Ok(if alpha_xp <= alpha_x { 1.0 } else { 0.0 })
}

/// Tail dependence for the independent-innovation configuration with weights
/// (2/3, 1/3) and a common scalar power layer.
pub fn lambda_independent(ctx: &TailContext) -> Result<TailCoefficient> {
    let regime = ctx.regime()?;
    let (a, ap) = (ctx.alpha_x, ctx.alpha_xp);
    let (value, branch) = match regime {
        Regime::Temporal => {
            if a < 1.0 || ctx.r > 1 {
                (0.0, "temporal alpha_x<1 or r>1")
            } else if a == 1.0 {
                (1.0 / 6.0, "temporal alpha_x=1, r=1")
            } else {
                (1.0 / 3.0, "temporal alpha_x>1, r=1")
            }
        }
        Regime::SpatioTemporal => (0.0, "space-time: independent innovations across locations"),
        Regime::Spatial => {
            if ap <= a && a < 1.0 {
                (1.0, "spatial alpha_xp<=alpha_x<1")
            } else if ap <= a && a == 1.0 {
                (0.5, "spatial alpha_xp<=alpha_x=1")
            } else {
                (0.0, "spatial otherwise")
            }
        }
    };
    let derivation = format!("{branch}{}", boundary_warning(a));
    TailCoefficient::new(CoeffKind::Lambda, value, derivation, regime)
}

/// Tail dependence for the Schlather-innovation configuration, as a function
/// of the inter-location distance through ρ(h).
///
/// Lag-1 values use `g(ρ)`; lags beyond the moving-max memory give 0. The
/// spatial branches follow the tabulated piecewise cases verbatim, with
/// the α(x) = 1 branch `s(ρ)/2 + 1/2` extended to α(x') ≤ 1 so the table is
/// total (the α(x') = 1 boundary value matches the layer composition with a
/// shared power layer).
///
/// At h = 0 (ρ = 1) the lag-1 branches reduce to the temporal values of the
/// independent-innovation configuration, so temporal contexts are served by
/// the same expression.
pub fn lambda_schlather(ctx: &TailContext, h: f64, corr: &CorrelationModel) -> Result<TailCoefficient> {
    let regime = ctx.regime()?;
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!("distance h must be finite and >= 0, got {h}")));
    }
    let rho = corr.rho(h);
    let (a, ap) = (ctx.alpha_x, ctx.alpha_xp);
    let (value, branch) = if ctx.r > 1 {
        (0.0, "r>1: beyond moving-max memory".to_string())
    } else if ctx.r == 1 {
        let g = g_factor(rho);
        if a < 1.0 {
            (0.0, "lag-1 alpha_x<1".to_string())
        } else if a == 1.0 {
            (g / 2.0, format!("lag-1 alpha_x=1: g(rho)/2, rho={rho}"))
        } else {
            (g, format!("lag-1 alpha_x>1: g(rho), rho={rho}"))
        }
    } else {
        let s = s_factor(rho);
        if a == 1.0 && ap <= 1.0 {
            (s / 2.0 + 0.5, format!("spatial alpha_x=1, alpha_xp<=1: s(rho)/2 + 1/2, rho={rho}"))
        } else if a == 1.0 {
            (s / 2.0, format!("spatial alpha_x=1, alpha_xp>1: s(rho)/2, rho={rho}"))
        } else if a < 1.0 && ap > a {
            (0.0, "spatial alpha_x<1, alpha_xp>alpha_x".to_string())
        } else if a < 1.0 {
            (1.0, "spatial alpha_x<1, alpha_xp<=alpha_x".to_string())
        } else {
            (s, format!("spatial alpha_x>1: s(rho), rho={rho}"))
        }
    };
    let derivation = format!("{branch}{}", boundary_warning(a));
    TailCoefficient::new(CoeffKind::Lambda, value, derivation, regime)
}

fn check_eta_input(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(Error::Domain(format!("{name} must lie in (0, 1], got {v}")));
    }
    Ok(())
}

/// Residual tail dependence of the composed field from the layer
/// coefficients, evaluated exactly as the general piecewise formula is
/// stated (see `eta_independent` for the tabulated special case, which
/// this formula does not reproduce on every branch).
///
/// For r > 0: `αx · max(η_X, 1/(1+min(αx′,1)))` when αx < 1, else
/// `max(η_X, 1/(1+αx), 1/(1+αx′))`. For r = 0:
/// `min(1,αx) · max(η_X, η_Z, 1/(1+αx), 1/(1+αx′))`; η_Z is required and
/// consulted only when r = 0.
pub fn eta_composed(ctx: &TailContext, eta_x: f64, eta_z: Option<f64>) -> Result<TailCoefficient> {
    check_eta_input("eta_x", eta_x)?;
    let regime = ctx.regime()?;
    let (a, ap) = (ctx.alpha_x, ctx.alpha_xp);
    let (value, branch) = if ctx.r > 0 {
        if a < 1.0 {
            (
                a * eta_x.max(1.0 / (1.0 + ap.min(1.0))),
                "layer-composition, r>0, alpha_x<1",
            )
        } else {
            (
                eta_x.max(1.0 / (1.0 + a)).max(1.0 / (1.0 + ap)),
                "layer-composition, r>0, alpha_x>=1",
            )
        }
    } else {
        let ez = eta_z.ok_or_else(|| Error::Domain("eta_z is required when r = 0".into()))?;
        check_eta_input("eta_z", ez)?;
        (
            a.min(1.0) * eta_x.max(ez).max(1.0 / (1.0 + a)).max(1.0 / (1.0 + ap)),
            "layer-composition, r=0",
        )
    };
    let derivation = format!("{branch}{}", boundary_warning(a));
    TailCoefficient::new(CoeffKind::Eta, value, derivation, regime)
}

/// Residual tail dependence for the independent-innovation configuration.
///
/// The spatial table is piecewise over (α(x), α(x')) with overlapping
/// conditions resolved by first match in table order; the pairs it
/// leaves uncovered (α(x) = α(x') > 1, α(x) = 1 < α(x'), α(x') = 1 < α(x))
/// return an unsupported-input error rather than a guessed value.
pub fn eta_independent(ctx: &TailContext) -> Result<TailCoefficient> {
    let regime = ctx.regime()?;
    let (a, ap) = (ctx.alpha_x, ctx.alpha_xp);
    let (value, branch) = match regime {
        Regime::Temporal => {
            if a < 1.0 && ctx.r == 1 {
                (a.max(0.5), "temporal alpha_x<1, r=1: max(1/2, alpha_x)")
            } else if ctx.r == 1 {
                (1.0, "temporal alpha_x>=1, r=1")
            } else {
                (0.5, "temporal r>1: exact independence")
            }
        }
        Regime::SpatioTemporal => (0.5, "space-time: exact independence"),
        Regime::Spatial => {
            if ap <= a && a <= 1.0 {
                (1.0, "spatial alpha_xp<=alpha_x<=1")
            } else if a < 1.0 && ap > 1.0 {
                (a / (1.0 + a), "spatial alpha_x<1<alpha_xp: alpha_x/(1+alpha_x)")
            } else if a < 1.0 && a < ap && ap < 1.0 + a {
                (a / ap, "spatial alpha_x<alpha_xp<1+alpha_x: alpha_x/alpha_xp")
            } else if 1.0 < a && a < ap {
                ((1.0 / ap).max(0.5), "spatial 1<alpha_x<alpha_xp: max(1/2, 1/alpha_xp)")
            } else if ap < 1.0 && a > 1.0 {
                (1.0 / (1.0 + ap), "spatial alpha_xp<1<alpha_x: 1/(1+alpha_xp)")
            } else if ap < 1.0 && a > 1.0 && a < 1.0 + ap {
                // Unreachable: the previous branch matches first. Kept so the
                // table reads in its original case order.
                (1.0 / a, "spatial alpha_xp<1<alpha_x<1+alpha_xp: 1/alpha_x")
            } else if ap > 1.0 && a > ap {
                ((1.0 / a).max(0.5), "spatial 1<alpha_xp<alpha_x: max(1/2, 1/alpha_x)")
            } else {
                return Err(Error::Unsupported(format!(
                    "no spatial residual-dependence branch covers alpha_x={a}, alpha_xp={ap}"
                )));
            }
        }
    };
    let derivation = format!("{branch}{}", boundary_warning(a));
    TailCoefficient::new(CoeffKind::Eta, value, derivation, regime)
}
