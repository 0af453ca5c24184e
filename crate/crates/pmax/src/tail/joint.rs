//! Exact joint survival functions P(A > y, B > y) for pairs of the simulated
//! model, used by the numerical coefficient oracles. Everything is built from
//! closed-form CDF exponents and evaluated through `expm1` identities so the
//! deep tail keeps full relative precision.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use super::context::TailContext;
use crate::error::{Error, Result};
use crate::fields::{Innovation, ModelSpec, ZCoupling};

type ExponentFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type SurvivalFn = Box<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// Exact survival functions of a pair (A, B) at a common threshold:
/// the joint `P(A > y, B > y)` and both marginals.
pub struct JointSurvivalFn {
    joint: SurvivalFn,
    s1: SurvivalFn,
    s2: SurvivalFn,
    label: String,
}

impl JointSurvivalFn {
    pub fn survival_joint(&self, y: f64) -> Result<f64> {
        check_threshold(y)?;
        let v = (self.joint)(y)?;
        let cap = (self.s1)(y)?.min((self.s2)(y)?);
        // Guard the analytic identities: a probability, below each marginal
        // (allowing rounding at the 1e-15 level relative to the cap).
        if !(v.is_finite() && v >= 0.0 && v <= cap * (1.0 + 1e-12) + 1e-300) {
            return Err(Error::Numeric(format!(
                "joint survival {v} violates bounds at y = {y} (marginal cap {cap})"
            )));
        }
        Ok(v.min(cap))
    }

    pub fn survival_1(&self, y: f64) -> Result<f64> {
        check_threshold(y)?;
        (self.s1)(y)
    }

    pub fn survival_2(&self, y: f64) -> Result<f64> {
        check_threshold(y)?;
        (self.s2)(y)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Build from CDF exponents: marginal CDFs `exp(-e_i(y))` and joint CDF
    /// `exp(-e12(y))` at the diagonal. The joint survival is then
    /// `-expm1(-e1) - exp(-e12)·expm1(e12 - e2)`, exact in floating point up
    /// to rounding (no catastrophic cancellation of near-unit CDFs).
    pub fn from_exponents(
        label: impl Into<String>,
        e1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        e2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        e12: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let e1 = std::sync::Arc::new(e1);
        let e2 = std::sync::Arc::new(e2);
        let s1 = {
            let e1 = e1.clone();
            Box::new(move |y: f64| Ok(-(-e1(y)).exp_m1())) as SurvivalFn
        };
        let s2 = {
            let e2 = e2.clone();
            Box::new(move |y: f64| Ok(-(-e2(y)).exp_m1())) as SurvivalFn
        };
        let joint = Box::new(move |y: f64| {
            let a = e1(y);
            let b = e2(y);
            let ab = e12(y);
            if !(a.is_finite() && b.is_finite() && ab.is_finite()) {
                return Err(Error::Numeric(format!("non-finite CDF exponent at y = {y}")));
            }
            Ok(-(-a).exp_m1() - (-ab).exp() * (ab - b).exp_m1())
        });
        Self {
            joint,
            s1,
            s2,
            label: label.into(),
        }
    }

    /// Independent standard Fréchet pair.
    pub fn independent_frechet() -> Self {
        Self::from_exponents(
            "independent-frechet",
            |y| 1.0 / y,
            |y| 1.0 / y,
            |y| 2.0 / y,
        )
    }

    /// Comonotone standard Fréchet pair (A = B).
    pub fn comonotone_frechet() -> Self {
        Self::from_exponents("comonotone-frechet", |y| 1.0 / y, |y| 1.0 / y, |y| 1.0 / y)
    }

    /// Bivariate Gaussian dependence at correlation ρ with both margins
    /// transformed to standard Fréchet. The joint tail is integrated
    /// numerically (Simpson over the conditional decomposition), accurate to
    /// several digits down to survival levels ~1e-16.
    pub fn gaussian(rho: f64) -> Result<Self> {
        if !(-1.0..1.0).contains(&rho) {
            return Err(Error::Domain(format!(
                "gaussian correlation must be in [-1, 1), got {rho}"
            )));
        }
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        let tail = move |y: f64| -> Result<f64> {
            // Survival probability of the Fréchet margin, then the matching
            // normal threshold, computed from the tail side for precision.
            let q = -(-1.0 / y).exp_m1();
            if q >= 1.0 {
                return Err(Error::Domain(format!("threshold y = {y} is below the support")));
            }
            let z = -normal.inverse_cdf(q);
            Ok(bivariate_normal_upper_tail(z, rho))
        };
        let s1 = Box::new(|y: f64| Ok(-(-1.0f64 / y).exp_m1()));
        let s2 = Box::new(|y: f64| Ok(-(-1.0f64 / y).exp_m1()));
        Ok(Self {
            joint: Box::new(tail),
            s1,
            s2,
            label: format!("gaussian(rho={rho})"),
        })
    }
}

fn check_threshold(y: f64) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("threshold must be a positive real, got {y}")));
    }
    Ok(())
}

/// `P(X > z, Y > z)` for standard bivariate normal (X, Y) with correlation ρ,
/// by Simpson integration of `φ(x)·Φ̄((z − ρx)/√(1−ρ²))` over [z, z+12].
fn bivariate_normal_upper_tail(z: f64, rho: f64) -> f64 {
    if rho <= -1.0 + 1e-15 {
        // Countermonotone: P(X > z, -X > z) = 0 for z >= 0.
        if z >= 0.0 {
            return 0.0;
        }
    }
    let denom = (1.0 - rho * rho).sqrt();
    let integrand = |x: f64| phi(x) * normal_upper((z - rho * x) / denom);
    simpson(integrand, z, z + 12.0, 4000)
}

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn normal_upper(t: f64) -> f64 {
    0.5 * erfc(t / std::f64::consts::SQRT_2)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n_even: usize) -> f64 {
    let n = n_even + n_even % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Shared-innovation exponent term of the Schlather pair CDF, written in
/// rate form: for `P(V ≤ 1/a, V' ≤ 1/b)` with marginal rates a, b and
/// correlation ρ the exponent is `½(a+b)(1 + √(1 − 2(ρ+1)ab/(a+b)²))`.
fn schlather_exponent(a: f64, b: f64, rho: f64) -> f64 {
    if a == 0.0 {
        return b;
    }
    if b == 0.0 {
        return a;
    }
    let s = a + b;
    let arg = (1.0 - 2.0 * (rho + 1.0) * a * b / (s * s)).max(0.0);
    0.5 * s * (1.0 + arg.sqrt())
}

// X-layer CDF exponent at the diagonal threshold (z = z' = y). Shared
// innovations (time offset r within the moving-max window) contribute a max
// term for a common field value, or the Schlather pair exponent for
// correlated field values at distinct locations; unmatched innovations
// contribute their marginal rates. `rho` is None for location-independent
// innovations.
fn x_layer_exponent(weights: Vec<f64>, r: usize, same: bool, rho: Option<f64>) -> ExponentFn {
    let q = weights.len() - 1;
    if same {
        Box::new(move |y: f64| {
            let mut e = 0.0;
            for i in 0..weights.len() {
                if i + r <= q {
                    e += (weights[i] / y).max(weights[i + r] / y);
                } else {
                    e += weights[i] / y;
                }
            }
            for j in 0..r.min(q + 1) {
                e += weights[j] / y;
            }
            e
        })
    } else {
        match rho {
            None => Box::new(move |y: f64| 2.0 / y),
            Some(rho) => Box::new(move |y: f64| {
                let mut e = 0.0;
                for i in 0..weights.len() {
                    if i + r <= q {
                        e += schlather_exponent(weights[i] / y, weights[i + r] / y, rho);
                    } else {
                        e += weights[i] / y;
                    }
                }
                for j in 0..r.min(q + 1) {
                    e += weights[j] / y;
                }
                e
            }),
        }
    }
}

fn innovation_rho(spec: &ModelSpec, ctx: &TailContext) -> Option<f64> {
    match &spec.innovation {
        Innovation::IndependentFrechet => None,
        Innovation::Schlather(corr) => Some(corr.rho(ctx.h())),
    }
}

/// Tail dependence of the X layer alone for the given pair: the diagonal
/// joint CDF is `exp(-c/y)` with both margins standard Fréchet, so
/// `λ_X = 2 − c` with `c` read off the exponent at y = 1.
pub fn x_layer_lambda(spec: &ModelSpec, ctx: &TailContext) -> Result<f64> {
    spec.validate()?;
    let ex = x_layer_exponent(
        spec.temporal_weights.clone(),
        ctx.r,
        ctx.same_location(),
        innovation_rho(spec, ctx),
    );
    Ok((2.0 - ex(1.0)).clamp(0.0, 1.0))
}

/// Exact joint survival of `(Y_n(x), Y_{n+r}(x'))` for a simulated model,
/// assembled from the moving-max overlap structure of the X layer and the
/// coupling of the power layer. Supports the degenerate diagonal (r = 0,
/// same location), where the joint survival equals the marginal.
pub fn joint_cdf_builder(spec: &ModelSpec, ctx: &TailContext) -> Result<JointSurvivalFn> {
    spec.validate()?;
    let r = ctx.r;
    let same = ctx.same_location();
    let (ax, axp) = (ctx.alpha_x, ctx.alpha_xp);
    let rho = innovation_rho(spec, ctx);
    let ex = x_layer_exponent(spec.temporal_weights.clone(), r, same, rho);

    // Power-layer CDF exponent at the diagonal. Lagged draws are always
    // independent; contemporaneous draws share the scalar under CommonScalar
    // (min-threshold form) and are independent otherwise. The diagonal pair
    // shares the draw regardless of coupling.
    let shares_z = r == 0 && (same || spec.z_coupling == ZCoupling::CommonScalar);
    let ez: ExponentFn = if shares_z {
        Box::new(move |y: f64| y.powf(-ax).max(y.powf(-axp)))
    } else {
        Box::new(move |y: f64| y.powf(-ax) + y.powf(-axp))
    };

    let regime = if ctx.is_degenerate() {
        "diagonal".to_string()
    } else {
        ctx.regime()?.to_string()
    };
    let family = match &spec.innovation {
        Innovation::IndependentFrechet => "independent-innovations".to_string(),
        Innovation::Schlather(_) => format!("schlather(rho(h)={})", rho.unwrap_or(1.0)),
    };
    let label = format!(
        "{family} {regime} r={r} alpha=({ax},{axp}) z={}",
        if shares_z { "shared" } else { "independent" }
    );

    Ok(JointSurvivalFn::from_exponents(
        label,
        move |y: f64| 1.0 / y + y.powf(-ax),
        move |y: f64| 1.0 / y + y.powf(-axp),
        move |y: f64| ex(y) + ez(y),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{AlphaMap, Location};
    use crate::stats::CorrelationModel;
    use approx::assert_relative_eq;

    fn two_loc_spec(schlather: bool, ax: f64, axp: f64) -> ModelSpec {
        let locs = vec![Location::new("a", 0.0, 0.0), Location::new("b", 1.0, 0.0)];
        let mut alpha = AlphaMap::new();
        alpha.insert("a", ax).unwrap();
        alpha.insert("b", axp).unwrap();
        if schlather {
            ModelSpec::schlather(locs, alpha, CorrelationModel::default())
        } else {
            ModelSpec::independent(locs, alpha)
        }
    }

    fn ctx(spec: &ModelSpec, r: usize, same: bool) -> TailContext {
        let x = spec.locations[0].clone();
        let xp = if same {
            x.clone()
        } else {
            spec.locations[1].clone()
        };
        let ax = spec.alpha.get(&x.id).unwrap();
        let axp = spec.alpha.get(&xp.id).unwrap();
        TailContext::new(r, x, xp, ax, axp).unwrap()
    }

    #[test]
    fn independent_pair_survival_is_product_like() {
        let j = JointSurvivalFn::independent_frechet();
        let y = 1e3;
        let s1 = j.survival_1(y).unwrap();
        assert_relative_eq!(j.survival_joint(y).unwrap(), s1 * s1, max_relative = 1e-2);
        assert!(j.survival_joint(0.0).is_err());
    }

    #[test]
    fn comonotone_pair_survival_equals_marginal() {
        let j = JointSurvivalFn::comonotone_frechet();
        for &y in &[10.0, 1e4, 1e8] {
            assert_relative_eq!(
                j.survival_joint(y).unwrap(),
                j.survival_1(y).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn deep_tail_keeps_relative_precision() {
        let j = JointSurvivalFn::independent_frechet();
        let y = 1e9;
        assert_relative_eq!(j.survival_joint(y).unwrap(), 1e-18, max_relative = 1e-6);
    }

    #[test]
    fn gaussian_tail_matches_known_values() {
        // rho = 0: product of the marginals.
        let j = JointSurvivalFn::gaussian(0.0).unwrap();
        let y = 100.0;
        let s1 = j.survival_1(y).unwrap();
        assert_relative_eq!(j.survival_joint(y).unwrap(), s1 * s1, max_relative = 1e-6);
        // rho -> 1 approaches the comonotone survival.
        let j = JointSurvivalFn::gaussian(0.999999).unwrap();
        assert_relative_eq!(
            j.survival_joint(y).unwrap(),
            j.survival_1(y).unwrap(),
            max_relative = 1e-2
        );
    }

    #[test]
    fn diagonal_builder_equals_marginal() {
        let spec = two_loc_spec(false, 2.0, 2.0);
        let c = ctx(&spec, 0, true);
        let j = joint_cdf_builder(&spec, &c).unwrap();
        for &y in &[2.0, 1e3, 1e6] {
            assert_relative_eq!(
                j.survival_joint(y).unwrap(),
                j.survival_1(y).unwrap(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn lag_two_pairs_are_exactly_independent() {
        // Memory of the (2/3, 1/3) filter is one step; with independent Z
        // draws across time the lag-2 joint factorizes.
        let spec = two_loc_spec(false, 1.5, 1.5);
        let c = ctx(&spec, 2, true);
        let j = joint_cdf_builder(&spec, &c).unwrap();
        let y = 50.0;
        let prod = j.survival_1(y).unwrap() * j.survival_2(y).unwrap();
        assert_relative_eq!(j.survival_joint(y).unwrap(), prod, max_relative = 1e-10);
    }

    #[test]
    fn monotone_and_bounded() {
        let spec = two_loc_spec(true, 0.8, 1.7);
        for (r, same) in [(0, false), (1, false), (1, true)] {
            let c = ctx(&spec, r, same);
            let j = joint_cdf_builder(&spec, &c).unwrap();
            let mut prev = f64::INFINITY;
            for k in 0..20 {
                let y = 10f64.powf(0.5 + 0.4 * k as f64);
                let s = j.survival_joint(y).unwrap();
                assert!(s <= prev * (1.0 + 1e-12), "non-monotone at y = {y}");
                assert!(s <= j.survival_1(y).unwrap() && s <= j.survival_2(y).unwrap());
                prev = s;
            }
        }
    }
}
