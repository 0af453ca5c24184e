use crate::error::{Error, Result};
use crate::fields::Location;

/// Which kind of pair a tail coefficient describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// r > 0, same location.
    Temporal,
    /// r = 0, distinct locations.
    Spatial,
    /// r > 0, distinct locations.
    SpatioTemporal,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Temporal => "temporal",
            Regime::Spatial => "spatial",
            Regime::SpatioTemporal => "spatio-temporal",
        })
    }
}

/// The pair `(Y_n(x), Y_{n+r}(x'))` a coefficient refers to.
///
/// Locations are compared by id. The combination r = 0 with x = x' is the
/// degenerate diagonal (λ = 1 trivially); it can be constructed — the joint
/// CDF builder supports it — but coefficient queries reject it.
#[derive(Debug, Clone, PartialEq)]
pub struct TailContext {
    pub r: usize,
    pub x: Location,
    pub x_prime: Location,
    pub alpha_x: f64,
    pub alpha_xp: f64,
}

impl TailContext {
    pub fn new(
        r: usize,
        x: Location,
        x_prime: Location,
        alpha_x: f64,
        alpha_xp: f64,
    ) -> Result<Self> {
        for (name, a) in [("alpha_x", alpha_x), ("alpha_xp", alpha_xp)] {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Domain(format!("{name} must be a positive real, got {a}")));
            }
        }
        Ok(Self {
            r,
            x,
            x_prime,
            alpha_x,
            alpha_xp,
        })
    }

    pub fn same_location(&self) -> bool {
        self.x.id == self.x_prime.id
    }

    pub fn is_degenerate(&self) -> bool {
        self.r == 0 && self.same_location()
    }

    /// Distance between the two locations.
    pub fn h(&self) -> f64 {
        self.x.distance(&self.x_prime)
    }

    /// Regime classification; errors on the degenerate diagonal.
    pub fn regime(&self) -> Result<Regime> {
        match (self.r, self.same_location()) {
            (0, true) => Err(Error::Domain(
                "degenerate pair (r = 0, x = x'): lambda is trivially 1".into(),
            )),
            (_, true) => Ok(Regime::Temporal),
            (0, false) => Ok(Regime::Spatial),
            (_, false) => Ok(Regime::SpatioTemporal),
        }
    }
}

/// Which coefficient a value is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    /// Upper tail dependence coefficient, in [0, 1].
    Lambda,
    /// Residual (Ledford–Tawn) tail dependence coefficient, in (0, 1].
    Eta,
}

/// A tail coefficient with its provenance: which branch or oracle produced
/// it and for which regime. Construction enforces the admissible range.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCoefficient {
    pub kind: CoeffKind,
    pub value: f64,
    /// Closed-form branch label or oracle description.
    pub derivation: String,
    pub regime: Regime,
}

impl TailCoefficient {
    pub fn new(kind: CoeffKind, value: f64, derivation: impl Into<String>, regime: Regime) -> Result<Self> {
        let ok = match kind {
            CoeffKind::Lambda => (0.0..=1.0).contains(&value),
            CoeffKind::Eta => value > 0.0 && value <= 1.0,
        };
        if !ok || !value.is_finite() {
            return Err(Error::Numeric(format!(
                "{kind:?} coefficient out of range: {value}"
            )));
        }
        Ok(Self {
            kind,
            value,
            derivation: derivation.into(),
            regime,
        })
    }
}

/// Derivation-tag suffix for α values numerically adjacent to the α = 1
/// branch boundary: the closed forms branch on exact equality, so a caller
/// passing 1 ± 1e-12 silently lands in a strict-inequality branch.
pub(crate) fn boundary_warning(alpha_x: f64) -> &'static str {
    if alpha_x != 1.0 && (alpha_x - 1.0).abs() < 1e-9 {
        "; warning: alpha within 1e-9 of branch boundary 1"
    } else {
        ""
    }
}
