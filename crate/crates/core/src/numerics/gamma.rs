use serde::{Deserialize, Serialize};

use super::special::{ln_gamma, regularized_lower_gamma};
use crate::error::{Error, Result};

/// Shape/scale parameters of a Gamma law.
///
/// All radial laws in the crate live here: `σ²χ²(d)` is `Γ(d/2, 2σ²)` and the
/// gamma-radius prior's squared norm is `Γ(½, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    shape: f64,
    scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma shape must be positive and finite, got {shape}"
            )));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma scale must be positive and finite, got {scale}"
            )));
        }
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }
}

/// A density value, with the `x = 0, shape < 1` pole kept distinguishable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Finite(f64),
    DivergesAtZero,
}

impl Density {
    /// The numeric value; `+∞` at the pole.
    pub fn value(self) -> f64 {
        match self {
            Density::Finite(v) => v,
            Density::DivergesAtZero => f64::INFINITY,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, Density::DivergesAtZero)
    }
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFiniteInput("gamma density argument"));
    }
    if x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma density argument must be nonnegative, got {x}"
        )));
    }
    Ok(())
}

/// Log-density of `Γ(shape, scale)`; `-∞`/`+∞` at zero depending on shape.
pub fn gamma_ln_pdf(x: f64, p: GammaParams) -> Result<f64> {
    check_x(x)?;
    let norm = ln_gamma(p.shape) + p.shape * p.scale.ln();
    if x == 0.0 {
        return Ok(if p.shape > 1.0 {
            f64::NEG_INFINITY
        } else if p.shape == 1.0 {
            -norm
        } else {
            f64::INFINITY
        });
    }
    Ok((p.shape - 1.0) * x.ln() - x / p.scale - norm)
}

/// Density of `Γ(shape, scale)` at `x`.
pub fn gamma_pdf(x: f64, p: GammaParams) -> Result<Density> {
    let ln = gamma_ln_pdf(x, p)?;
    if ln == f64::INFINITY {
        return Ok(Density::DivergesAtZero);
    }
    Ok(Density::Finite(ln.exp()))
}

/// CDF of `Γ(shape, scale)`: the regularized lower incomplete gamma
/// `P(shape, x / scale)`.
pub fn gamma_cdf(x: f64, p: GammaParams) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NonFiniteInput("gamma cdf argument"));
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma cdf argument must be nonnegative, got {x}"
        )));
    }
    regularized_lower_gamma(p.shape, x / p.scale)
}

/// `KL(Γ(a, b₁) ‖ Γ(a, b₂))` in nats: `a·(b₁/b₂ − 1 − ln(b₁/b₂))`.
pub fn gamma_kl_same_shape(shape: f64, scale_p: f64, scale_q: f64) -> Result<f64> {
    GammaParams::new(shape, scale_p)?;
    GammaParams::new(shape, scale_q)?;
    let ratio = scale_p / scale_q;
    // ln_1p keeps the bracket accurate when the scales nearly coincide
    let bracket = (ratio - 1.0) - (ratio - 1.0).ln_1p();
    Ok(shape * bracket.max(0.0))
}

/// Pointwise `ln p(x) − ln q(x)` for two Gamma laws.
///
/// The `ln x` term is dropped when the shapes coincide, so the ratio stays
/// finite at `x = 0` even when both densities have a pole there.
pub fn gamma_log_density_ratio(x: f64, p: GammaParams, q: GammaParams) -> Result<f64> {
    check_x(x)?;
    let mut out = -x / p.scale + x / q.scale
        - (ln_gamma(p.shape) + p.shape * p.scale.ln())
        + (ln_gamma(q.shape) + q.shape * q.scale.ln());
    if p.shape != q.shape {
        out += (p.shape - q.shape) * x.ln();
    }
    Ok(out)
}
