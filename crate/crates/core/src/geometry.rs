//! Interpolation paths in latent space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::priors::LatentVector;

/// Threshold on `sin θ` below which the spherical formula is not evaluated.
pub const EPS_ANGLE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Linear,
    Spherical,
}

impl PathKind {
    pub fn name(&self) -> &'static str {
        match self {
            PathKind::Linear => "linear",
            PathKind::Spherical => "slerp",
        }
    }
}

impl std::str::FromStr for PathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lerp" => Ok(PathKind::Linear),
            "slerp" | "spherical" => Ok(PathKind::Spherical),
            other => Err(Error::InvalidConfig(format!(
                "unknown interpolation scheme {other:?}; expected linear or slerp"
            ))),
        }
    }
}

fn check_dims(z0: &LatentVector, z1: &LatentVector) -> Result<()> {
    if z0.dim() != z1.dim() {
        return Err(Error::DimensionMismatch {
            expected: z0.dim(),
            actual: z1.dim(),
        });
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "interpolation parameter must lie in [0, 1], got {t}"
        )));
    }
    Ok(())
}

/// `(1 − t)·z₀ + t·z₁`.
pub fn lerp(z0: &LatentVector, z1: &LatentVector, t: f64) -> Result<LatentVector> {
    check_dims(z0, z1)?;
    check_t(t)?;
    let s = 1.0 - t;
    Ok(LatentVector::from_vec_unchecked(
        z0.as_slice()
            .iter()
            .zip(z1.as_slice())
            .map(|(a, b)| s * a + t * b)
            .collect(),
    ))
}

/// Angle between two non-zero vectors, from the projection of `b` onto `â`.
///
/// Returns `(θ, sin θ)`. `atan2(‖b⊥‖, b·â)` keeps full precision near 0 and π,
/// where `acos` of the normalized dot product does not.
pub fn angle_between(a: &LatentVector, b: &LatentVector) -> Result<(f64, f64)> {
    check_dims(a, b)?;
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::DegenerateAngle { sin_angle: 0.0 });
    }
    let a_hat: Vec<f64> = a.as_slice().iter().map(|x| x / na).collect();
    let along: f64 = a_hat.iter().zip(b.as_slice()).map(|(u, v)| u * v).sum();
    let perp = a_hat
        .iter()
        .zip(b.as_slice())
        .map(|(u, v)| {
            let w = v - along * u;
            w * w
        })
        .sum::<f64>()
        .sqrt();
    let theta = perp.atan2(along);
    Ok((theta, perp / nb))
}

/// Spherical interpolation
/// `sin((1−t)θ)/sin θ · z₀ + sin(tθ)/sin θ · z₁`, θ = ∠(z₀, z₁).
///
/// Positively collinear endpoints (`sin θ < EPS_ANGLE`, `θ < π/2`) fall back
/// to [`lerp`]; antipodal ones are rejected since the great circle through
/// them is not unique.
pub fn slerp(z0: &LatentVector, z1: &LatentVector, t: f64) -> Result<LatentVector> {
    check_dims(z0, z1)?;
    check_t(t)?;
    let (theta, sin_theta) = angle_between(z0, z1)?;
    if sin_theta < EPS_ANGLE {
        if theta < std::f64::consts::FRAC_PI_2 {
            return lerp(z0, z1, t);
        }
        return Err(Error::DegenerateAngle {
            sin_angle: sin_theta,
        });
    }
    let s = theta.sin();
    let w0 = ((1.0 - t) * theta).sin() / s;
    let w1 = (t * theta).sin() / s;
    Ok(LatentVector::from_vec_unchecked(
        z0.as_slice()
            .iter()
            .zip(z1.as_slice())
            .map(|(a, b)| w0 * a + w1 * b)
            .collect(),
    ))
}

/// A parametric path `h: [0, 1] → ℝ^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    kind: PathKind,
    z0: LatentVector,
    z1: LatentVector,
}

impl Path {
    pub fn new(kind: PathKind, z0: LatentVector, z1: LatentVector) -> Result<Self> {
        check_dims(&z0, &z1)?;
        if kind == PathKind::Spherical {
            // surface degenerate endpoints at construction, not mid-evaluation
            slerp(&z0, &z1, 0.5)?;
        }
        Ok(Self { kind, z0, z1 })
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn endpoints(&self) -> (&LatentVector, &LatentVector) {
        (&self.z0, &self.z1)
    }

    pub fn eval(&self, t: f64) -> Result<LatentVector> {
        match self.kind {
            PathKind::Linear => lerp(&self.z0, &self.z1, t),
            PathKind::Spherical => slerp(&self.z0, &self.z1, t),
        }
    }
}

/// Norms along a path on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathProfile {
    pub ts: Vec<f64>,
    pub norms: Vec<f64>,
    /// `‖h(½)‖` over the mean endpoint norm.
    pub midpoint_norm_ratio: f64,
}

/// Uniform grid of `n_steps + 1` points on `[0, 1]` with exact endpoints.
pub fn t_grid(n_steps: usize) -> Vec<f64> {
    (0..=n_steps).map(|i| i as f64 / n_steps as f64).collect()
}

pub fn path_profile(path: &Path, n_steps: usize) -> Result<PathProfile> {
    if n_steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "path profile needs at least 2 steps, got {n_steps}"
        )));
    }
    let ts = t_grid(n_steps);
    let norms = ts
        .iter()
        .map(|&t| path.eval(t).map(|z| z.norm()))
        .collect::<Result<Vec<_>>>()?;
    let end_mean = 0.5 * (path.z0.norm() + path.z1.norm());
    let mid = path.eval(0.5)?.norm();
    let midpoint_norm_ratio = if end_mean > 0.0 { mid / end_mean } else { 0.0 };
    Ok(PathProfile {
        ts,
        norms,
        midpoint_norm_ratio,
    })
}
