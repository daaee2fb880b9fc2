//! Latent-space priors for implicit generative models.
//!
//! The crate covers the radial laws of the isotropic normal prior and the
//! gamma-radius prior, linear and spherical interpolation paths, Monte-Carlo
//! adjudication of the distributional claims built on them, the latent
//! algebra score, and a small 2-D GAN used to reproduce traversal effects.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod priors;
pub mod toygan;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{lerp, slerp, Path, PathKind, PathProfile};
pub use numerics::{GammaParams, RngStream};
pub use priors::{LatentPrior, LatentVector, PriorFamily};
