//! Deterministic random streams, special functions, scalar samplers and the
//! closed-form Gamma divergence.

mod gamma;
mod rng;
mod sampling;
mod special;
mod sum;

pub use gamma::{
    gamma_cdf, gamma_kl_same_shape, gamma_ln_pdf, gamma_log_density_ratio, gamma_pdf, Density,
    GammaParams,
};
pub use rng::RngStream;
pub use sampling::{
    sample_gamma, sample_gamma_marsaglia_tsang, sample_standard_normal, sample_unit_sphere,
};
pub use special::{ln_gamma, regularized_lower_gamma, SERIES_MAX_ITER, SERIES_REL_TOL};
pub use sum::NeumaierSum;
