//! Monte-Carlo adjudication of the radial-law and divergence claims,
//! goodness-of-fit statistics, and the latent algebra score.

mod ks;
mod las;
mod mc;
mod report;
mod stats;

pub use ks::{
    ks_critical_value_1pct, ks_statistic, ks_statistic_gamma, ks_two_sample,
    ks_two_sample_critical_value_1pct, KS_COEFF_1PCT,
};
pub use las::{
    latent_algebra_score, synthetic_attribute_groups, AttributeGroups, LasNormalization,
};
pub use mc::{
    draw_parallel, mc_endpoint_check, mc_kl_estimate, mc_midpoint_check, EndpointReport,
    MC_CHUNK,
};
pub use report::{fmt_sig6, McReport, Verdict, CONSISTENCY_SIGMAS, CSV_HEADER};
pub use stats::{mean_and_std_error, spearman, variance_with_std_error};
