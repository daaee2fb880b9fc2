//! A small GAN on 2-D synthetic data, trained with hand-written
//! backpropagation, and the traversal measurements run against it.

mod checkpoint;
mod data;
mod mlp;
mod profile;
mod sweep;
mod train;

pub use checkpoint::CHECKPOINT_FORMAT;
pub use data::Dataset;
pub use mlp::{sigmoid, softplus, Activation, Layer, Mlp, MlpGrads, RmsProp, Trace, LEAKY_SLOPE};
pub use profile::{discriminator_profile, TrajectoryProfile};
pub use sweep::{
    dimension_sweep, median, median_dip_by_dim, sweep_csv, SweepRow, SweepSettings,
    SWEEP_CSV_HEADER,
};
pub use train::{
    discriminator_loss, generate, generator_loss, train_toy_gan, GanConfig, ToyGan, TrainReport,
};
