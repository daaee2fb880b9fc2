//! Toy-GAN checkpoints as JSON.
//!
//! ```text
//! {
//!   "format": "latentgeom-toygan/1",
//!   "config": { "prior": {...}, "data": {...}, "learning_rate": ..., ... },
//!   "generator":     { "layers": [ { "inputs", "outputs", "activation",
//!                                    "weights": [outputs × inputs, row-major],
//!                                    "bias": [outputs] }, ... ] },
//!   "discriminator": { "layers": [ ... ] }
//! }
//! ```
//!
//! Floats are written with round-trip precision, so a loaded checkpoint
//! reproduces the saved networks bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mlp::Mlp;
use super::train::{GanConfig, ToyGan};
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "latentgeom-toygan/1";

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    config: GanConfig,
    generator: Mlp,
    discriminator: Mlp,
}

impl ToyGan {
    pub fn to_checkpoint_json(&self) -> String {
        let ck = Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            config: self.config.clone(),
            generator: self.generator.clone(),
            discriminator: self.discriminator.clone(),
        };
        serde_json::to_string_pretty(&ck).expect("checkpoint serializes")
    }

    pub fn from_checkpoint_json(text: &str) -> Result<Self> {
        let ck: Checkpoint = serde_json::from_str(text)?;
        if ck.format != CHECKPOINT_FORMAT {
            return Err(Error::InvalidConfig(format!(
                "unsupported checkpoint format {:?}",
                ck.format
            )));
        }
        let generator = Mlp::from_layers(ck.generator.layers)?;
        let discriminator = Mlp::from_layers(ck.discriminator.layers)?;
        ck.config.validate()?;
        if generator.input_dim() != ck.config.latent_dim() {
            return Err(Error::DimensionMismatch {
                expected: ck.config.latent_dim(),
                actual: generator.input_dim(),
            });
        }
        if generator.output_dim() != 2 || discriminator.input_dim() != 2 || discriminator.output_dim() != 1 {
            return Err(Error::InvalidConfig(
                "checkpoint networks must map latent→2 and 2→1".into(),
            ));
        }
        Ok(Self {
            config: ck.config,
            generator,
            discriminator,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_checkpoint_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::CheckpointMissing(path.display().to_string()),
            _ => Error::io(path, e),
        })?;
        Self::from_checkpoint_json(&text)
    }
}
