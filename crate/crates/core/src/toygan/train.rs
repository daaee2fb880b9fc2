use serde::{Deserialize, Serialize};

use super::data::Dataset;
use super::mlp::{sigmoid, softplus, Activation, Mlp, MlpGrads, RmsProp};
use crate::error::{Error, Result};
use crate::numerics::RngStream;
use crate::priors::{LatentPrior, LatentVector};

/// Toy GAN configuration. The latent dimension is the prior's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanConfig {
    pub prior: LatentPrior,
    pub data: Dataset,
    pub generator_hidden: Vec<usize>,
    pub discriminator_hidden: Vec<usize>,
    pub learning_rate: f64,
    pub rms_decay: f64,
    pub batch_size: usize,
    pub train_steps: usize,
    pub seed: u64,
}

impl Default for GanConfig {
    fn default() -> Self {
        Self {
            prior: LatentPrior::gamma_radius(32, 1.0).expect("valid default prior"),
            data: Dataset::default(),
            generator_hidden: vec![64, 64],
            discriminator_hidden: vec![64, 64],
            learning_rate: 3e-4,
            rms_decay: 0.9,
            batch_size: 100,
            train_steps: 5000,
            seed: 0,
        }
    }
}

impl GanConfig {
    pub fn latent_dim(&self) -> usize {
        self.prior.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.rms_decay) {
            return Err(Error::InvalidConfig(format!(
                "RMSProp decay must lie in [0, 1), got {}",
                self.rms_decay
            )));
        }
        if self.batch_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "batch size must be at least 2, got {}",
                self.batch_size
            )));
        }
        if self.generator_hidden.contains(&0) || self.discriminator_hidden.contains(&0) {
            return Err(Error::InvalidConfig("hidden widths must be non-zero".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub d_loss: Vec<f64>,
    pub g_loss: Vec<f64>,
}

/// A generator/discriminator pair with the config that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyGan {
    pub config: GanConfig,
    pub generator: Mlp,
    pub discriminator: Mlp,
}

// Stream ids under the config seed.
const STREAM_G_INIT: u64 = 0;
const STREAM_D_INIT: u64 = 1;
const STREAM_DATA: u64 = 2;
const STREAM_LATENT: u64 = 3;

impl ToyGan {
    /// Freshly initialized networks: generator `d→…→2` (ReLU, linear output),
    /// discriminator `2→…→1` (LeakyReLU 0.2, sigmoid output).
    pub fn init(config: &GanConfig) -> Result<Self> {
        config.validate()?;
        let g_widths: Vec<usize> = std::iter::once(config.latent_dim())
            .chain(config.generator_hidden.iter().copied())
            .chain(std::iter::once(2))
            .collect();
        let d_widths: Vec<usize> = std::iter::once(2)
            .chain(config.discriminator_hidden.iter().copied())
            .chain(std::iter::once(1))
            .collect();
        let generator = Mlp::new(
            &g_widths,
            Activation::Relu,
            Activation::Identity,
            &mut RngStream::new(config.seed, STREAM_G_INIT),
        )?;
        let discriminator = Mlp::new(
            &d_widths,
            Activation::LeakyRelu,
            Activation::Sigmoid,
            &mut RngStream::new(config.seed, STREAM_D_INIT),
        )?;
        Ok(Self {
            config: config.clone(),
            generator,
            discriminator,
        })
    }

    pub fn prior(&self) -> &LatentPrior {
        &self.config.prior
    }

    /// Discriminator probabilities for `batch` row-major 2-D points.
    pub fn discriminate(&self, points: &[f64], batch: usize) -> Result<Vec<f64>> {
        self.discriminator.forward(points, batch)
    }

    /// `D(G(z))` for a batch of latent codes.
    pub fn score_latents(&self, zs: &[f64], batch: usize) -> Result<Vec<f64>> {
        let x = self.generator.forward(zs, batch)?;
        self.discriminator.forward(&x, batch)
    }

    /// Fraction of held-out real and fake points the discriminator labels
    /// correctly at threshold ½.
    pub fn discriminator_accuracy(&self, n: usize, rng: &mut RngStream) -> Result<f64> {
        let real = self.config.data.sample_batch(n, rng);
        let zs = sample_latent_batch(&self.config.prior, n, rng);
        let p_real = self.discriminate(&real, n)?;
        let p_fake = self.score_latents(&zs, n)?;
        let correct = p_real.iter().filter(|&&p| p > 0.5).count()
            + p_fake.iter().filter(|&&p| p < 0.5).count();
        Ok(correct as f64 / (2 * n) as f64)
    }
}

/// Generator output for one latent code.
pub fn generate(generator: &Mlp, z: &LatentVector) -> Result<Vec<f64>> {
    if z.dim() != generator.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: generator.input_dim(),
            actual: z.dim(),
        });
    }
    generator.forward(z.as_slice(), 1)
}

pub(crate) fn sample_latent_batch(prior: &LatentPrior, n: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * prior.dim());
    for _ in 0..n {
        out.extend_from_slice(prior.sample(rng).as_slice());
    }
    out
}

/// Discriminator loss `mean softplus(−l_real) + mean softplus(l_fake)` and
/// its gradient with respect to the logits (real rows first).
pub fn discriminator_loss(real_logits: &[f64], fake_logits: &[f64]) -> (f64, Vec<f64>) {
    let nr = real_logits.len() as f64;
    let nf = fake_logits.len() as f64;
    let mut loss = 0.0;
    let mut grad = Vec::with_capacity(real_logits.len() + fake_logits.len());
    for &l in real_logits {
        loss += softplus(-l) / nr;
        grad.push((sigmoid(l) - 1.0) / nr);
    }
    for &l in fake_logits {
        loss += softplus(l) / nf;
        grad.push(sigmoid(l) / nf);
    }
    (loss, grad)
}

/// Non-saturating generator loss `mean softplus(−l_fake)` and its gradient.
pub fn generator_loss(fake_logits: &[f64]) -> (f64, Vec<f64>) {
    let n = fake_logits.len() as f64;
    let loss = fake_logits.iter().map(|&l| softplus(-l)).sum::<f64>() / n;
    let grad = fake_logits.iter().map(|&l| (sigmoid(l) - 1.0) / n).collect();
    (loss, grad)
}

/// Alternating discriminator/generator RMSProp updates. Deterministic in the
/// config seed.
pub fn train_toy_gan(config: &GanConfig) -> Result<(ToyGan, TrainReport)> {
    let mut gan = ToyGan::init(config)?;
    let report = train_in_place(&mut gan)?;
    Ok((gan, report))
}

fn train_in_place(gan: &mut ToyGan) -> Result<TrainReport> {
    let cfg = gan.config.clone();
    let b = cfg.batch_size;
    let mut data_rng = RngStream::new(cfg.seed, STREAM_DATA);
    let mut z_rng = RngStream::new(cfg.seed, STREAM_LATENT);
    let mut opt_g = RmsProp::new(&gan.generator, cfg.learning_rate, cfg.rms_decay);
    let mut opt_d = RmsProp::new(&gan.discriminator, cfg.learning_rate, cfg.rms_decay);
    let mut grads_g = MlpGrads::zeros_like(&gan.generator);
    let mut grads_d = MlpGrads::zeros_like(&gan.discriminator);
    let mut report = TrainReport {
        d_loss: Vec::with_capacity(cfg.train_steps),
        g_loss: Vec::with_capacity(cfg.train_steps),
    };

    for step in 0..cfg.train_steps {
        // discriminator update on real rows followed by fake rows
        let mut batch = cfg.data.sample_batch(b, &mut data_rng);
        let zs = sample_latent_batch(&cfg.prior, b, &mut z_rng);
        batch.extend(gan.generator.forward(&zs, b)?);
        let trace = gan.discriminator.forward_trace(&batch, 2 * b)?;
        let (l_real, l_fake) = trace.logits().split_at(b);
        let (d_loss, d_grad) = discriminator_loss(l_real, l_fake);
        grads_d.clear();
        gan.discriminator
            .backward_from_logits(&trace, &d_grad, Some(&mut grads_d));
        if !d_loss.is_finite() || !grads_d.all_finite() {
            return Err(Error::DivergenceDetected {
                step,
                which: "discriminator",
            });
        }
        opt_d.step(&mut gan.discriminator, &grads_d);

        // generator update through the fixed discriminator
        let zs = sample_latent_batch(&cfg.prior, b, &mut z_rng);
        let g_trace = gan.generator.forward_trace(&zs, b)?;
        let d_trace = gan.discriminator.forward_trace(g_trace.output(), b)?;
        let (g_loss, g_grad) = generator_loss(d_trace.logits());
        let grad_x = gan.discriminator.backward_from_logits(&d_trace, &g_grad, None);
        grads_g.clear();
        gan.generator.backward(&g_trace, &grad_x, Some(&mut grads_g));
        if !g_loss.is_finite() || !grads_g.all_finite() {
            return Err(Error::DivergenceDetected {
                step,
                which: "generator",
            });
        }
        opt_g.step(&mut gan.generator, &grads_g);

        report.d_loss.push(d_loss);
        report.g_loss.push(g_loss);
    }
    if !gan.generator.all_finite() || !gan.discriminator.all_finite() {
        return Err(Error::DivergenceDetected {
            step: cfg.train_steps,
            which: "parameter",
        });
    }
    Ok(report)
}
