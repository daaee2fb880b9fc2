//! Central-difference gradient checks for the toy GAN networks.

use latentgeom::numerics::{sample_standard_normal, RngStream};
use latentgeom::priors::LatentPrior;
use latentgeom::toygan::{
    discriminator_loss, generator_loss, train_toy_gan, Activation, GanConfig, Mlp, MlpGrads,
    ToyGan,
};

pub const H: f64 = 1e-5;
pub const REL_TOL: f64 = 1e-4;
// gradients smaller than this are compared absolutely
pub const REL_FLOOR: f64 = 1e-6;

/// Layer index and activation for each flat parameter index.
fn param_layers(mlp: &Mlp) -> Vec<(usize, Activation)> {
    mlp.layers
        .iter()
        .enumerate()
        .flat_map(|(k, l)| std::iter::repeat((k, l.activation)).take(l.weights.len() + l.bias.len()))
        .collect()
}

pub struct Check {
    pub checked: usize,
    pub worst: f64,
}

/// Compares analytic and central-difference gradients on `per_type` random
/// parameters of each layer activation. Parameters sitting on a kink (the
/// one-sided differences disagree) are redrawn.
pub fn gradcheck(
    mlp: &Mlp,
    per_type: usize,
    rng: &mut RngStream,
    loss: impl Fn(&Mlp) -> f64,
    analytic: &[f64],
) -> Vec<(Activation, Check)> {
    let layers = param_layers(mlp);
    let mut kinds: Vec<Activation> = layers.iter().map(|&(_, a)| a).collect();
    kinds.dedup();
    let mut out = Vec::new();
    for kind in kinds {
        let idxs: Vec<usize> = (0..layers.len()).filter(|&i| layers[i].1 == kind).collect();
        let mut check = Check { checked: 0, worst: 0.0 };
        let mut attempts = 0;
        while check.checked < per_type {
            attempts += 1;
            assert!(attempts < 20 * per_type, "too many kinks for {kind:?}");
            let i = idxs[(rng.uniform_open01() * idxs.len() as f64) as usize];
            let mut m = mlp.clone();
            let p = m.param(i);
            let f0 = loss(&m);
            m.set_param(i, p + H);
            let fp = loss(&m);
            m.set_param(i, p - H);
            let fm = loss(&m);
            let (right, left) = ((fp - f0) / H, (f0 - fm) / H);
            if (right - left).abs() > 1e-3 * (right.abs() + left.abs()).max(1e-4) {
                continue;
            }
            let numeric = (fp - fm) / (2.0 * H);
            let a = analytic[i];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(REL_FLOOR);
            check.worst = check.worst.max(rel);
            check.checked += 1;
        }
        out.push((kind, check));
    }
    out
}

fn partially_trained() -> ToyGan {
    let cfg = GanConfig {
        prior: LatentPrior::normal(8, 1.0).unwrap(),
        train_steps: 300,
        seed: 3,
        ..GanConfig::default()
    };
    train_toy_gan(&cfg).unwrap().0
}

fn fixed_batch(gan: &ToyGan, b: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = RngStream::new(99, 0);
    let real = gan.config.data.sample_batch(b, &mut rng);
    let zs: Vec<f64> = (0..b)
        .flat_map(|_| gan.prior().sample(&mut rng).into_inner())
        .collect();
    (real, zs)
}


/// Checks `per_type` parameters of every layer type in both networks of a
/// partially trained GAN, differentiating the discriminator loss for the
/// discriminator and the non-saturating loss (through `D`) for the generator.
pub fn check_gan(per_type: usize) -> Vec<(String, Check)> {
    let gan = partially_trained();
    let b = 16;
    let (real, zs) = fixed_batch(&gan, b);
    let mut out = Vec::new();

    let mut batch = real;
    batch.extend(gan.generator.forward(&zs, b).unwrap());
    let d_loss = |d: &Mlp| {
        let t = d.forward_trace(&batch, 2 * b).unwrap();
        let (lr, lf) = t.logits().split_at(b);
        discriminator_loss(lr, lf).0
    };
    let trace = gan.discriminator.forward_trace(&batch, 2 * b).unwrap();
    let (lr, lf) = trace.logits().split_at(b);
    let (_, g) = discriminator_loss(lr, lf);
    let mut grads = MlpGrads::zeros_like(&gan.discriminator);
    gan.discriminator.backward_from_logits(&trace, &g, Some(&mut grads));
    for (kind, c) in gradcheck(&gan.discriminator, per_type, &mut RngStream::new(7, 0), d_loss, &grads.flat()) {
        out.push((format!("discriminator {kind:?}"), c));
    }

    let d = &gan.discriminator;
    let g_loss = |g: &Mlp| {
        let x = g.forward(&zs, b).unwrap();
        generator_loss(d.forward_trace(&x, b).unwrap().logits()).0
    };
    let tg = gan.generator.forward_trace(&zs, b).unwrap();
    let td = d.forward_trace(tg.output(), b).unwrap();
    let (_, gl) = generator_loss(td.logits());
    let gx = d.backward_from_logits(&td, &gl, None);
    let mut grads = MlpGrads::zeros_like(&gan.generator);
    gan.generator.backward(&tg, &gx, Some(&mut grads));
    for (kind, c) in gradcheck(&gan.generator, per_type, &mut RngStream::new(7, 1), g_loss, &grads.flat()) {
        out.push((format!("generator {kind:?}"), c));
    }
    out
}

/// Tanh hidden layers and a sigmoid output on a fixed linear functional.
pub fn check_smooth(per_type: usize) -> Vec<(String, Check)> {
    let mut rng = RngStream::new(13, 0);
    let mlp = Mlp::new(&[5, 12, 12, 3], Activation::Tanh, Activation::Sigmoid, &mut rng).unwrap();
    let b = 8;
    let x: Vec<f64> = (0..b * 5).map(|_| sample_standard_normal(&mut rng)).collect();
    let w: Vec<f64> = (0..b * 3).map(|_| sample_standard_normal(&mut rng)).collect();
    let loss = |m: &Mlp| -> f64 { m.forward(&x, b).unwrap().iter().zip(&w).map(|(y, w)| y * w).sum() };
    let trace = mlp.forward_trace(&x, b).unwrap();
    let mut grads = MlpGrads::zeros_like(&mlp);
    mlp.backward(&trace, &w, Some(&mut grads));
    gradcheck(&mlp, per_type, &mut rng, loss, &grads.flat())
        .into_iter()
        .map(|(k, c)| (format!("{k:?}"), c))
        .collect()
}
