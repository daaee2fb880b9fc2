use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{sample_standard_normal, RngStream};

pub const LEAKY_SLOPE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Identity,
    Relu,
    /// Leaky ReLU with negative slope [`LEAKY_SLOPE`].
    LeakyRelu,
    Tanh,
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
            Activation::LeakyRelu => {
                if x > 0.0 {
                    x
                } else {
                    LEAKY_SLOPE * x
                }
            }
            Activation::Tanh => x.tanh(),
            Activation::Sigmoid => sigmoid(x),
        }
    }

    /// Derivative in terms of the pre-activation `x` and output `y`.
    #[inline]
    fn derivative(self, x: f64, y: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu => {
                if x > 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            Activation::Tanh => 1.0 - y * y,
            Activation::Sigmoid => y * (1.0 - y),
        }
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + eˣ)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Dense layer; `weights` is `outputs × inputs`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub activation: Activation,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    fn init(inputs: usize, outputs: usize, activation: Activation, rng: &mut RngStream) -> Self {
        let gain = match activation {
            Activation::Relu | Activation::LeakyRelu => 2.0,
            _ => 1.0,
        };
        let std = (gain / inputs as f64).sqrt();
        Self {
            inputs,
            outputs,
            activation,
            weights: (0..inputs * outputs)
                .map(|_| std * sample_standard_normal(rng))
                .collect(),
            bias: vec![0.0; outputs],
        }
    }

    fn check(&self) -> Result<()> {
        if self.weights.len() != self.inputs * self.outputs || self.bias.len() != self.outputs {
            return Err(Error::InvalidParameter(format!(
                "layer {}→{} has {} weights and {} biases",
                self.inputs,
                self.outputs,
                self.weights.len(),
                self.bias.len()
            )));
        }
        Ok(())
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Multilayer perceptron operating on row-major batches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub layers: Vec<Layer>,
}

/// Per-layer values retained by a forward pass for backpropagation.
#[derive(Debug, Clone)]
pub struct Trace {
    batch: usize,
    /// `activations[k]` is the input of layer `k`; the last entry is the output.
    activations: Vec<Vec<f64>>,
    pre: Vec<Vec<f64>>,
}

impl Trace {
    pub fn output(&self) -> &[f64] {
        self.activations.last().expect("trace has an output")
    }

    /// Pre-activation of the final layer.
    pub fn logits(&self) -> &[f64] {
        self.pre.last().expect("trace has a final layer")
    }

    pub fn batch(&self) -> usize {
        self.batch
    }
}

/// Gradients shaped like an [`Mlp`]'s parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<Vec<f64>>,
}

impl MlpGrads {
    pub fn zeros_like(mlp: &Mlp) -> Self {
        Self {
            weights: mlp.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            bias: mlp.layers.iter().map(|l| vec![0.0; l.bias.len()]).collect(),
        }
    }

    pub fn clear(&mut self) {
        self.weights.iter_mut().chain(self.bias.iter_mut()).for_each(|v| v.fill(0.0));
    }

    /// Flat view in [`Mlp::param`] order.
    pub fn flat(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .flat_map(|(w, b)| w.iter().chain(b.iter()).copied())
            .collect()
    }

    pub fn all_finite(&self) -> bool {
        self.weights
            .iter()
            .chain(&self.bias)
            .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

impl Mlp {
    /// Fully connected net with `widths = [in, h₁, …, out]`; `hidden` on every
    /// layer but the last, `output` on the last.
    pub fn new(
        widths: &[usize],
        hidden: Activation,
        output: Activation,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if widths.len() < 2 || widths.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "an MLP needs at least two non-zero widths, got {widths:?}"
            )));
        }
        let n = widths.len() - 1;
        let layers = (0..n)
            .map(|k| {
                let act = if k + 1 == n { output } else { hidden };
                Layer::init(widths[k], widths[k + 1], act, rng)
            })
            .collect();
        Ok(Self { layers })
    }

    pub fn from_layers(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::EmptyInput("MLP layers"));
        }
        for l in &layers {
            l.check()?;
        }
        for w in layers.windows(2) {
            if w[0].outputs != w[1].inputs {
                return Err(Error::DimensionMismatch {
                    expected: w[0].outputs,
                    actual: w[1].inputs,
                });
            }
        }
        Ok(Self { layers })
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("non-empty").outputs
    }

    pub fn widths(&self) -> Vec<usize> {
        std::iter::once(self.input_dim())
            .chain(self.layers.iter().map(|l| l.outputs))
            .collect()
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    fn locate(&self, mut idx: usize) -> (usize, bool, usize) {
        for (k, l) in self.layers.iter().enumerate() {
            if idx < l.weights.len() {
                return (k, true, idx);
            }
            idx -= l.weights.len();
            if idx < l.bias.len() {
                return (k, false, idx);
            }
            idx -= l.bias.len();
        }
        panic!("parameter index out of range");
    }

    /// Parameter `idx` in flat order (per layer: weights, then bias).
    pub fn param(&self, idx: usize) -> f64 {
        match self.locate(idx) {
            (k, true, i) => self.layers[k].weights[i],
            (k, false, i) => self.layers[k].bias[i],
        }
    }

    pub fn set_param(&mut self, idx: usize, value: f64) {
        match self.locate(idx) {
            (k, true, i) => self.layers[k].weights[i] = value,
            (k, false, i) => self.layers[k].bias[i] = value,
        }
    }

    pub fn all_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.iter().chain(&l.bias).all(|x| x.is_finite()))
    }

    /// Forward pass over `batch` row-major inputs, keeping a trace.
    pub fn forward_trace(&self, input: &[f64], batch: usize) -> Result<Trace> {
        if input.len() != batch * self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: batch * self.input_dim(),
                actual: input.len(),
            });
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        let mut pre = Vec::with_capacity(self.layers.len());
        activations.push(input.to_vec());
        for layer in &self.layers {
            let x = activations.last().expect("input pushed");
            let mut z = vec![0.0; batch * layer.outputs];
            for b in 0..batch {
                let xb = &x[b * layer.inputs..(b + 1) * layer.inputs];
                let zb = &mut z[b * layer.outputs..(b + 1) * layer.outputs];
                for (o, zo) in zb.iter_mut().enumerate() {
                    let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    *zo = layer.bias[o] + dot(row, xb);
                }
            }
            let a = z.iter().map(|&v| layer.activation.apply(v)).collect();
            pre.push(z);
            activations.push(a);
        }
        Ok(Trace {
            batch,
            activations,
            pre,
        })
    }

    pub fn forward(&self, input: &[f64], batch: usize) -> Result<Vec<f64>> {
        let mut t = self.forward_trace(input, batch)?;
        Ok(t.activations.pop().expect("output"))
    }

    /// Backpropagate a gradient given with respect to the final layer's
    /// pre-activation. Parameter gradients are accumulated into `grads` when
    /// provided; the gradient with respect to the input is returned.
    pub fn backward_from_logits(
        &self,
        trace: &Trace,
        grad_logits: &[f64],
        mut grads: Option<&mut MlpGrads>,
    ) -> Vec<f64> {
        let batch = trace.batch;
        let mut delta = grad_logits.to_vec();
        for k in (0..self.layers.len()).rev() {
            let layer = &self.layers[k];
            if k + 1 < self.layers.len() {
                let pre = &trace.pre[k];
                let out = &trace.activations[k + 1];
                for ((d, &x), &y) in delta.iter_mut().zip(pre).zip(out) {
                    *d *= layer.activation.derivative(x, y);
                }
            }
            let x = &trace.activations[k];
            if let Some(g) = grads.as_deref_mut() {
                let gw = &mut g.weights[k];
                let gb = &mut g.bias[k];
                for b in 0..batch {
                    let xb = &x[b * layer.inputs..(b + 1) * layer.inputs];
                    for o in 0..layer.outputs {
                        let d = delta[b * layer.outputs + o];
                        if d != 0.0 {
                            axpy(d, xb, &mut gw[o * layer.inputs..(o + 1) * layer.inputs]);
                        }
                        gb[o] += d;
                    }
                }
            }
            let mut gx = vec![0.0; batch * layer.inputs];
            for b in 0..batch {
                let gxb = &mut gx[b * layer.inputs..(b + 1) * layer.inputs];
                for o in 0..layer.outputs {
                    let d = delta[b * layer.outputs + o];
                    if d != 0.0 {
                        axpy(d, &layer.weights[o * layer.inputs..(o + 1) * layer.inputs], gxb);
                    }
                }
            }
            delta = gx;
        }
        delta
    }

    /// Like [`Mlp::backward_from_logits`] but with the gradient taken with
    /// respect to the network output.
    pub fn backward(
        &self,
        trace: &Trace,
        grad_output: &[f64],
        grads: Option<&mut MlpGrads>,
    ) -> Vec<f64> {
        let last = self.layers.last().expect("non-empty");
        let grad_logits: Vec<f64> = grad_output
            .iter()
            .zip(trace.logits())
            .zip(trace.output())
            .map(|((g, &x), &y)| g * last.activation.derivative(x, y))
            .collect();
        self.backward_from_logits(trace, &grad_logits, grads)
    }
}

/// RMSProp: `v ← ρv + (1−ρ)g²`, `p ← p − lr·g/(√v + ε)`.
#[derive(Debug, Clone)]
pub struct RmsProp {
    pub lr: f64,
    pub decay: f64,
    pub eps: f64,
    cache_w: Vec<Vec<f64>>,
    cache_b: Vec<Vec<f64>>,
}

impl RmsProp {
    pub fn new(mlp: &Mlp, lr: f64, decay: f64) -> Self {
        let g = MlpGrads::zeros_like(mlp);
        Self {
            lr,
            decay,
            eps: 1e-8,
            cache_w: g.weights,
            cache_b: g.bias,
        }
    }

    pub fn step(&mut self, mlp: &mut Mlp, grads: &MlpGrads) {
        let (lr, rho, eps) = (self.lr, self.decay, self.eps);
        let update = |p: &mut [f64], g: &[f64], v: &mut [f64]| {
            for ((p, &g), v) in p.iter_mut().zip(g).zip(v.iter_mut()) {
                *v = rho * *v + (1.0 - rho) * g * g;
                *p -= lr * g / (v.sqrt() + eps);
            }
        };
        for (k, layer) in mlp.layers.iter_mut().enumerate() {
            update(&mut layer.weights, &grads.weights[k], &mut self.cache_w[k]);
            update(&mut layer.bias, &grads.bias[k], &mut self.cache_b[k]);
        }
    }
}
