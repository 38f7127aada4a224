//! The antiderivative network.
//!
//! `NN(z, α, s)` is a Fourier-feature MLP with sigmoid hidden layers and a
//! linear scalar output. Inputs are normalised to `(z', sin α, cos α, s')`
//! where `z'` and `s'` are the Radon coordinates relative to the scene center,
//! divided by the scene half-diagonal.
//!
//! Every evaluation can carry a forward tangent seeded on `z`, which yields
//! `∂NN/∂z` exactly. Values and tangents are stacked into one matrix per
//! layer (`n` value rows followed by `n` tangent rows), so the tangent sweep
//! reuses the same GEMM as the value sweep. The reverse sweep runs over that
//! stacked computation and therefore differentiates `∂NN/∂z` with respect to
//! the weights as well; it needs the sigmoid's second derivative.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floorplan::Region;
use crate::geometry::{Point, RadonSegment};

pub const CHECKPOINT_FORMAT: &str = "slfnet-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Sigmoid,
    Identity,
}

impl Activation {
    #[inline]
    fn value(self, a: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + (-a).exp()),
            Activation::Identity => a,
        }
    }

    /// First and second derivative, expressed through the activation output `h`.
    #[inline]
    fn derivatives(self, h: f64) -> (f64, f64) {
        match self {
            Activation::Sigmoid => {
                let d1 = h * (1.0 - h);
                (d1, d1 * (1.0 - 2.0 * h))
            }
            Activation::Identity => (1.0, 0.0),
        }
    }
}

/// Random Fourier features over `(z', sin α, cos α, s')`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierEncoding {
    pub scale: f64,
    /// One row of four frequencies per feature.
    pub b: Vec<[f64; 4]>,
}

impl FourierEncoding {
    pub fn features(&self) -> usize {
        self.b.len()
    }

    /// Encoding width `2F`: all sines first, then all cosines.
    pub fn width(&self) -> usize {
        2 * self.b.len()
    }
}

/// Recentres and rescales Radon coordinates before encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputScaling {
    pub center: Point,
    pub scale: f64,
}

impl Default for InputScaling {
    fn default() -> Self {
        InputScaling {
            center: Point::new(0.0, 0.0),
            scale: 1.0,
        }
    }
}

impl InputScaling {
    pub fn for_region(region: &Region) -> Self {
        InputScaling {
            center: region.center(),
            scale: region.half_diagonal(),
        }
    }

    /// Normalised input vector; `∂u[0]/∂z = 1 / scale`.
    #[inline]
    pub fn normalize(&self, z: f64, alpha: f64, s: f64) -> [f64; 4] {
        let (sin, cos) = alpha.sin_cos();
        let zc = self.center.x * sin - self.center.y * cos;
        let sc = self.center.x * cos + self.center.y * sin;
        [(z - zc) / self.scale, sin, cos, (s - sc) / self.scale]
    }
}

/// Fully connected layer, weights row-major `(outputs, inputs)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Dense {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    pub fn param_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetConfig {
    /// Hidden layer widths.
    pub widths: Vec<usize>,
    pub ff_count: usize,
    pub ff_scale: f64,
    pub activation: Activation,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig {
            widths: vec![256, 256, 256],
            ff_count: 64,
            ff_scale: 1.0,
            activation: Activation::Sigmoid,
        }
    }
}

impl NetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ff_count == 0 {
            return Err(Error::InvalidConfig("ff_count must be at least 1".into()));
        }
        if !(self.ff_scale >= 0.0 && self.ff_scale.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "ff_scale must be finite and >= 0, got {}",
                self.ff_scale
            )));
        }
        if self.widths.contains(&0) {
            return Err(Error::InvalidConfig(
                "hidden widths must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A point in Radon coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadonPoint {
    pub z: f64,
    pub alpha: f64,
    pub s: f64,
}

impl RadonPoint {
    pub fn new(z: f64, alpha: f64, s: f64) -> Self {
        RadonPoint { z, alpha, s }
    }

    fn is_finite(&self) -> bool {
        self.z.is_finite() && self.alpha.is_finite() && self.s.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetOutput {
    pub value: f64,
    pub dvalue_dz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetParams {
    pub activation: Activation,
    pub scaling: InputScaling,
    pub encoding: FourierEncoding,
    /// Hidden layers followed by the linear output layer (one output).
    pub layers: Vec<Dense>,
}

/// Gradients with the same layout as [`NetParams::layers`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<Dense>,
}

/// Parameter gradients of the value and of `∂value/∂z` at one input.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGradients {
    pub grad_value: Gradients,
    pub grad_dvdz: Gradients,
}

impl Gradients {
    pub fn zeros_like(params: &NetParams) -> Self {
        Gradients {
            layers: params
                .layers
                .iter()
                .map(|l| Dense::zeros(l.inputs, l.outputs))
                .collect(),
        }
    }

    pub fn fill_zero(&mut self) {
        for l in &mut self.layers {
            l.weights.fill(0.0);
            l.bias.fill(0.0);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Gradients, factor: f64) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            *a += factor * b;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for a in self.iter_mut() {
            *a *= factor;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Scratch buffers for one batched evaluation.
#[derive(Debug, Default, Clone)]
pub struct Tape {
    n: usize,
    tangent: bool,
    enc: Vec<f64>,
    pre: Vec<Vec<f64>>,
    post: Vec<Vec<f64>>,
    adj: Vec<f64>,
    adj_in: Vec<f64>,
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    fn rows(&self) -> usize {
        if self.tangent {
            2 * self.n
        } else {
            self.n
        }
    }

    /// Network values of the last batch.
    pub fn values(&self) -> &[f64] {
        &self.post.last().expect("tape holds an evaluation")[..self.n]
    }

    /// `∂NN/∂z` of the last batch; empty unless it was evaluated with tangents.
    pub fn tangents(&self) -> &[f64] {
        if !self.tangent {
            return &[];
        }
        &self.post.last().expect("tape holds an evaluation")[self.n..2 * self.n]
    }
}

/// `C = A·B + beta·C` with explicit row/column strides, via `matrixmultiply`.
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[f64],
    (rsa, csa): (usize, usize),
    b: &[f64],
    (rsb, csb): (usize, usize),
    beta: f64,
    c: &mut [f64],
) {
    if m == 0 || n == 0 {
        return;
    }
    assert!(a.len() >= (m - 1) * rsa + (k.max(1) - 1) * csa + 1 || k == 0);
    assert!(b.len() >= (k.max(1) - 1) * rsb + (n - 1) * csb + 1 || k == 0);
    assert!(c.len() >= m * n);
    // SAFETY: the asserts above bound every index the kernel touches for the
    // given dimensions and strides; `c` does not alias `a` or `b`.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            rsa as isize,
            csa as isize,
            b.as_ptr(),
            rsb as isize,
            csb as isize,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

impl NetParams {
    /// Random initialisation: `B ~ N(0, σ_ff²)`, weights `~ N(0, 1/fan_in)`,
    /// zero biases. Deterministic in `seed`.
    pub fn init(config: &NetConfig, scaling: InputScaling, seed: u64) -> Result<Self> {
        config.validate()?;
        if !(scaling.scale > 0.0 && scaling.scale.is_finite()) {
            return Err(Error::InvalidConfig("input scale must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
        let b = (0..config.ff_count)
            .map(|_| {
                let mut row = [0.0; 4];
                for v in &mut row {
                    *v = config.ff_scale * std_normal.sample(&mut rng);
                }
                row
            })
            .collect();
        let encoding = FourierEncoding {
            scale: config.ff_scale,
            b,
        };
        let mut layers = Vec::with_capacity(config.widths.len() + 1);
        let mut fan_in = encoding.width();
        for &out in config.widths.iter().chain(std::iter::once(&1)) {
            let mut layer = Dense::zeros(fan_in, out);
            let std = (1.0 / fan_in as f64).sqrt();
            for w in &mut layer.weights {
                *w = std * std_normal.sample(&mut rng);
            }
            layers.push(layer);
            fan_in = out;
        }
        Ok(NetParams {
            activation: config.activation,
            scaling,
            encoding,
            layers,
        })
    }

    /// Same shapes as `init`, every weight and bias zero.
    pub fn zeros(config: &NetConfig, scaling: InputScaling, seed: u64) -> Result<Self> {
        let mut p = NetParams::init(config, scaling, seed)?;
        for l in &mut p.layers {
            l.weights.fill(0.0);
            l.bias.fill(0.0);
        }
        Ok(p)
    }

    pub fn widths(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(|l| l.outputs)
            .collect()
    }

    /// Number of trainable parameters (the frequency matrix is fixed).
    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Dense::param_count).sum()
    }

    pub fn output_bias_mut(&mut self) -> &mut f64 {
        &mut self.layers.last_mut().expect("output layer").bias[0]
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()))
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }

    fn check_shapes(&self) -> Result<()> {
        let mut fan_in = self.encoding.width();
        if fan_in == 0 {
            return Err(Error::Checkpoint("encoding has no features".into()));
        }
        for (k, l) in self.layers.iter().enumerate() {
            if l.inputs != fan_in
                || l.weights.len() != l.inputs * l.outputs
                || l.bias.len() != l.outputs
                || l.outputs == 0
            {
                return Err(Error::Checkpoint(format!(
                    "layer {k} has inconsistent shape"
                )));
            }
            fan_in = l.outputs;
        }
        if fan_in != 1 {
            return Err(Error::Checkpoint("output layer must have one unit".into()));
        }
        Ok(())
    }

    /// Evaluates a batch, optionally with `∂/∂z` tangents, into `tape`.
    pub fn forward_batch(
        &self,
        inputs: &[RadonPoint],
        tangent: bool,
        tape: &mut Tape,
    ) -> Result<()> {
        if inputs.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        let n = inputs.len();
        tape.n = n;
        tape.tangent = tangent;
        let rows = tape.rows();
        let features = self.encoding.features();
        let width = self.encoding.width();

        tape.enc.clear();
        tape.enc.resize(rows * width, 0.0);
        let dz = 1.0 / self.scaling.scale;
        for (i, p) in inputs.iter().enumerate() {
            let u = self.scaling.normalize(p.z, p.alpha, p.s);
            for (f, b) in self.encoding.b.iter().enumerate() {
                let phase = TAU * (b[0] * u[0] + b[1] * u[1] + b[2] * u[2] + b[3] * u[3]);
                let (sin, cos) = phase.sin_cos();
                tape.enc[i * width + f] = sin;
                tape.enc[i * width + features + f] = cos;
                if tangent {
                    let dphase = TAU * b[0] * dz;
                    tape.enc[(n + i) * width + f] = cos * dphase;
                    tape.enc[(n + i) * width + features + f] = -sin * dphase;
                }
            }
        }

        let depth = self.layers.len();
        tape.pre.resize_with(depth, Vec::new);
        tape.post.resize_with(depth, Vec::new);
        for (l, layer) in self.layers.iter().enumerate() {
            let out = layer.outputs;
            let mut pre = std::mem::take(&mut tape.pre[l]);
            pre.clear();
            pre.resize(rows * out, 0.0);
            {
                let x: &[f64] = if l == 0 { &tape.enc } else { &tape.post[l - 1] };
                gemm(
                    rows,
                    layer.inputs,
                    out,
                    x,
                    (layer.inputs, 1),
                    &layer.weights,
                    (1, layer.inputs),
                    0.0,
                    &mut pre,
                );
            }
            for row in pre[..n * out].chunks_exact_mut(out) {
                for (a, b) in row.iter_mut().zip(&layer.bias) {
                    *a += b;
                }
            }
            let post = &mut tape.post[l];
            post.clear();
            if l + 1 == depth {
                post.extend_from_slice(&pre);
            } else {
                post.resize(rows * out, 0.0);
                let act = self.activation;
                for (h, &a) in post[..n * out].iter_mut().zip(&pre[..n * out]) {
                    *h = act.value(a);
                }
                if tangent {
                    let (values, tangents) = post.split_at_mut(n * out);
                    for ((dh, &h), &da) in
                        tangents.iter_mut().zip(values.iter()).zip(&pre[n * out..])
                    {
                        *dh = act.derivatives(h).0 * da;
                    }
                }
            }
            tape.pre[l] = pre;
        }
        Ok(())
    }

    /// Accumulates `Σ_i cv[i]·∂NN_i/∂θ + cd[i]·∂(∂NN_i/∂z)/∂θ` into `grads`.
    ///
    /// `tape` must come from [`forward_batch`](Self::forward_batch) on these
    /// same parameters. Without tangents on the tape `cot_dvdz` must be empty.
    pub fn backward_batch(
        &self,
        tape: &mut Tape,
        cot_value: &[f64],
        cot_dvdz: &[f64],
        grads: &mut Gradients,
    ) -> Result<()> {
        let n = tape.n;
        let expected_dvdz = if tape.tangent { n } else { 0 };
        if cot_value.len() != n || cot_dvdz.len() != expected_dvdz {
            return Err(Error::InvalidConfig(
                "backward needs one value cotangent per input, and one dvdz cotangent per input iff the tape has tangents"
                    .into(),
            ));
        }
        if cot_value.iter().chain(cot_dvdz).any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        let rows = tape.rows();
        let depth = self.layers.len();
        let mut adj = std::mem::take(&mut tape.adj);
        let mut adj_in = std::mem::take(&mut tape.adj_in);
        adj.clear();
        adj.extend_from_slice(cot_value);
        adj.extend_from_slice(cot_dvdz);

        for l in (0..depth).rev() {
            let layer = &self.layers[l];
            let (inp, out) = (layer.inputs, layer.outputs);
            let x: &[f64] = if l == 0 { &tape.enc } else { &tape.post[l - 1] };
            let g = &mut grads.layers[l];
            // dW += Gᵀ X over value and tangent rows alike.
            gemm(
                out,
                rows,
                inp,
                &adj,
                (1, out),
                x,
                (inp, 1),
                1.0,
                &mut g.weights,
            );
            for row in adj[..n * out].chunks_exact(out) {
                for (b, a) in g.bias.iter_mut().zip(row) {
                    *b += a;
                }
            }
            if l == 0 {
                break;
            }
            adj_in.clear();
            adj_in.resize(rows * inp, 0.0);
            gemm(
                rows,
                out,
                inp,
                &adj,
                (out, 1),
                &layer.weights,
                (inp, 1),
                0.0,
                &mut adj_in,
            );

            // Through the activation of layer l − 1:
            //   ā  = h̄ σ'(a) + dh̄ σ''(a) da,   dā = dh̄ σ'(a).
            let h = &tape.post[l - 1];
            let act = self.activation;
            adj.clear();
            adj.resize(rows * inp, 0.0);
            if tape.tangent {
                let da = &tape.pre[l - 1][n * inp..];
                let (adj_val, adj_tan) = adj.split_at_mut(n * inp);
                let (in_val, in_tan) = adj_in.split_at(n * inp);
                for k in 0..n * inp {
                    let (d1, d2) = act.derivatives(h[k]);
                    adj_val[k] = in_val[k] * d1 + in_tan[k] * d2 * da[k];
                    adj_tan[k] = in_tan[k] * d1;
                }
            } else {
                for k in 0..n * inp {
                    adj[k] = adj_in[k] * act.derivatives(h[k]).0;
                }
            }
        }
        tape.adj = adj;
        tape.adj_in = adj_in;
        Ok(())
    }

    pub fn forward(&self, z: f64, alpha: f64, s: f64) -> Result<f64> {
        let mut tape = Tape::new();
        self.forward_batch(&[RadonPoint::new(z, alpha, s)], false, &mut tape)?;
        Ok(tape.values()[0])
    }

    pub fn forward_with_dz(&self, z: f64, alpha: f64, s: f64) -> Result<NetOutput> {
        let mut tape = Tape::new();
        self.forward_batch(&[RadonPoint::new(z, alpha, s)], true, &mut tape)?;
        Ok(NetOutput {
            value: tape.values()[0],
            dvalue_dz: tape.tangents()[0],
        })
    }

    /// Gradient of `cot_value·NN + cot_dvdz·∂NN/∂z` at one input.
    pub fn backward(
        &self,
        z: f64,
        alpha: f64,
        s: f64,
        cot_value: f64,
        cot_dvdz: f64,
    ) -> Result<Gradients> {
        let mut tape = Tape::new();
        self.forward_batch(&[RadonPoint::new(z, alpha, s)], true, &mut tape)?;
        let mut grads = Gradients::zeros_like(self);
        self.backward_batch(&mut tape, &[cot_value], &[cot_dvdz], &mut grads)?;
        Ok(grads)
    }

    pub fn dual_gradients(&self, z: f64, alpha: f64, s: f64) -> Result<DualGradients> {
        Ok(DualGradients {
            grad_value: self.backward(z, alpha, s, 1.0, 0.0)?,
            grad_dvdz: self.backward(z, alpha, s, 0.0, 1.0)?,
        })
    }

    /// `NN(z1) − NN(z0)` on the segment's line.
    pub fn predict_segment(&self, seg: &RadonSegment) -> Result<f64> {
        let mut tape = Tape::new();
        Ok(self.predict_segments(std::slice::from_ref(seg), &mut tape)?[0])
    }

    /// Batched [`predict_segment`](Self::predict_segment).
    pub fn predict_segments(&self, segs: &[RadonSegment], tape: &mut Tape) -> Result<Vec<f64>> {
        let inputs: Vec<RadonPoint> = segs
            .iter()
            .map(|g| RadonPoint::new(g.z1, g.alpha, g.s))
            .chain(segs.iter().map(|g| RadonPoint::new(g.z0, g.alpha, g.s)))
            .collect();
        self.forward_batch(&inputs, false, tape)?;
        let values = tape.values();
        let m = segs.len();
        Ok((0..m).map(|i| values[i] - values[m + i]).collect())
    }
}

/// Convenience wrapper around [`NetParams::init`].
pub fn init_params(
    seed: u64,
    widths: &[usize],
    ff_count: usize,
    ff_scale: f64,
    scaling: InputScaling,
) -> Result<NetParams> {
    let config = NetConfig {
        widths: widths.to_vec(),
        ff_count,
        ff_scale,
        activation: Activation::Sigmoid,
    };
    NetParams::init(&config, scaling, seed)
}

/// Parameters plus free-form training metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub params: NetParams,
    #[serde(default)]
    pub meta: serde_json::Value,
}

impl Checkpoint {
    pub fn new(params: NetParams, meta: serde_json::Value) -> Self {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            params,
            meta,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ckpt: Checkpoint =
            serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if ckpt.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!(
                "unexpected format `{}`",
                ckpt.format
            )));
        }
        if ckpt.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {} (expected {CHECKPOINT_VERSION})",
                ckpt.version
            )));
        }
        ckpt.params.check_shapes()?;
        Ok(ckpt)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Checkpoint::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_config() -> NetConfig {
        NetConfig {
            widths: vec![8, 8],
            ff_count: 4,
            ff_scale: 1.0,
            activation: Activation::Sigmoid,
        }
    }

    #[test]
    fn init_is_deterministic_and_shaped() {
        let a = NetParams::init(&toy_config(), InputScaling::default(), 7).unwrap();
        let b = NetParams::init(&toy_config(), InputScaling::default(), 7).unwrap();
        assert_eq!(a, b);
        let c = NetParams::init(&toy_config(), InputScaling::default(), 8).unwrap();
        assert_ne!(a, c);

        let cfg = NetConfig {
            widths: vec![8],
            ff_count: 3,
            ..NetConfig::default()
        };
        let p = NetParams::init(&cfg, InputScaling::default(), 0).unwrap();
        let shapes: Vec<_> = p.layers.iter().map(|l| (l.inputs, l.outputs)).collect();
        assert_eq!(shapes, vec![(6, 8), (8, 1)]);
        assert!(p.layers.iter().all(|l| l.bias.iter().all(|&b| b == 0.0)));
    }

    #[test]
    fn default_parameter_count() {
        let p = NetParams::init(&NetConfig::default(), InputScaling::default(), 0).unwrap();
        assert_eq!(p.param_count(), 164_865);
        assert_eq!(p.encoding.b.len() * 4, 256);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = toy_config();
        cfg.ff_count = 0;
        assert!(NetParams::init(&cfg, InputScaling::default(), 0).is_err());
        let mut cfg = toy_config();
        cfg.widths = vec![4, 0];
        assert!(NetParams::init(&cfg, InputScaling::default(), 0).is_err());
    }

    #[test]
    fn zero_weights_give_output_bias() {
        let mut p = NetParams::zeros(&toy_config(), InputScaling::default(), 1).unwrap();
        *p.output_bias_mut() = 2.5;
        for (z, a, s) in [(0.0, 0.0, 0.0), (3.0, 1.0, -2.0), (-7.5, 3.0, 40.0)] {
            let out = p.forward_with_dz(z, a, s).unwrap();
            assert_eq!(out.value, 2.5);
            assert_eq!(out.dvalue_dz, 0.0);
        }
        let seg = RadonSegment {
            z0: -1.0,
            z1: 4.0,
            alpha: 0.3,
            s: 1.0,
        };
        assert_eq!(p.predict_segment(&seg).unwrap(), 0.0);
    }

    #[test]
    fn single_sine_feature_has_analytic_derivative() {
        // No hidden layers, B = [1, 0, 0, 0], sine weight 1: NN = sin(2πz).
        let mut p = NetParams {
            activation: Activation::Identity,
            scaling: InputScaling::default(),
            encoding: FourierEncoding {
                scale: 1.0,
                b: vec![[1.0, 0.0, 0.0, 0.0]],
            },
            layers: vec![Dense::zeros(2, 1)],
        };
        p.layers[0].weights[0] = 1.0;
        let out = p.forward_with_dz(0.0, 0.4, 0.0).unwrap();
        assert_eq!(out.value, 0.0);
        assert!((out.dvalue_dz - TAU).abs() < 1e-12);
        let out = p.forward_with_dz(0.125, 0.4, 0.0).unwrap();
        assert!((out.value - (TAU * 0.125).sin()).abs() < 1e-15);
        assert!((out.dvalue_dz - TAU * (TAU * 0.125).cos()).abs() < 1e-12);
    }

    #[test]
    fn non_finite_inputs_are_rejected() {
        let p = NetParams::init(&toy_config(), InputScaling::default(), 0).unwrap();
        assert!(matches!(
            p.forward(f64::NAN, 0.0, 0.0),
            Err(Error::NonFiniteInput)
        ));
        assert!(matches!(
            p.forward_with_dz(0.0, f64::INFINITY, 0.0),
            Err(Error::NonFiniteInput)
        ));
        assert!(matches!(
            p.backward(0.0, 0.0, 0.0, f64::NAN, 0.0),
            Err(Error::NonFiniteInput)
        ));
    }

    #[test]
    fn zero_cotangents_give_zero_gradients() {
        let p = NetParams::init(&toy_config(), InputScaling::default(), 3).unwrap();
        let g = p.backward(0.3, 1.2, -0.4, 0.0, 0.0).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn value_matches_between_sweeps() {
        let p = NetParams::init(&NetConfig::default(), InputScaling::default(), 42).unwrap();
        let v = p.forward(0.5, std::f64::consts::FRAC_PI_3, 1.0).unwrap();
        let o = p
            .forward_with_dz(0.5, std::f64::consts::FRAC_PI_3, 1.0)
            .unwrap();
        assert_eq!(v.to_bits(), o.value.to_bits());
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let p = NetParams::init(&toy_config(), InputScaling::default(), 11).unwrap();
        let ckpt = Checkpoint::new(p, serde_json::json!({"steps": 3}));
        let text = ckpt.to_json();
        let back = Checkpoint::from_json(&text).unwrap();
        assert_eq!(back, ckpt);
        assert_eq!(back.to_json(), text);
        let broken = text.replace(CHECKPOINT_FORMAT, "other");
        assert!(Checkpoint::from_json(&broken).is_err());
    }
}
