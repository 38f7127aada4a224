//! Joint training objective and the Adam training loop.
//!
//! The objective has two terms:
//!
//! * loss-field term: `mean φ(SLF_i − ∂NN/∂z (z_i, α_i, s_i))`
//! * path term: `mean ρ(ISLF_j − (NN(z1_j) − NN(z0_j)))` on canonical segments
//!
//! combined as `slf + λ·islf`. With variance normalization each term is
//! divided by the variance of its training labels.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, IslfSample, SlfSample};
use crate::error::{Error, Result};
use crate::geometry::{to_radon, RadonSegment};
use crate::net::{Checkpoint, Gradients, NetConfig, NetParams, RadonPoint, Tape};
use crate::predict;

/// SLF samples per gradient task; ISLF tasks hold half as many (two points each).
/// Fixed so the reduction order does not depend on the thread count.
const CHUNK_POINTS: usize = 256;

/// Variances below this are treated as "no spread" and replaced by 1.
const MIN_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LossKind {
    /// `r²`.
    Squared,
    /// `r²` for `|r| ≤ δ`, `δ(2|r| − δ)` beyond: squared loss with linear tails.
    Huber { delta: f64 },
}

impl LossKind {
    #[inline]
    pub fn value(self, r: f64) -> f64 {
        match self {
            LossKind::Squared => r * r,
            LossKind::Huber { delta } => {
                if r.abs() <= delta {
                    r * r
                } else {
                    delta * (2.0 * r.abs() - delta)
                }
            }
        }
    }

    #[inline]
    pub fn derivative(self, r: f64) -> f64 {
        match self {
            LossKind::Squared => 2.0 * r,
            LossKind::Huber { delta } => 2.0 * r.clamp(-delta, delta),
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            LossKind::Huber { delta } if !(delta > 0.0 && delta.is_finite()) => Err(
                Error::InvalidConfig(format!("huber delta must be positive, got {delta}")),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    None,
    /// Divide each term by the variance of its training labels.
    Variance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossConfig {
    pub phi: LossKind,
    pub rho: LossKind,
    pub lambda_islf: f64,
    pub normalization: Normalization,
}

impl Default for LossConfig {
    fn default() -> Self {
        LossConfig {
            phi: LossKind::Squared,
            rho: LossKind::Squared,
            lambda_islf: 1.0,
            normalization: Normalization::Variance,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        self.phi.validate()?;
        self.rho.validate()?;
        if !(self.lambda_islf >= 0.0 && self.lambda_islf.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lambda_islf must be >= 0, got {}",
                self.lambda_islf
            )));
        }
        Ok(())
    }
}

/// Divisors applied to the two loss terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizers {
    pub slf: f64,
    pub islf: f64,
}

impl Default for Normalizers {
    fn default() -> Self {
        Normalizers {
            slf: 1.0,
            islf: 1.0,
        }
    }
}

fn variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let (n, sum) = values
        .clone()
        .fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    values.map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64
}

impl Normalizers {
    pub fn from_samples(
        slf: &[SlfSample],
        islf: &[IslfSample],
        normalization: Normalization,
    ) -> Self {
        match normalization {
            Normalization::None => Normalizers::default(),
            Normalization::Variance => {
                let guard = |v: f64| if v > MIN_VARIANCE { v } else { 1.0 };
                Normalizers {
                    slf: guard(variance(slf.iter().map(|s| s.slf))),
                    islf: guard(variance(islf.iter().map(|s| s.islf))),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossValue {
    pub slf: f64,
    pub islf: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub steps: usize,
    pub batch_slf: usize,
    pub batch_islf: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub seed: u64,
    pub eval_every: usize,
    pub checkpoint_path: Option<PathBuf>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            steps: 2000,
            batch_slf: 256,
            batch_islf: 128,
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed: 0,
            eval_every: 200,
            checkpoint_path: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_slf == 0 || self.batch_islf == 0 || self.eval_every == 0 {
            return Err(Error::InvalidConfig(
                "batch sizes and eval_every must be positive".into(),
            ));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(
                "learning rate must be positive".into(),
            ));
        }
        if !((0.0..1.0).contains(&self.adam_beta1)
            && (0.0..1.0).contains(&self.adam_beta2)
            && self.adam_eps > 0.0)
        {
            return Err(Error::InvalidConfig("invalid Adam hyperparameters".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainRecord {
    pub step: usize,
    pub slf_loss: f64,
    pub islf_loss: f64,
    pub total: f64,
    /// `NaN` when no holdout set was given.
    pub holdout_nmse: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainReport {
    pub records: Vec<TrainRecord>,
}

impl TrainReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,slf_loss,islf_loss,total,holdout_nmse\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.step, r.slf_loss, r.islf_loss, r.total, r.holdout_nmse
            ));
        }
        out
    }

    pub fn first(&self) -> Option<&TrainRecord> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&TrainRecord> {
        self.records.last()
    }
}

/// Network, objective and optimiser settings for one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub net: NetConfig,
    pub init_seed: u64,
    pub loss: LossConfig,
    pub train: TrainConfig,
    /// Fraction of ISLF samples held out from training for evaluation.
    pub holdout_fraction: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            net: NetConfig::default(),
            init_seed: 0,
            loss: LossConfig::default(),
            train: TrainConfig::default(),
            holdout_fraction: 0.1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.net.validate()?;
        self.loss.validate()?;
        self.train.validate()?;
        if !(0.0..1.0).contains(&self.holdout_fraction) {
            return Err(Error::InvalidConfig(format!(
                "holdout_fraction must be in [0, 1), got {}",
                self.holdout_fraction
            )));
        }
        Ok(())
    }
}

/// Splits the ISLF samples of `data` into training data and a holdout tail.
pub fn split_holdout(data: &Dataset, fraction: f64) -> (Dataset, Vec<IslfSample>) {
    let n = data.islf_samples.len();
    let held = ((n as f64) * fraction).round() as usize;
    let held = held.min(n.saturating_sub(1));
    let mut train = data.clone();
    let holdout = train.islf_samples.split_off(n - held);
    train.meta.n_islf = train.islf_samples.len();
    (train, holdout)
}

/// ISLF sample converted to a canonical segment and its label.
#[derive(Debug, Clone, Copy)]
struct PathTarget {
    seg: RadonSegment,
    islf: f64,
}

fn path_targets(batch: &[IslfSample]) -> Result<Vec<PathTarget>> {
    batch
        .iter()
        .map(|s| {
            Ok(PathTarget {
                seg: to_radon(&s.pair())?,
                islf: s.islf,
            })
        })
        .collect()
}

/// Sums of per-sample losses (not yet averaged) and their gradients.
struct Partial {
    slf_sum: f64,
    islf_sum: f64,
    grads: Option<Gradients>,
}

enum Task<'a> {
    Slf(&'a [SlfSample]),
    Islf(&'a [PathTarget]),
}

/// Loss sums over one task; when `weights` is given, also the gradient of
/// `weights.0 · Σφ + weights.1 · Σρ`.
fn run_task(
    params: &NetParams,
    task: &Task<'_>,
    cfg: &LossConfig,
    weights: Option<(f64, f64)>,
) -> Result<Partial> {
    let mut tape = Tape::new();
    match *task {
        Task::Slf(batch) => {
            let inputs: Vec<RadonPoint> = batch
                .iter()
                .map(|s| RadonPoint::new(s.z, s.alpha, s.s))
                .collect();
            params.forward_batch(&inputs, true, &mut tape)?;
            let residuals: Vec<f64> = batch
                .iter()
                .zip(tape.tangents())
                .map(|(s, d)| s.slf - d)
                .collect();
            let slf_sum = residuals.iter().map(|&r| cfg.phi.value(r)).sum();
            let grads = match weights {
                Some((w, _)) => {
                    let cot_dvdz: Vec<f64> = residuals
                        .iter()
                        .map(|&r| -w * cfg.phi.derivative(r))
                        .collect();
                    let zeros = vec![0.0; inputs.len()];
                    let mut g = Gradients::zeros_like(params);
                    params.backward_batch(&mut tape, &zeros, &cot_dvdz, &mut g)?;
                    Some(g)
                }
                None => None,
            };
            Ok(Partial {
                slf_sum,
                islf_sum: 0.0,
                grads,
            })
        }
        Task::Islf(batch) => {
            let m = batch.len();
            let inputs: Vec<RadonPoint> = batch
                .iter()
                .map(|t| RadonPoint::new(t.seg.z1, t.seg.alpha, t.seg.s))
                .chain(
                    batch
                        .iter()
                        .map(|t| RadonPoint::new(t.seg.z0, t.seg.alpha, t.seg.s)),
                )
                .collect();
            params.forward_batch(&inputs, false, &mut tape)?;
            let values = tape.values();
            let residuals: Vec<f64> = (0..m)
                .map(|i| batch[i].islf - (values[i] - values[m + i]))
                .collect();
            let islf_sum = residuals.iter().map(|&r| cfg.rho.value(r)).sum();
            let grads = match weights {
                Some((_, w)) => {
                    // ∂ρ(r)/∂θ = ρ'(r)·(−∂NN(z1)/∂θ + ∂NN(z0)/∂θ).
                    let mut cot_value = vec![0.0; 2 * m];
                    for (i, &r) in residuals.iter().enumerate() {
                        let d = w * cfg.rho.derivative(r);
                        cot_value[i] = -d;
                        cot_value[m + i] = d;
                    }
                    let mut g = Gradients::zeros_like(params);
                    params.backward_batch(&mut tape, &cot_value, &[], &mut g)?;
                    Some(g)
                }
                None => None,
            };
            Ok(Partial {
                slf_sum: 0.0,
                islf_sum,
                grads,
            })
        }
    }
}

/// Loss (and optionally gradient) over both sample sets. Tasks are evaluated
/// in parallel and reduced in a fixed order.
fn objective(
    params: &NetParams,
    slf: &[SlfSample],
    islf: &[PathTarget],
    cfg: &LossConfig,
    norms: &Normalizers,
    lambda: f64,
    with_grad: bool,
) -> Result<(LossValue, Option<Gradients>)> {
    let slf_scale = if slf.is_empty() {
        0.0
    } else {
        1.0 / (slf.len() as f64 * norms.slf)
    };
    let islf_scale = if islf.is_empty() {
        0.0
    } else {
        1.0 / (islf.len() as f64 * norms.islf)
    };
    let weights = with_grad.then_some((slf_scale, lambda * islf_scale));
    let tasks: Vec<Task<'_>> = slf
        .chunks(CHUNK_POINTS)
        .map(Task::Slf)
        .chain(islf.chunks(CHUNK_POINTS / 2).map(Task::Islf))
        .collect();
    let partials: Vec<Partial> = tasks
        .par_iter()
        .map(|t| run_task(params, t, cfg, weights))
        .collect::<Result<_>>()?;

    let mut slf_sum = 0.0;
    let mut islf_sum = 0.0;
    let mut grads = with_grad.then(|| Gradients::zeros_like(params));
    for p in partials {
        slf_sum += p.slf_sum;
        islf_sum += p.islf_sum;
        if let (Some(acc), Some(g)) = (grads.as_mut(), p.grads.as_ref()) {
            acc.add_scaled(g, 1.0);
        }
    }
    let slf_term = slf_sum * slf_scale;
    let islf_term = islf_sum * islf_scale;
    Ok((
        LossValue {
            slf: slf_term,
            islf: islf_term,
            total: slf_term + lambda * islf_term,
        },
        grads,
    ))
}

/// Mean loss-field term over `batch` and its parameter gradient.
pub fn loss_slf_term(
    params: &NetParams,
    batch: &[SlfSample],
    phi: LossKind,
    normalizer: f64,
) -> Result<(f64, Gradients)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let cfg = LossConfig {
        phi,
        ..LossConfig::default()
    };
    let norms = Normalizers {
        slf: normalizer,
        islf: 1.0,
    };
    let (v, g) = objective(params, batch, &[], &cfg, &norms, 0.0, true)?;
    Ok((v.slf, g.expect("gradient requested")))
}

/// Mean path term over `batch` and its parameter gradient.
pub fn loss_islf_term(
    params: &NetParams,
    batch: &[IslfSample],
    rho: LossKind,
    normalizer: f64,
) -> Result<(f64, Gradients)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let cfg = LossConfig {
        rho,
        ..LossConfig::default()
    };
    let norms = Normalizers {
        slf: 1.0,
        islf: normalizer,
    };
    let targets = path_targets(batch)?;
    let (v, g) = objective(params, &[], &targets, &cfg, &norms, 1.0, true)?;
    Ok((v.islf, g.expect("gradient requested")))
}

/// `slf_term + λ·islf_term` and its gradient.
pub fn total_loss(
    params: &NetParams,
    slf: &[SlfSample],
    islf: &[IslfSample],
    cfg: &LossConfig,
    norms: &Normalizers,
) -> Result<(LossValue, Gradients)> {
    if slf.is_empty() || islf.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let targets = path_targets(islf)?;
    let (v, g) = objective(params, slf, &targets, cfg, norms, cfg.lambda_islf, true)?;
    Ok((v, g.expect("gradient requested")))
}

/// Loss value only.
pub fn evaluate_loss(
    params: &NetParams,
    slf: &[SlfSample],
    islf: &[IslfSample],
    cfg: &LossConfig,
    norms: &Normalizers,
) -> Result<LossValue> {
    let targets = path_targets(islf)?;
    Ok(objective(params, slf, &targets, cfg, norms, cfg.lambda_islf, false)?.0)
}

/// Adam with bias correction.
#[derive(Debug, Clone)]
pub struct Adam {
    m: Gradients,
    v: Gradients,
    t: i32,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
}

impl Adam {
    pub fn new(params: &NetParams, cfg: &TrainConfig) -> Self {
        Adam {
            m: Gradients::zeros_like(params),
            v: Gradients::zeros_like(params),
            t: 0,
            lr: cfg.learning_rate,
            beta1: cfg.adam_beta1,
            beta2: cfg.adam_beta2,
            eps: cfg.adam_eps,
        }
    }

    pub fn step(&mut self, params: &mut NetParams, grads: &Gradients) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        let (b1, b2, lr, eps) = (self.beta1, self.beta2, self.lr, self.eps);
        for (((p, g), m), v) in params
            .iter_mut()
            .zip(grads.iter())
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
        }
    }
}

/// Epoch-wise shuffled index stream: every index once per epoch.
struct Sampler {
    order: Vec<usize>,
    cursor: usize,
}

impl Sampler {
    fn new(n: usize) -> Self {
        Sampler {
            order: (0..n).collect(),
            cursor: n,
        }
    }

    fn next_batch(&mut self, size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut out = Vec::with_capacity(size);
        while out.len() < size {
            if self.cursor == self.order.len() {
                self.order.shuffle(rng);
                self.cursor = 0;
            }
            let take = (size - out.len()).min(self.order.len() - self.cursor);
            out.extend_from_slice(&self.order[self.cursor..self.cursor + take]);
            self.cursor += take;
        }
        out
    }
}

fn checkpoint_meta(
    cfg: &TrainConfig,
    step: usize,
    norms: &Normalizers,
    extra: &serde_json::Value,
) -> serde_json::Value {
    // The output location is not part of the run's identity.
    let cfg = TrainConfig {
        checkpoint_path: None,
        ..cfg.clone()
    };
    let mut meta = serde_json::json!({
        "step": step,
        "train": cfg,
        "normalizers": norms,
    });
    if let (Some(m), Some(e)) = (meta.as_object_mut(), extra.as_object()) {
        for (k, v) in e {
            m.insert(k.clone(), v.clone());
        }
    }
    meta
}

/// Runs `cfg.steps` Adam steps on minibatches from `data`.
///
/// The loss over the full training set (and the holdout NMSE, if `holdout` is
/// non-empty) is recorded at step 0, every `eval_every` steps and after the
/// last step. Checkpoints are written at the same points when
/// `cfg.checkpoint_path` is set. A non-finite loss aborts with
/// [`Error::DivergenceDetected`]; the checkpoint file then holds the last
/// finite parameters.
pub fn train(
    data: &Dataset,
    holdout: &[IslfSample],
    params: NetParams,
    loss_cfg: &LossConfig,
    cfg: &TrainConfig,
) -> Result<(NetParams, TrainReport)> {
    train_with_meta(
        data,
        holdout,
        params,
        loss_cfg,
        cfg,
        &serde_json::Value::Null,
    )
}

/// [`train`], with the entries of the JSON object `extra` added to every
/// checkpoint's metadata.
pub fn train_with_meta(
    data: &Dataset,
    holdout: &[IslfSample],
    mut params: NetParams,
    loss_cfg: &LossConfig,
    cfg: &TrainConfig,
    extra: &serde_json::Value,
) -> Result<(NetParams, TrainReport)> {
    loss_cfg.validate()?;
    cfg.validate()?;
    if data.slf_samples.is_empty() || data.islf_samples.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let norms = Normalizers::from_samples(
        &data.slf_samples,
        &data.islf_samples,
        loss_cfg.normalization,
    );
    let targets = path_targets(&data.islf_samples)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut slf_sampler = Sampler::new(data.slf_samples.len());
    let mut islf_sampler = Sampler::new(targets.len());
    let mut adam = Adam::new(&params, cfg);
    let mut report = TrainReport::default();
    let mut last_good = params.clone();

    let record = |params: &NetParams, step: usize, report: &mut TrainReport| -> Result<bool> {
        let (v, _) = objective(
            params,
            &data.slf_samples,
            &targets,
            loss_cfg,
            &norms,
            loss_cfg.lambda_islf,
            false,
        )?;
        let holdout_nmse = if holdout.is_empty() {
            f64::NAN
        } else {
            predict::evaluate(params, holdout)?.nmse
        };
        report.records.push(TrainRecord {
            step,
            slf_loss: v.slf,
            islf_loss: v.islf,
            total: v.total,
            holdout_nmse,
        });
        Ok(v.total.is_finite())
    };
    let save = |params: &NetParams, step: usize| -> Result<()> {
        if let Some(path) = &cfg.checkpoint_path {
            Checkpoint::new(params.clone(), checkpoint_meta(cfg, step, &norms, extra))
                .save(path)?;
        }
        Ok(())
    };

    if !record(&params, 0, &mut report)? {
        return Err(Error::DivergenceDetected { step: 0 });
    }
    save(&params, 0)?;

    let mut slf_batch = Vec::with_capacity(cfg.batch_slf);
    let mut islf_batch = Vec::with_capacity(cfg.batch_islf);
    for step in 1..=cfg.steps {
        slf_batch.clear();
        slf_batch.extend(
            slf_sampler
                .next_batch(cfg.batch_slf, &mut rng)
                .into_iter()
                .map(|i| data.slf_samples[i]),
        );
        islf_batch.clear();
        islf_batch.extend(
            islf_sampler
                .next_batch(cfg.batch_islf, &mut rng)
                .into_iter()
                .map(|i| targets[i]),
        );
        let (value, grads) = objective(
            &params,
            &slf_batch,
            &islf_batch,
            loss_cfg,
            &norms,
            loss_cfg.lambda_islf,
            true,
        )?;
        let grads = grads.expect("gradient requested");
        if !value.total.is_finite() || !grads.is_finite() {
            save(&last_good, step)?;
            return Err(Error::DivergenceDetected { step });
        }
        adam.step(&mut params, &grads);

        if step % cfg.eval_every == 0 || step == cfg.steps {
            if !record(&params, step, &mut report)? || !params.is_finite() {
                save(&last_good, step)?;
                return Err(Error::DivergenceDetected { step });
            }
            last_good.clone_from(&params);
            save(&params, step)?;
        }
    }
    Ok((params, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huber_matches_squared_inside_delta() {
        let h = LossKind::Huber { delta: 2.0 };
        assert_eq!(h.value(1.5), 2.25);
        assert_eq!(h.value(-3.0), 2.0 * (6.0 - 2.0));
        assert_eq!(h.derivative(-3.0), -4.0);
        assert_eq!(LossKind::Squared.derivative(-3.0), -6.0);
        assert!(LossKind::Huber { delta: 0.0 }.validate().is_err());
    }

    #[test]
    fn sampler_visits_every_index_each_epoch() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = Sampler::new(10);
        let mut seen: Vec<usize> = (0..5).flat_map(|_| s.next_batch(4, &mut rng)).collect();
        assert_eq!(seen.len(), 20);
        seen.truncate(10);
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn variance_guard() {
        let n = Normalizers::from_samples(&[], &[], Normalization::Variance);
        assert_eq!(n, Normalizers::default());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let mut c = RunConfig::default();
        c.train.learning_rate = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.loss.lambda_islf = -1.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.holdout_fraction = 1.0;
        assert!(c.validate().is_err());
    }
}
