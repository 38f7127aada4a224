//! Path-loss prediction from a trained network, pathloss maps and metrics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::IslfSample;
use crate::error::{Error, Result};
use crate::floorplan::FloorPlan;
use crate::geometry::{to_radon, CartesianPair, Point, RadonSegment};
use crate::net::{NetParams, Tape};
use crate::propagation::{motley_keenan, LinkBudget};
use crate::raster::{Grid, Raster, DEFAULT_CELL_LIMIT};

/// Cells whose center lies closer than this to the transmitter are masked.
pub const TX_MASK_RADIUS: f64 = 1e-6;

/// Cells per batched evaluation in map rendering.
const MAP_CHUNK: usize = 1024;

/// Predicted ISLF in dB. With `clamp`, negative predictions are raised to 0.
pub fn predict_islf(params: &NetParams, pair: &CartesianPair, clamp: bool) -> Result<f64> {
    let raw = params.predict_segment(&to_radon(pair)?)?;
    Ok(if clamp { raw.max(0.0) } else { raw })
}

/// Predicted RSSI in dBm.
pub fn predict_rssi(
    params: &NetParams,
    budget: &LinkBudget,
    pair: &CartesianPair,
    clamp: bool,
) -> Result<f64> {
    let islf = predict_islf(params, pair, clamp)?;
    Ok(budget.free_space(pair.separation()) - islf)
}

/// Batched [`predict_islf`] (unclamped).
pub fn predict_islf_batch(params: &NetParams, pairs: &[CartesianPair]) -> Result<Vec<f64>> {
    let segs: Vec<RadonSegment> = pairs.iter().map(to_radon).collect::<Result<_>>()?;
    let mut tape = Tape::new();
    params.predict_segments(&segs, &mut tape)
}

fn check_grid(grid: &Grid, tx: Point) -> Result<()> {
    grid.check_limit(DEFAULT_CELL_LIMIT)?;
    if !tx.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    Ok(())
}

/// RSSI at every cell center of `grid` for a transmitter at `tx`. The cell
/// containing the transmitter (center within [`TX_MASK_RADIUS`]) is masked.
pub fn pathloss_map(
    params: &NetParams,
    budget: &LinkBudget,
    tx: Point,
    grid: &Grid,
    clamp: bool,
) -> Result<Raster> {
    check_grid(grid, tx)?;
    let n = grid.cells();
    let starts: Vec<usize> = (0..n).step_by(MAP_CHUNK).collect();
    let chunks: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + MAP_CHUNK).min(n);
            let mut out = vec![f64::NAN; end - start];
            let mut idx = Vec::with_capacity(end - start);
            let mut segs = Vec::with_capacity(end - start);
            for k in start..end {
                let rx = grid.center_of(k);
                if tx.distance(rx) < TX_MASK_RADIUS {
                    continue;
                }
                segs.push(to_radon(&CartesianPair { tx, rx })?);
                idx.push(k - start);
            }
            let mut tape = Tape::new();
            let islf = params.predict_segments(&segs, &mut tape)?;
            for (&i, v) in idx.iter().zip(islf) {
                let v = if clamp { v.max(0.0) } else { v };
                let d = tx.distance(grid.center_of(start + i));
                out[i] = budget.free_space(d) - v;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(Raster {
        grid: *grid,
        values: chunks.concat(),
    })
}

/// Motley-Keenan RSSI map over the same grid convention as [`pathloss_map`].
pub fn baseline_map(
    plan: &FloorPlan,
    budget: &LinkBudget,
    tx: Point,
    grid: &Grid,
) -> Result<Raster> {
    check_grid(grid, tx)?;
    let values = (0..grid.cells())
        .into_par_iter()
        .map(|k| {
            let rx = grid.center_of(k);
            if tx.distance(rx) < TX_MASK_RADIUS {
                return Ok(f64::NAN);
            }
            motley_keenan(plan, budget, &CartesianPair { tx, rx })
        })
        .collect::<Result<_>>()?;
    Ok(Raster {
        grid: *grid,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// `Σ(pred − true)² / max(Σ true², ε)`.
    pub nmse: f64,
    pub mae: f64,
    /// Mean of `pred − true`.
    pub bias: f64,
    pub count: usize,
}

pub const NMSE_EPS: f64 = 1e-12;

pub fn metrics(predicted: &[f64], truth: &[f64]) -> Result<Metrics> {
    if predicted.len() != truth.len() {
        return Err(Error::InvalidConfig(format!(
            "{} predictions for {} labels",
            predicted.len(),
            truth.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = truth.len() as f64;
    let (mut se, mut energy, mut ae, mut sum) = (0.0, 0.0, 0.0, 0.0);
    for (&p, &t) in predicted.iter().zip(truth) {
        let e = p - t;
        se += e * e;
        energy += t * t;
        ae += e.abs();
        sum += e;
    }
    Ok(Metrics {
        nmse: se / energy.max(NMSE_EPS),
        mae: ae / n,
        bias: sum / n,
        count: truth.len(),
    })
}

/// ISLF metrics of the network on labelled pairs.
pub fn evaluate(params: &NetParams, samples: &[IslfSample]) -> Result<Metrics> {
    let pairs: Vec<CartesianPair> = samples.iter().map(IslfSample::pair).collect();
    let predicted = predict_islf_batch(params, &pairs)?;
    let truth: Vec<f64> = samples.iter().map(|s| s.islf).collect();
    metrics(&predicted, &truth)
}
