//! Supervision sets: loss-field point samples in Radon coordinates and
//! integrated-loss path samples, plus their CSV persistence.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floorplan::{FloorPlan, Region};
use crate::geometry::{radon_coords, radon_point, CartesianPair, Point};
use crate::propagation::{islf_from_rssi, islf_oracle, rssi, LinkBudget, WeightModel};

pub const SLF_FILE: &str = "slf_samples.csv";
pub const ISLF_FILE: &str = "islf_samples.csv";
pub const META_FILE: &str = "meta.json";
pub const SLF_HEADER: &str = "z,alpha,s,slf_db_per_m";
pub const ISLF_HEADER: &str = "tx_x,tx_y,rx_x,rx_y,islf_db";

const SLF_SALT: u64 = 0x5f1f_0000_0000_0001;
const ISLF_SALT: u64 = 0x15f1_0000_0000_0002;

/// Slack for region-membership checks of points reconstructed from Radon coordinates.
const REGION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlfSample {
    pub z: f64,
    pub alpha: f64,
    pub s: f64,
    /// dB/m.
    pub slf: f64,
}

impl SlfSample {
    pub fn point(&self) -> Point {
        radon_point(self.z, self.alpha, self.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IslfSample {
    pub tx: Point,
    pub rx: Point,
    /// dB.
    pub islf: f64,
}

impl IslfSample {
    pub fn pair(&self) -> CartesianPair {
        CartesianPair {
            tx: self.tx,
            rx: self.rx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlfSampling {
    pub n: usize,
    /// Fraction of samples drawn inside wall rectangles.
    pub in_wall_fraction: f64,
}

impl Default for SlfSampling {
    fn default() -> Self {
        SlfSampling {
            n: 5000,
            in_wall_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub seed: u64,
    pub plan_hash: String,
    pub region: Region,
    pub noise_sigma: f64,
    pub weight: WeightModel,
    pub budget: LinkBudget,
    pub n_slf: usize,
    pub n_islf: usize,
    pub in_wall_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub slf_samples: Vec<SlfSample>,
    pub islf_samples: Vec<IslfSample>,
    pub meta: DatasetMeta,
}

/// Independent RNG stream per sample index.
fn stream(seed: u64, salt: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
    rng.set_stream(index as u64);
    rng
}

/// Samples `i < n` with `⌊(i + 1) f⌋ > ⌊i f⌋` are in-wall: exactly `⌊n f⌋`
/// of them, spread evenly over the index range.
fn is_in_wall_index(i: usize, fraction: f64) -> bool {
    ((i + 1) as f64 * fraction).floor() > (i as f64 * fraction).floor()
}

fn point_in_walls(plan: &FloorPlan, region: &Region, rng: &mut ChaCha8Rng) -> Point {
    let rects = plan.wall_rects();
    let total: f64 = rects.iter().map(|r| r.area()).sum();
    loop {
        let mut pick = rng.random::<f64>() * total;
        let mut chosen = &rects[rects.len() - 1];
        for r in rects {
            if pick < r.area() {
                chosen = r;
                break;
            }
            pick -= r.area();
        }
        let u = (2.0 * rng.random::<f64>() - 1.0) * chosen.half_length;
        let v = (2.0 * rng.random::<f64>() - 1.0) * chosen.half_thickness;
        let p = chosen.world(u, v);
        // Thickness can extrude past the region boundary; those draws are discarded.
        if region.contains(p) {
            return p;
        }
    }
}

/// Loss-field samples: a point `p` and an angle `α ∈ [0, π)` define the line
/// through `p`, and the sample is `p`'s Radon coordinates on that line,
/// labelled with the field value at `p`.
pub fn gen_slf_samples(
    plan: &FloorPlan,
    sampling: &SlfSampling,
    seed: u64,
) -> Result<Vec<SlfSample>> {
    let region = plan.region();
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if sampling.n == 0 {
        return Err(Error::InvalidConfig("need at least one SLF sample".into()));
    }
    if !(0.0..=1.0).contains(&sampling.in_wall_fraction) {
        return Err(Error::InvalidConfig(format!(
            "in-wall fraction must be in [0, 1], got {}",
            sampling.in_wall_fraction
        )));
    }
    let has_walls = !plan.wall_rects().is_empty();
    let samples = (0..sampling.n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, SLF_SALT, i);
            let p = if has_walls && is_in_wall_index(i, sampling.in_wall_fraction) {
                point_in_walls(plan, &region, &mut rng)
            } else {
                region.at(rng.random(), rng.random())
            };
            let alpha = rng.random::<f64>() * PI;
            let (z, s) = radon_coords(p, alpha);
            SlfSample {
                z,
                alpha,
                s,
                slf: plan.slf_at(p),
            }
        })
        .collect();
    Ok(samples)
}

/// Simulated path measurements: uniform endpoint pairs, exact integrated loss
/// turned into an RSSI reading, Gaussian noise of `noise_sigma` dB added, and
/// the reading converted back to integrated loss.
pub fn gen_islf_samples(
    plan: &FloorPlan,
    budget: &LinkBudget,
    weight: &WeightModel,
    n: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<Vec<IslfSample>> {
    let region = plan.region();
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if n == 0 {
        return Err(Error::InvalidConfig("need at least one ISLF sample".into()));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "noise sigma must be >= 0, got {noise_sigma}"
        )));
    }
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, ISLF_SALT, i);
            let pair = loop {
                let tx = region.at(rng.random(), rng.random());
                let rx = region.at(rng.random(), rng.random());
                if let Ok(pair) = CartesianPair::new(tx, rx) {
                    break pair;
                }
            };
            let exact = islf_oracle(plan, &pair, weight)?;
            let noise: f64 = rng.sample(StandardNormal);
            let measured = rssi(budget, &pair, exact)? + noise_sigma * noise;
            Ok(IslfSample {
                tx: pair.tx,
                rx: pair.rx,
                islf: islf_from_rssi(budget, &pair, measured)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n_slf: usize,
    pub n_islf: usize,
    pub in_wall_fraction: f64,
    pub noise_sigma: f64,
    pub weight: WeightModel,
    pub budget: LinkBudget,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_slf: 5000,
            n_islf: 2000,
            in_wall_fraction: 0.5,
            noise_sigma: 0.0,
            weight: WeightModel::default(),
            budget: LinkBudget::default(),
            seed: 0,
        }
    }
}

impl Dataset {
    pub fn generate(plan: &FloorPlan, config: &GenConfig) -> Result<Self> {
        let slf_samples = gen_slf_samples(
            plan,
            &SlfSampling {
                n: config.n_slf,
                in_wall_fraction: config.in_wall_fraction,
            },
            config.seed,
        )?;
        let islf_samples = gen_islf_samples(
            plan,
            &config.budget,
            &config.weight,
            config.n_islf,
            config.noise_sigma,
            config.seed,
        )?;
        Ok(Dataset {
            slf_samples,
            islf_samples,
            meta: DatasetMeta {
                seed: config.seed,
                plan_hash: plan.hash(),
                region: plan.region(),
                noise_sigma: config.noise_sigma,
                weight: config.weight,
                budget: config.budget,
                n_slf: config.n_slf,
                n_islf: config.n_islf,
                in_wall_fraction: config.in_wall_fraction,
            },
        })
    }

    /// Checks sample invariants against the region recorded in `meta`.
    pub fn validate(&self) -> Result<()> {
        let region = self.meta.region;
        let grown = Region::new(
            region.xmin - REGION_TOLERANCE,
            region.ymin - REGION_TOLERANCE,
            region.xmax + REGION_TOLERANCE,
            region.ymax + REGION_TOLERANCE,
        );
        if self.slf_samples.len() != self.meta.n_slf || self.islf_samples.len() != self.meta.n_islf
        {
            return Err(Error::InvariantViolation(
                "sample counts disagree with meta".into(),
            ));
        }
        for (k, s) in self.slf_samples.iter().enumerate() {
            if !(s.alpha >= 0.0 && s.alpha < PI) {
                return Err(Error::InvariantViolation(format!(
                    "SLF sample {k}: alpha {} outside [0, π)",
                    s.alpha
                )));
            }
            if !(s.slf >= 0.0) {
                return Err(Error::InvariantViolation(format!(
                    "SLF sample {k}: negative label {}",
                    s.slf
                )));
            }
            if !grown.contains(s.point()) {
                return Err(Error::InvariantViolation(format!(
                    "SLF sample {k}: point outside the region"
                )));
            }
        }
        for (k, s) in self.islf_samples.iter().enumerate() {
            s.pair().validate().map_err(|_| {
                Error::InvariantViolation(format!("ISLF sample {k}: coincident endpoints"))
            })?;
            if !(grown.contains(s.tx) && grown.contains(s.rx)) {
                return Err(Error::InvariantViolation(format!(
                    "ISLF sample {k}: endpoint outside the region"
                )));
            }
            if !s.islf.is_finite() {
                return Err(Error::InvariantViolation(format!(
                    "ISLF sample {k}: non-finite label"
                )));
            }
        }
        Ok(())
    }

    pub fn slf_csv(&self) -> String {
        let mut out = String::with_capacity(self.slf_samples.len() * 96);
        out.push_str(SLF_HEADER);
        out.push('\n');
        for s in &self.slf_samples {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                s.z, s.alpha, s.s, s.slf
            );
        }
        out
    }

    pub fn islf_csv(&self) -> String {
        let mut out = String::with_capacity(self.islf_samples.len() * 120);
        out.push_str(ISLF_HEADER);
        out.push('\n');
        for s in &self.islf_samples {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.tx.x, s.tx.y, s.rx.x, s.rx.y, s.islf
            );
        }
        out
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |name: &str, body: String| {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))
        };
        write(SLF_FILE, self.slf_csv())?;
        write(ISLF_FILE, self.islf_csv())?;
        let meta = serde_json::to_string_pretty(&self.meta).expect("meta serializes");
        write(META_FILE, meta + "\n")
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let meta_path = dir.join(META_FILE);
        let meta_text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
        let meta: DatasetMeta = serde_json::from_str(&meta_text).map_err(|e| Error::Parse {
            path: meta_path.clone(),
            line: e.line(),
            message: e.to_string(),
        })?;

        let slf_path = dir.join(SLF_FILE);
        let rows = read_csv::<4>(&slf_path, SLF_HEADER, meta.n_slf)?;
        let slf_samples = rows
            .into_iter()
            .map(|[z, alpha, s, slf]| SlfSample { z, alpha, s, slf })
            .collect();

        let islf_path = dir.join(ISLF_FILE);
        let rows = read_csv::<5>(&islf_path, ISLF_HEADER, meta.n_islf)?;
        let islf_samples = rows
            .into_iter()
            .map(|[tx, ty, rx, ry, islf]| IslfSample {
                tx: Point::new(tx, ty),
                rx: Point::new(rx, ry),
                islf,
            })
            .collect();

        let data = Dataset {
            slf_samples,
            islf_samples,
            meta,
        };
        data.validate()?;
        Ok(data)
    }
}

fn read_csv<const N: usize>(
    path: &Path,
    header: &str,
    expected_rows: usize,
) -> Result<Vec<[f64; N]>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == header => {}
        Some(h) => return Err(err(1, format!("expected header `{header}`, found `{h}`"))),
        None => return Err(err(1, "missing header".into())),
    }
    let mut rows = Vec::with_capacity(expected_rows);
    for (k, line) in lines.enumerate() {
        let line_no = k + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut row = [0.0; N];
        let mut fields = line.split(',');
        for (col, slot) in row.iter_mut().enumerate() {
            let field = fields
                .next()
                .ok_or_else(|| err(line_no, format!("expected {N} fields, found {col}")))?;
            *slot = field
                .trim()
                .parse()
                .map_err(|e| err(line_no, format!("field {}: {e}", col + 1)))?;
        }
        if fields.next().is_some() {
            return Err(err(line_no, format!("expected {N} fields, found more")));
        }
        rows.push(row);
    }
    if rows.len() != expected_rows {
        return Err(err(
            rows.len() + 2,
            format!("expected {expected_rows} rows, found {}", rows.len()),
        ));
    }
    Ok(rows)
}
