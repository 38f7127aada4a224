//! Reference propagation physics: exact line integrals of the loss field,
//! the log-distance RSSI model and a Motley-Keenan wall-count baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floorplan::{FloorPlan, WallRect};
use crate::geometry::{CartesianPair, Point};

/// Transmit power and log-distance coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// dBm.
    pub g0: f64,
    pub gamma: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        LinkBudget {
            g0: 20.0,
            gamma: 20.0,
        }
    }
}

impl LinkBudget {
    pub fn new(g0: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite() && g0.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "link budget needs finite g0 and gamma > 0, got g0={g0}, gamma={gamma}"
            )));
        }
        Ok(LinkBudget { g0, gamma })
    }

    /// Received power in free space at distance `d` meters.
    pub fn free_space(&self, d: f64) -> f64 {
        self.g0 - self.gamma * d.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    /// Unweighted line integral along the line of sight.
    #[default]
    Line,
    /// Network-shadowing style scaling by `d^(−e)`.
    Nesh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightModel {
    pub kind: WeightKind,
    pub nesh_exponent: f64,
}

impl Default for WeightModel {
    fn default() -> Self {
        WeightModel {
            kind: WeightKind::Line,
            nesh_exponent: 0.5,
        }
    }
}

impl WeightModel {
    pub fn line() -> Self {
        WeightModel::default()
    }

    pub fn nesh(exponent: f64) -> Result<Self> {
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "nesh exponent must be >= 0, got {exponent}"
            )));
        }
        Ok(WeightModel {
            kind: WeightKind::Nesh,
            nesh_exponent: exponent,
        })
    }

    /// Multiplier applied to the raw line integral of a path of length `d`.
    pub fn factor(&self, d: f64) -> f64 {
        match self.kind {
            WeightKind::Line => 1.0,
            WeightKind::Nesh => d.powf(-self.nesh_exponent),
        }
    }
}

/// Which constraint bounds a clipped interval.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Bound {
    Segment,
    Slab(usize),
}

/// Length of the part of segment `p0 → p1` inside the wall rectangle.
///
/// Liang-Barsky clipping in the wall's local frame, parametrised by arc
/// length. When both ends of the clipped interval come from the same slab the
/// length is taken as slab width over the direction cosine, which is exact for
/// full crossings.
pub fn chord_length(rect: &WallRect, p0: Point, p1: Point) -> f64 {
    // Fixed endpoint order makes the result exactly symmetric.
    let (p0, p1) = if (p0.x, p0.y) <= (p1.x, p1.y) {
        (p0, p1)
    } else {
        (p1, p0)
    };
    let length = p0.distance(p1);
    if length == 0.0 {
        return 0.0;
    }
    let (u0, v0) = rect.local(p0);
    let (u1, v1) = rect.local(p1);
    let du = (u1 - u0) / length;
    let dv = (v1 - v0) / length;

    let mut enter = (0.0, Bound::Segment);
    let mut exit = (length, Bound::Segment);
    for (axis, (start, step, half)) in [(u0, du, rect.half_length), (v0, dv, rect.half_thickness)]
        .into_iter()
        .enumerate()
    {
        if step == 0.0 {
            if start.abs() > half {
                return 0.0;
            }
            continue;
        }
        let (mut t_in, mut t_out) = ((-half - start) / step, (half - start) / step);
        if t_in > t_out {
            std::mem::swap(&mut t_in, &mut t_out);
        }
        if t_in > enter.0 {
            enter = (t_in, Bound::Slab(axis));
        }
        if t_out < exit.0 {
            exit = (t_out, Bound::Slab(axis));
        }
    }
    if exit.0 <= enter.0 {
        return 0.0;
    }
    match (enter.1, exit.1) {
        (Bound::Slab(a), Bound::Slab(b)) if a == b => {
            let (step, half) = if a == 0 {
                (du, rect.half_length)
            } else {
                (dv, rect.half_thickness)
            };
            2.0 * half / step.abs()
        }
        _ => exit.0 - enter.0,
    }
}

/// Weighted line integral of the loss field between tx and rx, in dB.
pub fn islf_oracle(plan: &FloorPlan, pair: &CartesianPair, weight: &WeightModel) -> Result<f64> {
    pair.validate()?;
    let raw: f64 = plan
        .wall_rects()
        .iter()
        .map(|r| r.density * chord_length(r, pair.tx, pair.rx))
        .sum();
    Ok(raw * weight.factor(pair.separation()))
}

/// Trapezoidal quadrature of the loss field along the segment with
/// `n_samples` equally spaced nodes (endpoints included). Unweighted.
pub fn islf_bruteforce(plan: &FloorPlan, pair: &CartesianPair, n_samples: usize) -> Result<f64> {
    pair.validate()?;
    if n_samples < 2 {
        return Err(Error::InvalidConfig(
            "brute-force quadrature needs at least 2 samples".into(),
        ));
    }
    let last = n_samples - 1;
    let h = pair.separation() / last as f64;
    let mut sum = 0.0;
    for k in 0..=last {
        let p = pair.tx.lerp(pair.rx, k as f64 / last as f64);
        let f = plan.slf_at(p);
        sum += if k == 0 || k == last { 0.5 * f } else { f };
    }
    Ok(sum * h)
}

/// Received signal strength `G0 − γ log10 d − ISLF` in dBm.
pub fn rssi(budget: &LinkBudget, pair: &CartesianPair, islf: f64) -> Result<f64> {
    pair.validate()?;
    Ok(budget.free_space(pair.separation()) - islf)
}

/// Inverse of [`rssi`]: `G0 − RSSI − γ log10 d`.
pub fn islf_from_rssi(budget: &LinkBudget, pair: &CartesianPair, rssi: f64) -> Result<f64> {
    pair.validate()?;
    Ok(budget.g0 - rssi - budget.gamma * pair.separation().log10())
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Total wall loss counted Motley-Keenan style: every wall whose centerline
/// the path crosses costs `thickness × density`, independent of angle.
pub fn motley_keenan_wall_loss(plan: &FloorPlan, pair: &CartesianPair) -> f64 {
    plan.walls()
        .iter()
        .zip(plan.wall_rects())
        .filter(|(w, _)| segments_intersect(pair.tx, pair.rx, w.a, w.b))
        .map(|(w, r)| w.thickness * r.density)
        .sum()
}

/// Motley-Keenan RSSI in dBm.
pub fn motley_keenan(plan: &FloorPlan, budget: &LinkBudget, pair: &CartesianPair) -> Result<f64> {
    pair.validate()?;
    Ok(budget.free_space(pair.separation()) - motley_keenan_wall_loss(plan, pair))
}
