//! Cartesian tx/rx pairs and their Radon-coordinate representation.
//!
//! A line is described by its normal angle `alpha` and signed offset `s`; a
//! point on it by the arc-length coordinate `z`:
//!
//! ```text
//! (x, y) = (z sin α + s cos α, −z cos α + s sin α)
//! ```
//!
//! Every line has two representations, `(α, s)` and `(α + π, −s)`. The
//! canonical one keeps `α ∈ [0, π)`, and a canonical segment has `z0 < z1`,
//! so both orderings of a tx/rx pair map to the same segment.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix4x3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pairs closer than this are treated as coincident.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Linear interpolation `self + t (other − self)`.
    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Transmitter/receiver positions in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPair {
    pub tx: Point,
    pub rx: Point,
}

impl CartesianPair {
    /// Builds a validated pair; fails when the endpoints coincide.
    pub fn new(tx: Point, rx: Point) -> Result<Self> {
        let pair = CartesianPair { tx, rx };
        pair.validate()?;
        Ok(pair)
    }

    pub fn separation(&self) -> f64 {
        self.tx.distance(self.rx)
    }

    pub fn validate(&self) -> Result<()> {
        let separation = self.separation();
        // Negated comparison so NaN separations are rejected too.
        if !(separation > DEGENERACY_THRESHOLD) {
            return Err(Error::DegeneratePair { separation });
        }
        Ok(())
    }

    pub fn swapped(&self) -> Self {
        CartesianPair {
            tx: self.rx,
            rx: self.tx,
        }
    }
}

/// A directed chord `[z0, z1]` of the line `(alpha, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadonSegment {
    pub z0: f64,
    pub z1: f64,
    pub alpha: f64,
    pub s: f64,
}

impl RadonSegment {
    pub fn length(&self) -> f64 {
        (self.z1 - self.z0).abs()
    }
}

/// Maps a Radon point `(z, alpha, s)` to Cartesian coordinates.
#[inline]
pub fn radon_point(z: f64, alpha: f64, s: f64) -> Point {
    let (sin, cos) = alpha.sin_cos();
    Point::new(z * sin + s * cos, -z * cos + s * sin)
}

/// Arc-length and offset coordinates `(z, s)` of `p` on lines with normal angle `alpha`.
#[inline]
pub fn radon_coords(p: Point, alpha: f64) -> (f64, f64) {
    let (sin, cos) = alpha.sin_cos();
    (p.x * sin - p.y * cos, p.x * cos + p.y * sin)
}

/// Reduces `alpha` into `[0, π)`. Each half-turn applied negates `s` and `z`,
/// which leaves the mapped Cartesian point unchanged.
pub fn canonicalize(alpha: f64, s: f64, z: f64) -> (f64, f64, f64) {
    let half_turns = (alpha / PI).floor();
    let mut a = alpha - half_turns * PI;
    let mut flip = half_turns.rem_euclid(2.0) == 1.0;
    if a >= PI {
        a -= PI;
        flip = !flip;
    } else if a < 0.0 {
        a += PI;
        flip = !flip;
    }
    if flip {
        (a, -s, -z)
    } else {
        (a, s, z)
    }
}

/// Normal angle of the line through the pair, before canonicalization.
pub fn raw_alpha(pair: &CartesianPair) -> f64 {
    (pair.rx.y - pair.tx.y).atan2(pair.rx.x - pair.tx.x) + FRAC_PI_2
}

/// Canonical Radon segment of a tx/rx pair.
///
/// The offset `s` is evaluated at both endpoints and averaged; the two values
/// agree up to rounding. Endpoint order is not preserved: `z0 < z1` always.
pub fn to_radon(pair: &CartesianPair) -> Result<RadonSegment> {
    pair.validate()?;
    // Direction taken from a fixed endpoint order so both orientations of
    // the pair round identically.
    let ordered = if (pair.tx.x, pair.tx.y) <= (pair.rx.x, pair.rx.y) {
        *pair
    } else {
        pair.swapped()
    };
    let (alpha, _, _) = canonicalize(raw_alpha(&ordered), 0.0, 0.0);
    let (za, sa) = radon_coords(pair.tx, alpha);
    let (zb, sb) = radon_coords(pair.rx, alpha);
    let s = 0.5 * (sa + sb);
    let (z0, z1) = if za <= zb { (za, zb) } else { (zb, za) };
    Ok(RadonSegment { z0, z1, alpha, s })
}

/// Cartesian endpoints of a segment: `tx` at `z0`, `rx` at `z1`.
pub fn from_radon(seg: &RadonSegment) -> CartesianPair {
    CartesianPair {
        tx: radon_point(seg.z0, seg.alpha, seg.s),
        rx: radon_point(seg.z1, seg.alpha, seg.s),
    }
}

fn radon_system(alpha: f64) -> Matrix4x3<f64> {
    let (sin, cos) = alpha.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4x3::new(
        sin, 0.0, cos,
        -cos, 0.0, sin,
        0.0, sin, cos,
        0.0, -cos, sin,
    );
    m
}

/// Least-squares solution `(z_tx, z_rx, s)` of the overdetermined 4×3 system
/// mapping Radon coordinates to the stacked endpoints `[x0, y0, x1, y1]`.
///
/// Solved numerically through an SVD pseudo-inverse; this is the reference
/// route that [`to_radon`]'s closed form is checked against.
pub fn pinv_solve(pair: &CartesianPair, alpha: f64) -> (f64, f64, f64) {
    let m = radon_system(alpha);
    let rhs = Vector4::new(pair.tx.x, pair.tx.y, pair.rx.x, pair.rx.y);
    // Columns are orthonormal up to the shared `s` column, so rank is 3.
    let pinv = m
        .pseudo_inverse(1e-12)
        .expect("radon system has full column rank");
    let sol = pinv * rhs;
    (sol[0], sol[1], sol[2])
}

/// Euclidean norm of the residual of the 4×3 system at `(z_tx, z_rx, s)`.
pub fn pinv_residual(pair: &CartesianPair, alpha: f64, solution: (f64, f64, f64)) -> f64 {
    let m = radon_system(alpha);
    let rhs = Vector4::new(pair.tx.x, pair.tx.y, pair.rx.x, pair.rx.y);
    let x = nalgebra::Vector3::new(solution.0, solution.1, solution.2);
    (m * x - rhs).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: (f64, f64), b: (f64, f64)) -> CartesianPair {
        CartesianPair::new(Point::new(a.0, a.1), Point::new(b.0, b.1)).unwrap()
    }

    #[test]
    fn horizontal_pair() {
        let seg = to_radon(&pair((0.0, 0.0), (1.0, 0.0))).unwrap();
        assert!((seg.alpha - FRAC_PI_2).abs() < 1e-15);
        assert!(seg.z0.abs() < 1e-15);
        assert!((seg.z1 - 1.0).abs() < 1e-15);
        assert!(seg.s.abs() < 1e-15);

        let (z0, z1, s) = pinv_solve(&pair((0.0, 0.0), (1.0, 0.0)), FRAC_PI_2);
        assert!(z0.abs() < 1e-12 && (z1 - 1.0).abs() < 1e-12 && s.abs() < 1e-12);
    }

    #[test]
    fn vertical_pair_wraps_to_zero_angle() {
        // Raw angle is exactly π; the canonical form uses α = 0, on which
        // z runs along −y, so the ordered chord is [−2, 0].
        let p = pair((0.0, 0.0), (0.0, 2.0));
        assert_eq!(raw_alpha(&p), PI);
        let seg = to_radon(&p).unwrap();
        assert_eq!(seg.alpha, 0.0);
        assert_eq!(seg.s, 0.0);
        assert_eq!((seg.z0, seg.z1), (-2.0, 0.0));
        let back = from_radon(&seg);
        assert_eq!(back.tx, Point::new(0.0, 2.0));
        assert_eq!(back.rx, Point::new(0.0, 0.0));
    }

    #[test]
    fn coincident_pair_is_rejected() {
        let err = CartesianPair::new(Point::new(3.0, 3.0), Point::new(3.0, 3.0)).unwrap_err();
        assert!(matches!(err, Error::DegeneratePair { .. }));
        let raw = CartesianPair {
            tx: Point::new(3.0, 3.0),
            rx: Point::new(3.0, 3.0 + 1e-10),
        };
        assert!(to_radon(&raw).is_err());
    }

    #[test]
    fn from_radon_examples() {
        let p = from_radon(&RadonSegment {
            z0: 0.0,
            z1: 1.0,
            alpha: FRAC_PI_2,
            s: 0.0,
        });
        assert!(p.tx.distance(Point::new(0.0, 0.0)) < 1e-15);
        assert!(p.rx.distance(Point::new(1.0, 0.0)) < 1e-15);

        let p = from_radon(&RadonSegment {
            z0: 0.7,
            z1: 0.7,
            alpha: 1.1,
            s: -2.0,
        });
        assert_eq!(p.tx, p.rx);
    }

    #[test]
    fn canonicalize_examples() {
        let (a, s, z) = canonicalize(3.0 * FRAC_PI_2, 1.0, 2.0);
        assert!((a - FRAC_PI_2).abs() < 1e-15);
        assert_eq!((s, z), (-1.0, -2.0));

        assert_eq!(canonicalize(FRAC_PI_2, 1.0, 2.0), (FRAC_PI_2, 1.0, 2.0));
        // A full turn does not flip signs.
        let (a, s, z) = canonicalize(FRAC_PI_2 + 2.0 * PI, 1.0, 2.0);
        assert!((a - FRAC_PI_2).abs() < 1e-14);
        assert_eq!((s, z), (1.0, 2.0));
        let (a, s, _) = canonicalize(-0.25, 1.0, 0.0);
        assert!((a - (PI - 0.25)).abs() < 1e-15);
        assert_eq!(s, -1.0);
    }

    #[test]
    fn residual_vanishes_at_solution() {
        let p = pair((-3.0, 4.5), (10.0, -7.25));
        let (alpha, _, _) = canonicalize(raw_alpha(&p), 0.0, 0.0);
        let sol = pinv_solve(&p, alpha);
        assert!(pinv_residual(&p, alpha, sol) < 1e-9);
    }

    #[test]
    fn swapped_pair_gives_identical_segment() {
        let p = pair((1.5, -2.0), (-4.0, 7.0));
        assert_eq!(to_radon(&p).unwrap(), to_radon(&p.swapped()).unwrap());
    }
}
