//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slfnet::floorplan::{default_materials, FloorPlan, Frequency, Region, WallSegment};
use slfnet::net::{Activation, InputScaling, NetConfig, NetParams};
use slfnet::Point;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `‖a − b‖ / max(‖b‖, 1e-300)`.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / norm.max(1e-300)
}

/// Scalar relative error with a symmetric denominator.
pub fn rel_err_scalar(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Central difference of `NN` in `z`.
pub fn fd_dz(p: &NetParams, z: f64, alpha: f64, s: f64, h: f64) -> f64 {
    (p.forward(z + h, alpha, s).unwrap() - p.forward(z - h, alpha, s).unwrap()) / (2.0 * h)
}

/// Central differences of a scalar function of the parameters, one
/// coordinate at a time, in `NetParams::iter` order.
pub fn fd_param_grad(p: &NetParams, h: f64, f: impl Fn(&NetParams) -> f64) -> Vec<f64> {
    let n = p.param_count();
    let mut work = p.clone();
    (0..n)
        .map(|k| {
            let orig = *work.iter_mut().nth(k).unwrap();
            *work.iter_mut().nth(k).unwrap() = orig + h;
            let up = f(&work);
            *work.iter_mut().nth(k).unwrap() = orig - h;
            let down = f(&work);
            *work.iter_mut().nth(k).unwrap() = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// The 2-layer, 8-unit, F = 4 network used for gradient checks.
pub fn toy_net(seed: u64, scaling: InputScaling) -> NetParams {
    let cfg = NetConfig {
        widths: vec![8, 8],
        ff_count: 4,
        ff_scale: 1.0,
        activation: Activation::Sigmoid,
    };
    let mut p = NetParams::init(&cfg, scaling, seed).unwrap();
    // Nonzero biases so their gradients are exercised away from symmetry.
    let mut r = rng(seed ^ 0xb1a5);
    for l in &mut p.layers {
        for b in &mut l.bias {
            *b = r.random_range(-0.5..0.5);
        }
    }
    p
}

pub fn wall(a: (f64, f64), b: (f64, f64), thickness: f64, material: &str) -> WallSegment {
    WallSegment {
        a: Point::new(a.0, a.1),
        b: Point::new(b.0, b.1),
        thickness,
        material: material.to_string(),
    }
}

pub fn plan(region: Region, walls: Vec<WallSegment>) -> FloorPlan {
    FloorPlan::new(region, Frequency::Ghz2_5, default_materials(), walls).unwrap()
}

/// 10 m square with one vertical 0.1 m drywall at x = 5.
pub fn single_wall_10m() -> FloorPlan {
    plan(
        Region::new(0.0, 0.0, 10.0, 10.0),
        vec![wall((5.0, 0.0), (5.0, 10.0), 0.1, "drywall")],
    )
}

/// 64 m square with one vertical 0.1 m drywall through the middle.
pub fn single_wall_64m() -> FloorPlan {
    plan(
        Region::new(0.0, 0.0, 64.0, 64.0),
        vec![wall((32.0, 0.0), (32.0, 64.0), 0.1, "drywall")],
    )
}

/// Random plan in `region` with 1..=5 walls of random material and thickness.
pub fn random_plan(r: &mut impl Rng, region: Region) -> FloorPlan {
    let names = ["drywall", "whiteboard", "glass"];
    let n = r.random_range(1..=5);
    let walls = (0..n)
        .map(|_| {
            let a = region.at(r.random(), r.random());
            let mut b = region.at(r.random(), r.random());
            while a.distance(b) < 0.5 {
                b = region.at(r.random(), r.random());
            }
            wall(
                (a.x, a.y),
                (b.x, b.y),
                r.random_range(0.05..0.5),
                names[r.random_range(0..names.len())],
            )
        })
        .collect();
    plan(region, walls)
}

pub fn random_point(r: &mut impl Rng, region: Region) -> Point {
    region.at(r.random(), r.random())
}
