mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use slfnet::geometry::{
    canonicalize, from_radon, pinv_residual, pinv_solve, radon_coords, radon_point, to_radon,
};
use slfnet::{CartesianPair, Error, Point};

fn random_pair(r: &mut impl Rng) -> CartesianPair {
    loop {
        let tx = Point::new(r.random_range(-50.0..50.0), r.random_range(-50.0..50.0));
        let rx = Point::new(r.random_range(-50.0..50.0), r.random_range(-50.0..50.0));
        if let Ok(p) = CartesianPair::new(tx, rx) {
            return p;
        }
    }
}

#[test]
fn round_trip_and_pseudo_inverse_on_random_pairs() {
    let mut r = rng(21);
    let mut worst_round = 0.0f64;
    let mut worst_pinv = 0.0f64;
    for _ in 0..10_000 {
        let pair = random_pair(&mut r);
        let seg = to_radon(&pair).unwrap();
        assert!((0.0..PI).contains(&seg.alpha));
        assert!(seg.z0 < seg.z1);
        let back = from_radon(&seg);
        // Canonical order may swap the endpoints.
        let direct = back.tx.distance(pair.tx).max(back.rx.distance(pair.rx));
        let crossed = back.tx.distance(pair.rx).max(back.rx.distance(pair.tx));
        worst_round = worst_round.max(direct.min(crossed));

        let (za, zb, s) = pinv_solve(&pair, seg.alpha);
        let (lo, hi) = if za <= zb { (za, zb) } else { (zb, za) };
        worst_pinv = worst_pinv
            .max((lo - seg.z0).abs())
            .max((hi - seg.z1).abs())
            .max((s - seg.s).abs());
    }
    assert!(worst_round < 1e-9, "round trip {worst_round:e}");
    assert!(worst_pinv < 1e-9, "pseudo-inverse {worst_pinv:e}");
}

#[test]
fn closed_form_is_an_exact_solution() {
    let mut r = rng(22);
    for _ in 0..1000 {
        let pair = random_pair(&mut r);
        let seg = to_radon(&pair).unwrap();
        let (za, _) = radon_coords(pair.tx, seg.alpha);
        let (zb, _) = radon_coords(pair.rx, seg.alpha);
        assert!(pinv_residual(&pair, seg.alpha, (za, zb, seg.s)) < 1e-9);
    }
}

#[test]
fn degenerate_pairs_are_rejected() {
    let p = Point::new(3.0, -4.0);
    let pair = CartesianPair { tx: p, rx: p };
    assert!(matches!(to_radon(&pair), Err(Error::DegeneratePair { .. })));
    let nan = CartesianPair {
        tx: p,
        rx: Point::new(f64::NAN, 0.0),
    };
    assert!(to_radon(&nan).is_err());
}

fn coord() -> impl Strategy<Value = f64> {
    -50.0..50.0f64
}

proptest! {
    #[test]
    fn swapping_endpoints_gives_the_same_segment(
        ax in coord(), ay in coord(), bx in coord(), by in coord()
    ) {
        let a = Point::new(ax, ay);
        let b = Point::new(bx, by);
        prop_assume!(a.distance(b) > 1e-6);
        let pair = CartesianPair::new(a, b).unwrap();
        prop_assert_eq!(to_radon(&pair).unwrap(), to_radon(&pair.swapped()).unwrap());
    }

    #[test]
    fn segment_length_is_separation(ax in coord(), ay in coord(), bx in coord(), by in coord()) {
        let pair = CartesianPair { tx: Point::new(ax, ay), rx: Point::new(bx, by) };
        prop_assume!(pair.separation() > 1e-6);
        let seg = to_radon(&pair).unwrap();
        prop_assert!((seg.length() - pair.separation()).abs() < 1e-9);
    }

    #[test]
    fn point_map_inverts(x in coord(), y in coord(), alpha in -10.0..10.0f64) {
        let (z, s) = radon_coords(Point::new(x, y), alpha);
        let p = radon_point(z, alpha, s);
        prop_assert!((p.x - x).abs() < 1e-12 * 100.0 && (p.y - y).abs() < 1e-12 * 100.0);
    }

    #[test]
    fn canonicalization_keeps_the_point(
        z in -50.0..50.0f64, alpha in -20.0..20.0f64, s in -50.0..50.0f64
    ) {
        let (a, s2, z2) = canonicalize(alpha, s, z);
        prop_assert!((0.0..PI).contains(&a));
        let p = radon_point(z, alpha, s);
        let q = radon_point(z2, a, s2);
        prop_assert!(p.distance(q) < 1e-9);
    }
}
