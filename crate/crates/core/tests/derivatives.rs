mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use slfnet::net::{InputScaling, NetConfig, NetParams, RadonPoint, Tape};
use slfnet::Point;

#[test]
fn tangent_sweep_matches_central_differences() {
    let mut r = rng(1);
    let scaling = InputScaling {
        center: Point::new(1.0, -2.0),
        scale: 3.0,
    };
    let mut worst = 0.0f64;
    for draw in 0..100 {
        let cfg = NetConfig {
            widths: vec![32, 32, 32],
            ff_count: 16,
            ..NetConfig::default()
        };
        let p = NetParams::init(&cfg, scaling, draw).unwrap();
        let (z, a, s) = (
            r.random_range(-5.0..5.0),
            r.random_range(0.0..PI),
            r.random_range(-5.0..5.0),
        );
        let ad = p.forward_with_dz(z, a, s).unwrap().dvalue_dz;
        let fd = fd_dz(&p, z, a, s, 1e-4);
        worst = worst.max(rel_err_scalar(ad, fd));
    }
    assert!(worst < 1e-5, "worst relative error {worst:e}");
}

fn flat(g: &slfnet::net::Gradients) -> Vec<f64> {
    g.iter().copied().collect()
}

#[test]
fn value_gradient_matches_finite_differences() {
    let p = toy_net(5, InputScaling::default());
    let (z, a, s) = (0.37, 1.1, -0.6);
    let ad = flat(&p.backward(z, a, s, 1.0, 0.0).unwrap());
    let fd = fd_param_grad(&p, 1e-6, |q| q.forward(z, a, s).unwrap());
    let err = rel_err(&ad, &fd);
    assert!(err < 1e-4, "{err:e}");
}

#[test]
fn dvdz_gradient_matches_finite_differences() {
    let p = toy_net(6, InputScaling::default());
    let (z, a, s) = (-0.2, 2.3, 0.8);
    let ad = flat(&p.backward(z, a, s, 0.0, 1.0).unwrap());
    let fd = fd_param_grad(&p, 1e-6, |q| q.forward_with_dz(z, a, s).unwrap().dvalue_dz);
    let err = rel_err(&ad, &fd);
    assert!(err < 1e-4, "{err:e}");

    let dual = p.dual_gradients(z, a, s).unwrap();
    assert_eq!(flat(&dual.grad_dvdz), ad);
}

#[test]
fn batched_backward_is_the_sum_of_single_backwards() {
    let p = toy_net(9, InputScaling::default());
    let pts = [
        RadonPoint::new(0.1, 0.2, 0.3),
        RadonPoint::new(-1.0, 2.0, 0.5),
        RadonPoint::new(2.0, 3.0, -1.5),
    ];
    let cv = [0.5, -1.0, 2.0];
    let cd = [1.5, 0.25, -0.75];
    let mut tape = Tape::new();
    p.forward_batch(&pts, true, &mut tape).unwrap();
    let mut g = slfnet::net::Gradients::zeros_like(&p);
    p.backward_batch(&mut tape, &cv, &cd, &mut g).unwrap();

    let mut expected = slfnet::net::Gradients::zeros_like(&p);
    for (i, q) in pts.iter().enumerate() {
        expected.add_scaled(&p.backward(q.z, q.alpha, q.s, cv[i], cd[i]).unwrap(), 1.0);
    }
    assert!(rel_err(&flat(&g), &flat(&expected)) < 1e-12);
}

#[test]
fn batch_evaluation_is_bit_identical_to_single() {
    let p = NetParams::init(&NetConfig::default(), InputScaling::default(), 2).unwrap();
    let mut r = rng(3);
    let pts: Vec<RadonPoint> = (0..37)
        .map(|_| {
            RadonPoint::new(
                r.random_range(-2.0..2.0),
                r.random_range(0.0..PI),
                r.random_range(-2.0..2.0),
            )
        })
        .collect();
    let mut tape = Tape::new();
    p.forward_batch(&pts, true, &mut tape).unwrap();
    let values = tape.values().to_vec();
    let tangents = tape.tangents().to_vec();
    p.forward_batch(&pts, false, &mut tape).unwrap();
    for (i, q) in pts.iter().enumerate() {
        let single = p.forward_with_dz(q.z, q.alpha, q.s).unwrap();
        assert_eq!(single.value.to_bits(), values[i].to_bits());
        assert_eq!(single.dvalue_dz.to_bits(), tangents[i].to_bits());
        assert_eq!(tape.values()[i].to_bits(), values[i].to_bits());
    }
}

#[test]
fn value_only_backward_matches_tangent_backward() {
    let p = toy_net(10, InputScaling::default());
    let pts = [
        RadonPoint::new(0.4, 0.1, -0.3),
        RadonPoint::new(-0.7, 2.9, 0.9),
    ];
    let cv = [1.25, -0.5];
    let mut tape = Tape::new();
    p.forward_batch(&pts, false, &mut tape).unwrap();
    let mut plain = slfnet::net::Gradients::zeros_like(&p);
    p.backward_batch(&mut tape, &cv, &[], &mut plain).unwrap();
    assert!(p
        .backward_batch(&mut tape, &cv, &[0.0, 0.0], &mut plain.clone())
        .is_err());

    p.forward_batch(&pts, true, &mut tape).unwrap();
    let mut full = slfnet::net::Gradients::zeros_like(&p);
    p.backward_batch(&mut tape, &cv, &[0.0, 0.0], &mut full)
        .unwrap();
    assert!(rel_err(&flat(&plain), &flat(&full)) < 1e-14);
}
