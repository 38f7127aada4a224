mod common;

use std::fs;

use common::*;
use slfnet::dataset::{Dataset, GenConfig, ISLF_FILE, META_FILE, SLF_FILE};
use slfnet::net::{Checkpoint, InputScaling, NetConfig, NetParams};
use slfnet::Error;

fn small_data(seed: u64) -> Dataset {
    let config = GenConfig {
        n_slf: 300,
        n_islf: 200,
        noise_sigma: 2.0,
        seed,
        ..GenConfig::default()
    };
    Dataset::generate(&single_wall_10m(), &config).unwrap()
}

#[test]
fn dataset_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_data(5);
    data.save(dir.path()).unwrap();
    let back = Dataset::load(dir.path()).unwrap();
    for (a, b) in data.slf_samples.iter().zip(&back.slf_samples) {
        assert_eq!(a.z.to_bits(), b.z.to_bits());
        assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
        assert_eq!(a.s.to_bits(), b.s.to_bits());
        assert_eq!(a.slf.to_bits(), b.slf.to_bits());
    }
    assert_eq!(data, back);
}

#[test]
fn generation_is_deterministic_and_seeded() {
    assert_eq!(small_data(5), small_data(5));
    assert_ne!(small_data(5).islf_samples, small_data(6).islf_samples);

    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    small_data(5).save(a.path()).unwrap();
    small_data(5).save(b.path()).unwrap();
    for name in [SLF_FILE, ISLF_FILE, META_FILE] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap()
        );
    }
}

#[test]
fn generation_ignores_thread_count() {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    assert_eq!(pool.install(|| small_data(8)), small_data(8));
}

#[test]
fn truncated_and_corrupt_files_are_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    small_data(1).save(dir.path()).unwrap();
    let path = dir.path().join(ISLF_FILE);
    let text = fs::read_to_string(&path).unwrap();

    let truncated: String = text.lines().take(50).map(|l| format!("{l}\n")).collect();
    fs::write(&path, truncated).unwrap();
    assert!(matches!(
        Dataset::load(dir.path()),
        Err(Error::Parse { .. })
    ));

    fs::write(&path, text.replacen("tx_x", "tx", 1)).unwrap();
    match Dataset::load(dir.path()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
        other => panic!("{other:?}"),
    }

    fs::write(&path, text.replacen("\n", "\n1.0,abc,2,3,4\n", 1)).unwrap();
    assert!(matches!(
        Dataset::load(dir.path()),
        Err(Error::Parse { .. })
    ));

    fs::remove_file(&path).unwrap();
    assert!(matches!(Dataset::load(dir.path()), Err(Error::Io { .. })));
}

#[test]
fn checkpoint_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    let cfg = NetConfig {
        widths: vec![16, 16],
        ff_count: 8,
        ff_scale: 3.0,
        ..NetConfig::default()
    };
    let p = NetParams::init(&cfg, InputScaling::default(), 77).unwrap();
    Checkpoint::new(p.clone(), serde_json::json!({"note": 1}))
        .save(&path)
        .unwrap();
    let first = fs::read(&path).unwrap();
    let back = Checkpoint::load(&path).unwrap();
    assert_eq!(back.params, p);
    back.save(&path).unwrap();
    assert_eq!(fs::read(&path).unwrap(), first);
}
