use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use sdic_core::channel::names::{S1, S2, Y1, Y2};
use sdic_core::mc::sample_covariance;
use sdic_core::strong::{strong_zic_segment, DEFAULT_SPLIT_STEPS};
use sdic_core::very_strong::{vs_ic_check, vs_ic_scene, U, V};
use sdic_core::{Axis, CheckKind, IcParams, LogBase, ParamSet, SweepGrid};

const BITS: LogBase = LogBase::BITS;

fn vs_params() -> IcParams {
    IcParams::new(1.6, 1.6, 1.0, 1.0, 0.9, 0.9, 0.5).unwrap()
}

fn bench_mi(c: &mut Criterion) {
    let (scene, _) = vs_ic_scene(&vs_params()).unwrap();
    c.bench_function("mi_joint_3x1", |b| {
        b.iter(|| {
            scene
                .mutual_info(black_box(&[U, V, Y1]), black_box(&[Y2]), BITS)
                .unwrap()
        })
    });
    c.bench_function("cmi_2x1_given_2", |b| {
        b.iter(|| {
            scene
                .cond_mutual_info(black_box(&[U, V]), black_box(&[Y1]), black_box(&[S1, S2]), BITS)
                .unwrap()
        })
    });
}

fn bench_checks(c: &mut Criterion) {
    let p = vs_params();
    c.bench_function("vs_ic_check", |b| b.iter(|| vs_ic_check(black_box(&p), BITS).unwrap()));

    let z = IcParams::from_s2_on_s1(1.2, 0.0, 2.0, 0.7, 0.4, 0.8, 0.5).unwrap();
    c.bench_function("strong_zic_segment_201", |b| {
        b.iter(|| strong_zic_segment(black_box(&z), DEFAULT_SPLIT_STEPS, BITS).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let mut fixed = ParamSet::new();
    for (k, v) in [
        ("a", 1.2),
        ("b", 0.0),
        ("p1", 2.0),
        ("p2", 0.7),
        ("q1", 0.4),
        ("q2p", 0.5),
        ("p1dp", 1.0),
    ] {
        fixed.set(k, v).unwrap();
    }
    let axes = vec![
        Axis::new("c", -1.0, 3.0, 41).unwrap(),
        Axis::new("p1dp", 0.0, 2.0, 41).unwrap(),
    ];
    let grid = SweepGrid::new(CheckKind::StrongZic, axes, fixed, BITS).unwrap();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    group.bench_function("strong_zic_41x41", |b| b.iter(|| grid.run()));
    group.finish();
}

fn bench_mc(c: &mut Criterion) {
    let (scene, _) = vs_ic_scene(&vs_params()).unwrap();
    let names = [U, V, Y1, Y2, S1, S2];
    let mut group = c.benchmark_group("mc");
    group.sample_size(10);
    group.bench_function("sample_covariance_6x1e5", |b| {
        b.iter(|| sample_covariance(&scene, black_box(&names), 100_000, 0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_mi, bench_checks, bench_sweep, bench_mc);
criterion_main!(benches);
