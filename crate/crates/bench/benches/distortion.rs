use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use distlab::distortion::{
    eccentricity, estimate_distortion, estimate_distortion_with, find_r0, lipschitz_check, systole_torus,
    EstimateOptions,
};
use distlab::geodesics::{build_steiner_graph, cone_lateral_distance, straighten_path, trace_path};
use distlab_bench::{cone, sphere, torus};

fn analytic(c: &mut Criterion) {
    c.bench_function("find_r0 1e-6", |b| b.iter(|| find_r0(black_box(1e-6)).unwrap()));
    c.bench_function("cone_lateral_distance", |b| {
        b.iter(|| cone_lateral_distance(black_box(0.3), 0.4, 0.1, 0.9, 2.9).unwrap().distance)
    });
    c.bench_function("lipschitz 1e4 pairs", |b| b.iter(|| lipschitz_check(0.01, 10_000, black_box(0)).unwrap()));
}

fn graphs(c: &mut Criterion) {
    let mut group = c.benchmark_group("steiner");
    let mesh = sphere(3);
    for k in [1, 2, 3] {
        group.bench_with_input(BenchmarkId::new("build", k), &k, |b, &k| {
            b.iter(|| build_steiner_graph(&mesh, k).unwrap())
        });
        let g = build_steiner_graph(&mesh, k).unwrap();
        group.bench_with_input(BenchmarkId::new("single_source", k), &k, |b, _| b.iter(|| g.single_source(black_box(0))));
    }
    let g = build_steiner_graph(&mesh, 2).unwrap();
    let (_, pred) = g.shortest_path_tree(0);
    let far = (0..mesh.vertex_count())
        .max_by(|&a, &b| {
            let d = |v: usize| distlab::geom::dist(mesh.vertex(0), mesh.vertex(v));
            d(a).total_cmp(&d(b))
        })
        .unwrap();
    let nodes = trace_path(&pred, 0, far);
    group.bench_function("straighten antipodal", |b| b.iter(|| straighten_path(&g, black_box(&nodes))));
    group.finish();
}

fn estimates(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate");
    group.sample_size(10);
    let s = sphere(3);
    group.bench_function("sphere s3 k2", |b| b.iter(|| estimate_distortion(&s, 2, 0).unwrap()));
    let cn = cone(0.169, 0.05);
    group.bench_function("cone r0 h0.05 k3", |b| b.iter(|| estimate_distortion(&cn, 3, 1).unwrap()));
    let raw = EstimateOptions { k: 3, budget: 0, straighten: false, ..EstimateOptions::default() };
    group.bench_function("cone r0 h0.05 graph only", |b| b.iter(|| estimate_distortion_with(&cn, &raw).unwrap()));
    let t = torus(0.15, 16);
    group.bench_function("torus eps0.15", |b| b.iter(|| estimate_distortion(&t, 2, 0).unwrap()));
    group.bench_function("systole eps0.15", |b| b.iter(|| systole_torus(&t, 2).unwrap()));
    let e = sphere(4);
    group.bench_function("eccentricity sphere s4", |b| b.iter(|| eccentricity(&e, true).unwrap()));
    group.finish();
}

criterion_group!(benches, analytic, graphs, estimates);
criterion_main!(benches);
