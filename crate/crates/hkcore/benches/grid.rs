//! Parallel vs sequential maps over the per-item work of the check grid.
//! Build with `--no-default-features` to also see the library's internal
//! loops fall back to sequential code.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hkcore::exact_kernel::Q3;
use hkcore::hodge_su2::{base_frame, bb_extract, random_orthogonal, sample_hk_triples, so5_closure};
use hkcore::model_forge::{apolar_model, ModelSpec};
use hkcore::par;
use hkcore::twistor_walk::{connect_planes, PeriodSpace, ScalarContext, TwistorPlane, Vec3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn closures(c: &mut Criterion) {
    let mut g = c.benchmark_group("so5_closure");
    g.sample_size(10);
    for (b, m) in [(4, 1), (5, 2)] {
        let a = apolar_model(&ModelSpec::standard(b, m)).unwrap();
        let ts = sample_hk_triples(&a, 8, 1).unwrap();
        let id = format!("b{b}m{m}");
        g.bench_with_input(BenchmarkId::new("parallel", &id), &ts, |bch, ts| {
            bch.iter(|| par::map(ts, |t| black_box(so5_closure(&a, t).dim())))
        });
        g.bench_with_input(BenchmarkId::new("sequential", &id), &ts, |bch, ts| {
            bch.iter(|| par::map_seq(ts, |t| black_box(so5_closure(&a, t).dim())))
        });
    }
    g.finish();
}

fn bb_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("bb_extract");
    g.sample_size(10);
    let a = apolar_model(&ModelSpec::standard(5, 2)).unwrap();
    let ts = sample_hk_triples(&a, 8, 2).unwrap();
    g.bench_function("parallel", |bch| bch.iter(|| par::map(&ts, |t| black_box(bb_extract(&a, t).is_ok()))));
    g.bench_function("sequential", |bch| bch.iter(|| par::map_seq(&ts, |t| black_box(bb_extract(&a, t).is_ok()))));
    g.finish();
}

fn plane_walks(c: &mut Criterion) {
    let ps = PeriodSpace::diag(&[1, 1, 1, -1, -1], ScalarContext::Rational).unwrap();
    let base = base_frame(ps.form()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut plane = || loop {
        if let Some(r) = random_orthogonal(ps.form(), 5, &mut rng) {
            let f = [0, 1, 2].map(|k| r.mul_vec(&base[k]).into_iter().map(Q3::rational).collect::<Vec3>());
            return TwistorPlane::from_frame(&ps, f).unwrap();
        }
    };
    let pairs: Vec<(TwistorPlane, TwistorPlane)> = (0..32).map(|_| (plane(), plane())).collect();
    let mut g = c.benchmark_group("connect_planes");
    g.sample_size(10);
    g.bench_function("parallel", |bch| {
        bch.iter(|| par::map(&pairs, |(w, w2)| black_box(connect_planes(&ps, w, w2).unwrap().len())))
    });
    g.bench_function("sequential", |bch| {
        bch.iter(|| par::map_seq(&pairs, |(w, w2)| black_box(connect_planes(&ps, w, w2).unwrap().len())))
    });
    g.finish();
}

criterion_group!(benches, closures, bb_forms, plane_walks);
criterion_main!(benches);
