use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use autlab::blockcode::{builtin_code, BlockCode, TableBudget};
use autlab::grouplab::{distortion_profile, explore_ball, CertificateSource, Element, GroupModel};
use autlab::par::Exec;
use autlab::shiftlang::builtin_shift;
use autlab::spacetime::build_patches;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ball_search(c: &mut Criterion) {
    let h = GroupModel::Heisenberg;
    let steps = h.standard_generators().steps(&h);
    let mut g = c.benchmark_group("heisenberg_ball_r8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| explore_ball(&h, &steps, 8, usize::MAX, None, exec).len())
        });
    }
    g.finish();
}

fn patches(c: &mut Criterion) {
    let x = Arc::new(builtin_shift("full-2").unwrap());
    let budget = TableBudget::default();
    let phi = builtin_code("shift-flip", x, budget).unwrap().unwrap();
    let mut g = c.benchmark_group("full2_patches_8x6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build_patches(&phi, 8, 6, budget, exec).unwrap().len())
        });
    }
    g.finish();
}

fn composition(c: &mut Criterion) {
    let x = Arc::new(builtin_shift("golden-mean").unwrap());
    let budget = TableBudget::default();
    // A radius-6 code: the majority of a window, then shifted; its legality
    // does not matter for timing.
    let f = BlockCode::from_fn(x.clone(), 6, budget, Exec::Sequential, |w| {
        u8::from(w.iter().filter(|&&s| s == 1).count() * 2 > w.len())
    })
    .unwrap();
    let sigma = BlockCode::shift_power(x, 5, budget).unwrap();
    let mut g = c.benchmark_group("golden_compose_r6_r5");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| f.compose(&sigma, budget, exec).unwrap().declared_range())
        });
    }
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let bs = GroupModel::bs(2).unwrap();
    let gens = bs.standard_generators();
    let a = gens.binding()["a"].clone();
    let horner = [CertificateSource::Horner { a: "a".into(), b: "b".into() }];
    let h = GroupModel::Heisenberg;
    let hgens = h.standard_generators();
    let s = Element::Heisenberg([0, 0, 1]);
    let center = [CertificateSource::HeisenbergCenter { u: "u".into(), t: "t".into() }];
    let mut g = c.benchmark_group("distortion_sweep_512");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("bs12", name), |b| {
            b.iter(|| distortion_profile(&bs, &gens, &a, 512, 10, 1 << 22, &horner, exec).unwrap().entries.len())
        });
        g.bench_function(BenchmarkId::new("heisenberg", name), |b| {
            b.iter(|| distortion_profile(&h, &hgens, &s, 512, 6, 1 << 22, &center, exec).unwrap().entries.len())
        });
    }
    g.finish();
}

criterion_group!(kernels, ball_search, patches, composition, certificates);
criterion_main!(kernels);
