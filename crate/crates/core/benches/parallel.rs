use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use upspec::alias::analyze_batch;
use upspec::fit::{residual_sweep_with, FitProblem, FitSystem};
use upspec::upsample::{BoundaryMode, KernelSpec, UpsampleFactor, Upsampler};
use upspec::{Execution, Signal};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut m = vec![("sequential", Execution::Sequential)];
    if Execution::default().is_parallel() {
        m.push(("parallel", Execution::default()));
    }
    m
}

fn signals(count: usize, n: usize) -> Vec<Signal> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    (0..count)
        .map(|_| {
            let v = (0..n)
                .map(|_| {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                })
                .collect();
            Signal::new(v).unwrap()
        })
        .collect()
}

fn batch_analysis(c: &mut Criterion) {
    let xs = signals(256, 1024);
    let r = UpsampleFactor::new(2).unwrap();
    let op = Upsampler::TransposedConv(KernelSpec::triangle(2).unwrap(), BoundaryMode::Periodic);
    let mut g = c.benchmark_group("analyze_batch_256x1024");
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| analyze_batch(black_box(&xs), &op, exec).unwrap())
        });
    }
    let fp = Upsampler::FourierPad(r);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::new("fourier_pad", name), |b| {
            b.iter(|| analyze_batch(black_box(&xs), &fp, exec).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let r = UpsampleFactor::new(2).unwrap();
    let sizes = [2, 3, 7, 11, 15, 32];
    let mut g = c.benchmark_group("residual_sweep_n16");
    g.sample_size(20);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| residual_sweep_with(16, r, black_box(&sizes), exec).unwrap())
        });
    }
    g.finish();
}

fn system_build(c: &mut Criterion) {
    let p = FitProblem::new(32, UpsampleFactor::new(2).unwrap(), 15).unwrap();
    let mut g = c.benchmark_group("fit_system_n32_k15");
    g.sample_size(20);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| FitSystem::build_with(black_box(&p), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, batch_analysis, sweep, system_build);
criterion_main!(benches);
