//! Sequential versus rayon execution of experiment-level workloads.
//!
//! Run with `cargo bench -p probelab --bench sweeps`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nhse_core::dynamics::LyapunovOptions;
use nhse_core::model::model_iii;
use nhse_core::par::Execution;
use probelab::scan::{scan_delta_model3, ScanOptions};
use probelab::sweep::{sweep_lyapunov, uniform_grid, SweepOptions};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn short_dynamics() -> LyapunovOptions {
    LyapunovOptions {
        cells: 201,
        t_end: 20.0,
        ..LyapunovOptions::default()
    }
}

fn delta_scan(c: &mut Criterion) {
    let grid = uniform_grid(0.1, 1.2, 0.1);
    let mut group = c.benchmark_group("scan_delta_model3");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = ScanOptions {
            lyapunov: short_dynamics(),
            exec,
            ..ScanOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| scan_delta_model3(0.6, 1.0, &grid, &opts).unwrap())
        });
    }
    group.finish();
}

fn velocity_sweep(c: &mut Criterion) {
    let model = model_iii(0.6, 1.0, 1.0);
    let mut group = c.benchmark_group("sweep_lyapunov");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = SweepOptions {
            lyapunov: short_dynamics(),
            exec,
            ..SweepOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep_lyapunov(&model, &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, delta_scan, velocity_sweep);
criterion_main!(benches);
