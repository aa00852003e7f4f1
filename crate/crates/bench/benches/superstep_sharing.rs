use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use stepshare::ppsp::{BiBfs, Bfs};
use stepshare::{Engine, EngineConfig, TransportKind};
use stepshare_bench::ppsp_workload;

fn capacity_sweep(c: &mut Criterion) {
    let (vertices, queries) = ppsp_workload(20_000, 4, 64, 1);
    let mut group = c.benchmark_group("bibfs_capacity");
    group.sample_size(10).throughput(Throughput::Elements(queries.len() as u64));
    for transport in [TransportKind::InProcess, TransportKind::Socket] {
        for cap in [1, 4, 8, 32] {
            let id = BenchmarkId::new(format!("{transport:?}"), cap);
            group.bench_with_input(id, &cap, |b, &cap| {
                b.iter_batched(
                    || {
                        let cfg = EngineConfig::new(4, cap).with_transport(transport);
                        let mut e = Engine::new(BiBfs::new(), cfg).unwrap();
                        e.load_vertices(vertices.clone()).unwrap();
                        e
                    },
                    |mut e| e.run_batch(queries.iter().copied()).unwrap(),
                    BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

fn bfs_vs_bibfs(c: &mut Criterion) {
    let (vertices, queries) = ppsp_workload(20_000, 4, 32, 2);
    let mut group = c.benchmark_group("ppsp_algorithm");
    group.sample_size(10).throughput(Throughput::Elements(queries.len() as u64));
    group.bench_function("bfs", |b| {
        b.iter_batched(
            || {
                let mut e = Engine::new(Bfs::new(), EngineConfig::new(4, 8)).unwrap();
                e.load_vertices(vertices.clone()).unwrap();
                e
            },
            |mut e| e.run_batch(queries.iter().copied()).unwrap(),
            BatchSize::LargeInput,
        )
    });
    group.bench_function("bibfs", |b| {
        b.iter_batched(
            || {
                let mut e = Engine::new(BiBfs::new(), EngineConfig::new(4, 8)).unwrap();
                e.load_vertices(vertices.clone()).unwrap();
                e
            },
            |mut e| e.run_batch(queries.iter().copied()).unwrap(),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, capacity_sweep, bfs_vs_bibfs);
criterion_main!(benches);
