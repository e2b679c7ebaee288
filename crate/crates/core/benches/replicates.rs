use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use cmloops::degseq::{DegreeSequence, Degrees};
use cmloops::montecarlo::{simulate, Execution};

fn replicates(c: &mut Criterion) {
    let mut group = c.benchmark_group("replicates");
    group.sample_size(10);
    for n in [200usize, 2000] {
        let d: DegreeSequence = Degrees::regular(n, 3).unwrap().into();
        let reps = 500u64;
        group.throughput(Throughput::Elements(reps));
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, n), &d, |b, d| {
                b.iter(|| simulate(d, reps, 1, None, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, replicates);
criterion_main!(benches);
