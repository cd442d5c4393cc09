//! Compares the data-parallel weight scan against the sequential fallback
//! on a representative workload: deciding, per weight, whether the optimal
//! dual face has a dyadic point.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dualint::analyzer::{search_bad_weight, SearchBudget};
use dualint::lspec::LSpec;
use dualint::polyhedron::LinearSystem;
use dualint::scan::{find_first_sequential, WeightBox};
use dualint::Int;

fn slanted_square() -> LinearSystem {
    LinearSystem::from_rows(&[vec![3, 1], vec![0, 1], vec![-1, 0], vec![0, -1]], &[6, 3, 0, 0])
        .unwrap()
}

/// The same probe `search_bad_weight` runs, but with a pure-arithmetic
/// payload so the schedulers themselves are comparable.
fn probe_payload(bx: &WeightBox, idx: u64) -> Option<Vec<Int>> {
    let w = bx.decode(idx);
    let weighty = w.iter().map(|v| v * v * v).sum::<Int>();
    // No hit: measures full-box traversal.
    (weighty < Int::from(i64::MIN)).then_some(w)
}

fn bench_schedulers(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_scan");
    let bx = WeightBox::symmetric(4, 8);
    let total = bx.count().unwrap();

    group.bench_with_input(BenchmarkId::new("sequential", total), &total, |b, &n| {
        b.iter(|| {
            find_first_sequential(n, |i| Ok(probe_payload(&bx, i)))
                .unwrap()
        })
    });

    #[cfg(feature = "parallel")]
    group.bench_with_input(BenchmarkId::new("parallel", total), &total, |b, &n| {
        use dualint::scan::find_first_parallel;
        b.iter(|| {
            find_first_parallel(n, |i| Ok(probe_payload(&bx, i)))
                .unwrap()
        })
    });

    group.finish();
}

fn bench_bad_weight_search(c: &mut Criterion) {
    let sys = slanted_square();
    let budget = SearchBudget::new(2, vec![2], 16).unwrap();
    c.bench_function("search_bad_weight/dyadic", |b| {
        b.iter(|| search_bad_weight(&sys, &LSpec::dyadic(), &budget).unwrap())
    });
}

criterion_group!(benches, bench_schedulers, bench_bad_weight_search);
criterion_main!(benches);
