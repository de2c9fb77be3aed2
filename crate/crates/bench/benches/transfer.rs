use criterion::{criterion_group, criterion_main, Criterion};
use leibniz_core::fixtures;
use leibniz_core::transfer::TransferContext;

const K: u32 = 4;

fn transfer(c: &mut Criterion) {
    let mut group = c.benchmark_group("affine gauge");
    group.sample_size(10);
    for n in [3, 4] {
        let f = fixtures::affine_gauge(K, n + K as usize - 1).expect("gauge fixture");
        let alpha = fixtures::affine_mc(K);
        group.bench_function(format!("tables up to arity {n}"), |b| {
            b.iter(|| TransferContext::new(f.clone(), alpha.clone(), n).expect("context"))
        });
        let ctx = TransferContext::new(f.clone(), alpha.clone(), n).expect("context");
        group.bench_function(format!("verify up to arity {n}"), |b| {
            b.iter(|| ctx.verify_theorem().expect("verification runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, transfer);
criterion_main!(benches);
