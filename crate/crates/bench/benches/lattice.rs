use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lensbordant::lattice::{hj_expansion, linear_gram, realize};
use lensbordant::Changemaker;

fn bench_hj(c: &mut Criterion) {
    c.bench_function("hj_expansion/all_q_p499", |b| {
        b.iter(|| {
            (1..499u64)
                .map(|q| hj_expansion(black_box(499), q).unwrap().len())
                .sum::<usize>()
        })
    });
    let e = hj_expansion(499, 2).unwrap();
    c.bench_function("linear_gram/determinant_p499_q2", |b| {
        b.iter(|| linear_gram(black_box(&e)).determinant())
    });
}

fn bench_realize(c: &mut Criterion) {
    let mut group = c.benchmark_group("realize");
    for v in [vec![2u64, 1, 1, 1], vec![7, 4, 2, 1, 1, 1, 1]] {
        let sigma = Changemaker::new(v).unwrap();
        group.bench_function(sigma.to_string(), |b| {
            b.iter(|| realize(black_box(&sigma)).unwrap())
        });
    }
    let ones = Changemaker::ones(12).unwrap();
    group.bench_function("ones12", |b| b.iter(|| realize(black_box(&ones)).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_hj, bench_realize);
criterion_main!(benches);
