use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qindex::engine::{index, IndexRequest};
use qindex::series::HalfInt;
use qindex::tetindex::tet_index_I;
use qindex::tri::load_gluing_matrix;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn bench_tet(c: &mut Criterion) {
    let order = HalfInt::from_int(20);
    c.bench_function("tet_index_I grid order 20", |b| {
        b.iter(|| {
            for m in -3..=3 {
                for e in -3..=3 {
                    black_box(tet_index_I(m, e, order));
                }
            }
        })
    });
}

fn bench_index(c: &mut Criterion) {
    let mut g = c.benchmark_group("index");
    g.sample_size(10);
    for (name, order) in [("fig8.glu", 11), ("m009.glu", 8)] {
        let gluing = load_gluing_matrix(&fixture(name)).unwrap();
        let req = IndexRequest::zero(gluing, HalfInt::from_int(order));
        g.bench_function(format!("{name} to q^{order}"), |b| b.iter(|| index(black_box(&req)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_tet, bench_index);
criterion_main!(benches);
