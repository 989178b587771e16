use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hmvol::criteria::bigness_rhs;
use hmvol::par;
use hmvol::qfield::FieldClass;
use hmvol::volume::{f_bound, Parity};

// One probe of a threshold scan: is W(m) certified negative?
fn probe(m: u64) -> bool {
    let v = f_bound(FieldClass::Generic, m, Parity::OddDim, None, 200).unwrap();
    let rhs = bigness_rhs(FieldClass::Generic, 2 * m, 1, 200).unwrap();
    (&v - &rhs).is_negative()
}

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("w_probes");
    g.sample_size(10);
    for len in [16u64, 64] {
        let ms: Vec<u64> = (250..250 + len).collect();
        g.bench_with_input(BenchmarkId::new("parallel", len), &ms, |b, ms| {
            b.iter(|| par::map(ms.clone(), probe))
        });
        g.bench_with_input(BenchmarkId::new("sequential", len), &ms, |b, ms| {
            b.iter(|| par::map_seq(ms.clone(), probe))
        });
    }
    g.finish();
}

criterion_group!(benches, scans);
criterion_main!(benches);
