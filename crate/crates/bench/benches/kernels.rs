use std::hint::black_box;

use cdmalab_core::analytic::self_convolve;
use cdmalab_core::{
    downlink_combined_pdf, encode, q_function, uplink_bit_pdf, viterbi_decode, CodeSpec, GridSpec,
    LinkDirection, LinkScenario,
};
use criterion::{criterion_group, criterion_main, Criterion, Throughput};

fn convolution(c: &mut Criterion) {
    let up = LinkScenario::new(10, 1.0, 1.0, LinkDirection::Uplink).unwrap();
    let avg = up.avg_coded_snr().unwrap();
    let per_bit = uplink_bit_pdf(&up, GridSpec::from_step(0.0, avg / 200.0, 8001).unwrap()).unwrap();
    let mut g = c.benchmark_group("convolution");
    g.sample_size(10);
    g.bench_function("uplink_164_fold", |b| b.iter(|| self_convolve(black_box(&per_bit), 164).unwrap()));
    let down = up.with_direction(LinkDirection::Downlink);
    let grid = GridSpec::downlink_default(1.0 / 18.0).unwrap();
    g.bench_function("downlink_164_fold", |b| {
        b.iter(|| downlink_combined_pdf(black_box(&down), 164, grid).unwrap())
    });
    g.finish();
}

fn viterbi(c: &mut Criterion) {
    let mut g = c.benchmark_group("viterbi");
    for (name, k, gens) in [("k3_5_7", 3, ["5", "7"]), ("k7_133_171", 7, ["133", "171"])] {
        let code = CodeSpec::from_octal(k, &gens).unwrap();
        let bits: Vec<u8> = (0..1000u32).map(|i| (i.wrapping_mul(2654435761) >> 13) as u8 & 1).collect();
        let metrics: Vec<f64> = encode(&code, &bits).iter().map(|&b| 1.0 - 2.0 * f64::from(b)).collect();
        g.throughput(Throughput::Elements(bits.len() as u64));
        g.bench_function(name, |b| b.iter(|| viterbi_decode(&code, black_box(&metrics)).unwrap()));
    }
    g.finish();
}

fn qfunc(c: &mut Criterion) {
    c.bench_function("q_function", |b| b.iter(|| q_function(black_box(2.3))));
}

criterion_group!(benches, convolution, viterbi, qfunc);
criterion_main!(benches);
