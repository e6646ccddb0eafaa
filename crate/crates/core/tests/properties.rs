use cdmalab_core::analytic::{erlang_density, self_convolve};
use cdmalab_core::linkchain::{descramble, qpsk_demodulate, qpsk_modulate, scramble};
use cdmalab_core::montecarlo::wilson_interval;
use cdmalab_core::{
    encode, q_function, viterbi_decode, CodeSpec, GridSpec, LinkDirection, LinkScenario,
    ScramblingSequence, SnrPdfGrid,
};
use proptest::prelude::*;

fn code_strategy() -> impl Strategy<Value = CodeSpec> {
    prop_oneof![
        Just(CodeSpec::from_octal(3, &["5", "7"]).unwrap()),
        Just(CodeSpec::from_octal(4, &["15", "17"]).unwrap()),
        Just(CodeSpec::from_octal(7, &["133", "171"]).unwrap()),
        Just(CodeSpec::from_octal(3, &["5", "7", "7"]).unwrap()),
    ]
}

proptest! {
    #[test]
    fn noiseless_decoding_is_identity(
        code in code_strategy(),
        bits in prop::collection::vec(0u8..2, 1..200),
        scale in 0.1f64..10.0,
    ) {
        let metrics: Vec<f64> = encode(&code, &bits).iter().map(|&c| scale * (1.0 - 2.0 * f64::from(c))).collect();
        prop_assert_eq!(viterbi_decode(&code, &metrics).unwrap(), bits);
    }

    #[test]
    fn modulation_and_scrambling_invert(
        pairs in prop::collection::vec(0u8..2, 1..200).prop_map(|mut v| { if v.len() % 2 == 1 { v.push(0) } v }),
        seed: u64,
    ) {
        let symbols = qpsk_modulate(&pairs).unwrap();
        let seq = ScramblingSequence::generate(seed, 0, 0, symbols.len());
        let back = descramble(&scramble(&symbols, &seq).unwrap(), &seq).unwrap();
        let hard: Vec<u8> = qpsk_demodulate(&back).iter().map(|&m| u8::from(m < 0.0)).collect();
        prop_assert_eq!(hard, pairs);
    }

    #[test]
    fn wilson_interval_brackets_estimate(trials in 1u64..1_000_000, frac in 0.0f64..=1.0) {
        let k = (frac * trials as f64).floor() as u64;
        let (lo, hi) = wilson_interval(k, trials);
        let p = k as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn q_function_symmetry(x in -8.0f64..8.0) {
        prop_assert!((q_function(x) + q_function(-x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn average_snr_falls_with_load(k in 1u32..200, xi in 0.01f64..10.0, n0 in 0.01f64..10.0) {
        let a = LinkScenario::new(k, xi, n0, LinkDirection::Uplink).unwrap().avg_coded_snr().unwrap();
        let b = LinkScenario::new(k + 1, xi, n0, LinkDirection::Uplink).unwrap().avg_coded_snr().unwrap();
        prop_assert!(b < a);
        prop_assert!((a - xi / (2.0 * f64::from(k - 1) * xi + n0)).abs() <= 1e-12 * a);
    }

    #[test]
    fn self_convolution_keeps_mass_and_mean(d in 1u32..24) {
        let avg = 0.5;
        let grid = GridSpec::from_step(0.0, avg / 200.0, 8001).unwrap();
        let pdf = SnrPdfGrid::sample(grid, 1e-3, |g| erlang_density(avg, 1, g)).unwrap();
        let sum = self_convolve(&pdf, d).unwrap();
        prop_assert!((sum.integral() - 1.0).abs() < 1e-9);
        prop_assert!((sum.mean() / (f64::from(d) * avg) - 1.0).abs() < 1e-3);
    }
}
