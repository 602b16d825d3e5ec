//! Closed forms, sign codecs, digit systems, and the shipped identity corpus.

use confcomp_core::radicals::{
    binary_signed_nest, builtin_corpus, detect_sign_periodicity, encode_sign_nest,
    nyblom_closed_form, nyblom_direct_nest, run_identity_corpus, sign_nest_value, sizer_decode,
    sizer_encode, SignSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

#[test]
fn shipped_corpus_passes_at_stated_tolerances() {
    let records = builtin_corpus();
    assert!(records.len() >= 20, "corpus unexpectedly small");
    let report = run_identity_corpus(&records, 256);
    for r in &report.results {
        assert!(
            r.passed,
            "corpus record {} failed: value {} expected {} (error {})",
            r.id, r.value, r.expected, r.error
        );
    }
}

#[test]
fn nyblom_closed_form_matches_direct_nest() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let x = Float::with_val(192, rng.gen_range(2.0..12.0));
        let k = rng.gen_range(1..=8u32);
        let plus = rng.gen_bool(0.5);
        let closed = nyblom_closed_form(&x, k, plus).unwrap();
        let direct = nyblom_direct_nest(&x, k, plus).unwrap();
        let err = Float::with_val(192, &closed - &direct).abs();
        assert!(
            err < 1e-40,
            "x={x} k={k} plus={plus}: closed {closed} vs direct {direct}"
        );
    }
}

#[test]
fn nyblom_rejects_x_below_two() {
    assert!(nyblom_closed_form(&Float::with_val(64, 1.5), 3, true).is_err());
}

#[test]
fn sign_nest_agrees_with_sine_series_exhaustively() {
    // Every ± pattern of length ≤ 12: the nest and its trigonometric series
    // form are the same number.
    for len in 1..=12usize {
        for mask in 0..(1u32 << len) {
            let signs: Vec<i8> = (0..len)
                .map(|b| if mask >> b & 1 == 1 { -1 } else { 1 })
                .collect();
            let seq = SignSequence::new(signs);
            let (nest, series) = sign_nest_value(&seq, len - 1, 128).unwrap();
            let err = Float::with_val(128, &nest - &series).abs();
            assert!(
                err < 1e-30,
                "pattern {mask:b} len {len}: nest {nest} vs series {series}"
            );
        }
    }
}

#[test]
fn sign_nest_codec_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let bound = Float::with_val(128, 2).pow(-44i32);
    for _ in 0..100 {
        let x = Float::with_val(128, rng.gen_range(-1.999..1.999));
        let mut seq = encode_sign_nest(&x, 48);
        seq.periodic_tail = Some((0, seq.signs.len()));
        let (nest, _) = sign_nest_value(&seq, 48, 128).unwrap();
        let err = Float::with_val(128, &nest - &x).abs();
        assert!(err <= bound, "x={x}: decoded {nest}, error {err}");
    }
}

#[test]
fn sign_codec_recovers_known_periodic_pattern() {
    // x = 1 = 2 sin(π/6): S = 2/3 = 0.101010…₂ signed, so the sign string
    // is eventually periodic.
    let seq = encode_sign_nest(&Float::with_val(128, 1), 40);
    let period = detect_sign_periodicity(&seq, 8);
    assert!(period.is_some(), "expected a periodic tail for x=1");
    let (pre, p) = period.unwrap();
    assert!(pre <= 4 && p <= 4, "unexpected period structure ({pre},{p})");
}

#[test]
fn sizer_round_trip_is_exact_with_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..100 {
        let x = Float::with_val(192, rng.gen_range(0.01..3.0));
        let digits = sizer_encode(&x, 24).unwrap();
        for d in &digits.tail {
            assert!(*d <= 2, "tail digit out of range");
        }
        assert!(digits.residual >= 0 && digits.residual <= 2);
        let back = sizer_decode(&digits);
        let err = Float::with_val(192, &back - &x).abs();
        assert!(err < 1e-30, "x={x}: decoded {back}, error {err}");
    }
}

#[test]
fn sizer_rejects_negative_input() {
    assert!(sizer_encode(&Float::with_val(64, -1), 4).is_err());
}

#[test]
fn binary_signed_nest_known_values() {
    // x = 1 (binary 0.111…) gives the all-minus nest (√17 − 1)/2.
    let v = binary_signed_nest(&Float::with_val(128, 1), 4.0, 80, 128).unwrap();
    let expect = (Float::with_val(128, 17).sqrt() - 1u32) / 2u32;
    assert!(Float::with_val(128, &v - &expect).abs() < 1e-20, "got {v}");
    // x = 1/3 (binary 0.0101…) alternates signs: (1 + √13)/2.
    let third = Float::with_val(128, 1) / 3u32;
    let v = binary_signed_nest(&third, 4.0, 80, 128).unwrap();
    let expect = (Float::with_val(128, 13).sqrt() + 1u32) / 2u32;
    assert!(Float::with_val(128, &v - &expect).abs() < 1e-20, "got {v}");
}

#[test]
fn binary_signed_nest_rejects_small_k() {
    let x = Float::with_val(64, 0.5);
    assert!(binary_signed_nest(&x, 3.0, 10, 64).is_err());
}
