//! Oracle encodings, query tables and the reversible adder.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qmcsim::adder::{adder_basis_index, reversible_add, reversible_add_elementary};
use qmcsim::oracle::{
    build_bit_query, build_boolean_query, build_rotation_query, decode_fraction, encode_value, BooleanOracle,
    SequenceOracle,
};
use qmcsim::state::stream_rng;
use qmcsim::{apply_circuit, apply_gate, init_classical, GateOp, StateVector};
use rand::Rng;

/// A sequence whose codes are exactly `codes`: each value sits mid-bucket.
fn oracle_with_codes(codes: &[u64], m2: u32) -> SequenceOracle {
    let levels = (1u64 << m2) as f64;
    let values = codes.iter().map(|&c| (c as f64 + 0.5) / levels).collect();
    let f = SequenceOracle::new(values, 0.0, 1.0, m2).unwrap();
    assert_eq!(f.codes(), codes);
    f
}

fn codes_strategy() -> impl Strategy<Value = (Vec<u64>, u32)> {
    (0usize..=5, 1u32..=4).prop_flat_map(|(m1, m2)| (prop::collection::vec(0..(1u64 << m2), 1 << m1), Just(m2)))
}

proptest! {
    #[test]
    fn encoding_is_monotone_and_in_range(a in -5.0..5.0f64, w in 0.1..10.0f64, x in 0.0..=1.0f64, y in 0.0..=1.0f64, m2 in 1u32..=12) {
        let b = a + w;
        let (lo, hi) = (x.min(y), x.max(y));
        let cl = encode_value(a + lo * w, a, b, m2).unwrap();
        let ch = encode_value(a + hi * w, a, b, m2).unwrap();
        prop_assert!(cl <= ch && ch < (1 << m2));
        // decoded value within one quantization step
        let v = a + x * w;
        let back = a + decode_fraction(encode_value(v, a, b, m2).unwrap(), m2) * w;
        prop_assert!((back - v).abs() <= w / (1u64 << m2) as f64 + 1e-12);
    }

    #[test]
    fn bit_query_round_trip((codes, m2) in codes_strategy()) {
        let levels = 1u64 << m2;
        let f = oracle_with_codes(&codes, m2);
        let complement: Vec<u64> = codes.iter().map(|c| (levels - c) % levels).collect();
        let g = oracle_with_codes(&complement, m2);
        let (q, qc) = (build_bit_query(&f), build_bit_query(&g));
        let width = f.index_bits() + m2 as usize;
        for index in 0..(1usize << width) {
            let mut s = init_classical(width, index).unwrap();
            apply_gate(&mut s, &q).unwrap();
            apply_gate(&mut s, &qc).unwrap();
            prop_assert_eq!(s.amplitudes()[index], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn bit_query_is_linear((codes, m2) in codes_strategy(), seed in any::<u64>()) {
        let f = oracle_with_codes(&codes, m2);
        let q = build_bit_query(&f);
        let width = f.index_bits() + m2 as usize;
        let s = common::random_state(width, &mut stream_rng(seed, 0));
        let mut got = s.clone();
        apply_gate(&mut got, &q).unwrap();
        // permutation of amplitudes predicted from the classical table
        let levels = 1usize << m2;
        let mut expected = vec![Complex64::new(0.0, 0.0); 1 << width];
        for (index, a) in s.amplitudes().iter().enumerate() {
            let (i, y) = (index >> m2, index & (levels - 1));
            expected[(i << m2) | ((y + codes[i] as usize) % levels)] = *a;
        }
        prop_assert!(got.max_distance(&StateVector::from_amplitudes(expected).unwrap()) < 1e-15);
    }

    #[test]
    fn kickback_applies_sign(bits in prop::collection::vec(any::<bool>(), 2..=32usize).prop_filter("power of two", |v| v.len().is_power_of_two()), seed in any::<u64>()) {
        let f = BooleanOracle::new(bits.clone()).unwrap();
        let m1 = f.index_bits();
        let index_state = common::random_state(m1, &mut stream_rng(seed, 0));
        // Σ α_i |i⟩ ⊗ |−⟩
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps: Vec<Complex64> = index_state.amplitudes().iter().flat_map(|a| [a * h, -a * h]).collect();
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        apply_gate(&mut s, &build_boolean_query(&f)).unwrap();
        for (i, a) in index_state.amplitudes().iter().enumerate() {
            let sign = if bits[i] { -1.0 } else { 1.0 };
            prop_assert!((s.amplitudes()[2 * i] - a * h * sign).norm() < 1e-15);
            prop_assert!((s.amplitudes()[2 * i + 1] + a * h * sign).norm() < 1e-15);
        }
    }

    #[test]
    fn rotation_oracle_loads_decoded_mean(values in prop::collection::vec(-1.0..=1.0f64, 1..=32usize).prop_filter("power of two", |v| v.len().is_power_of_two()), m2 in 1u32..=8) {
        let f = SequenceOracle::new(values, -1.0, 1.0, m2).unwrap();
        let m1 = f.index_bits();
        let mut s = init_classical(m1 + 1, 0).unwrap();
        for q in 0..m1 {
            apply_gate(&mut s, &GateOp::w(q)).unwrap();
        }
        apply_gate(&mut s, &build_rotation_query(&f)).unwrap();
        let p1 = s.marginal_probabilities(&[m1]).unwrap()[1];
        let brute = f.codes().iter().map(|&c| c as f64 / ((1u64 << m2) - 1) as f64).sum::<f64>() / f.len() as f64;
        prop_assert!((p1 - brute).abs() < 1e-12);
        // and the decoded mean is within a quantization step of the raw mean
        prop_assert!((f.decode(p1) - f.mean()).abs() <= 2.0 / (1u64 << m2) as f64 + 1e-12);
    }

    #[test]
    fn adder_adds(m in 1usize..=7, i in any::<usize>(), j in any::<usize>()) {
        let (i, j) = (i % (1 << m), j % (1 << m));
        let c = reversible_add(m).unwrap();
        prop_assert_eq!(c.apply_classical(adder_basis_index(m, i, j, 0)), Some(adder_basis_index(m, i, j, i + j)));
    }
}

#[test]
fn adder_is_a_permutation_even_on_dirty_output() {
    for m in 1..=3 {
        let c = reversible_add(m).unwrap();
        let dim = 1usize << (3 * m + 1);
        let mut seen = vec![false; dim];
        for x in 0..dim {
            let y = c.apply_classical(x).unwrap();
            assert!(!seen[y]);
            seen[y] = true;
        }
    }
}

#[test]
fn elementary_adder_matches_on_superpositions() {
    let m = 2;
    let mut rng = stream_rng(31, 0);
    let s = common::random_state(3 * m + 1, &mut rng);
    let (mut a, mut b) = (s.clone(), s);
    apply_circuit(&mut a, &reversible_add(m).unwrap()).unwrap();
    apply_circuit(&mut b, &reversible_add_elementary(m).unwrap()).unwrap();
    assert!(a.max_distance(&b) < 1e-12);
}

#[test]
fn adder_examples() {
    let c = reversible_add(3).unwrap();
    assert_eq!(c.apply_classical(adder_basis_index(3, 3, 5, 0)), Some(adder_basis_index(3, 3, 5, 8)));
    assert_eq!(c.apply_classical(0), Some(0));
}

#[test]
fn bit_query_table_exact_up_to_64() {
    let mut rng = stream_rng(32, 0);
    for m1 in 0..=6 {
        let m2 = 2;
        let codes: Vec<u64> = (0..1 << m1).map(|_| rng.random_range(0..4)).collect();
        let f = oracle_with_codes(&codes, m2);
        let q = build_bit_query(&f);
        for (i, &code) in codes.iter().enumerate() {
            for y in 0..4usize {
                let got = qmcsim::Circuit::from_ops(m1 + 2, vec![q.clone()]).unwrap().apply_classical((i << 2) | y);
                assert_eq!(got, Some((i << 2) | ((y + code as usize) % 4)));
            }
        }
    }
}

#[test]
fn rotation_oracle_examples() {
    let top = SequenceOracle::new(vec![1.0; 4], -1.0, 1.0, 5).unwrap();
    let mut s = init_classical(3, 0).unwrap();
    apply_gate(&mut s, &GateOp::w(0)).unwrap();
    apply_gate(&mut s, &GateOp::w(1)).unwrap();
    apply_gate(&mut s, &build_rotation_query(&top)).unwrap();
    assert!((s.marginal_probabilities(&[2]).unwrap()[1] - 1.0).abs() < 1e-12);

    let mid = SequenceOracle::new(vec![0.0; 2], -1.0, 1.0, 6).unwrap();
    let ends = SequenceOracle::new(vec![-1.0, 1.0], -1.0, 1.0, 6).unwrap();
    for (f, target, tol) in [(&mid, 0.5, 1.0 / 64.0), (&ends, 0.5, 1e-12)] {
        let mut s = init_classical(2, 0).unwrap();
        apply_gate(&mut s, &GateOp::w(0)).unwrap();
        apply_gate(&mut s, &build_rotation_query(f)).unwrap();
        assert!((s.marginal_probabilities(&[1]).unwrap()[1] - target).abs() <= tol);
    }
}
