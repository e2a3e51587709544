//! Exact and approximate single-qubit compilation.

mod common;

use proptest::prelude::*;
use qmcsim::compiler::{approx_profile, approx_search, compile_single_qubit, phase_distance, Letter, Unitary2};
use qmcsim::state::stream_rng;
use qmcsim::{apply_gate, StateVector};

/// Product of the letters' matrices, first letter applied first.
fn multiply_out(letters: &[Letter]) -> Unitary2 {
    letters.iter().fold(Unitary2::identity(), |acc, l| l.matrix() * acc)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn exact_compile_reproduces_target(seed in any::<u64>()) {
        let u = common::haar_unitary(&mut stream_rng(seed, 0));
        let word = compile_single_qubit(&u).unwrap();
        prop_assert!(word.len() <= 5);
        prop_assert!(phase_distance(&u, &multiply_out(&word.letters)) <= 1e-10);
    }

    #[test]
    fn compiled_ops_act_like_the_matrix(seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 1);
        let u = common::haar_unitary(&mut rng);
        let word = compile_single_qubit(&u).unwrap();
        let s = common::random_state(1, &mut rng);
        let mut got = s.clone();
        for op in word.to_ops() {
            apply_gate(&mut got, &op).unwrap();
        }
        let m = word.matrix();
        let a = s.amplitudes();
        let expected = StateVector::from_amplitudes(vec![m[(0, 0)] * a[0] + m[(0, 1)] * a[1], m[(1, 0)] * a[0] + m[(1, 1)] * a[1]]).unwrap();
        prop_assert!(got.max_distance(&expected) < 1e-12);
    }

    #[test]
    fn search_is_sound(seed in any::<u64>(), len in 0usize..=8) {
        let u = common::haar_unitary(&mut stream_rng(seed, 2));
        let (word, d) = approx_search(&u, len).unwrap();
        prop_assert!(word.len() <= len);
        prop_assert!((phase_distance(&u, &multiply_out(&word.letters)) - d).abs() <= 1e-12);
        prop_assert!(word.letters.iter().all(|l| matches!(l, Letter::W | Letter::T)));
    }
}

#[test]
fn profile_is_non_increasing() {
    let mut rng = stream_rng(5, 0);
    for _ in 0..5 {
        let u = common::haar_unitary(&mut rng);
        let profile = approx_profile(&u, 12).unwrap();
        let mut best = f64::INFINITY;
        for d in profile {
            best = best.min(d);
            let (_, reported) = approx_search(&u, 12).unwrap();
            assert!(reported <= best + 1e-15);
        }
    }
}

#[test]
fn phase_distance_is_a_metric_on_samples() {
    let mut rng = stream_rng(6, 0);
    for _ in 0..100 {
        let (a, b, c) = (common::haar_unitary(&mut rng), common::haar_unitary(&mut rng), common::haar_unitary(&mut rng));
        assert!(phase_distance(&a, &a) < 1e-7);
        assert!((phase_distance(&a, &b) - phase_distance(&b, &a)).abs() < 1e-12);
        assert!(phase_distance(&a, &c) <= phase_distance(&a, &b) + phase_distance(&b, &c) + 1e-12);
    }
}
