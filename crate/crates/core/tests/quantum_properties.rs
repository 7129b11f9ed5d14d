use approx::assert_abs_diff_eq;
use naqc_core::quantum::{conditional_state, random_two_qubit_state};
use naqc_core::{
    effect, luders_nonselective, partial_trace, projector, singlet, ComplexMatrix, DensityMatrix, Outcome,
    PauliAxis, Sharpness, Subsystem,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lifted(p: &ComplexMatrix) -> ComplexMatrix {
    p.kron(&ComplexMatrix::identity2()).unwrap()
}

#[test]
fn luders_channel_keeps_states_physical() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..10_000 {
        let state = random_two_qubit_state(&mut rng);
        let s = Sharpness::new(0.05 + 0.95 * (k % 20) as f64 / 19.0).unwrap();
        let out = luders_nonselective(&state, PauliAxis::ALL[k % 3], s).unwrap();
        let m = out.matrix();
        assert!((m.trace().re - 1.0).abs() < 1e-12);
        assert!(m.is_hermitian(1e-12));
        assert!(m.is_positive_semidefinite(1e-12));
        // Bob's marginal is untouched by anything Alice does.
        let before = partial_trace(&state, Subsystem::A).unwrap();
        let after = partial_trace(&out, Subsystem::A).unwrap();
        assert!(before.matrix().max_abs_diff(after.matrix()) < 1e-12);
    }
}

#[test]
fn outcome_probabilities_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..2_000 {
        let state = random_two_qubit_state(&mut rng);
        let s = Sharpness::new(0.1 + 0.9 * (k % 10) as f64 / 9.0).unwrap();
        for axis in PauliAxis::ALL {
            let total: f64 = Outcome::BOTH
                .iter()
                .map(|&o| conditional_state(&state, &effect(axis, o, s)).unwrap().probability())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn sharp_effect_reduces_to_projective_conditioning() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let state = random_two_qubit_state(&mut rng);
        for axis in PauliAxis::ALL {
            for outcome in Outcome::BOTH {
                let cond = conditional_state(&state, &effect(axis, outcome, Sharpness::SHARP)).unwrap();
                let p = lifted(&projector(axis, outcome));
                let weighted = &(&p * state.matrix()) * &p;
                let prob = weighted.trace().re;
                assert_abs_diff_eq!(cond.probability(), prob, epsilon = 1e-12);
                if prob > 1e-9 {
                    let reduced =
                        partial_trace(&DensityMatrix::new(weighted.scale_real(1.0 / prob)).unwrap(), Subsystem::A)
                            .unwrap();
                    assert!(cond.state().unwrap().matrix().max_abs_diff(reduced.matrix()) < 1e-10);
                }
            }
        }
    }
}

#[test]
fn singlet_conditional_bloch_length() {
    for k in 1..=50 {
        let l = k as f64 / 50.0;
        let s = Sharpness::new(l).unwrap();
        for axis in PauliAxis::ALL {
            let cond = conditional_state(&singlet(), &effect(axis, Outcome::Plus, s)).unwrap();
            assert_abs_diff_eq!(cond.probability(), 0.5, epsilon = 1e-14);
            let r = cond.state().unwrap().bloch().unwrap();
            let len = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert_abs_diff_eq!(len, 2.0 * l / (1.0 + l * l), epsilon = 1e-13);
            // anti-aligned with the measured direction
            assert_abs_diff_eq!(r[axis.index()], -len, epsilon = 1e-13);
        }
    }
}

proptest! {
    #[test]
    fn quality_and_precision_trade_off(l in 1e-9f64..=1.0) {
        let s = Sharpness::new(l).unwrap();
        prop_assert!((s.quality().powi(2) + s.precision().powi(2) - 1.0).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn effect_pairs_complete(l in 1e-9f64..=1.0, axis in 0usize..3) {
        let s = Sharpness::new(l).unwrap();
        let axis = PauliAxis::ALL[axis];
        let sum = effect(axis, Outcome::Plus, s).matrix() + effect(axis, Outcome::Minus, s).matrix();
        prop_assert_eq!(sum, ComplexMatrix::identity2());
    }
}
