mod common;

use catsim::coherent::MultimodeLabel;
use catsim::finite_bath::{evolve_both, FiniteBathConfig};
use catsim::model::{apply_probe_pulse, initial_state, Qubit, SystemParams, TwoBranchState};
use common::*;
use proptest::prelude::*;

fn label() -> impl Strategy<Value = C> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| c(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probe_pulse_is_unitary(
        phi in 0.0..=std::f64::consts::FRAC_PI_2,
        w1 in label(), w0 in label(), al in label(), be in label(),
        lam in proptest::collection::vec(label(), 4), chi in proptest::collection::vec(label(), 4),
    ) {
        let (s, co) = phi.sin_cos();
        let state = TwoBranchState {
            weight_1: w1 * s,
            weight_0: w0 * co,
            alpha: al,
            beta: be,
            lambda: MultimodeLabel::from_dense(&lam),
            chi: MultimodeLabel::from_dense(&chi),
            outcome: None,
        };
        let (one, zero) = apply_probe_pulse(&state);
        prop_assert_eq!(one.outcome, Some(Qubit::One));
        prop_assert_eq!(zero.outcome, Some(Qubit::Zero));
        let total = one.norm_sqr().unwrap() + zero.norm_sqr().unwrap();
        let input = state.norm_sqr().unwrap();
        prop_assert!((total - input).abs() < 1e-12 * input.max(1.0));
        prop_assert_eq!(&one.lambda, &state.lambda);
        prop_assert_eq!(&zero.chi, &state.chi);
    }

    #[test]
    fn zero_time_evolution_is_identity(phi in 0.0..=std::f64::consts::FRAC_PI_2, a in label(), n in 1usize..50) {
        let p = SystemParams { omega_x: 0.3, omega_c: 5.0, omega: 0.1, phi, alpha0: a };
        let bath = FiniteBathConfig::uniform(n, 0.0, 10.0, 0.05);
        let amps = evolve_both(&p, &bath, &[0.0]).unwrap();
        let evolved = TwoBranchState::at_slice(&p, &amps, 0);
        let init = initial_state(&p, n);
        prop_assert_eq!(evolved, init);
    }
}
