mod common;

use catsim::error::BathError;
use catsim::finite_bath::{assemble_generator, evolve_both, evolve_finite, FiniteBathConfig};
use catsim::model::{Branch, SystemParams};
use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn params(omega: f64) -> SystemParams<f64> {
    SystemParams {
        omega_x: 0.0,
        omega_c: 5.0,
        omega,
        phi: std::f64::consts::FRAC_PI_4,
        alpha0: c(10f64.sqrt(), 0.0),
    }
}

/// `exp(A)` by scaling and squaring a degree-18 Taylor series.
fn expm(a: &DMatrix<C>) -> DMatrix<C> {
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * a.nrows() as f64;
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / c(2f64.powi(s), 0.0);
    let n = a.nrows();
    let mut term = DMatrix::<C>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=18 {
        term = &term * &scaled / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

#[test]
fn small_bath_matches_matrix_exponential() {
    let p = params(0.7);
    let bath = FiniteBathConfig {
        coupling_profile: Some(vec![0.3, 0.5, 0.2]),
        ..FiniteBathConfig::uniform(3, 4.0, 6.5, 0.0)
    };
    let times = [0.0, 0.3, 1.7, 6.0, 25.0];
    for branch in Branch::BOTH {
        let series = evolve_finite(&p, &bath, branch, &times).unwrap();
        let g = assemble_generator(&p, &bath, branch).to_dense();
        let gm = DMatrix::from_fn(4, 4, |i, j| g[(i, j)]);
        for (k, &t) in times.iter().enumerate() {
            let u = expm(&(&gm * c(0.0, -t)));
            let want: Vec<C> = (0..4).map(|i| u[(i, 0)] * p.alpha0).collect();
            assert!((series.cavity[k] - want[0]).norm() < 1e-10, "t={t}");
            for m in 0..3 {
                assert!((series.bath[k][m] - want[m + 1]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn full_size_generator_is_hermitian() {
    let bath = FiniteBathConfig::uniform(900, 0.0, 10.0, 0.0125);
    for branch in Branch::BOTH {
        let g = assemble_generator(&params(0.1), &bath, branch);
        assert_eq!(g.dim(), 901);
        assert_eq!(g.hermiticity_defect(), 0.0);
    }
}

#[test]
fn branches_agree_without_dispersive_shift() {
    let bath = FiniteBathConfig::uniform(200, 0.0, 10.0, 0.05);
    let times: Vec<f64> = (0..20).map(|i| i as f64 * 1.5).collect();
    let amps = evolve_both(&params(0.0), &bath, &times).unwrap();
    for k in 0..times.len() {
        assert!((amps.alpha[k].norm() - amps.beta[k].norm()).abs() < 1e-12);
    }
}

#[test]
fn time_composability() {
    let bath = FiniteBathConfig::uniform(150, 0.0, 10.0, 0.05);
    let eig = assemble_generator(&params(0.3), &bath, Branch::Plus).decompose().unwrap();
    let mut v0 = vec![c(0.0, 0.0); 151];
    v0[0] = c(3.0, 0.5);
    v0[17] = c(-0.2, 0.1);
    let (t1, t2) = (4.3, 11.9);
    let stepwise = eig.propagate(&eig.propagate(&v0, t1), t2);
    let direct = eig.propagate(&v0, t1 + t2);
    for (a, b) in stepwise.iter().zip(&direct) {
        assert!((a - b).norm() < 1e-9);
    }
}

#[test]
fn bad_inputs_are_rejected() {
    let bath = FiniteBathConfig::uniform(10, 0.0, 10.0, 0.05);
    assert!(matches!(
        evolve_finite(&params(0.1), &bath, Branch::Plus, &[]),
        Err(BathError::TimeGrid { .. })
    ));
    assert!(matches!(
        evolve_finite(&params(0.1), &bath, Branch::Plus, &[0.5, 1.0]),
        Err(BathError::TimeGrid { .. })
    ));
    let bad = FiniteBathConfig::uniform(10, 3.0, 1.0, 0.05);
    assert!(matches!(evolve_finite(&params(0.1), &bad, Branch::Plus, &[0.0]), Err(BathError::Param(_))));
    let neg = FiniteBathConfig::uniform(10, 0.0, 1.0, -0.05);
    assert!(evolve_finite(&params(0.1), &neg, Branch::Plus, &[0.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_is_conserved(
        n in 1usize..120,
        gk in 0.0..0.3f64,
        omega in 0.0..2.0f64,
        t in proptest::collection::vec(0.0..200.0f64, 1..8),
    ) {
        let mut times = t;
        times.push(0.0);
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let bath = FiniteBathConfig::uniform(n, 0.0, 10.0, gk);
        let s = evolve_finite(&params(omega), &bath, Branch::Minus, &times).unwrap();
        for e in s.excitation() {
            prop_assert!((e - 10.0).abs() < 1e-9);
        }
    }
}
