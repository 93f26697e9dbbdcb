use num_complex::Complex;
use rayon::prelude::*;

use crate::coherent::{encode_from_overlaps, overlap1, CoherentMixture, MultimodeLabel, TwoQubitState};
use crate::error::{AlgebraError, Error};
use crate::linalg::CMat;
use crate::model::{apply_probe_pulse, initial_state, Branch, Qubit, SystemParams};
use crate::scalar::{creal, Real};
use crate::structured::{LinearReservoir, ReservoirMoments};

/// Post-pulse `a|alpha, lambda> + b|beta, chi>` reduced to what the cavity
/// observables need: the two weights, the cavity labels and `<lambda|chi>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatSnapshot<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub bath_overlap: Complex<T>,
}

impl<T: Real> CatSnapshot<T> {
    /// Snapshot at time `t` from reservoir moments, after the probe pulse
    /// with the qubit found in `outcome`.
    pub fn from_moments(params: &SystemParams<T>, m: &ReservoirMoments<T>, t: T, outcome: Qubit) -> Self {
        let mut pre = initial_state(params, 0);
        pre.weight_1 = pre.weight_1 * Complex::from_polar(T::one(), -params.omega_x * t);
        let (one, zero) = apply_probe_pulse(&pre);
        let post = match outcome {
            Qubit::One => one,
            Qubit::Zero => zero,
        };
        let a0 = params.alpha0;
        let n2 = a0.norm_sqr();
        // <L_+ a0 | L_- a0>
        let log = (m.cross.conj() - creal(T::lit(0.5) * (m.occupation[0] + m.occupation[1]))) * n2;
        Self {
            a: post.weight_1,
            b: post.weight_0,
            alpha: m.cavity[0] * a0,
            beta: m.cavity[1] * a0,
            bath_overlap: log.exp(),
        }
    }

    pub fn cavity_state(&self) -> Result<CoherentMixture<T>, AlgebraError> {
        let cross = self.bath_overlap.conj();
        let c = CMat::from_rows(&[
            vec![creal(self.a.norm_sqr()), self.a * self.b.conj() * cross],
            vec![self.a.conj() * self.b * cross.conj(), creal(self.b.norm_sqr())],
        ]);
        CoherentMixture::new(vec![MultimodeLabel::single(self.alpha), MultimodeLabel::single(self.beta)], c)?
            .normalized()
    }

    pub fn two_qubit(&self) -> Result<TwoQubitState<T>, AlgebraError> {
        encode_from_overlaps(self.a, self.b, overlap1(self.alpha, self.beta), self.bath_overlap)
    }
}

/// Which cavity state a trajectory follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajectoryState {
    /// Normalized post-pulse state for one qubit outcome.
    Outcome(Qubit),
    /// A single dispersive branch, which stays a pure coherent state.
    SingleBranch(Branch),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub mean_photons: T,
    pub idempotency_defect: T,
    pub concurrence: T,
}

fn point<T: Real>(
    params: &SystemParams<T>,
    reservoir: &dyn LinearReservoir<T>,
    t: T,
    which: TrajectoryState,
) -> Result<TrajectoryPoint<T>, Error> {
    let m = reservoir.moments(t)?;
    match which {
        TrajectoryState::Outcome(q) => {
            let snap = CatSnapshot::from_moments(params, &m, t, q);
            let rho = snap.cavity_state()?;
            Ok(TrajectoryPoint {
                t,
                mean_photons: rho.mean_photon_number(),
                idempotency_defect: rho.purity_defect()?,
                concurrence: crate::coherent::concurrence(&snap.two_qubit()?),
            })
        }
        TrajectoryState::SingleBranch(b) => Ok(TrajectoryPoint {
            t,
            mean_photons: (m.cavity[b.index()] * params.alpha0).norm_sqr(),
            idempotency_defect: T::zero(),
            concurrence: T::zero(),
        }),
    }
}

/// Cavity observables along a reservoir trajectory.
pub fn trajectory<T: Real>(
    params: &SystemParams<T>,
    reservoir: &dyn LinearReservoir<T>,
    times: &[T],
    which: TrajectoryState,
) -> Result<Vec<TrajectoryPoint<T>>, Error> {
    params.validate()?;
    times.par_iter().map(|&t| point(params, reservoir, t, which)).collect()
}

/// `Gamma(t) = 1 - Tr rho_c^2` for the post-pulse qubit-`|1>` cavity state.
pub fn idempotency_defect_series<T: Real>(
    params: &SystemParams<T>,
    reservoir: &dyn LinearReservoir<T>,
    times: &[T],
) -> Result<Vec<T>, Error> {
    Ok(trajectory(params, reservoir, times, TrajectoryState::Outcome(Qubit::One))?
        .into_iter()
        .map(|p| p.idempotency_defect)
        .collect())
}

/// `<n>(t)` for the post-pulse qubit-`|1>` cavity state.
pub fn mean_photon_series<T: Real>(
    params: &SystemParams<T>,
    reservoir: &dyn LinearReservoir<T>,
    times: &[T],
) -> Result<Vec<T>, Error> {
    Ok(trajectory(params, reservoir, times, TrajectoryState::Outcome(Qubit::One))?
        .into_iter()
        .map(|p| p.mean_photons)
        .collect())
}

/// Cavity-reservoir concurrence of the post-pulse qubit-`|1>` state.
pub fn concurrence_series<T: Real>(
    params: &SystemParams<T>,
    reservoir: &dyn LinearReservoir<T>,
    times: &[T],
) -> Result<Vec<T>, Error> {
    Ok(trajectory(params, reservoir, times, TrajectoryState::Outcome(Qubit::One))?
        .into_iter()
        .map(|p| p.concurrence)
        .collect())
}

/// Indices of strict interior local maxima.
pub fn local_maxima<T: Real>(series: &[T]) -> Vec<usize> {
    (1..series.len().saturating_sub(1))
        .filter(|&i| series[i] > series[i - 1] && series[i] > series[i + 1])
        .collect()
}
