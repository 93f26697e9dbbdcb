use num_complex::Complex;
use rayon::prelude::*;

use crate::coherent::{overlap1, trace_distance, CoherentMixture, MultimodeLabel};
use crate::error::{AlgebraError, Error};
use crate::linalg::CMat;
use crate::model::Branch;
use crate::scalar::{creal, Real};
use crate::structured::{LinearReservoir, ReservoirMoments};

/// Largest overlap tolerated between the two members of a pair.
pub const PAIR_ORTHOGONALITY_TOL: f64 = 1e-8;

/// Trace-distance increments at or below this size are treated as noise.
pub const INCREMENT_FLOOR: f64 = 1e-10;

/// Two orthogonal cavity states, each a superposition over `|u>` and `|-u>`.
#[derive(Clone, Debug, PartialEq)]
pub struct StatePair<T> {
    pub u: Complex<T>,
    pub phase: T,
    pub first: [Complex<T>; 2],
    pub second: [Complex<T>; 2],
}

fn inner<T: Real>(u: Complex<T>, a: &[Complex<T>; 2], b: &[Complex<T>; 2]) -> Complex<T> {
    let s = overlap1(u, -u);
    let k = [[creal(T::one()), s], [s.conj(), creal(T::one())]];
    let mut acc = creal(T::zero());
    for i in 0..2 {
        for j in 0..2 {
            acc = acc + a[i].conj() * k[i][j] * b[j];
        }
    }
    acc
}

fn normalize<T: Real>(u: Complex<T>, c: [Complex<T>; 2]) -> Result<[Complex<T>; 2], AlgebraError> {
    let n = inner(u, &c, &c).re;
    if !(n > T::epsilon()) {
        return Err(AlgebraError::ZeroNorm { value: n.to_f64().unwrap_or(f64::NAN) });
    }
    let s = T::one() / n.sqrt();
    Ok([c[0] * s, c[1] * s])
}

impl<T: Real> StatePair<T> {
    /// Checks orthogonality of a user-supplied pair.
    pub fn new(u: Complex<T>, phase: T, first: [Complex<T>; 2], second: [Complex<T>; 2]) -> Result<Self, AlgebraError> {
        let first = normalize(u, first)?;
        let second = normalize(u, second)?;
        let ov = inner(u, &first, &second).norm();
        if ov > T::lit(PAIR_ORTHOGONALITY_TOL) {
            return Err(AlgebraError::NonOrthogonalPair { overlap: ov.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { u, phase, first, second })
    }

    /// `(|u> + e^{i theta}|-u>)` and its orthogonal partner built from
    /// `(|u> - e^{i theta}|-u>)` by Gram–Schmidt.
    pub fn cat(photon_number: T, phase: T) -> Result<Self, AlgebraError> {
        let u = creal(photon_number.max(T::zero()).sqrt());
        let e = Complex::from_polar(T::one(), phase);
        let first = normalize(u, [creal(T::one()), e])?;
        let raw = [creal(T::one()), -e];
        let proj = inner(u, &first, &raw);
        let second = normalize(u, [raw[0] - first[0] * proj, raw[1] - first[1] * proj])?;
        Self::new(u, phase, first, second)
    }
}

/// Cat-state pairs sharing one photon number, one per phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PairFamily<T> {
    pub photon_number: T,
    pub phases: Vec<T>,
}

impl<T: Real> PairFamily<T> {
    /// Phases `0, pi/2, pi`.
    pub fn standard(photon_number: T) -> Self {
        Self { photon_number, phases: vec![T::zero(), T::FRAC_PI_2(), T::PI()] }
    }

    pub fn pairs(&self) -> Result<Vec<StatePair<T>>, AlgebraError> {
        self.phases.iter().map(|&th| StatePair::cat(self.photon_number, th)).collect()
    }
}

/// Qubit ⊗ cavity state at time `t` for cavity coefficients `c` over
/// `|u>, |-u>`, starting with the qubit in `(|1> + |0>)/sqrt 2`.
///
/// Labels are `(q, A_q u_i)` with the qubit branch stored as the label sector.
pub fn evolved_state<T: Real>(
    m: &ReservoirMoments<T>,
    u: Complex<T>,
    c: &[Complex<T>; 2],
) -> Result<CoherentMixture<T>, AlgebraError> {
    let us = [u, -u];
    let mut labels = Vec::with_capacity(4);
    let mut tags = Vec::with_capacity(4);
    for q in Branch::BOTH {
        for (i, &ui) in us.iter().enumerate() {
            labels.push(MultimodeLabel::single(m.cavity[q.index()] * ui).with_sector(q.index() as u32));
            tags.push((q, i));
        }
    }
    let half = T::lit(0.5);
    let coeff = CMat::from_fn(4, 4, |a, b| {
        let (qa, i) = tags[a];
        let (qb, j) = tags[b];
        c[i] * c[j].conj() * m.bath_overlap(us[i], qa, us[j], qb) * half
    });
    CoherentMixture::new(labels, coeff)?.normalized()
}

/// `D(t)` between the evolved members of `pair`.
pub fn distance_series<T: Real>(moments: &[ReservoirMoments<T>], pair: &StatePair<T>) -> Result<Vec<T>, AlgebraError> {
    moments
        .iter()
        .map(|m| {
            let a = evolved_state(m, pair.u, &pair.first)?;
            let b = evolved_state(m, pair.u, &pair.second)?;
            trace_distance(&a, &b)
        })
        .collect()
}

/// Sum of positive increments of `series`, ignoring increments at or below
/// [`INCREMENT_FLOOR`].
pub fn backflow<T: Real>(series: &[T]) -> T {
    let floor = T::lit(INCREMENT_FLOOR);
    series
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > floor)
        .fold(T::zero(), |acc, d| acc + d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlpValue<T> {
    pub measure: T,
    pub best_phase: T,
}

/// `N` maximized over the family for one reservoir.
pub fn blp_measure<T: Real>(
    reservoir: &dyn LinearReservoir<T>,
    family: &PairFamily<T>,
    times: &[T],
) -> Result<BlpValue<T>, Error> {
    let moments: Vec<ReservoirMoments<T>> =
        times.par_iter().map(|&t| reservoir.moments(t)).collect::<Result<_, _>>()?;
    blp_from_moments(&moments, family)
}

/// [`blp_measure`] on precomputed moments, so several families can share
/// one pass over the reservoir.
pub fn blp_from_moments<T: Real>(moments: &[ReservoirMoments<T>], family: &PairFamily<T>) -> Result<BlpValue<T>, Error> {
    let pairs = family.pairs()?;
    let values: Vec<T> = pairs
        .par_iter()
        .map(|p| distance_series(moments, p).map(|d| backflow(&d)))
        .collect::<Result<_, _>>()?;
    let mut best = BlpValue { measure: T::zero(), best_phase: family.phases.first().copied().unwrap_or(T::zero()) };
    for (v, p) in values.iter().zip(&pairs) {
        if *v > best.measure {
            best = BlpValue { measure: *v, best_phase: p.phase };
        }
    }
    Ok(best)
}

/// `N` against `Lambda / gamma` for one photon number.
#[derive(Clone, Debug, PartialEq)]
pub struct BlpResult<T> {
    pub lambda_over_gamma: Vec<T>,
    pub measure: Vec<T>,
    pub best_phase: Vec<T>,
    pub pair_family: PairFamily<T>,
}

/// Evaluates [`blp_measure`] for each reservoir, labelled by `lambda_over_gamma`.
pub fn blp_scan<T: Real, R: LinearReservoir<T>>(
    reservoirs: &[(T, R)],
    family: &PairFamily<T>,
    times: &[T],
) -> Result<BlpResult<T>, Error> {
    let mut out = BlpResult {
        lambda_over_gamma: Vec::new(),
        measure: Vec::new(),
        best_phase: Vec::new(),
        pair_family: family.clone(),
    };
    for (x, r) in reservoirs {
        let v = blp_measure(r, family, times)?;
        out.lambda_over_gamma.push(*x);
        out.measure.push(v.measure);
        out.best_phase.push(v.best_phase);
    }
    Ok(out)
}
