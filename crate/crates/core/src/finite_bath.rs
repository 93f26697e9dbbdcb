//! Exact propagation for a cavity coupled to `N` discrete oscillators.
//!
//! Each branch obeys `i d/dt v = G v` with `v = (alpha, lambda_1..lambda_N)`
//! and an arrowhead generator `G`. One eigendecomposition per branch gives
//! `v(t)` at every requested time.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{BathError, ParamError};
use crate::linalg::{Arrowhead, ArrowheadEigen, CMat};
use crate::model::{Branch, BranchAmplitudes, BranchSeries, SystemParams};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteBathConfig<T> {
    pub n_modes: usize,
    pub omega_min: T,
    pub omega_max: T,
    pub gamma_k: T,
    /// Per-mode couplings replacing the uniform `gamma_k` when present.
    pub coupling_profile: Option<Vec<T>>,
    pub seed: u64,
    pub realizations: usize,
}

impl<T: Real> FiniteBathConfig<T> {
    pub fn uniform(n_modes: usize, omega_min: T, omega_max: T, gamma_k: T) -> Self {
        Self {
            n_modes,
            omega_min,
            omega_max,
            gamma_k,
            coupling_profile: None,
            seed: 0,
            realizations: 100,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n_modes < 1 {
            return Err(ParamError::new("n_modes", "must be at least 1"));
        }
        if !(self.omega_min.is_finite() && self.omega_max.is_finite()) || !(self.omega_min < self.omega_max) {
            return Err(ParamError::new("omega_min", "need finite omega_min < omega_max"));
        }
        if !(self.gamma_k >= T::zero()) || !self.gamma_k.is_finite() {
            return Err(ParamError::new("gamma_k", "must be finite and non-negative"));
        }
        if let Some(profile) = &self.coupling_profile {
            if profile.len() != self.n_modes {
                return Err(ParamError::new(
                    "coupling_profile",
                    format!("has {} entries for {} modes", profile.len(), self.n_modes),
                ));
            }
            if profile.iter().any(|g| !g.is_finite()) {
                return Err(ParamError::new("coupling_profile", "entries must be finite"));
            }
        }
        Ok(())
    }

    /// Uniform grid including both endpoints.
    pub fn frequencies(&self) -> Vec<T> {
        if self.n_modes == 1 {
            return vec![self.omega_min];
        }
        let step = (self.omega_max - self.omega_min) / T::from_usize_lossy(self.n_modes - 1);
        (0..self.n_modes)
            .map(|k| self.omega_min + step * T::from_usize_lossy(k))
            .collect()
    }

    pub fn couplings(&self) -> Vec<T> {
        match &self.coupling_profile {
            Some(p) => p.clone(),
            None => vec![self.gamma_k; self.n_modes],
        }
    }
}

/// Real symmetric arrowhead generator of one branch.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchGenerator<T> {
    pub branch: Branch,
    pub arrow: Arrowhead<T>,
}

impl<T: Real> BranchGenerator<T> {
    pub fn from_parts(branch: Branch, detuning: T, frequencies: Vec<T>, couplings: Vec<T>) -> Self {
        Self { branch, arrow: Arrowhead { apex: detuning, poles: frequencies, border: couplings } }
    }

    pub fn dim(&self) -> usize {
        self.arrow.dim()
    }

    pub fn to_dense(&self) -> CMat<T> {
        self.arrow.to_dense()
    }

    pub fn hermiticity_defect(&self) -> T {
        self.to_dense().hermiticity_defect()
    }

    pub fn decompose(&self) -> Result<ArrowheadEigen<T>, BathError> {
        self.arrow.eigen().map_err(|source| BathError::Eigen { dim: self.dim(), source })
    }
}

pub fn assemble_generator<T: Real>(
    params: &SystemParams<T>,
    bath: &FiniteBathConfig<T>,
    branch: Branch,
) -> BranchGenerator<T> {
    BranchGenerator::from_parts(branch, branch.detuning(params), bath.frequencies(), bath.couplings())
}

pub(crate) fn check_times<T: Real>(times: &[T]) -> Result<(), BathError> {
    match times.first() {
        None => return Err(BathError::TimeGrid { reason: "empty".into() }),
        Some(&t0) if t0 != T::zero() => {
            return Err(BathError::TimeGrid { reason: format!("first time is {t0}") })
        }
        _ => {}
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(BathError::TimeGrid { reason: "non-finite entry".into() });
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(BathError::TimeGrid { reason: "not sorted".into() });
    }
    Ok(())
}

/// Propagates `v(0) = (amp0, 0, ..., 0)` with a decomposed generator.
pub fn propagate_series<T: Real>(
    branch: Branch,
    eigen: &ArrowheadEigen<T>,
    amp0: Complex<T>,
    times: &[T],
) -> BranchSeries<T> {
    let states: Vec<Vec<Complex<T>>> = times
        .par_iter()
        .map(|&t| eigen.propagate_apex(t).into_iter().map(|z| z * amp0).collect())
        .collect();
    let mut cavity = Vec::with_capacity(states.len());
    let mut bath = Vec::with_capacity(states.len());
    for mut v in states {
        cavity.push(v[0]);
        v.remove(0);
        bath.push(v);
    }
    BranchSeries { branch, times: times.to_vec(), cavity, bath }
}

/// `v(t) = exp(-i G t) v(0)` for one branch at every time in `times`.
pub fn evolve_finite<T: Real>(
    params: &SystemParams<T>,
    bath: &FiniteBathConfig<T>,
    branch: Branch,
    times: &[T],
) -> Result<BranchSeries<T>, BathError> {
    params.validate()?;
    bath.validate()?;
    check_times(times)?;
    let eigen = assemble_generator(params, bath, branch).decompose()?;
    Ok(propagate_series(branch, &eigen, params.alpha0, times))
}

/// Both branches on a shared time grid.
pub fn evolve_both<T: Real>(
    params: &SystemParams<T>,
    bath: &FiniteBathConfig<T>,
    times: &[T],
) -> Result<BranchAmplitudes<T>, BathError> {
    let plus = evolve_finite(params, bath, Branch::Plus, times)?;
    let minus = evolve_finite(params, bath, Branch::Minus, times)?;
    Ok(BranchAmplitudes::from_series(plus, minus))
}
