//! Physical parameters, the two-branch state ansatz and the probe pulse.
//!
//! In the dispersive regime the qubit state `|1>` shifts the cavity frequency
//! to `omega_c + omega` and `|0>` to `omega_c - omega`. Starting from a
//! coherent cavity state and a vacuum reservoir, each qubit branch stays a
//! product of coherent states, so the whole state is described by the labels
//! `alpha(t), lambda_k(t)` (branch `|1>`) and `beta(t), chi_k(t)` (branch `|0>`).

use num_complex::Complex;

use crate::coherent::{coherent_overlap, MultimodeLabel};
use crate::error::{AlgebraError, ParamError};
use crate::scalar::{cplx, creal, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams<T> {
    pub omega_x: T,
    pub omega_c: T,
    pub omega: T,
    pub phi: T,
    pub alpha0: Complex<T>,
}

impl<T: Real> SystemParams<T> {
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [
            ("omega_x", self.omega_x),
            ("omega_c", self.omega_c),
            ("omega", self.omega),
            ("phi", self.phi),
            ("alpha0", self.alpha0.re),
            ("alpha0", self.alpha0.im),
        ] {
            if !v.is_finite() {
                return Err(ParamError::new(name, "must be finite"));
            }
        }
        if self.omega < T::zero() {
            return Err(ParamError::new("omega", format!("must be non-negative, got {}", self.omega)));
        }
        let slack = T::epsilon() * T::lit(16.0);
        if self.phi < -slack || self.phi > T::FRAC_PI_2() + slack {
            return Err(ParamError::new("phi", format!("must lie in [0, pi/2], got {}", self.phi)));
        }
        Ok(())
    }

    /// Cavity frequency in the qubit-`|1>` branch.
    pub fn delta_plus(&self) -> T {
        self.omega_c + self.omega
    }

    /// Cavity frequency in the qubit-`|0>` branch.
    pub fn delta_minus(&self) -> T {
        self.omega_c - self.omega
    }

    pub fn mean_photons(&self) -> T {
        self.alpha0.norm_sqr()
    }
}

/// Qubit branch: `Plus` is qubit `|1>` (labels alpha, lambda), `Minus` is
/// qubit `|0>` (labels beta, chi).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    /// `+1` or `-1`.
    pub fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }

    pub fn detuning<T: Real>(self, params: &SystemParams<T>) -> T {
        match self {
            Branch::Plus => params.delta_plus(),
            Branch::Minus => params.delta_minus(),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }
}

/// Cavity and reservoir labels of one branch over a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSeries<T> {
    pub branch: Branch,
    pub times: Vec<T>,
    pub cavity: Vec<Complex<T>>,
    /// `bath[i][k]`: mode `k` at `times[i]`.
    pub bath: Vec<Vec<Complex<T>>>,
}

impl<T: Real> BranchSeries<T> {
    /// `|cavity|^2 + sum_k |bath_k|^2` per time point.
    pub fn excitation(&self) -> Vec<T> {
        self.cavity
            .iter()
            .zip(&self.bath)
            .map(|(c, b)| c.norm_sqr() + b.iter().map(|z| z.norm_sqr()).sum::<T>())
            .collect()
    }
}

/// Time-indexed labels for both branches.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchAmplitudes<T> {
    pub times: Vec<T>,
    pub alpha: Vec<Complex<T>>,
    pub beta: Vec<Complex<T>>,
    pub lambda: Vec<Vec<Complex<T>>>,
    pub chi: Vec<Vec<Complex<T>>>,
}

impl<T: Real> BranchAmplitudes<T> {
    /// Combines two branch series that share a time grid.
    pub fn from_series(plus: BranchSeries<T>, minus: BranchSeries<T>) -> Self {
        assert_eq!(plus.times.len(), minus.times.len(), "branch time grids differ");
        Self {
            times: plus.times,
            alpha: plus.cavity,
            beta: minus.cavity,
            lambda: plus.bath,
            chi: minus.bath,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.lambda.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Which qubit basis state the branch weights refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    One,
    Zero,
}

/// `weight_1 |1>|alpha, lambda> + weight_0 |0>|beta, chi>` before the pulse,
/// or after the pulse with the qubit projected onto `outcome`:
/// `weight_1 |alpha, lambda> + weight_0 |beta, chi>`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoBranchState<T> {
    pub weight_1: Complex<T>,
    pub weight_0: Complex<T>,
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub lambda: MultimodeLabel<T>,
    pub chi: MultimodeLabel<T>,
    pub outcome: Option<Qubit>,
}

/// The state at `t = 0`: `(sin phi |1> + cos phi |0>) |alpha0> |0...0>`.
pub fn initial_state<T: Real>(params: &SystemParams<T>, n_modes: usize) -> TwoBranchState<T> {
    let (s, c) = params.phi.sin_cos();
    TwoBranchState {
        weight_1: creal(s),
        weight_0: creal(c),
        alpha: params.alpha0,
        beta: params.alpha0,
        lambda: MultimodeLabel::vacuum(n_modes),
        chi: MultimodeLabel::vacuum(n_modes),
        outcome: None,
    }
}

impl<T: Real> TwoBranchState<T> {
    /// Pre-pulse state at time slice `i`. The qubit frequency `omega_x`
    /// enters only as a relative phase on the `|1>` branch.
    pub fn at_slice(params: &SystemParams<T>, amps: &BranchAmplitudes<T>, i: usize) -> Self {
        let t = amps.times[i];
        let (s, c) = params.phi.sin_cos();
        Self {
            weight_1: Complex::from_polar(s, -params.omega_x * t),
            weight_0: creal(c),
            alpha: amps.alpha[i],
            beta: amps.beta[i],
            lambda: MultimodeLabel::from_dense(&amps.lambda[i]),
            chi: MultimodeLabel::from_dense(&amps.chi[i]),
            outcome: None,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.lambda.n_modes()
    }

    /// `<alpha, lambda | beta, chi>`
    pub fn branch_overlap(&self) -> Result<Complex<T>, AlgebraError> {
        let cav = coherent_overlap(
            &MultimodeLabel::single(self.alpha),
            &MultimodeLabel::single(self.beta),
        )?;
        Ok(cav * coherent_overlap(&self.lambda, &self.chi)?)
    }

    /// `<psi|psi>`; the cross term only appears once the qubit is projected.
    pub fn norm_sqr(&self) -> Result<T, AlgebraError> {
        let diag = self.weight_1.norm_sqr() + self.weight_0.norm_sqr();
        match self.outcome {
            None => Ok(diag),
            Some(_) => {
                let s = self.branch_overlap()?;
                Ok(diag + T::lit(2.0) * (self.weight_1.conj() * self.weight_0 * s).re)
            }
        }
    }
}

/// Ideal `pi/2` rotation of the qubit followed by projection onto `|1>` and
/// `|0>`. Returns `(outcome_1, outcome_0)`; bath labels are untouched.
pub fn apply_probe_pulse<T: Real>(state: &TwoBranchState<T>) -> (TwoBranchState<T>, TwoBranchState<T>) {
    let h = creal(T::FRAC_1_SQRT_2());
    let mi = cplx(T::zero(), -T::one());
    let one = TwoBranchState {
        weight_1: state.weight_1 * h,
        weight_0: state.weight_0 * h * mi,
        outcome: Some(Qubit::One),
        ..state.clone()
    };
    let zero = TwoBranchState {
        weight_1: state.weight_1 * h * mi,
        weight_0: state.weight_0 * h,
        outcome: Some(Qubit::Zero),
        ..state.clone()
    };
    (one, zero)
}
