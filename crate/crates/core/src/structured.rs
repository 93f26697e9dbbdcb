//! Cavity leaking into a Lorentzian continuum centred on the cavity frequency.
//!
//! With `J(w) = gamma Lambda^2 / (2 pi ((w - omega_c)^2 + Lambda^2))` the
//! memory kernel seen by the `|1>` branch is `(gamma Lambda / 2) e^{-M s}` with
//! `M = Lambda - i omega`, and the amplitude equations close under a Laplace
//! transform. The `|0>` branch uses `M_beta = Lambda + i omega`.
//!
//! Amplitudes marked "rotating" are measured in the frame of their own free
//! frequency: the cavity in branch `q` at `omega_c + q omega`, mode `k` at `w_k`.

use num_complex::Complex;

use crate::error::{BathError, ParamError};
use crate::model::Branch;
use crate::quadrature::integrate;
use crate::scalar::{cplx, creal, mul_neg_i, sinhc, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct LorentzParams<T> {
    pub gamma: T,
    pub lambda_width: T,
    pub omega: T,
}

impl<T: Real> LorentzParams<T> {
    pub fn new(gamma: T, lambda_width: T, omega: T) -> Result<Self, ParamError> {
        let p = Self { gamma, lambda_width, omega };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.gamma > T::zero()) || !self.gamma.is_finite() {
            return Err(ParamError::new("gamma", "must be positive and finite"));
        }
        if !(self.lambda_width > T::zero()) || !self.lambda_width.is_finite() {
            return Err(ParamError::new("lambda_width", "must be positive and finite"));
        }
        if !self.omega.is_finite() {
            return Err(ParamError::new("omega", "must be finite"));
        }
        Ok(())
    }

    /// `Lambda - i omega` for `Plus`, `Lambda + i omega` for `Minus`.
    pub fn m(&self, branch: Branch) -> Complex<T> {
        cplx(self.lambda_width, -branch.sign::<T>() * self.omega)
    }

    /// `sqrt(M^2 - 2 Lambda gamma)`, principal branch.
    pub fn eta(&self, branch: Branch) -> Complex<T> {
        let m = self.m(branch);
        (m * m - creal(T::lit(2.0) * self.lambda_width * self.gamma)).sqrt()
    }

    /// Spectral density at `offset = w - omega_c`.
    pub fn spectral_density(&self, offset: T) -> T {
        let l = self.lambda_width;
        self.gamma * l * l / (T::lit(2.0) * T::PI() * (offset * offset + l * l))
    }

    /// `integral J = gamma Lambda / 2`.
    pub fn total_weight(&self) -> T {
        self.gamma * self.lambda_width * T::lit(0.5)
    }

    /// Wideband decay rate `gamma / 2`.
    pub fn markov_kappa(&self) -> T {
        self.gamma * T::lit(0.5)
    }
}

/// `f(s) = (gamma Lambda / 2) e^{-M s}` for the `|1>` branch.
pub fn memory_kernel<T: Real>(dt: T, p: &LorentzParams<T>) -> Complex<T> {
    (-p.m(Branch::Plus) * dt).exp() * p.total_weight()
}

/// Unit-amplitude rotating cavity factor
/// `[cosh(eta t/2) + M sinh(eta t/2)/eta] e^{-M t/2}`.
pub fn branch_factor<T: Real>(t: T, p: &LorentzParams<T>, branch: Branch) -> Complex<T> {
    let m = p.m(branch);
    let eta = p.eta(branch);
    let half = T::lit(0.5) * t;
    let arg = eta * half;
    (arg.cosh() + m * sinhc(arg) * half) * (-m * half).exp()
}

/// Rotating-frame `alpha(t)`; the lab frame adds `e^{-i (omega_c + omega) t}`.
pub fn alpha_structured<T: Real>(t: T, alpha0: Complex<T>, p: &LorentzParams<T>) -> Complex<T> {
    alpha0 * branch_factor(t, p, Branch::Plus)
}

/// Rotating-frame `beta(t)`; the lab frame adds `e^{-i (omega_c - omega) t}`.
pub fn beta_structured<T: Real>(t: T, beta0: Complex<T>, p: &LorentzParams<T>) -> Complex<T> {
    beta0 * branch_factor(t, p, Branch::Minus)
}

/// Markovian cavity decay `alpha0 e^{-kappa t}` in the rotating frame.
pub fn alpha_markov<T: Real>(t: T, alpha0: Complex<T>, kappa: T) -> Complex<T> {
    alpha0 * (-kappa * t).exp()
}

/// `z e^{-i w t}`
pub fn to_lab_frame<T: Real>(z: Complex<T>, w: T, t: T) -> Complex<T> {
    z * Complex::from_polar(T::one(), -w * t)
}

/// Time-dependent pieces shared by every mode of one branch.
struct ModeEvaluator<T> {
    t: T,
    m: Complex<T>,
    eta: Complex<T>,
    cosh: Complex<T>,
    /// `sinh(eta t/2) / eta`
    sinh_over_eta: Complex<T>,
    params: LorentzParams<T>,
    branch: Branch,
}

impl<T: Real> ModeEvaluator<T> {
    fn new(t: T, p: &LorentzParams<T>, branch: Branch) -> Self {
        let eta = p.eta(branch);
        let half = T::lit(0.5) * t;
        let arg = eta * half;
        Self {
            t,
            m: p.m(branch),
            eta,
            cosh: arg.cosh(),
            sinh_over_eta: sinhc(arg) * half,
            params: p.clone(),
            branch,
        }
    }

    /// Rotating reservoir amplitude for unit initial cavity amplitude.
    /// `delta` is the branch cavity frequency minus the mode frequency.
    fn eval(&self, delta: T, gamma_k: T) -> Result<Complex<T>, BathError> {
        if self.t == T::zero() || gamma_k == T::zero() {
            return Ok(creal(T::zero()));
        }
        let two = T::lit(2.0);
        let x = -(self.m * T::lit(0.5) + cplx(T::zero(), delta));
        let eta2 = self.eta * self.eta;
        let den = x * x * T::lit(4.0) - eta2;
        let scale = (x.norm_sqr() * T::lit(4.0)).max(eta2.norm()).max(T::min_positive_value());
        if den.norm() < T::lit(1e-5) * scale {
            return self.eval_quadrature(delta, gamma_k);
        }
        let ext = (x * self.t).exp();
        let mm2x = self.m - x * two;
        // closed form with one power of eta cancelled between numerator and
        // denominator, which removes the eta -> 0 singularity
        let num = ext * mm2x * self.cosh * two
            - (self.m * x - eta2 * T::lit(0.5)) * ext * self.sinh_over_eta * T::lit(4.0)
            - mm2x * two;
        Ok(cplx(T::zero(), gamma_k) * num / den)
    }

    /// `-i gamma_k int_0^t e^{-i delta s} alpha~(s) ds`
    fn eval_quadrature(&self, delta: T, gamma_k: T) -> Result<Complex<T>, BathError> {
        let p = &self.params;
        let branch = self.branch;
        let val = integrate(
            |s: T| Complex::from_polar(T::one(), -delta * s) * branch_factor(s, p, branch),
            T::zero(),
            self.t,
            T::lit(1e-13).max(T::epsilon() * T::lit(64.0)),
            T::lit(1e-12).max(T::epsilon() * T::lit(64.0)),
        )?;
        Ok(mul_neg_i(val) * gamma_k)
    }
}

/// Rotating reservoir amplitude `lambda~_k(t)` for cavity frequency
/// `omega_c + omega`. The lab frame adds `e^{-i omega_k t}`.
pub fn lambda_structured<T: Real>(
    t: T,
    omega_k: T,
    alpha0: Complex<T>,
    gamma_k: T,
    p: &LorentzParams<T>,
    omega_c: T,
) -> Result<Complex<T>, BathError> {
    let delta = omega_c + p.omega - omega_k;
    Ok(ModeEvaluator::new(t, p, Branch::Plus).eval(delta, gamma_k)? * alpha0)
}

/// Rotating reservoir amplitude `chi~_k(t)` of the `|0>` branch.
pub fn chi_structured<T: Real>(
    t: T,
    omega_k: T,
    beta0: Complex<T>,
    gamma_k: T,
    p: &LorentzParams<T>,
    omega_c: T,
) -> Result<Complex<T>, BathError> {
    let delta = omega_c - p.omega - omega_k;
    Ok(ModeEvaluator::new(t, p, Branch::Minus).eval(delta, gamma_k)? * beta0)
}

/// Same as [`lambda_structured`] but always by quadrature.
pub fn lambda_by_quadrature<T: Real>(
    t: T,
    omega_k: T,
    alpha0: Complex<T>,
    gamma_k: T,
    p: &LorentzParams<T>,
    omega_c: T,
) -> Result<Complex<T>, BathError> {
    let delta = omega_c + p.omega - omega_k;
    Ok(ModeEvaluator::new(t, p, Branch::Plus).eval_quadrature(delta, gamma_k)? * alpha0)
}

/// Minimum fraction of the Lorentzian weight a grid must capture.
pub const MIN_COVERAGE: f64 = 0.95;

/// Midpoint discretization of the Lorentzian on `[c - W, c + W]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumGrid<T> {
    pub center: T,
    pub half_width: T,
    pub frequencies: Vec<T>,
    pub couplings: Vec<T>,
    pub spacing: T,
    /// `sum_k gamma_k^2 / integral J`.
    pub coverage: T,
}

impl<T: Real> ContinuumGrid<T> {
    pub fn new(p: &LorentzParams<T>, center: T, n_modes: usize, half_width: T) -> Result<Self, ParamError> {
        p.validate()?;
        if n_modes == 0 {
            return Err(ParamError::new("grid_modes", "must be at least 1"));
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(ParamError::new("half_width", "must be positive and finite"));
        }
        let spacing = T::lit(2.0) * half_width / T::from_usize_lossy(n_modes);
        let mut frequencies = Vec::with_capacity(n_modes);
        let mut couplings = Vec::with_capacity(n_modes);
        let mut weight = T::zero();
        for k in 0..n_modes {
            let offset = -half_width + spacing * (T::from_usize_lossy(k) + T::lit(0.5));
            let g2 = p.spectral_density(offset) * spacing;
            weight = weight + g2;
            frequencies.push(center + offset);
            couplings.push(g2.sqrt());
        }
        Ok(Self {
            center,
            half_width,
            frequencies,
            couplings,
            spacing,
            coverage: weight / p.total_weight(),
        })
    }

    /// 4000 modes over `W = 50 Lambda`.
    pub fn standard(p: &LorentzParams<T>, center: T) -> Result<Self, ParamError> {
        Self::new(p, center, 4000, T::lit(50.0) * p.lambda_width)
    }

    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn require_coverage(&self) -> Result<(), BathError> {
        if self.coverage < T::lit(MIN_COVERAGE) {
            return Err(BathError::GridResolution {
                coverage: self.coverage.to_f64().unwrap_or(f64::NAN),
                required: MIN_COVERAGE,
            });
        }
        Ok(())
    }

    /// `sum_k gamma_k^2 e^{i (cavity_freq - w_k) s}`.
    pub fn discrete_kernel(&self, s: T, cavity_freq: T) -> Complex<T> {
        self.frequencies
            .iter()
            .zip(&self.couplings)
            .fold(creal(T::zero()), |acc, (&w, &g)| {
                acc + Complex::from_polar(g * g, (cavity_freq - w) * s)
            })
    }

    /// Rotating reservoir amplitudes of one branch for initial cavity
    /// amplitude `amp0`. The cavity frequency is `center +/- omega`.
    pub fn reservoir_amplitudes(
        &self,
        t: T,
        p: &LorentzParams<T>,
        branch: Branch,
        amp0: Complex<T>,
    ) -> Result<Vec<Complex<T>>, BathError> {
        let ev = ModeEvaluator::new(t, p, branch);
        let cav = self.center + branch.sign::<T>() * p.omega;
        self.frequencies
            .iter()
            .zip(&self.couplings)
            .map(|(&w, &g)| ev.eval(cav - w, g).map(|z| z * amp0))
            .collect()
    }
}

/// `<lambda(t)|chi(t)>` summed over the grid modes.
pub fn reservoir_overlap<T: Real>(
    t: T,
    grid: &ContinuumGrid<T>,
    p: &LorentzParams<T>,
    alpha0: Complex<T>,
    beta0: Complex<T>,
) -> Result<Complex<T>, BathError> {
    grid.require_coverage()?;
    let lam = grid.reservoir_amplitudes(t, p, Branch::Plus, alpha0)?;
    let chi = grid.reservoir_amplitudes(t, p, Branch::Minus, beta0)?;
    let half = T::lit(0.5);
    let e = lam.iter().zip(&chi).fold(creal(T::zero()), |acc, (l, c)| {
        acc + c * l.conj() - creal(half * (l.norm_sqr() + c.norm_sqr()))
    });
    Ok(e.exp())
}

/// Everything a linear cavity + reservoir evolution contributes to
/// coherent-label algebra, for unit initial cavity amplitude.
///
/// Cavity factors are in the frame rotating at `omega_c`. Reservoir moments
/// are frame independent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservoirMoments<T> {
    /// `A_q(t)`, indexed by [`Branch::index`].
    pub cavity: [Complex<T>; 2],
    /// `n_q = sum_k |L_{q,k}|^2`.
    pub occupation: [T; 2],
    /// `P_{+-} = sum_k L_{+,k} conj(L_{-,k})`.
    pub cross: Complex<T>,
}

impl<T: Real> ReservoirMoments<T> {
    /// `P_{q q'} = sum_k L_{q,k} conj(L_{q',k})`.
    pub fn p(&self, q: Branch, q2: Branch) -> Complex<T> {
        match (q, q2) {
            (Branch::Plus, Branch::Plus) => creal(self.occupation[0]),
            (Branch::Minus, Branch::Minus) => creal(self.occupation[1]),
            (Branch::Plus, Branch::Minus) => self.cross,
            (Branch::Minus, Branch::Plus) => self.cross.conj(),
        }
    }

    /// `<L_{qj} u_j | L_{qi} u_i>`: overlap of the reservoir states produced
    /// from cavity amplitudes `u_i` (branch `qi`) and `u_j` (branch `qj`).
    pub fn bath_overlap(&self, u_i: Complex<T>, q_i: Branch, u_j: Complex<T>, q_j: Branch) -> Complex<T> {
        let half = T::lit(0.5);
        let e = u_j.conj() * u_i * self.p(q_i, q_j)
            - creal(half * (u_i.norm_sqr() * self.p(q_i, q_i).re + u_j.norm_sqr() * self.p(q_j, q_j).re));
        e.exp()
    }
}

/// A reservoir whose effect on the cavity is linear in the initial amplitude.
pub trait LinearReservoir<T: Real>: Sync {
    fn moments(&self, t: T) -> Result<ReservoirMoments<T>, BathError>;
    fn label(&self) -> String;
}

/// Lorentzian continuum evaluated on a [`ContinuumGrid`].
#[derive(Clone, Debug)]
pub struct LorentzianReservoir<T> {
    pub params: LorentzParams<T>,
    pub grid: ContinuumGrid<T>,
}

impl<T: Real> LorentzianReservoir<T> {
    pub fn new(params: LorentzParams<T>, grid: ContinuumGrid<T>) -> Result<Self, BathError> {
        params.validate()?;
        grid.require_coverage()?;
        Ok(Self { params, grid })
    }
}

impl<T: Real> LinearReservoir<T> for LorentzianReservoir<T> {
    fn moments(&self, t: T) -> Result<ReservoirMoments<T>, BathError> {
        let one = creal(T::one());
        if t == T::zero() {
            return Ok(ReservoirMoments { cavity: [one, one], occupation: [T::zero(); 2], cross: creal(T::zero()) });
        }
        let lp = self.grid.reservoir_amplitudes(t, &self.params, Branch::Plus, one)?;
        let lm = self.grid.reservoir_amplitudes(t, &self.params, Branch::Minus, one)?;
        let mut occupation = [T::zero(); 2];
        let mut cross = creal(T::zero());
        for (a, b) in lp.iter().zip(&lm) {
            occupation[0] = occupation[0] + a.norm_sqr();
            occupation[1] = occupation[1] + b.norm_sqr();
            cross = cross + a * b.conj();
        }
        let w = self.params.omega;
        let cavity = [
            to_lab_frame(branch_factor(t, &self.params, Branch::Plus), w, t),
            to_lab_frame(branch_factor(t, &self.params, Branch::Minus), -w, t),
        ];
        Ok(ReservoirMoments { cavity, occupation, cross })
    }

    fn label(&self) -> String {
        format!("lambda_{}", self.params.lambda_width / self.params.gamma)
    }
}

/// Memoryless decay at rate `kappa` with dispersive shift `omega`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovReservoir<T> {
    pub kappa: T,
    pub omega: T,
}

impl<T: Real> LinearReservoir<T> for MarkovReservoir<T> {
    fn moments(&self, t: T) -> Result<ReservoirMoments<T>, BathError> {
        let k = self.kappa;
        let w = self.omega;
        let a_plus = Complex::from_polar((-k * t).exp(), -w * t);
        let a_minus = Complex::from_polar((-k * t).exp(), w * t);
        let n = T::one() - (-T::lit(2.0) * k * t).exp();
        let rate = cplx(T::lit(2.0) * k, T::lit(2.0) * w);
        let cross = if rate.norm() == T::zero() {
            creal(T::zero())
        } else {
            (creal(T::one()) - (-rate * t).exp()) * (T::lit(2.0) * k) / rate
        };
        Ok(ReservoirMoments { cavity: [a_plus, a_minus], occupation: [n, n], cross })
    }

    fn label(&self) -> String {
        "markov".to_string()
    }
}
