use num_complex::Complex;

use super::label::{coherent_overlap, MultimodeLabel};
use crate::error::AlgebraError;
use crate::scalar::{creal, Real};

/// Cavity ⊗ reservoir branch pair written as two logical qubits.
///
/// Amplitudes are on `|11>, |10>, |01>, |00>`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitState<T> {
    pub p_plus: Complex<T>,
    pub q_plus: Complex<T>,
    pub q_minus: Complex<T>,
    pub p_minus: Complex<T>,
    pub s_plus: T,
    pub s_minus: T,
    pub r_plus: T,
    pub r_minus: T,
    /// Phase of `<beta|alpha>`.
    pub theta: T,
    /// Phase of `<chi|lambda>`.
    pub phi_b: T,
    /// `<psi|psi>` before normalization.
    pub raw_norm_sqr: T,
}

impl<T: Real> TwoQubitState<T> {
    pub fn from_amplitudes(amps: [Complex<T>; 4]) -> Self {
        let n: T = amps.iter().map(|z| z.norm_sqr()).sum();
        let s = T::one() / n.sqrt();
        Self {
            p_plus: amps[0] * s,
            q_plus: amps[1] * s,
            q_minus: amps[2] * s,
            p_minus: amps[3] * s,
            s_plus: T::zero(),
            s_minus: T::zero(),
            r_plus: T::zero(),
            r_minus: T::zero(),
            theta: T::zero(),
            phi_b: T::zero(),
            raw_norm_sqr: n,
        }
    }

    pub fn amplitudes(&self) -> [Complex<T>; 4] {
        [self.p_plus, self.q_plus, self.q_minus, self.p_minus]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Purity of the first qubit's reduced state.
    pub fn reduced_purity(&self) -> T {
        let a11 = self.p_plus.norm_sqr() + self.q_plus.norm_sqr();
        let a00 = self.q_minus.norm_sqr() + self.p_minus.norm_sqr();
        let a10 = self.p_plus * self.q_minus.conj() + self.q_plus * self.p_minus.conj();
        a11 * a11 + a00 * a00 + T::lit(2.0) * a10.norm_sqr()
    }
}

fn split<T: Real>(overlap: Complex<T>) -> (T, T, T) {
    let m = overlap.norm().min(T::one());
    let plus = ((T::one() + m) * T::lit(0.5)).sqrt();
    let minus = ((T::one() - m) * T::lit(0.5)).max(T::zero()).sqrt();
    // <beta|alpha> = e^{i theta} |<alpha|beta>|
    let phase = if m > T::min_positive_value() { overlap.conj().arg() } else { T::zero() };
    (plus, minus, phase)
}

/// Encodes `a|alpha, lambda> + b|beta, chi>` given only the two branch
/// overlaps `<alpha|beta>` and `<lambda|chi>`.
pub fn encode_from_overlaps<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    cavity_overlap: Complex<T>,
    reservoir_overlap: Complex<T>,
) -> Result<TwoQubitState<T>, AlgebraError> {
    let (s_plus, s_minus, theta) = split(cavity_overlap);
    let (r_plus, r_minus, phi_b) = split(reservoir_overlap);
    let e = Complex::from_polar(T::one(), -(theta + phi_b));
    let sum = a + b * e;
    let diff = -a + b * e;
    let amps = [
        sum * (s_plus * r_plus),
        diff * (s_plus * r_minus),
        diff * (s_minus * r_plus),
        sum * (s_minus * r_minus),
    ];
    let n: T = amps.iter().map(|z| z.norm_sqr()).sum();
    if !(n > T::min_positive_value()) {
        return Err(AlgebraError::ZeroNorm { value: n.to_f64().unwrap_or(f64::NAN) });
    }
    let s = creal(T::one() / n.sqrt());
    Ok(TwoQubitState {
        p_plus: amps[0] * s,
        q_plus: amps[1] * s,
        q_minus: amps[2] * s,
        p_minus: amps[3] * s,
        s_plus,
        s_minus,
        r_plus,
        r_minus,
        theta,
        phi_b,
        raw_norm_sqr: n,
    })
}

/// Encodes `a|alpha, lambda> + b|beta, chi>` as a two-qubit pure state.
pub fn encode_two_qubits<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    alpha: &MultimodeLabel<T>,
    beta: &MultimodeLabel<T>,
    lambda: &MultimodeLabel<T>,
    chi: &MultimodeLabel<T>,
) -> Result<TwoQubitState<T>, AlgebraError> {
    let cav = coherent_overlap(alpha, beta)?;
    let res = coherent_overlap(lambda, chi)?;
    encode_from_overlaps(a, b, cav, res)
}

/// Pure-state concurrence `2|p+ p- - q+ q-|`.
pub fn concurrence<T: Real>(tq: &TwoQubitState<T>) -> T {
    let c = T::lit(2.0) * (tq.p_plus * tq.p_minus - tq.q_plus * tq.q_minus).norm();
    c.min(T::one()).max(T::zero())
}
