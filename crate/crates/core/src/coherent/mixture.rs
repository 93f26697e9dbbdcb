use num_complex::Complex;

use super::label::{coherent_overlap, MultimodeLabel};
use crate::error::AlgebraError;
use crate::linalg::{hermitian_eigen, CMat};
use crate::scalar::{creal, neg_p_log2_p, Real};

/// Density operator `rho = sum_ij C_ij |u_i><u_j|` over coherent labels.
#[derive(Clone, Debug)]
pub struct CoherentMixture<T> {
    labels: Vec<MultimodeLabel<T>>,
    coeff: CMat<T>,
    gram: CMat<T>,
}

/// `K_ij = <u_i|u_j>`.
pub fn gram_matrix<T: Real>(labels: &[MultimodeLabel<T>]) -> Result<CMat<T>, AlgebraError> {
    let r = labels.len();
    let mut k = CMat::zeros(r, r);
    for i in 0..r {
        k[(i, i)] = creal(T::one());
        for j in (i + 1)..r {
            let s = coherent_overlap(&labels[i], &labels[j])?;
            k[(i, j)] = s;
            k[(j, i)] = s.conj();
        }
    }
    Ok(k)
}

/// `K^{1/2} X K^{1/2}` with Gram directions below the floor removed.
fn orthonormal_rep<T: Real>(gram: &CMat<T>, x: &CMat<T>) -> Result<CMat<T>, AlgebraError> {
    let eig = hermitian_eigen(gram)?;
    let tol = T::clamp_tol() * T::from_usize_lossy(gram.rows().max(1));
    if let Some(&lo) = eig.values.first() {
        if lo < -tol {
            return Err(AlgebraError::GramNotPsd { eigenvalue: lo.to_f64().unwrap_or(f64::NAN) });
        }
    }
    let floor = T::gram_floor();
    let n = gram.rows();
    let mut root = CMat::zeros(n, n);
    for (k, &g) in eig.values.iter().enumerate() {
        if g < floor {
            continue;
        }
        let s = g.sqrt();
        for i in 0..n {
            let vik = eig.vectors[(i, k)] * s;
            for j in 0..n {
                root[(i, j)] = root[(i, j)] + vik * eig.vectors[(j, k)].conj();
            }
        }
    }
    Ok(root.matmul(x).matmul(&root).hermitian_part())
}

impl<T: Real> CoherentMixture<T> {
    pub fn new(labels: Vec<MultimodeLabel<T>>, coeff: CMat<T>) -> Result<Self, AlgebraError> {
        let r = labels.len();
        if coeff.rows() != r || coeff.cols() != r {
            return Err(AlgebraError::CoefficientShape {
                rows: coeff.rows(),
                cols: coeff.cols(),
                labels: r,
            });
        }
        if let Some(first) = labels.first() {
            if let Some(bad) = labels.iter().find(|l| l.n_modes() != first.n_modes()) {
                return Err(AlgebraError::ModeCountMismatch {
                    left: first.n_modes(),
                    right: bad.n_modes(),
                });
            }
        }
        let defect = coeff.hermiticity_defect();
        if !(defect <= T::clamp_tol() * coeff.max_abs().max(T::one())) {
            return Err(AlgebraError::NonHermitian { defect: defect.to_f64().unwrap_or(f64::NAN) });
        }
        let gram = gram_matrix(&labels)?;
        Ok(Self { labels, coeff: coeff.hermitian_part(), gram })
    }

    /// `|u><u|`
    pub fn pure(label: MultimodeLabel<T>) -> Self {
        Self {
            labels: vec![label],
            coeff: CMat::identity(1),
            gram: CMat::identity(1),
        }
    }

    /// Pure superposition `sum_i c_i |u_i>`.
    pub fn superposition(
        labels: Vec<MultimodeLabel<T>>,
        amplitudes: &[Complex<T>],
    ) -> Result<Self, AlgebraError> {
        let r = amplitudes.len();
        let coeff = CMat::from_fn(r, r, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::new(labels, coeff)
    }

    pub fn labels(&self) -> &[MultimodeLabel<T>] {
        &self.labels
    }

    pub fn coeff(&self) -> &CMat<T> {
        &self.coeff
    }

    pub fn gram(&self) -> &CMat<T> {
        &self.gram
    }

    pub fn rank_bound(&self) -> usize {
        self.labels.len()
    }

    pub fn n_modes(&self) -> usize {
        self.labels.first().map_or(0, MultimodeLabel::n_modes)
    }

    /// `Tr rho = sum_ij C_ij K_ji`.
    pub fn trace(&self) -> T {
        let r = self.labels.len();
        let mut acc = creal(T::zero());
        for i in 0..r {
            for j in 0..r {
                acc = acc + self.coeff[(i, j)] * self.gram[(j, i)];
            }
        }
        acc.re
    }

    /// The same operator scaled to unit trace.
    pub fn normalized(&self) -> Result<Self, AlgebraError> {
        let tr = self.trace();
        if !(tr > T::min_positive_value()) || !tr.is_finite() {
            return Err(AlgebraError::ZeroNorm { value: tr.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self {
            labels: self.labels.clone(),
            coeff: self.coeff.scale(creal(T::one() / tr)),
            gram: self.gram.clone(),
        })
    }

    /// Non-zero spectrum of `rho` padded with zeros to the label count,
    /// sorted in descending order.
    pub fn spectrum(&self) -> Result<Vec<T>, AlgebraError> {
        let x = orthonormal_rep(&self.gram, &self.coeff)?;
        let eig = hermitian_eigen(&x)?;
        let tol = T::clamp_tol() * self.trace().abs().max(T::one());
        let mut out = Vec::with_capacity(eig.values.len());
        for &v in eig.values.iter().rev() {
            if v < -tol {
                return Err(AlgebraError::NegativeSpectrum { eigenvalue: v.to_f64().unwrap_or(f64::NAN) });
            }
            out.push(v.max(T::zero()));
        }
        Ok(out)
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> Result<T, AlgebraError> {
        Ok(self.spectrum()?.into_iter().map(neg_p_log2_p).sum())
    }

    /// Idempotency defect `1 - Tr rho^2` from the spectrum.
    pub fn purity_defect(&self) -> Result<T, AlgebraError> {
        let p2: T = self.spectrum()?.into_iter().map(|p| p * p).sum();
        Ok(T::one() - p2)
    }

    /// `1 - Tr[(C K)^2]`, the same quantity without diagonalization.
    pub fn purity_defect_trace_identity(&self) -> T {
        let ck = self.coeff.matmul(&self.gram);
        T::one() - ck.matmul(&ck).trace().re
    }

    /// `<n> = sum_ij C_ij (u_j . u_i) K_ji / Tr rho`, summed over all modes.
    pub fn mean_photon_number(&self) -> T {
        let r = self.labels.len();
        let mut acc = creal(T::zero());
        for i in 0..r {
            for j in 0..r {
                let dot = self.labels[j].conj_dot(&self.labels[i]);
                acc = acc + self.coeff[(i, j)] * dot * self.gram[(j, i)];
            }
        }
        acc.re / self.trace()
    }
}

/// Trace distance `||rho_a - rho_b||_1 / 2`.
pub fn trace_distance<T: Real>(
    a: &CoherentMixture<T>,
    b: &CoherentMixture<T>,
) -> Result<T, AlgebraError> {
    if !a.labels.is_empty() && !b.labels.is_empty() && a.n_modes() != b.n_modes() {
        return Err(AlgebraError::ModeCountMismatch { left: a.n_modes(), right: b.n_modes() });
    }
    if a.labels == b.labels {
        let x = a.coeff.sub(&b.coeff);
        let rep = orthonormal_rep(&a.gram, &x)?;
        let eig = hermitian_eigen(&rep)?;
        let d = T::lit(0.5) * eig.values.iter().map(|v| v.abs()).sum::<T>();
        return Ok(d.min(T::one()));
    }
    let ra = a.labels.len();
    let rb = b.labels.len();
    let mut labels = a.labels.clone();
    labels.extend(b.labels.iter().cloned());
    let gram = gram_matrix(&labels)?;
    let x = CMat::from_fn(ra + rb, ra + rb, |i, j| {
        if i < ra && j < ra {
            a.coeff[(i, j)]
        } else if i >= ra && j >= ra {
            -b.coeff[(i - ra, j - ra)]
        } else {
            creal(T::zero())
        }
    });
    let rep = orthonormal_rep(&gram, &x)?;
    let eig = hermitian_eigen(&rep)?;
    let d = T::lit(0.5) * eig.values.iter().map(|v| v.abs()).sum::<T>();
    Ok(d.min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn single(u: Complex<f64>) -> MultimodeLabel<f64> {
        MultimodeLabel::single(u)
    }

    #[test]
    fn pure_coherent_state() {
        let m = CoherentMixture::pure(single(c(1.0, 0.5)));
        let sp = m.spectrum().unwrap();
        assert!((sp[0] - 1.0).abs() < 1e-15);
        assert!(m.von_neumann_entropy().unwrap().abs() < 1e-12);
        assert!(m.purity_defect().unwrap().abs() < 1e-12);
        assert!((m.mean_photon_number() - 1.25).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_classical_mixture() {
        let labels = vec![single(c(30.0, 0.0)), single(c(-30.0, 0.0))];
        let m = CoherentMixture::new(labels, CMat::diagonal(&[0.5, 0.5])).unwrap();
        let sp = m.spectrum().unwrap();
        assert!((sp[0] - 0.5).abs() < 1e-14 && (sp[1] - 0.5).abs() < 1e-14);
        assert!((m.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-12);
        assert!((m.purity_defect().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn identical_labels_collapse_rank() {
        let u = single(c(0.7, -0.2));
        let coeff = CMat::from_rows(&[vec![c(0.3, 0.0), c(0.1, 0.2)], vec![c(0.1, -0.2), c(0.2, 0.0)]]);
        let m = CoherentMixture::new(vec![u.clone(), u], coeff).unwrap().normalized().unwrap();
        let sp = m.spectrum().unwrap();
        assert!((sp[0] - 1.0).abs() < 1e-12 && sp[1].abs() < 1e-12);
    }

    #[test]
    fn equal_mixture_with_real_overlap() {
        let u = single(c(0.6, 0.0));
        let v = single(c(-0.6, 0.0));
        let s = coherent_overlap(&u, &v).unwrap().re;
        let m = CoherentMixture::new(vec![u, v], CMat::diagonal(&[0.5, 0.5])).unwrap();
        let sp = m.spectrum().unwrap();
        assert!((sp[0] - (1.0 + s) / 2.0).abs() < 1e-13);
        assert!((sp[1] - (1.0 - s) / 2.0).abs() < 1e-13);
        assert!((m.purity_defect().unwrap() - m.purity_defect_trace_identity()).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_closed_forms() {
        let a = CoherentMixture::pure(single(c(0.4, 0.3)));
        let b = CoherentMixture::pure(single(c(-0.5, 1.0)));
        let s = coherent_overlap(&a.labels()[0], &b.labels()[0]).unwrap();
        let d = trace_distance(&a, &b).unwrap();
        assert!((d - (1.0 - s.norm_sqr()).sqrt()).abs() < 1e-12);
        assert!(trace_distance(&a, &a).unwrap() < 1e-12);
        let far = CoherentMixture::pure(single(c(40.0, 0.0)));
        assert!((trace_distance(&a, &far).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian_coefficients() {
        let coeff = CMat::from_rows(&[vec![c(0.5, 0.0), c(0.3, 0.0)], vec![c(0.0, 0.0), c(0.5, 0.0)]]);
        let err = CoherentMixture::new(vec![single(c(0.0, 0.0)), single(c(1.0, 0.0))], coeff);
        assert!(matches!(err, Err(AlgebraError::NonHermitian { .. })));
    }

    #[test]
    fn rejects_indefinite_density_operator() {
        let m = CoherentMixture::new(
            vec![single(c(0.0, 0.0)), single(c(20.0, 0.0))],
            CMat::diagonal(&[1.0, -0.5]),
        )
        .unwrap();
        assert!(matches!(m.spectrum(), Err(AlgebraError::NegativeSpectrum { .. })));
    }

    #[test]
    fn zero_trace_cannot_normalize() {
        let m = CoherentMixture::new(vec![single(c(0.0, 0.0))], CMat::zeros(1, 1)).unwrap();
        assert!(matches!(m.normalized(), Err(AlgebraError::ZeroNorm { .. })));
    }
}
