use num_complex::Complex;

use crate::error::AlgebraError;
use crate::scalar::{creal, Real};

/// Multimode coherent label `|u_1, ..., u_n>` stored sparsely.
///
/// `sector` tags an orthogonal degree of freedom carried alongside the modes
/// (a qubit basis state, for instance); labels in different sectors have zero
/// overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct MultimodeLabel<T> {
    n_modes: usize,
    sector: u32,
    entries: Vec<(usize, Complex<T>)>,
}

impl<T: Real> MultimodeLabel<T> {
    pub fn vacuum(n_modes: usize) -> Self {
        Self { n_modes, sector: 0, entries: Vec::new() }
    }

    pub fn single(u: Complex<T>) -> Self {
        Self::from_dense(&[u])
    }

    pub fn from_dense(values: &[Complex<T>]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, z)| z.re != T::zero() || z.im != T::zero())
            .map(|(k, &z)| (k, z))
            .collect();
        Self { n_modes: values.len(), sector: 0, entries }
    }

    pub fn with_sector(mut self, sector: u32) -> Self {
        self.sector = sector;
        self
    }

    #[inline]
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    #[inline]
    pub fn sector(&self) -> u32 {
        self.sector
    }

    /// Non-zero modes as `(index, amplitude)`, ascending in index.
    pub fn entries(&self) -> &[(usize, Complex<T>)] {
        &self.entries
    }

    pub fn get(&self, mode: usize) -> Complex<T> {
        match self.entries.binary_search_by_key(&mode, |&(k, _)| k) {
            Ok(i) => self.entries[i].1,
            Err(_) => creal(T::zero()),
        }
    }

    pub fn to_dense(&self) -> Vec<Complex<T>> {
        let mut out = vec![creal(T::zero()); self.n_modes];
        for &(k, z) in &self.entries {
            out[k] = z;
        }
        out
    }

    /// Mean photon number `sum_k |u_k|^2`.
    pub fn norm_sqr(&self) -> T {
        self.entries.iter().map(|(_, z)| z.norm_sqr()).sum()
    }

    /// Label restricted to `modes`, renumbered `0..modes.len()`.
    pub fn restrict(&self, modes: &[usize]) -> Self {
        let values: Vec<_> = modes.iter().map(|&k| self.get(k)).collect();
        Self::from_dense(&values).with_sector(self.sector)
    }

    /// `self ⊕ other` as one label over `n + m` modes.
    pub fn concat(&self, other: &Self) -> Self {
        let shift = self.n_modes;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|&(k, z)| (k + shift, z)));
        Self { n_modes: self.n_modes + other.n_modes, sector: self.sector, entries }
    }

    /// Multiplies every amplitude by `s`.
    pub fn scaled(&self, s: Complex<T>) -> Self {
        let entries = self.entries.iter().map(|&(k, z)| (k, z * s)).collect();
        Self { n_modes: self.n_modes, sector: self.sector, entries }
    }

    /// `sum_k conj(self_k) * other_k`
    pub fn conj_dot(&self, other: &Self) -> Complex<T> {
        let (mut i, mut j) = (0, 0);
        let mut acc = creal(T::zero());
        while i < self.entries.len() && j < other.entries.len() {
            let (ka, a) = self.entries[i];
            let (kb, b) = other.entries[j];
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc + a.conj() * b;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Exponent of `<u|v>`: `sum_k [-(|u_k|^2 + |v_k|^2)/2 + conj(u_k) v_k]`.
pub fn overlap_exponent<T: Real>(
    u: &MultimodeLabel<T>,
    v: &MultimodeLabel<T>,
) -> Result<Complex<T>, AlgebraError> {
    if u.n_modes != v.n_modes {
        return Err(AlgebraError::ModeCountMismatch { left: u.n_modes, right: v.n_modes });
    }
    let half = T::lit(0.5);
    Ok(u.conj_dot(v) - creal(half * (u.norm_sqr() + v.norm_sqr())))
}

/// Inner product `<u|v>` of two multimode coherent states.
pub fn coherent_overlap<T: Real>(
    u: &MultimodeLabel<T>,
    v: &MultimodeLabel<T>,
) -> Result<Complex<T>, AlgebraError> {
    let e = overlap_exponent(u, v)?;
    if u.sector != v.sector {
        return Ok(creal(T::zero()));
    }
    Ok(e.exp())
}

/// Single-mode `<u|v>`.
#[inline]
pub fn overlap1<T: Real>(u: Complex<T>, v: Complex<T>) -> Complex<T> {
    (u.conj() * v - creal(T::lit(0.5) * (u.norm_sqr() + v.norm_sqr()))).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn self_overlap_is_one() {
        let u = MultimodeLabel::from_dense(&[c(1.0, 2.0), c(0.0, 0.0), c(-0.3, 0.1)]);
        assert!((coherent_overlap(&u, &u).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_mode_distance_formula() {
        let u = MultimodeLabel::single(c(1.0, 0.0));
        let v = MultimodeLabel::single(c(0.0, 1.0));
        let s = coherent_overlap(&u, &v).unwrap();
        assert!((s.norm() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((s - overlap1(c(1.0, 0.0), c(0.0, 1.0))).norm() < 1e-15);
    }

    #[test]
    fn vacuum_overlap() {
        let u = c(1.3, -0.4);
        let s = coherent_overlap(&MultimodeLabel::vacuum(1), &MultimodeLabel::single(u)).unwrap();
        assert!((s - c((-u.norm_sqr() / 2.0).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mode_count_mismatch_is_error() {
        let u = MultimodeLabel::<f64>::vacuum(2);
        let v = MultimodeLabel::<f64>::vacuum(3);
        assert!(matches!(coherent_overlap(&u, &v), Err(AlgebraError::ModeCountMismatch { .. })));
    }

    #[test]
    fn sectors_are_orthogonal() {
        let u = MultimodeLabel::single(c(0.2, 0.0));
        let v = u.clone().with_sector(1);
        assert_eq!(coherent_overlap(&u, &v).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn restrict_and_concat_factorize_overlap() {
        let u = MultimodeLabel::from_dense(&[c(0.5, 0.1), c(-0.2, 0.3), c(0.0, 0.7), c(1.0, 0.0)]);
        let v = MultimodeLabel::from_dense(&[c(0.1, 0.1), c(0.0, 0.0), c(0.4, -0.2), c(0.9, 0.2)]);
        let a = [0, 2];
        let b = [1, 3];
        let whole = coherent_overlap(&u, &v).unwrap();
        let split = coherent_overlap(&u.restrict(&a), &v.restrict(&a)).unwrap()
            * coherent_overlap(&u.restrict(&b), &v.restrict(&b)).unwrap();
        assert!((whole - split).norm() < 1e-14);
        let joined = u.restrict(&a).concat(&u.restrict(&b));
        assert_eq!(joined.n_modes(), 4);
        assert!((joined.norm_sqr() - u.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let u = MultimodeLabel::single(Complex::<f32>::new(1.0, 0.0));
        let v = MultimodeLabel::single(Complex::<f32>::new(0.0, 1.0));
        let s = coherent_overlap(&u, &v).unwrap();
        assert!((s.norm() - (-1.0f32).exp()).abs() < 1e-6);
    }
}
