//! Dense reference implementations used as test oracles.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use catsim::coherent::{CoherentMixture, MultimodeLabel};
use catsim::linalg::CMat;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Fock amplitudes of `|u>` for `n = 0..=cutoff`.
pub fn coherent_ket(u: C, cutoff: usize) -> DVector<C> {
    let mut v = DVector::from_element(cutoff + 1, c(0.0, 0.0));
    v[0] = c((-0.5 * u.norm_sqr()).exp(), 0.0);
    for n in 1..=cutoff {
        v[n] = v[n - 1] * u / (n as f64).sqrt();
    }
    v
}

pub fn cutoff_for(labels: &[C]) -> usize {
    let m = labels.iter().map(|u| u.norm_sqr()).fold(0.0, f64::max);
    60usize.max((m + 8.0 * m.sqrt()).ceil() as usize)
}

/// `sum_ij C_ij |u_i><u_j|` normalized to unit trace.
pub fn fock_density(labels: &[C], coeff: &[Vec<C>], cutoff: usize) -> DMatrix<C> {
    let kets: Vec<DVector<C>> = labels.iter().map(|&u| coherent_ket(u, cutoff)).collect();
    let mut rho = DMatrix::from_element(cutoff + 1, cutoff + 1, c(0.0, 0.0));
    for (i, ki) in kets.iter().enumerate() {
        for (j, kj) in kets.iter().enumerate() {
            rho += ki * kj.adjoint() * coeff[i][j];
        }
    }
    let tr = rho.trace();
    rho / tr
}

/// Eigenvalues of a Hermitian matrix, descending. Uses the real symmetric
/// embedding `[[A, -B], [B, A]]`, whose spectrum is doubled.
pub fn eigenvalues(m: &DMatrix<C>) -> Vec<f64> {
    let n = m.nrows();
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        // subnormal products inside the QR sweeps turn into NaN
        let z = if z.norm() < 1e-100 { c(0.0, 0.0) } else { z };
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev.into_iter().step_by(2).collect()
}

pub fn entropy_bits(rho: &DMatrix<C>) -> f64 {
    eigenvalues(rho).iter().filter(|&&p| p > 1e-300).map(|&p| -p * p.log2()).sum()
}

pub fn purity(rho: &DMatrix<C>) -> f64 {
    (rho * rho).trace().re
}

pub fn mean_photons(rho: &DMatrix<C>) -> f64 {
    (0..rho.nrows()).map(|n| n as f64 * rho[(n, n)].re).sum()
}

pub fn trace_distance(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    0.5 * eigenvalues(&(a - b)).iter().map(|x| x.abs()).sum::<f64>()
}

/// `W(z) = (2/pi) sum_n (-1)^n <n| D(z)^dag rho D(z) |n>`, with the columns
/// `D(z)|n>` built by `D|n> = (a^dag - z^*) D|n-1> / sqrt n`.
pub fn fock_wigner(rho: &DMatrix<C>, z: C) -> f64 {
    let dim = rho.nrows();
    let terms = dim + (z.norm_sqr() + 12.0 * z.norm() + 40.0).ceil() as usize;
    let mut v = coherent_ket(z, dim - 1);
    let mut w = 0.0;
    for n in 0..terms {
        if n > 0 {
            let mut next = DVector::from_element(dim, c(0.0, 0.0));
            for m in 0..dim {
                let up = if m > 0 { v[m - 1] * (m as f64).sqrt() } else { c(0.0, 0.0) };
                next[m] = (up - z.conj() * v[m]) / (n as f64).sqrt();
            }
            v = next;
        }
        let e = (v.adjoint() * rho * &v)[(0, 0)].re;
        w += if n % 2 == 0 { e } else { -e };
    }
    w * 2.0 / std::f64::consts::PI
}

/// Random complex number with `|u|^2 <= max_sqr`.
pub fn random_label<R: Rng>(rng: &mut R, max_sqr: f64) -> C {
    let r = (rng.gen::<f64>() * max_sqr).sqrt();
    C::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Random positive coefficient matrix `B B^dag` of rank at most `rank`.
pub fn random_psd<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> Vec<Vec<C>> {
    let b: Vec<Vec<C>> = (0..dim)
        .map(|_| (0..rank).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();
    (0..dim)
        .map(|i| (0..dim).map(|j| (0..rank).map(|k| b[i][k] * b[j][k].conj()).sum()).collect())
        .collect()
}

pub fn mixture(labels: &[C], coeff: &[Vec<C>]) -> CoherentMixture<f64> {
    let ls = labels.iter().map(|&u| MultimodeLabel::single(u)).collect();
    let m = CMat::from_fn(labels.len(), labels.len(), |i, j| coeff[i][j]);
    CoherentMixture::new(ls, m).unwrap().normalized().unwrap()
}

/// A random single-mode mixture with up to four labels and its oracle density.
pub fn random_case<R: Rng>(rng: &mut R, max_sqr: f64) -> (Vec<C>, Vec<Vec<C>>) {
    let dim = rng.gen_range(1..=4);
    let rank = rng.gen_range(1..=dim);
    let labels: Vec<C> = (0..dim).map(|_| random_label(rng, max_sqr)).collect();
    let coeff = random_psd(rng, dim, rank);
    (labels, coeff)
}

/// Classical RK4 for `i dv/dt = G v` with the arrowhead generator
/// `G = [[apex, g^T], [g, diag(poles)]]`. Returns `|v_0(t)|` at each of
/// `times`, stepping at most `dt`.
pub fn rk4_cavity_modulus(apex: f64, poles: &[f64], g: &[f64], amp0: C, times: &[f64], dt: f64) -> Vec<f64> {
    let n = poles.len();
    let deriv = |y: &[C], out: &mut [C]| {
        let mut a = y[0] * apex;
        for k in 0..n {
            a += y[k + 1] * g[k];
            out[k + 1] = (y[0] * g[k] + y[k + 1] * poles[k]) * c(0.0, -1.0);
        }
        out[0] = a * c(0.0, -1.0);
    };
    let mut y = vec![c(0.0, 0.0); n + 1];
    y[0] = amp0;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (y.clone(), y.clone(), y.clone(), y.clone(), y.clone());
    for &target in times {
        while t < target - 1e-15 {
            let h = dt.min(target - t);
            deriv(&y, &mut k1);
            for i in 0..=n {
                tmp[i] = y[i] + k1[i] * (h / 2.0);
            }
            deriv(&tmp, &mut k2);
            for i in 0..=n {
                tmp[i] = y[i] + k2[i] * (h / 2.0);
            }
            deriv(&tmp, &mut k3);
            for i in 0..=n {
                tmp[i] = y[i] + k3[i] * h;
            }
            deriv(&tmp, &mut k4);
            for i in 0..=n {
                y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
            t += h;
        }
        out.push(y[0].norm());
    }
    out
}

/// Midpoint Lorentzian discretization centred on zero: offsets and couplings.
pub fn lorentz_grid(gamma: f64, width: f64, modes: usize, half_width: f64) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * half_width / modes as f64;
    let mut w = Vec::with_capacity(modes);
    let mut g = Vec::with_capacity(modes);
    for k in 0..modes {
        let x = -half_width + h * (k as f64 + 0.5);
        let j = gamma * width * width / (2.0 * std::f64::consts::PI * (x * x + width * width));
        w.push(x);
        g.push((j * h).sqrt());
    }
    (w, g)
}
