use num_complex::Complex;
use rayon::prelude::*;

use crate::coherent::CoherentMixture;
use crate::error::AlgebraError;
use crate::scalar::{creal, Real};

/// Evenly spaced points `min..=max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridAxis<T> {
    pub min: T,
    pub max: T,
    pub count: usize,
}

impl<T: Real> GridAxis<T> {
    pub fn new(min: T, max: T, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn step(&self) -> T {
        if self.count < 2 {
            T::zero()
        } else {
            (self.max - self.min) / T::from_usize_lossy(self.count - 1)
        }
    }

    pub fn point(&self, i: usize) -> T {
        self.min + self.step() * T::from_usize_lossy(i)
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

/// Wigner function sampled on a rectangular grid, row-major with the
/// imaginary axis outer.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid<T> {
    pub re: GridAxis<T>,
    pub im: GridAxis<T>,
    pub values: Vec<T>,
}

impl<T: Real> WignerGrid<T> {
    pub fn value(&self, i_re: usize, i_im: usize) -> T {
        self.values[i_im * self.re.count + i_re]
    }

    /// Riemann sum `sum W dA`.
    pub fn integral(&self) -> T {
        let da = self.re.step() * self.im.step();
        self.values.iter().copied().sum::<T>() * da
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |m, &v| m.min(v))
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |m, &v| m.max(v))
    }
}

fn single_mode_labels<T: Real>(mix: &CoherentMixture<T>) -> Result<Vec<Complex<T>>, AlgebraError> {
    if mix.n_modes() != 1 {
        return Err(AlgebraError::Multimode { modes: mix.n_modes() });
    }
    Ok(mix.labels().iter().map(|l| l.get(0)).collect())
}

fn wigner_at<T: Real>(mix: &CoherentMixture<T>, u: &[Complex<T>], z: Complex<T>) -> T {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let zz = z.norm_sqr();
    let mut acc = creal(T::zero());
    for (i, &ui) in u.iter().enumerate() {
        for (j, &uj) in u.iter().enumerate() {
            // sector-orthogonal labels never interfere
            if mix.labels()[i].sector() != mix.labels()[j].sector() {
                continue;
            }
            let e = z * uj.conj() * two + z.conj() * ui * two
                - ui * uj.conj()
                - creal(two * zz + half * (ui.norm_sqr() + uj.norm_sqr()));
            acc = acc + mix.coeff()[(i, j)] * e.exp();
        }
    }
    acc.re * two / T::PI()
}

/// `W(z)` of a single-mode mixture.
pub fn wigner_point<T: Real>(mix: &CoherentMixture<T>, z: Complex<T>) -> Result<T, AlgebraError> {
    let u = single_mode_labels(mix)?;
    Ok(wigner_at(mix, &u, z))
}

/// `W` on every grid point.
pub fn wigner<T: Real>(
    mix: &CoherentMixture<T>,
    re: GridAxis<T>,
    im: GridAxis<T>,
) -> Result<WignerGrid<T>, AlgebraError> {
    let u = single_mode_labels(mix)?;
    let values = (0..im.count)
        .into_par_iter()
        .flat_map_iter(|j| {
            let y = im.point(j);
            let u = &u;
            (0..re.count).map(move |i| wigner_at(mix, u, Complex::new(re.point(i), y)))
        })
        .collect();
    Ok(WignerGrid { re, im, values })
}
