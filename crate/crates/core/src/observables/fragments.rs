use num_complex::Complex;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coherent::{overlap1, CoherentMixture, MultimodeLabel};
use crate::error::AlgebraError;
use crate::linalg::CMat;
use crate::model::TwoBranchState;
use crate::scalar::{creal, Real};

/// A subset of reservoir modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentSelection {
    indices: Vec<usize>,
    n_modes: usize,
}

impl FragmentSelection {
    pub fn new(mut indices: Vec<usize>, n_modes: usize) -> Result<Self, AlgebraError> {
        indices.sort_unstable();
        if let Some(&bad) = indices.iter().find(|&&k| k >= n_modes) {
            return Err(AlgebraError::FragmentIndex { index: bad, n_modes });
        }
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(AlgebraError::FragmentDuplicate { index: w[0] });
        }
        Ok(Self { indices, n_modes })
    }

    pub fn empty(n_modes: usize) -> Self {
        Self { indices: Vec::new(), n_modes }
    }

    pub fn full(n_modes: usize) -> Self {
        Self { indices: (0..n_modes).collect(), n_modes }
    }

    /// Number of modes a fraction `f` selects: `round(f N)`.
    pub fn size_for(fraction: f64, n_modes: usize) -> usize {
        ((fraction.clamp(0.0, 1.0) * n_modes as f64).round() as usize).min(n_modes)
    }

    /// Uniformly random subset of `round(f N)` modes.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_modes: usize, fraction: f64) -> Self {
        let m = Self::size_for(fraction, n_modes);
        let mut indices = sample(rng, n_modes, m).into_vec();
        indices.sort_unstable();
        Self { indices, n_modes }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn fraction(&self) -> f64 {
        if self.n_modes == 0 {
            0.0
        } else {
            self.indices.len() as f64 / self.n_modes as f64
        }
    }

    pub fn complement(&self) -> Self {
        let mut mask = vec![true; self.n_modes];
        for &k in &self.indices {
            mask[k] = false;
        }
        Self { indices: (0..self.n_modes).filter(|&k| mask[k]).collect(), n_modes: self.n_modes }
    }
}

/// Post-pulse state `a|alpha, lambda> + b|beta, chi>` with per-mode reservoir
/// overlap exponents cached, so fragment states cost `O(|F|)`.
#[derive(Clone, Debug)]
pub struct BranchCut<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    lambda: MultimodeLabel<T>,
    chi: MultimodeLabel<T>,
    /// `log <chi_k|lambda_k>` per mode.
    log_overlap: Vec<Complex<T>>,
    log_total: Complex<T>,
}

impl<T: Real> BranchCut<T> {
    pub fn new(state: &TwoBranchState<T>) -> Result<Self, AlgebraError> {
        if state.outcome.is_none() {
            return Err(AlgebraError::PrePulseState);
        }
        if state.lambda.n_modes() != state.chi.n_modes() {
            return Err(AlgebraError::ModeCountMismatch {
                left: state.lambda.n_modes(),
                right: state.chi.n_modes(),
            });
        }
        let lam = state.lambda.to_dense();
        let chi = state.chi.to_dense();
        let half = T::lit(0.5);
        let log_overlap: Vec<Complex<T>> = lam
            .iter()
            .zip(&chi)
            .map(|(l, c)| c.conj() * l - creal(half * (l.norm_sqr() + c.norm_sqr())))
            .collect();
        let log_total = log_overlap.iter().fold(creal(T::zero()), |acc, &e| acc + e);
        Ok(Self {
            a: state.weight_1,
            b: state.weight_0,
            alpha: state.alpha,
            beta: state.beta,
            lambda: state.lambda.clone(),
            chi: state.chi.clone(),
            log_overlap,
            log_total,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.log_overlap.len()
    }

    /// `<chi_{R-F}|lambda_{R-F}>`
    fn rest_overlap(&self, sel: &FragmentSelection) -> Complex<T> {
        let inside = sel.indices.iter().fold(creal(T::zero()), |acc, &k| acc + self.log_overlap[k]);
        (self.log_total - inside).exp()
    }

    fn rank_two(
        &self,
        first: MultimodeLabel<T>,
        second: MultimodeLabel<T>,
        cross: Complex<T>,
    ) -> Result<CoherentMixture<T>, AlgebraError> {
        let c = CMat::from_rows(&[
            vec![creal(self.a.norm_sqr()), self.a * self.b.conj() * cross],
            vec![self.a.conj() * self.b * cross.conj(), creal(self.b.norm_sqr())],
        ]);
        CoherentMixture::new(vec![first, second], c)?.normalized()
    }

    pub fn cavity_state(&self) -> Result<CoherentMixture<T>, AlgebraError> {
        self.rank_two(
            MultimodeLabel::single(self.alpha),
            MultimodeLabel::single(self.beta),
            self.log_total.exp(),
        )
    }

    pub fn fragment_state(&self, sel: &FragmentSelection) -> Result<CoherentMixture<T>, AlgebraError> {
        self.check(sel)?;
        let cav = overlap1(self.beta, self.alpha);
        self.rank_two(
            self.lambda.restrict(sel.indices()),
            self.chi.restrict(sel.indices()),
            cav * self.rest_overlap(sel),
        )
    }

    pub fn cavity_fragment_state(&self, sel: &FragmentSelection) -> Result<CoherentMixture<T>, AlgebraError> {
        self.check(sel)?;
        self.rank_two(
            MultimodeLabel::single(self.alpha).concat(&self.lambda.restrict(sel.indices())),
            MultimodeLabel::single(self.beta).concat(&self.chi.restrict(sel.indices())),
            self.rest_overlap(sel),
        )
    }

    fn check(&self, sel: &FragmentSelection) -> Result<(), AlgebraError> {
        if sel.n_modes() != self.n_modes() {
            return Err(AlgebraError::ModeCountMismatch { left: self.n_modes(), right: sel.n_modes() });
        }
        Ok(())
    }

    /// `S(c) + S(F) - S(cF)` given a precomputed `S(c)`.
    fn mutual_information_with(&self, s_c: T, sel: &FragmentSelection) -> Result<T, AlgebraError> {
        if sel.is_empty() {
            return Ok(T::zero());
        }
        let s_f = self.fragment_state(sel)?.von_neumann_entropy()?;
        let s_cf = self.cavity_fragment_state(sel)?.von_neumann_entropy()?;
        Ok((s_c + s_f - s_cf).max(T::zero()))
    }

    pub fn mutual_information(&self, sel: &FragmentSelection) -> Result<T, AlgebraError> {
        let s_c = self.cavity_state()?.von_neumann_entropy()?;
        self.mutual_information_with(s_c, sel)
    }
}

/// Reduced cavity state of a post-pulse branch state.
pub fn cavity_state<T: Real>(state: &TwoBranchState<T>) -> Result<CoherentMixture<T>, AlgebraError> {
    BranchCut::new(state)?.cavity_state()
}

/// Reduced state of the reservoir fragment `sel`.
pub fn fragment_state<T: Real>(
    state: &TwoBranchState<T>,
    sel: &FragmentSelection,
) -> Result<CoherentMixture<T>, AlgebraError> {
    BranchCut::new(state)?.fragment_state(sel)
}

/// Joint state of the cavity and the fragment `sel`.
pub fn cavity_fragment_state<T: Real>(
    state: &TwoBranchState<T>,
    sel: &FragmentSelection,
) -> Result<CoherentMixture<T>, AlgebraError> {
    BranchCut::new(state)?.cavity_fragment_state(sel)
}

/// `I(c:F) = S(c) + S(F) - S(cF)` in bits.
pub fn mutual_information<T: Real>(state: &TwoBranchState<T>, sel: &FragmentSelection) -> Result<T, AlgebraError> {
    BranchCut::new(state)?.mutual_information(sel)
}

/// Fragment-averaged mutual information normalized by `2 S(c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NamiCurve<T> {
    pub fractions: Vec<f64>,
    pub values: Vec<T>,
    pub realizations: usize,
    pub seed: u64,
    /// `S(c)` in bits.
    pub cavity_entropy: T,
}

impl<T: Real> NamiCurve<T> {
    /// Largest `|NAMI(f) - target|` over fractions in `[lo, hi]`.
    pub fn max_deviation(&self, target: T, lo: f64, hi: f64) -> T {
        self.fractions
            .iter()
            .zip(&self.values)
            .filter(|(&f, _)| f >= lo - 1e-12 && f <= hi + 1e-12)
            .fold(T::zero(), |m, (_, &v)| m.max((v - target).abs()))
    }
}

/// Entropy below which the cavity counts as pure and the curve is zero.
pub const NAMI_ENTROPY_FLOOR: f64 = 1e-9;

/// Fragment-averaged normalized mutual information.
///
/// Fraction `i` draws its `realizations` subsets from a ChaCha8 stream
/// seeded by `seed` on stream `i`, so results are independent of thread
/// scheduling.
pub fn nami_curve<T: Real>(
    state: &TwoBranchState<T>,
    fractions: &[f64],
    realizations: usize,
    seed: u64,
) -> Result<NamiCurve<T>, AlgebraError> {
    let cut = BranchCut::new(state)?;
    let s_c = cut.cavity_state()?.von_neumann_entropy()?;
    let n = cut.n_modes();
    let values = if s_c < T::lit(NAMI_ENTROPY_FLOOR) || realizations == 0 {
        vec![T::zero(); fractions.len()]
    } else {
        let norm = T::lit(2.0) * s_c;
        fractions
            .par_iter()
            .enumerate()
            .map(|(i, &f)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let size = FragmentSelection::size_for(f, n);
                // every subset of size 0 or N is the same subset
                let draws = if size == 0 || size == n { 1 } else { realizations };
                let mut acc = T::zero();
                for _ in 0..draws {
                    let sel = FragmentSelection::random(&mut rng, n, f);
                    acc = acc + cut.mutual_information_with(s_c, &sel)?;
                }
                Ok(acc / T::from_usize_lossy(draws) / norm)
            })
            .collect::<Result<Vec<T>, AlgebraError>>()?
    };
    Ok(NamiCurve {
        fractions: fractions.to_vec(),
        values,
        realizations,
        seed,
        cavity_entropy: s_c,
    })
}

/// `{step, 2 step, ..., 1}` for `count` points.
pub fn fraction_grid(count: usize) -> Vec<f64> {
    (1..=count).map(|i| i as f64 / count as f64).collect()
}
