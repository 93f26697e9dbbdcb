//! Small dense complex matrices, a Jacobi Hermitian eigensolver, and a
//! secular-equation solver for real symmetric arrowhead matrices.
//!
//! The coherent-state algebra only ever needs matrices of rank eight or
//! less, so a cyclic Jacobi sweep is both accurate and fast enough. Bath
//! generators, on the other hand, can have thousands of modes but are always
//! arrowhead-shaped, which admits an `O(N^2)` eigendecomposition.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::LinalgError;
use crate::scalar::{creal, Real};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = creal(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = creal(v);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(creal(T::zero()), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(creal(T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest deviation `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(M + M^H) / 2`
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// Embeds `self` as the top-left block of a larger zero matrix at `offset`.
    pub fn embed(&self, size: usize, offset: usize) -> Self {
        assert!(offset + self.rows <= size && offset + self.cols <= size);
        let mut out = Self::zeros(size, size);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(offset + i, offset + j)] = self[(i, j)];
            }
        }
        out
    }
}

impl<T> Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues (ascending) and eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

/// Cyclic complex Jacobi diagonalization. Only the Hermitian part of the
/// input is used.
pub fn hermitian_eigen<T: Real>(m: &CMat<T>) -> Result<HermitianEigen<T>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMat::identity(n);
    if a.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let eps = T::epsilon();
    let mut converged = n < 2;
    for _sweep in 0..64 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        let total = a.frobenius();
        if off.sqrt() <= eps * total || off == T::zero() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if mag <= eps * eps * (app.abs() + aqq.abs()) {
                    a[(p, q)] = creal(T::zero());
                    a[(q, p)] = creal(T::zero());
                    continue;
                }
                // Phase d makes the (p, q) entry real, then a real rotation
                // annihilates it.
                let d = apq.conj() / mag;
                let theta = T::lit(0.5) * (T::lit(2.0) * mag).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let up_p = creal(c);
                let uq_p = -d * s;
                let up_q = creal(s);
                let uq_q = d * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * up_p + akq * uq_p;
                    a[(k, q)] = akp * up_q + akq * uq_q;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * up_p + vkq * uq_p;
                    v[(k, q)] = vkp * up_q + vkq * uq_q;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = up_p.conj() * apk + uq_p.conj() * aqk;
                    a[(q, k)] = up_q.conj() * apk + uq_q.conj() * aqk;
                }
                a[(p, q)] = creal(T::zero());
                a[(q, p)] = creal(T::zero());
                a[(p, p)] = creal(a[(p, p)].re);
                a[(q, q)] = creal(a[(q, q)].re);
            }
        }
    }
    if !converged {
        return Err(LinalgError::JacobiNoConvergence { dim: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Square root of a positive semidefinite Hermitian matrix. Eigen-directions
/// with eigenvalue below `floor` are dropped. Returns the root and the number
/// of retained directions.
pub fn psd_sqrt<T: Real>(m: &CMat<T>, floor: T) -> Result<(CMat<T>, usize), LinalgError> {
    let eig = hermitian_eigen(m)?;
    let n = m.rows();
    let roots: Vec<T> =
        eig.values.iter().map(|&g| if g >= floor { g.sqrt() } else { T::zero() }).collect();
    let rank = roots.iter().filter(|&&r| r > T::zero()).count();
    let mut out = CMat::zeros(n, n);
    for (k, &r) in roots.iter().enumerate() {
        if r == T::zero() {
            continue;
        }
        for i in 0..n {
            let vik = eig.vectors[(i, k)] * r;
            for j in 0..n {
                out[(i, j)] = out[(i, j)] + vik * eig.vectors[(j, k)].conj();
            }
        }
    }
    Ok((out, rank))
}

/// Real symmetric arrowhead matrix
///
/// ```text
/// [ apex  b_1  b_2 ... ]
/// [ b_1   p_1   0  ... ]
/// [ b_2    0   p_2 ... ]
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct Arrowhead<T> {
    pub apex: T,
    pub poles: Vec<T>,
    pub border: Vec<T>,
}

#[derive(Clone, Copy, Debug)]
struct SecularRoot<T> {
    /// Index into the active pole list the root is measured from.
    anchor: Option<usize>,
    /// Eigenvalue minus the anchor pole (or the eigenvalue itself).
    offset: T,
    /// First component of the normalized eigenvector.
    head: T,
}

#[derive(Clone, Debug)]
struct PoleGroup<T> {
    value: T,
    members: Vec<usize>,
    weight: T,
}

/// Eigendecomposition of an [`Arrowhead`] matrix.
///
/// Eigenvectors with a non-zero apex component are stored implicitly (one
/// root offset and one head component each); the remaining eigenvectors span
/// deflated subspaces attached to repeated or uncoupled poles.
#[derive(Clone, Debug)]
pub struct ArrowheadEigen<T> {
    poles: Vec<T>,
    border: Vec<T>,
    active: Vec<PoleGroup<T>>,
    deflated: Vec<PoleGroup<T>>,
    roots: Vec<SecularRoot<T>>,
    /// For every mode index, the active group it belongs to.
    group_of: Vec<Option<usize>>,
}

impl<T: Real> Arrowhead<T> {
    pub fn dim(&self) -> usize {
        self.poles.len() + 1
    }

    pub fn to_dense(&self) -> CMat<T> {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        m[(0, 0)] = creal(self.apex);
        for (k, (&p, &b)) in self.poles.iter().zip(&self.border).enumerate() {
            m[(k + 1, k + 1)] = creal(p);
            m[(0, k + 1)] = creal(b);
            m[(k + 1, 0)] = creal(b);
        }
        m
    }

    pub fn eigen(&self) -> Result<ArrowheadEigen<T>, LinalgError> {
        if self.poles.len() != self.border.len() {
            return Err(LinalgError::ShapeMismatch {
                expected: self.poles.len(),
                found: self.border.len(),
            });
        }
        let finite = self.apex.is_finite()
            && self.poles.iter().all(|x| x.is_finite())
            && self.border.iter().all(|x| x.is_finite());
        if !finite {
            return Err(LinalgError::NonFinite);
        }
        let border_norm = self.border.iter().map(|&b| b * b).sum::<T>().sqrt();
        let scale = self
            .poles
            .iter()
            .fold(self.apex.abs().max(border_norm), |m, &p| m.max(p.abs()))
            .max(T::min_positive_value());
        let eps = T::epsilon();
        let pole_tol = eps * scale * T::lit(8.0);
        let z_tol = eps * scale;

        let mut order: Vec<usize> = (0..self.poles.len()).collect();
        order.sort_by(|&i, &j| self.poles[i].partial_cmp(&self.poles[j]).expect("finite poles"));

        let mut groups: Vec<PoleGroup<T>> = Vec::new();
        for &k in &order {
            match groups.last_mut() {
                Some(g) if (self.poles[k] - g.value).abs() <= pole_tol => {
                    g.members.push(k);
                    g.weight = g.weight + self.border[k] * self.border[k];
                }
                _ => groups.push(PoleGroup {
                    value: self.poles[k],
                    members: vec![k],
                    weight: self.border[k] * self.border[k],
                }),
            }
        }
        let (active, deflated): (Vec<_>, Vec<_>) =
            groups.into_iter().partition(|g| g.weight.sqrt() > z_tol);

        let mut group_of = vec![None; self.poles.len()];
        for (gi, g) in active.iter().enumerate() {
            for &k in &g.members {
                group_of[k] = Some(gi);
            }
        }

        let mut roots = Vec::with_capacity(active.len() + 1);
        if active.is_empty() {
            roots.push(SecularRoot { anchor: None, offset: self.apex, head: T::one() });
        } else {
            let m = active.len();
            let lo = self.apex.min(active[0].value) - border_norm - z_tol - pole_tol;
            let hi = self.apex.max(active[m - 1].value) + border_norm + z_tol + pole_tol;
            for j in 0..=m {
                let root = if j == 0 {
                    self.solve_anchored(&active, 0, lo - active[0].value, T::zero(), true)
                } else if j == m {
                    self.solve_anchored(&active, m - 1, T::zero(), hi - active[m - 1].value, false)
                } else {
                    let left = active[j - 1].value;
                    let right = active[j].value;
                    let mid = left + (right - left) * T::lit(0.5);
                    if secular(self.apex, &active, j - 1, mid - left) > T::zero() {
                        self.solve_anchored(&active, j, mid - right, T::zero(), true)
                    } else {
                        self.solve_anchored(&active, j - 1, T::zero(), mid - left, false)
                    }
                };
                let root = root.map_err(|(lo_b, hi_b)| LinalgError::SecularNoConvergence {
                    root: j,
                    bracket: (lo_b.to_f64().unwrap_or(f64::NAN), hi_b.to_f64().unwrap_or(f64::NAN)),
                    min_pole_gap: min_gap(&active).to_f64().unwrap_or(f64::NAN),
                    border_norm: border_norm.to_f64().unwrap_or(f64::NAN),
                })?;
                roots.push(root);
            }
        }

        Ok(ArrowheadEigen {
            poles: self.poles.clone(),
            border: self.border.clone(),
            active,
            deflated,
            roots,
            group_of,
        })
    }

    /// Finds the root of the secular function measured from active pole
    /// `anchor`, with the offset inside the open bracket `(lo, hi)`. The
    /// open end touching the anchor pole is flagged by `open_hi`.
    fn solve_anchored(
        &self,
        active: &[PoleGroup<T>],
        anchor: usize,
        lo: T,
        hi: T,
        open_hi: bool,
    ) -> Result<SecularRoot<T>, (T, T)> {
        let (mut l, mut r) = (lo, hi);
        let mut x = if open_hi { l * T::lit(0.5) } else { r * T::lit(0.5) };
        let eps = T::epsilon();
        for _ in 0..400 {
            let (g, dg) = secular_with_derivative(self.apex, active, anchor, x);
            if g == T::zero() {
                l = x;
                r = x;
                break;
            }
            // secular function is decreasing in the offset
            if g > T::zero() {
                l = x;
            } else {
                r = x;
            }
            let width = r - l;
            if width <= T::lit(2.0) * eps * l.abs().max(r.abs()) || width <= T::min_positive_value() {
                break;
            }
            let newton = x - g / dg;
            x = if dg < T::zero() && newton > l && newton < r {
                newton
            } else {
                l + (r - l) * T::lit(0.5)
            };
            if x == l || x == r {
                x = l + (r - l) * T::lit(0.5);
                if x == l || x == r {
                    break;
                }
            }
        }
        // a bracket that stalled is still acceptable if it pins the
        // eigenvalue to working precision
        let lam_scale = (active[anchor].value + l).abs().max(T::one());
        let stalled = (r - l) > T::lit(1e3) * eps * l.abs().max(r.abs()).max(T::min_positive_value());
        if stalled && (r - l) > T::lit(64.0) * eps * lam_scale {
            return Err((l, r));
        }
        let offset = l + (r - l) * T::lit(0.5);
        let mut s = T::one();
        for g in active {
            let den = (g.value - active[anchor].value) - offset;
            s = s + g.weight / (den * den);
        }
        Ok(SecularRoot { anchor: Some(anchor), offset, head: T::one() / s.sqrt() })
    }
}

fn min_gap<T: Real>(active: &[PoleGroup<T>]) -> T {
    active.windows(2).fold(T::infinity(), |m, w| m.min(w[1].value - w[0].value))
}

/// `apex - lambda - sum_i w_i / (p_i - lambda)` with `lambda = p_anchor + x`.
fn secular<T: Real>(apex: T, active: &[PoleGroup<T>], anchor: usize, x: T) -> T {
    secular_with_derivative(apex, active, anchor, x).0
}

fn secular_with_derivative<T: Real>(apex: T, active: &[PoleGroup<T>], anchor: usize, x: T) -> (T, T) {
    let pa = active[anchor].value;
    let mut g = (apex - pa) - x;
    let mut dg = -T::one();
    for grp in active {
        let den = (grp.value - pa) - x;
        let q = grp.weight / den;
        g = g - q;
        dg = dg - q / den;
    }
    (g, dg)
}

impl<T: Real> ArrowheadEigen<T> {
    pub fn dim(&self) -> usize {
        self.poles.len() + 1
    }

    /// Number of eigenvectors with a non-zero apex component.
    pub fn coupled_count(&self) -> usize {
        self.roots.len()
    }

    fn root_value(&self, r: &SecularRoot<T>) -> T {
        match r.anchor {
            Some(a) => self.active[a].value + r.offset,
            None => r.offset,
        }
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut vals: Vec<T> = self.roots.iter().map(|r| self.root_value(r)).collect();
        for g in &self.deflated {
            vals.extend(std::iter::repeat_n(g.value, g.members.len()));
        }
        for g in &self.active {
            vals.extend(std::iter::repeat_n(g.value, g.members.len() - 1));
        }
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        vals
    }

    /// `1/(lambda_j - p_k)` for a coupled root and mode `k`.
    #[inline]
    fn inv_gap(&self, r: &SecularRoot<T>, k: usize) -> T {
        match (r.anchor, self.group_of[k]) {
            (Some(a), Some(g)) => {
                let den = r.offset - (self.active[g].value - self.active[a].value);
                T::one() / den
            }
            _ => T::zero(),
        }
    }

    /// Coupled eigenvector `j` as a dense real vector.
    fn coupled_vector(&self, r: &SecularRoot<T>) -> Vec<T> {
        let mut u = Vec::with_capacity(self.dim());
        u.push(r.head);
        for k in 0..self.poles.len() {
            u.push(r.head * self.border[k] * self.inv_gap(r, k));
        }
        u
    }

    /// `exp(-i A t) e_0`, the propagated apex unit vector.
    pub fn propagate_apex(&self, t: T) -> Vec<Complex<T>> {
        let mut out = vec![creal(T::zero()); self.dim()];
        if t == T::zero() {
            out[0] = creal(T::one());
            return out;
        }
        for r in &self.roots {
            let phase = Complex::from_polar(T::one(), -self.root_value(r) * t) * r.head;
            out[0] = out[0] + phase * r.head;
            for k in 0..self.poles.len() {
                if self.group_of[k].is_none() {
                    continue;
                }
                let comp = r.head * self.border[k] * self.inv_gap(r, k);
                out[k + 1] = out[k + 1] + phase * comp;
            }
        }
        out
    }

    /// Apex component of `exp(-i A t) e_0` only; `O(N)` per call.
    pub fn apex_amplitude(&self, t: T) -> Complex<T> {
        if t == T::zero() {
            return creal(T::one());
        }
        self.roots.iter().fold(creal(T::zero()), |acc, r| {
            acc + Complex::from_polar(r.head * r.head, -self.root_value(r) * t)
        })
    }

    /// `exp(-i A t) v` for an arbitrary initial vector.
    pub fn propagate(&self, v: &[Complex<T>], t: T) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim());
        if t == T::zero() {
            return v.to_vec();
        }
        let mut out = vec![creal(T::zero()); self.dim()];
        let mut residual = v.to_vec();
        for r in &self.roots {
            let u = self.coupled_vector(r);
            let proj = u.iter().zip(v).fold(creal(T::zero()), |acc, (&ui, &vi)| acc + vi * ui);
            let phase = Complex::from_polar(T::one(), -self.root_value(r) * t) * proj;
            for (i, &ui) in u.iter().enumerate() {
                out[i] = out[i] + phase * ui;
                residual[i] = residual[i] - proj * ui;
            }
        }
        // remaining weight lives in eigenspaces of repeated or uncoupled poles
        for g in self.active.iter().chain(&self.deflated) {
            let phase = Complex::from_polar(T::one(), -g.value * t);
            for &k in &g.members {
                out[k + 1] = out[k + 1] + residual[k + 1] * phase;
            }
        }
        out
    }
}
