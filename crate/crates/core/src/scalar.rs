//! Scalar abstraction shared by every numerical module.
//!
//! All physics and linear algebra in this crate is written against [`Real`],
//! so the same code runs in `f64` (the default used by the runner) and `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable by the simulator.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Sum + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Infallible for the supported float types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    /// Threshold below which Gram-matrix eigenvalues are treated as zero.
    #[inline]
    fn gram_floor() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(100.0))
    }

    /// Slack for round-off in quantities that are exactly non-negative.
    #[inline]
    fn clamp_tol() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(1e3))
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `-i * z`
#[inline]
pub(crate) fn mul_neg_i<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.im, -z.re)
}

/// `sinh(z) / z`, continuous at the origin.
pub(crate) fn sinhc<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(1e-3) {
        let z2 = z * z;
        let one = creal(T::one());
        one + z2 / T::lit(6.0) + z2 * z2 / T::lit(120.0)
    } else {
        z.sinh() / z
    }
}

/// Binary entropy term `-p log2 p` with `0 log 0 = 0`.
#[inline]
pub(crate) fn neg_p_log2_p<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * p.log2()
    }
}
