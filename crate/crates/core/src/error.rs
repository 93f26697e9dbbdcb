//! Error types.

use thiserror::Error;

/// A physics parameter outside its domain.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameter `{field}`: {reason}")]
pub struct ParamError {
    pub field: &'static str,
    pub reason: String,
}

impl ParamError {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Self { field, reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("Jacobi sweeps did not converge for a {dim}x{dim} matrix")]
    JacobiNoConvergence { dim: usize },
    #[error(
        "secular equation root {root} did not converge in bracket [{:e}, {:e}] \
         (smallest pole gap {min_pole_gap:e}, border norm {border_norm:e})",
        bracket.0, bracket.1
    )]
    SecularNoConvergence { root: usize, bracket: (f64, f64), min_pole_gap: f64, border_norm: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("labels have {left} and {right} modes")]
    ModeCountMismatch { left: usize, right: usize },
    #[error("coefficient matrix is {rows}x{cols} but there are {labels} labels")]
    CoefficientShape { rows: usize, cols: usize, labels: usize },
    #[error("coefficient matrix is not Hermitian (defect {defect:e})")]
    NonHermitian { defect: f64 },
    #[error("Gram matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    GramNotPsd { eigenvalue: f64 },
    #[error("density operator has a negative eigenvalue {eigenvalue:e}")]
    NegativeSpectrum { eigenvalue: f64 },
    #[error("state has zero norm or non-positive trace ({value:e})")]
    ZeroNorm { value: f64 },
    #[error("expected a single-mode state, found {modes} modes")]
    Multimode { modes: usize },
    #[error("operation needs a post-pulse state (one qubit outcome)")]
    PrePulseState,
    #[error("fragment index {index} out of range for {n_modes} modes")]
    FragmentIndex { index: usize, n_modes: usize },
    #[error("fragment index {index} appears more than once")]
    FragmentDuplicate { index: usize },
    #[error("pair members overlap by {overlap:e}; pairs must be orthogonal")]
    NonOrthogonalPair { overlap: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BathError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("branch generator eigendecomposition failed ({dim}x{dim}): {source}")]
    Eigen { dim: usize, source: LinalgError },
    #[error("time grid must be sorted and start at 0 ({reason})")]
    TimeGrid { reason: String },
    #[error("continuum grid covers {coverage:.4} of the spectral weight, need at least {required:.2}")]
    GridResolution { coverage: f64, required: f64 },
    #[error("quadrature did not reach tolerance (estimated error {estimate:e})")]
    Quadrature { estimate: f64 },
}

/// Umbrella error for the observables layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Bath(#[from] BathError),
}
