//! Finite-rank algebra over non-orthogonal coherent states.
//!
//! A density operator is held as a coefficient matrix over a short list of
//! (multimode) coherent labels. Every spectral quantity is computed from the
//! Hermitian matrix `K^{1/2} C K^{1/2}`, where `K` is the Gram matrix of the
//! labels, so no Fock-space truncation is ever needed.

mod label;
mod mixture;
mod two_qubit;

pub use label::{coherent_overlap, overlap1, overlap_exponent, MultimodeLabel};
pub use mixture::{gram_matrix, trace_distance, CoherentMixture};
pub use two_qubit::{concurrence, encode_from_overlaps, encode_two_qubits, TwoQubitState};
