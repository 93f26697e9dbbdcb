//! Cavity cat states leaking into structured and finite reservoirs.
//!
//! States are tracked as superpositions of multimode coherent states, so
//! entropies, Wigner functions and distances come from small Gram
//! matrices instead of truncated Fock spaces. The core is generic over
//! `f32`/`f64`; the aliases below fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod scalar;
pub mod quadrature;
pub mod coherent;
pub mod model;
pub mod finite_bath;
pub mod structured;
pub mod observables;
pub mod runner;

pub use error::Error;

pub type Complex = num_complex::Complex<f64>;
pub type Label = coherent::MultimodeLabel<f64>;
pub type Mixture = coherent::CoherentMixture<f64>;
pub type Params = model::SystemParams<f64>;
pub type State = model::TwoBranchState<f64>;
pub type FiniteBath = finite_bath::FiniteBathConfig<f64>;
pub type Lorentz = structured::LorentzParams<f64>;
pub type Moments = structured::ReservoirMoments<f64>;
