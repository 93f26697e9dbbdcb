//! Reported quantities: fragment information and NAMI curves, Wigner
//! functions, cavity trajectories and the BLP non-Markovianity measure.

mod blp;
mod dynamics;
mod fragments;
mod wigner;

pub use blp::{
    backflow, blp_from_moments, blp_measure, blp_scan, distance_series, evolved_state, BlpResult, BlpValue, PairFamily,
    StatePair, INCREMENT_FLOOR, PAIR_ORTHOGONALITY_TOL,
};
pub use dynamics::{
    concurrence_series, idempotency_defect_series, local_maxima, mean_photon_series, trajectory,
    CatSnapshot, TrajectoryPoint, TrajectoryState,
};
pub use fragments::{
    cavity_fragment_state, cavity_state, fraction_grid, fragment_state, mutual_information, nami_curve,
    BranchCut, FragmentSelection, NamiCurve, NAMI_ENTROPY_FLOOR,
};
pub use wigner::{wigner, wigner_point, GridAxis, WignerGrid};
