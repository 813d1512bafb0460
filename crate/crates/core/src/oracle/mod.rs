//! Dense state-vector simulation of the measurement on `|φ⟩^{⊗n}` for
//! small `n` and `d`.

pub mod diagnostics;
pub mod haar;
pub mod projector;
pub mod state;
pub mod twirl;

pub use diagnostics::{
    block_fidelity, cross_block_residual, distortion_diagnostics, fidelity_table, group_spectrum,
    oracle_distribution, outcome_probability_oracle, post_measurement_state, projector_family,
    sample_projective, DistortionDiagnostics, FidelityRow, FidelityTable,
};
pub use haar::{haar_random_unitary, unitarity_defect};
pub use projector::{IsotypicProjector, Side, SitePermutation};
pub use state::{build_tensor_state, PureBipartiteState, StateVector};
pub use twirl::{twirl_monte_carlo, twirl_structure, TwirlAverage, TwirlBlock, TwirlReport};
