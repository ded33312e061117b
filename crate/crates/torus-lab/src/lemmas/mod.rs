//! Numerical checks for the analytic machinery behind the observability
//! estimates: Remez- and Turan-type sup-norm bounds, the level-set lemma,
//! Bernstein quotients, good/bad cube classification, spectral
//! decomposition and Taylor majorants.
//!
//! Each check computes both sides of its inequality from scratch and
//! reports them; the theorems are unconditional on their hypotheses, so any
//! failure beyond the documented sampling slack indicates an implementation
//! bug rather than a counterexample.

mod bernstein;
mod cubes;
mod decompose;
mod expsum;
mod level_set;
mod remez;
mod taylor;
mod turan;

pub use bernstein::bernstein_ratio;
pub use cubes::{
    classify_cubes, good_cube_taylor_bound, multi_indices, CubeClassification, CubeCover,
    CubeInfo, TaylorDiscReport, DEFAULT_ALPHA_MAX,
};
pub use decompose::{
    box_multiplier_l1_norm, decompose_spectrum, reconstruct, SpectralPiece, PIECE_NORM_CONSTANT,
};
pub use expsum::{sup_sampled, ExpTerm, ExponentialSum};
pub use level_set::{level_set_apply, LevelSetInstance, LevelSetOutcome, LevelSetReport};
pub use remez::{remez_check, AnalyticFunction, RemezCheck, GROWTH_RADIUS};
pub use taylor::{
    expansion_order_factor, local_sup_estimate, taylor_majorant, LocalEstimateReport,
    MAX_EXPANSION_ORDER,
};
pub use turan::{turan_check, TuranCheck, TURAN_CONSTANT};
