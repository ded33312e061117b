//! A numerical laboratory for quantitative uncertainty principles on the
//! torus: band-limited functions, thick observation sets, concentration
//! operators and their exact `L²` observability constants, plus numerical
//! stress tests for the analytic machinery (Remez- and Turan-type bounds,
//! level-set and Bernstein inequalities, spectral decompositions, Taylor
//! majorants) and closed-form constant evaluation.
//!
//! Everything is deterministic: randomness flows from explicit seeds, grids
//! sample at cell centers, and all data types are immutable after
//! construction, so instances are safe to share across threads.

pub mod band;
pub mod bounds;
pub mod concentration;
pub mod error;
pub mod function;
pub mod geometry;
pub mod lemmas;
pub mod norms;
pub mod sets;
pub mod transform;

pub use band::BandSpec;
pub use error::{Error, Result};
pub use function::{analyze, BandLimitedFunction, Ensemble};
pub use geometry::{FrequencyIndex, TorusGeometry};
pub use norms::{lp_norm, Lp};
pub use sets::GridSet;
