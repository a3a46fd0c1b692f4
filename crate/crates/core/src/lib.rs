//! Pseudo-spectral solver for the Groma–Balogh dislocation-density system
//! on a periodic cell, together with the harmonic-analysis toolbox used to
//! study it (Littlewood–Paley blocks, Hölder–Zygmund norms, Riesz
//! multipliers, paraproducts, commutators) and a harness that measures the
//! constants in the associated a priori inequalities.

pub mod error;
pub mod littlewood_paley;
pub mod multipliers;
pub mod norms;
pub mod paraproduct_commutator;
pub mod picard_solver;
pub mod spectral_core;
pub mod transport;
pub mod verification;

pub use error::{Error, Result};
