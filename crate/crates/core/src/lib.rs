//! Structural and numerical analysis of power-law kinetic reaction networks,
//! with built-in carbon-cycle models carrying carbon dioxide removal (CDR) storage.
//!
//! Everything structural (ranks, subspaces, linear feasibility, determinants) is
//! computed over exact rationals; floating point appears only in [`sim`] and in
//! the numeric cross-checks that call it.

pub mod acr;
pub mod decomposition;
pub mod doa;
pub mod error;
pub mod injectivity;
pub mod io;
pub mod kinetics;
pub mod linalg;
pub mod lp;
pub mod models;
pub mod network;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sim;
pub mod transforms;

pub use error::{Error, Result};
pub use kinetics::{KineticOrder, PowerLawKinetics, RateConstant, SignAssumption};
pub use linalg::SubspaceBasis;
pub use network::{NetworkNumbers, Reaction, ReactionNetwork};
pub use rational::Q;
