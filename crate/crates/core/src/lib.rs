//! Collective decay of two-level atoms into a squeezed broadband reservoir.
//!
//! The library models `n` identical two-level atoms coupled — either each on
//! its own or collectively through a strongly detuned cavity mode — to a
//! broadband squeezed bath. It provides:
//!
//! - labeled tensor-product Hilbert spaces, the model's special entangled
//!   states, and collective angular-momentum operators ([`hilbert`]),
//! - Lindblad-form generators for the independent-atom, cavity, and
//!   collective-emission channels, including the anomalous squeezing terms
//!   ([`liouvillian`]),
//! - adaptive and fixed-step master-equation integration plus steady-state
//!   search ([`dynamics`]),
//! - closed-form solutions for the collective-decay sector and the squeezed
//!   steady states ([`analytic`]),
//! - decoherence-free-subspace tooling ([`dfs`]),
//! - the swap-based quantum-memory protocol ([`memory`]),
//! - the full atoms-plus-cavity model and its adiabatic reduction
//!   ([`cavity`]).

pub mod error;
pub use error::{Error, Result};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;

pub mod analytic;
pub mod cavity;
pub mod dfs;
pub mod dynamics;
pub mod hilbert;
pub mod liouvillian;
pub mod memory;
pub mod sampling;

pub(crate) mod linalg;
pub(crate) mod sparse;
