//! Almost universal sums of triangular numbers with one exception.
//!
//! The crate is organised around five layers:
//!
//! * [`trisums`]: triangular numbers, exact representability sieves and truants;
//! * [`escalation`]: truant-driven candidate generation and classification;
//! * [`qforms`]: positive definite integral ternary forms (reduction, isometry,
//!   genus and class sets, bounded representation);
//! * [`goodvec`]: residue sets, scaling isometries, good vectors and the two
//!   transfer statements built on them;
//! * [`verify`]: replay of the finite content behind every almost-universality
//!   claim (table rows, offset schemes, identity families, sweeps).
//!
//! Every empirical verdict produced here carries the bound it was checked to.
//! Nothing in this crate proves a statement about all integers.

pub mod error;
pub mod escalation;
pub mod goodvec;
pub mod qforms;
pub mod trisums;
pub mod verify;

pub use error::{Error, Result};
pub use escalation::{CandidateRecord, Classification, Exception};

pub use qforms::TernaryForm;
pub use trisums::{RepSieve, TriangularSum};
