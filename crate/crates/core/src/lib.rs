//! Local quantum-resource dynamics in random brickwall circuits.
//!
//! The crate evolves 1D qubit and qutrit chains under diluted brickwall
//! circuits and tracks the resource content of a contiguous subsystem:
//! log-robustness of magic, relative entropy of coherence, relative entropy
//! of fermionic non-Gaussianity and mana. Three simulation backends are
//! provided:
//!
//! * [`statevec`]: dense amplitudes for qubits and qutrits, the exact oracle;
//! * [`tableau`]: bit-packed stabilizer tableaux for Clifford circuits on
//!   hundreds of qubits;
//! * [`sparse`]: support-conserving sparse vectors for permutation-phase
//!   circuits.
//!
//! [`experiments`] drives Monte-Carlo growth and spreading runs and extracts
//! peak times, decay constants, threshold times and front velocities;
//! [`cli`] wraps everything behind the `qres` binary.
//!
//! Sites are indexed from 0 (leftmost). In every dense representation the
//! leftmost site is the most significant digit of a basis index.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod clifford;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod monotones;
pub mod pauli;
pub mod rng;
pub mod sparse;
pub mod statevec;
pub mod tableau;

pub use error::{Error, Result};
pub use num_complex::Complex64;
