//! Desk-scale quantum computation simulator.
//!
//! Registers of up to twelve Q-bits are simulated exactly as state vectors or
//! density matrices. On top of that substrate the crate provides:
//!
//! * [`gates`]: the rotation `R_{θφ}` and zero-controlled `XOR` gates.
//! * [`algorithms`]: Deutsch-Jozsa with oracle-call accounting, GHZ preparation.
//! * [`decoherence`]: branch/environment dephasing and operation budgets.
//! * [`nmr`]: Boltzmann populations, pseudo-pure states, Pauli decomposition,
//!   a projector-expansion separability certificate and the PPT test.
//! * [`cli`]: the plain-text circuit format and JSON reports behind the
//!   `qbit` binary.

pub mod algorithms;
pub mod cli;
pub mod decoherence;
pub mod error;
pub mod gates;
pub mod nmr;
pub mod qstate;
pub mod random;

pub use error::{Error, Result};
pub use gates::{GateOp, RotationParams};
pub use qstate::{DensityMatrix, MeasurementOutcome, QbitIndex, StateVector};
