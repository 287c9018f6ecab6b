// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Qubit channels, time-local generators and the divisibility hierarchy.
//!
//! The crate is organised bottom-up:
//!
//! * [`pauli`] — 2×2 operators in Pauli coordinates, the cross product used
//!   by the coordinate calculus, Hermitian spectra and the trace norm.
//! * [`maps`] — qubit linear maps as 4×4 real transfer matrices, Choi
//!   matrices, positivity, Kadison-Schwarz checks (closed form and numerical
//!   witness search), the generalized KS inequality and the QKS condition.
//! * [`generators`] — GKSL generators in both pictures, the Pauli-class rate
//!   generators and their dissipativity classification.
//! * [`dynamics`] — accumulated rates, closed-form Pauli channels, amplitude
//!   damping, RK4 integration of the master equation, propagators,
//!   divisibility scans and trace-norm monotonicity.
//!
//! Unital Kadison-Schwarz maps sit between completely positive and positive
//! maps. For qubits this gives `CP ⊂ KS ⊂ P`, and at the level of dynamical
//! maps `CP-divisible ⊂ KS-divisible ⊂ P-divisible`.

pub mod dynamics;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod maps;
pub mod pauli;
pub mod quad;
pub mod search;

pub use error::{Error, Result};
pub use maps::{KsReport, KsVerdict, PauliDiagonalMap, PauliMixtureMap, QubitMap};
pub use pauli::{PauliCoordinates, QubitOperator};
