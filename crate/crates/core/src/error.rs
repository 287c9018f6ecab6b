// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("map is not invertible (|det| = {det:e})")]
    NonInvertible { det: f64 },

    #[error("non-invertible dynamics at t = {t}: {reason}")]
    NonInvertibleDynamics { t: f64, reason: String },

    #[error("map is not positive: {0}")]
    NotPositive(String),

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("degenerate generator: total rate {total:e}")]
    DegenerateGenerator { total: f64 },

    #[error("t = {t} outside [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("{what} did not converge")]
    NoConvergence { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
