// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Batch front end for `ksdiv`: config parsing, the `classify`,
//! `region-scan` and `witness` commands, CSV and SVG output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod region;
pub mod svg;

pub use commands::{cmd_classify, cmd_region_scan, cmd_witness, Outcome};
pub use config::{Overrides, RunConfig};
pub use error::{CliError, CliResult};
