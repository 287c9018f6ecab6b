// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV conventions: header row, LF line endings, floats with 17
//! significant digits, flags as `1`/`0`, missing values empty.

use std::fs::File;
use std::path::Path;

use crate::error::CliResult;

pub fn float(v: f64) -> String {
    // no "-0" in output
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

pub fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

pub struct CsvOut {
    w: csv::Writer<File>,
}

impl CsvOut {
    pub fn create(path: &Path, header: &[&str]) -> CliResult<Self> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        w.write_record(header)?;
        Ok(Self { w })
    }

    pub fn row(&mut self, fields: &[String]) -> CliResult<()> {
        self.w.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.w.flush()?;
        Ok(())
    }
}
