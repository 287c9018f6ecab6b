// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Classification of the unital Pauli-diagonal maps `Φ(σ_k) = p_k σ_k`
//! over a grid of `(p₁, p₂, p₃)`.

use ksdiv::maps::{is_positive_diag, cubic_margin, pairwise_certified};
use ksdiv::PauliDiagonalMap;
use rayon::prelude::*;

use crate::config::RegionScanConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub p: [f64; 3],
    pub positive: bool,
    /// Positive and `p₁² + p₂² + p₃² ≤ 1 + 2p₁p₂p₃`.
    pub ks_ppp: bool,
    /// Positive and the pairwise form of the same condition.
    pub ks_q38: bool,
    pub cp: bool,
    pub cubic_margin: f64,
}

impl RegionPoint {
    pub fn classify(p: [f64; 3]) -> CliResult<Self> {
        let positive = is_positive_diag(p);
        let margin = cubic_margin(p);
        let cp = PauliDiagonalMap::new(p).to_map().is_cp()?;
        Ok(Self {
            p,
            positive,
            ks_ppp: positive && margin >= -1e-12,
            ks_q38: positive && pairwise_certified(p),
            cp,
            cubic_margin: margin,
        })
    }

    pub fn hierarchy_ok(&self) -> bool {
        (!self.cp || (self.ks_ppp && self.ks_q38)) && (!self.ks_ppp || self.positive)
    }
}

/// `-1 + 2i/(n-1)`, `i = 0..n`.
pub fn axis(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| -1.0 + 2.0 * i as f64 / last).collect()
}

/// Points in row-major order: `p₁` slowest. In slice mode `p₃ = 1 - p₁ - p₂`.
pub fn region_scan(cfg: &RegionScanConfig) -> CliResult<Vec<RegionPoint>> {
    if cfg.resolution < 2 {
        return Err(CliError::Config("region.resolution: need at least 2".into()));
    }
    let ax = axis(cfg.resolution);
    let coords: Vec<[f64; 3]> = if cfg.slice {
        ax.iter()
            .flat_map(|&a| ax.iter().map(move |&b| [a, b, 1.0 - a - b]))
            .collect()
    } else {
        ax.iter()
            .flat_map(|&a| {
                let ax = &ax;
                ax.iter().flat_map(move |&b| ax.iter().map(move |&c| [a, b, c]))
            })
            .collect()
    };
    let points = coords
        .par_iter()
        .map(|&p| RegionPoint::classify(p))
        .collect::<CliResult<Vec<_>>>()?;
    let breaches: Vec<_> = points.iter().filter(|p| !p.hierarchy_ok()).take(5).collect();
    if !breaches.is_empty() {
        return Err(CliError::Invariant(format!(
            "cp ⇒ ks ⇒ positive violated at {:?}",
            breaches.iter().map(|p| p.p).collect::<Vec<_>>()
        )));
    }
    Ok(points)
}
