// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-step RK4 for `Λ̇_t = L_t Λ_t`, `Λ₀ = id`, on transfer matrices.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::maps::QubitMap;

use super::DynamicalMap;

pub const DEFAULT_STEP: f64 = 1e-3;

/// Integrated dynamical map, stored at every multiple of the step.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    h: f64,
    maps: Vec<Matrix4<f64>>,
}

/// Classical fourth-order Runge-Kutta with step `h`; `t_max` must be an
/// integer multiple of `h`.
pub fn integrate_master_equation<L>(generator: L, t_max: f64, h: f64) -> Result<OdeSolution>
where
    L: Fn(f64) -> Result<QubitMap>,
{
    if !(h > 0.0 && h.is_finite() && t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "integration needs h > 0 and t_max ≥ 0 (h = {h}, t_max = {t_max})"
        )));
    }
    let n = (t_max / h).round();
    if (n * h - t_max).abs() > 1e-9 * t_max.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "t_max = {t_max} is not a multiple of h = {h}"
        )));
    }
    let n = n as usize;
    let mut maps = Vec::with_capacity(n + 1);
    let mut y = Matrix4::identity();
    maps.push(y);
    for i in 0..n {
        let t = i as f64 * h;
        let l0 = *generator(t)?.transfer();
        let lm = *generator(t + 0.5 * h)?.transfer();
        let l1 = *generator(((i + 1) as f64 * h).min(t_max))?.transfer();
        let k1 = l0 * y;
        let k2 = lm * (y + k1 * (0.5 * h));
        let k3 = lm * (y + k2 * (0.5 * h));
        let k4 = l1 * (y + k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence {
                what: format!("RK4 solution blew up at t = {}", t + h),
            });
        }
        maps.push(y);
    }
    Ok(OdeSolution { h, maps })
}

impl OdeSolution {
    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

impl DynamicalMap for OdeSolution {
    fn map_at(&self, t: f64) -> Result<QubitMap> {
        let (lo, hi) = self.t_range();
        if !(t >= lo && t <= hi + 1e-12) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        let k = (t / self.h).round();
        if (k * self.h - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "t = {t} is not a multiple of the step {}",
                self.h
            )));
        }
        QubitMap::from_transfer(self.maps[k as usize])
    }

    fn t_range(&self) -> (f64, f64) {
        (0.0, (self.maps.len() - 1) as f64 * self.h)
    }
}
