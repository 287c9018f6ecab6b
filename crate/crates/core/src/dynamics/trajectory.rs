// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-channel trajectories from accumulated rates.

use crate::error::{Error, Result};
use crate::generators::RateFunctions;
use crate::maps::{eigenvalues_to_mixture, PauliDiagonalMap, PauliMixtureMap, QubitMap};
use crate::quad::{adaptive_simpson, DEFAULT_TOL};

use super::DynamicalMap;

/// How `Γ_k(t) = ∫₀ᵗ γ_k` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accumulation {
    /// Closed-form antiderivative when the rate has one, quadrature otherwise.
    #[default]
    PreferExact,
    /// Always adaptive Simpson.
    Quadrature,
}

/// `λ₁ = e^{-Γ₂-Γ₃}` and cyclic.
pub fn eigenvalues_from_accumulated(g: [f64; 3]) -> [f64; 3] {
    [
        (-g[1] - g[2]).exp(),
        (-g[2] - g[0]).exp(),
        (-g[0] - g[1]).exp(),
    ]
}

/// Uniform grid of `n ≥ 2` points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "grid needs n ≥ 2 points and t_max > 0 (got n = {n}, t_max = {t_max})"
        )));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| t_max * i as f64 / last).collect())
}

/// Rates, accumulated rates, channel eigenvalues and mixture weights on a
/// time grid.
#[derive(Debug, Clone)]
pub struct TrajectoryGrid {
    times: Vec<f64>,
    gamma: Vec<[f64; 3]>,
    accumulated: Vec<[f64; 3]>,
    lambda: Vec<[f64; 3]>,
    p: Vec<[f64; 4]>,
    table_edge: Vec<bool>,
    rates: RateFunctions,
    method: Accumulation,
}

pub fn accumulate_rates(r: &RateFunctions, times: &[f64]) -> Result<TrajectoryGrid> {
    accumulate_rates_with(r, times, Accumulation::PreferExact)
}

pub fn accumulate_rates_with(
    r: &RateFunctions,
    times: &[f64],
    method: Accumulation,
) -> Result<TrajectoryGrid> {
    if times.first() != Some(&0.0) {
        return Err(Error::InvalidInput("time grid must start at 0".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("time grid must be strictly increasing".into()));
    }
    let mut acc = [0.0; 3];
    let mut accumulated = Vec::with_capacity(times.len());
    for (n, &t) in times.iter().enumerate() {
        if n > 0 {
            let s = times[n - 1];
            for (k, a) in acc.iter_mut().enumerate() {
                *a = match (method, r.rates()[k].antiderivative(t)) {
                    (Accumulation::PreferExact, Some(v)) => v,
                    _ => *a + integrate(r, k, s, t)?,
                };
            }
        }
        accumulated.push(acc);
    }
    let gamma = times.iter().map(|&t| r.eval(t)).collect::<Result<Vec<_>>>()?;
    let lambda: Vec<_> = accumulated.iter().map(|g| eigenvalues_from_accumulated(*g)).collect();
    let p = lambda.iter().map(|l| eigenvalues_to_mixture(*l)).collect();
    let table_edge = times.iter().map(|&t| r.near_table_end(t)).collect();
    Ok(TrajectoryGrid {
        times: times.to_vec(),
        gamma,
        accumulated,
        lambda,
        p,
        table_edge,
        rates: r.clone(),
        method,
    })
}

fn integrate(r: &RateFunctions, k: usize, s: f64, t: f64) -> Result<f64> {
    let f = &r.rates()[k];
    adaptive_simpson(|x| f.eval(x), s, t, DEFAULT_TOL)
}

impl TrajectoryGrid {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn gamma(&self) -> &[[f64; 3]] {
        &self.gamma
    }

    pub fn accumulated(&self) -> &[[f64; 3]] {
        &self.accumulated
    }

    pub fn lambda(&self) -> &[[f64; 3]] {
        &self.lambda
    }

    pub fn p(&self) -> &[[f64; 4]] {
        &self.p
    }

    /// Grid points evaluated within one table step of a tabulated rate's end.
    pub fn table_edge(&self) -> &[bool] {
        &self.table_edge
    }

    pub fn rates(&self) -> &RateFunctions {
        &self.rates
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("non-empty grid")
    }

    fn check_range(&self, t: f64) -> Result<()> {
        let hi = self.t_max();
        if !(t >= 0.0 && t <= hi) {
            return Err(Error::OutOfRange { t, lo: 0.0, hi });
        }
        Ok(())
    }

    /// `Γ(t)` at any `t` in range; off-grid values continue the integral
    /// from the nearest grid point below.
    pub fn accumulated_at(&self, t: f64) -> Result<[f64; 3]> {
        self.check_range(t)?;
        let k = self.times.partition_point(|&x| x <= t) - 1;
        if self.times[k] == t {
            return Ok(self.accumulated[k]);
        }
        let s = self.times[k];
        let mut out = self.accumulated[k];
        for (j, o) in out.iter_mut().enumerate() {
            *o = match (self.method, self.rates.rates()[j].antiderivative(t)) {
                (Accumulation::PreferExact, Some(v)) => v,
                _ => *o + integrate(&self.rates, j, s, t)?,
            };
        }
        Ok(out)
    }

    pub fn lambda_at(&self, t: f64) -> Result<[f64; 3]> {
        Ok(eigenvalues_from_accumulated(self.accumulated_at(t)?))
    }

    /// `Λ_t` as a Pauli mixture.
    pub fn mixture_at(&self, t: f64) -> Result<PauliMixtureMap> {
        Ok(PauliMixtureMap::new(eigenvalues_to_mixture(self.lambda_at(t)?)))
    }

    /// `V_{t,s}` with `q_k = λ_k(t)/λ_k(s)`, evaluated as `e^{-(ΔΓ_i + ΔΓ_j)}`.
    pub fn propagator(&self, s: f64, t: f64) -> Result<PauliDiagonalMap> {
        if t < s {
            return Err(Error::InvalidInput(format!("propagator needs t ≥ s (s = {s}, t = {t})")));
        }
        let (gs, gt) = (self.accumulated_at(s)?, self.accumulated_at(t)?);
        let d = [gt[0] - gs[0], gt[1] - gs[1], gt[2] - gs[2]];
        Ok(PauliDiagonalMap::new(eigenvalues_from_accumulated(d)))
    }

    /// Averaged rates `(Γ(t) - Γ(s))/(t - s)` of the propagator's generator.
    pub fn mean_rates(&self, s: f64, t: f64) -> Result<[f64; 3]> {
        if !(t > s) {
            return Err(Error::InvalidInput("mean rates need t > s".into()));
        }
        let (gs, gt) = (self.accumulated_at(s)?, self.accumulated_at(t)?);
        Ok([0, 1, 2].map(|k| (gt[k] - gs[k]) / (t - s)))
    }
}

impl DynamicalMap for TrajectoryGrid {
    fn map_at(&self, t: f64) -> Result<QubitMap> {
        Ok(self.mixture_at(t)?.to_map())
    }

    fn t_range(&self) -> (f64, f64) {
        (0.0, self.t_max())
    }
}

pub fn map_at(traj: &TrajectoryGrid, t: f64) -> Result<PauliMixtureMap> {
    traj.mixture_at(t)
}

pub fn pauli_propagator(traj: &TrajectoryGrid, s: f64, t: f64) -> Result<PauliDiagonalMap> {
    traj.propagator(s, t)
}
