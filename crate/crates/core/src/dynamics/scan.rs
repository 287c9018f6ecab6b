// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Divisibility over a grid of `(s, t)` pairs.
//!
//! Each propagator `V_{t,s}` gets a P, KS and CP verdict. KS is certified
//! only by closed forms (the `(q₁,q₂,q₃)` condition for Pauli-diagonal maps,
//! or complete positivity) and refuted only by an explicit witness, so the
//! two routes stay independent. For rate-driven trajectories the scan also
//! evaluates the generator conditions and compares both levels.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{classify_rates, DissipativityVerdict, RATE_TOL};
use crate::maps::{
    is_positive_diag, ks_closed_form_diag, ks_witness_search, cubic_margin, KsMode, KsVerdict,
    QubitMap, PSD_TOL,
};
use crate::pauli::min_eig_hermitian;
use crate::search::SearchConfig;

use super::trajectory::TrajectoryGrid;
use super::{propagator, DynamicalMap};

pub const DEFAULT_SCAN_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// Pairs need `t - s ≥ min_gap` (and always `t > s`).
    pub min_gap: f64,
    /// Witness search settings; the seed is mixed with the pair index.
    pub search: SearchConfig,
    /// Generator margins closer to zero than this are limit-sensitive.
    pub band: f64,
    /// Resolution of first-violation times.
    pub bisection_tol: f64,
    /// Pairs with `t - s` up to this are compared with averaged rates.
    pub short_window: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            min_gap: 0.0,
            search: SearchConfig {
                seed: 0,
                budget: 64,
                refine_top: 1,
                max_iterations: 40,
            },
            band: 1e-3,
            bisection_tol: 1e-6,
            short_window: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairVerdict {
    pub s: f64,
    pub t: f64,
    pub positive: bool,
    pub ks_certified: bool,
    /// A witness with margin below the violation tolerance was found.
    pub ks_refuted: bool,
    pub cp: bool,
    /// Smallest eigenvalue over images of pure states.
    pub p_margin: f64,
    /// Closed-form KS margin, when the propagator is Pauli-diagonal.
    pub ks_closed_margin: Option<f64>,
    /// Best witness-search margin, when a search ran.
    pub ks_search_margin: Option<f64>,
    /// Smallest Choi eigenvalue.
    pub cp_margin: f64,
}

impl PairVerdict {
    pub fn hierarchy_ok(&self) -> bool {
        (!self.cp || self.ks_certified)
            && (!self.ks_certified || self.positive)
            && !(self.ks_certified && self.ks_refuted)
    }

    pub fn ks_unresolved(&self) -> bool {
        !self.ks_certified && !self.ks_refuted
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorPoint {
    pub t: f64,
    pub gamma: [f64; 3],
    pub verdict: DissipativityVerdict,
}

/// Earliest time at which each property fails; `None` if it never does.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FirstViolations {
    pub p: Option<f64>,
    pub ks: Option<f64>,
    pub cp: Option<f64>,
}

/// Agreement between propagator-level KS and the generator conditions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConsistencyCheck {
    pub checked: usize,
    /// Generator KS on all of `[s, t]` but `V_{t,s}` not certified.
    pub theorem_mismatches: usize,
    /// Short pairs where the averaged-rate verdict and the propagator differ.
    pub short_window_mismatches: usize,
    /// Pairs skipped because a generator margin lies inside the band.
    pub limit_sensitive: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisibilityScanReport {
    pub pairs: Vec<PairVerdict>,
    pub untestable: Vec<(f64, f64)>,
    pub generator: Vec<GeneratorPoint>,
    pub generator_first_violation: FirstViolations,
    pub propagator_first_violation: FirstViolations,
    pub unresolved_ks: usize,
    pub hierarchy_breaches: usize,
    pub consistency: Option<ConsistencyCheck>,
}

impl DivisibilityScanReport {
    pub fn all_positive(&self) -> bool {
        self.pairs.iter().all(|p| p.positive)
    }

    pub fn all_ks_certified(&self) -> bool {
        self.pairs.iter().all(|p| p.ks_certified)
    }

    pub fn all_cp(&self) -> bool {
        self.pairs.iter().all(|p| p.cp)
    }
}

fn pair_indices(times: &[f64], min_gap: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..times.len() {
        for j in (i + 1)..times.len() {
            if times[j] - times[i] >= min_gap {
                out.push((i, j));
            }
        }
    }
    out
}

fn pair_search(cfg: &ScanConfig, idx: usize) -> SearchConfig {
    SearchConfig {
        seed: cfg.search.seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        ..cfg.search.clone()
    }
}

fn cp_margin(v: &QubitMap) -> Result<f64> {
    min_eig_hermitian(&v.choi_matrix())
}

fn pauli_pair(traj: &TrajectoryGrid, s: f64, t: f64, search: &SearchConfig) -> Result<PairVerdict> {
    let d = traj.propagator(s, t)?;
    let q = d.q;
    let map = d.to_map();
    let positive = is_positive_diag(q);
    let p_margin = 1.0 - q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cpm = cp_margin(&map)?;
    let (ks_certified, closed) = if positive {
        let cf = ks_closed_form_diag(q)?;
        (cf.certified, cf.margin)
    } else {
        (false, cubic_margin(q))
    };
    let mut ks_refuted = false;
    let mut search_margin = None;
    if !ks_certified {
        let rep = ks_witness_search(&map, KsMode::Unital, search)?;
        ks_refuted = rep.verdict == KsVerdict::Violation;
        search_margin = Some(rep.margin);
    }
    Ok(PairVerdict {
        s,
        t,
        positive,
        ks_certified,
        ks_refuted,
        cp: cpm >= -PSD_TOL,
        p_margin,
        ks_closed_margin: Some(closed),
        ks_search_margin: search_margin,
        cp_margin: cpm,
    })
}

/// Smallest eigenvalue of `Φ(|ψ⟩⟨ψ|)` over pure states: `10⁴` Fibonacci
/// points on the Bloch sphere, then local refinement of the best few.
pub fn positivity_margin(map: &QubitMap) -> f64 {
    let m = map.transfer();
    let f = |theta: f64, phi: f64| {
        let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let w: [f64; 4] =
            [0, 1, 2, 3].map(|i| 0.5 * (m[(i, 0)] + m[(i, 1)] * n[0] + m[(i, 2)] * n[1] + m[(i, 3)] * n[2]));
        w[0] - (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]).sqrt()
    };
    const N: usize = 10_000;
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut samples: Vec<(f64, f64, f64)> = (0..N)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / N as f64;
            let theta = z.acos();
            let phi = (golden_angle * i as f64).rem_euclid(std::f64::consts::TAU);
            (f(theta, phi), theta, phi)
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = samples[0].0;
    for &(v0, th0, ph0) in samples.iter().take(4) {
        let (mut v, mut th, mut ph) = (v0, th0, ph0);
        let mut step = 0.05;
        while step > 1e-9 {
            let mut moved = false;
            for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let c = f(th + dt, ph + dp);
                if c < v {
                    (v, th, ph) = (c, th + dt, ph + dp);
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best = best.min(v);
    }
    best
}

fn general_pair<D: DynamicalMap + ?Sized>(
    lambda: &D,
    s: f64,
    t: f64,
    search: &SearchConfig,
) -> Result<PairVerdict> {
    let v = propagator(lambda, s, t)?;
    let p_margin = positivity_margin(&v);
    let cpm = cp_margin(&v)?;
    let cp = cpm >= -PSD_TOL;
    // KS-divisibility is a Heisenberg-picture statement
    let heis = v.dual();
    let mut ks_certified = cp;
    let mut closed = None;
    if let Some(d) = heis.as_pauli_diagonal(1e-12) {
        if d.is_positive() {
            let cf = ks_closed_form_diag(d.q)?;
            ks_certified |= cf.certified;
            closed = Some(cf.margin);
        }
    }
    let mut ks_refuted = false;
    let mut search_margin = None;
    if !ks_certified {
        let mode = if heis.is_unital(1e-12) {
            KsMode::Unital
        } else {
            KsMode::Generalized
        };
        match ks_witness_search(&heis, mode, search) {
            Ok(rep) => {
                ks_refuted = rep.verdict == KsVerdict::Violation;
                search_margin = Some(rep.margin);
            }
            // Φ(𝟙) not positive definite: not even positive
            Err(Error::InvalidInput(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(PairVerdict {
        s,
        t,
        positive: p_margin >= -PSD_TOL,
        ks_certified,
        ks_refuted,
        cp,
        p_margin,
        ks_closed_margin: closed,
        ks_search_margin: search_margin,
        cp_margin: cpm,
    })
}

fn is_singular(e: &Error) -> bool {
    matches!(e, Error::NonInvertible { .. } | Error::NonInvertibleDynamics { .. })
}

fn collect_pairs<F>(
    times: &[f64],
    cfg: &ScanConfig,
    eval: F,
) -> Result<(Vec<PairVerdict>, Vec<(f64, f64)>)>
where
    F: Fn(f64, f64, &SearchConfig) -> Result<PairVerdict> + Sync,
{
    let idx = pair_indices(times, cfg.min_gap);
    let results: Vec<Result<PairVerdict>> = idx
        .par_iter()
        .enumerate()
        .map(|(n, &(i, j))| eval(times[i], times[j], &pair_search(cfg, n)))
        .collect();
    let mut pairs = Vec::with_capacity(results.len());
    let mut untestable = Vec::new();
    for (r, &(i, j)) in results.into_iter().zip(&idx) {
        match r {
            Ok(v) => pairs.push(v),
            Err(e) if is_singular(&e) => untestable.push((times[i], times[j])),
            Err(e) => return Err(e),
        }
    }
    Ok((pairs, untestable))
}

fn propagator_first_violation(pairs: &[PairVerdict]) -> FirstViolations {
    let first = |pred: &dyn Fn(&PairVerdict) -> bool| {
        pairs
            .iter()
            .filter(|p| pred(p))
            .map(|p| p.t)
            .fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.min(t))))
    };
    FirstViolations {
        p: first(&|p| !p.positive),
        ks: first(&|p| !p.ks_certified),
        cp: first(&|p| !p.cp),
    }
}

fn finish(
    pairs: Vec<PairVerdict>,
    untestable: Vec<(f64, f64)>,
    generator: Vec<GeneratorPoint>,
    generator_first_violation: FirstViolations,
    consistency: Option<ConsistencyCheck>,
) -> DivisibilityScanReport {
    let unresolved_ks = pairs.iter().filter(|p| p.ks_unresolved()).count();
    let hierarchy_breaches = pairs.iter().filter(|p| !p.hierarchy_ok()).count();
    DivisibilityScanReport {
        propagator_first_violation: propagator_first_violation(&pairs),
        pairs,
        untestable,
        generator,
        generator_first_violation,
        unresolved_ks,
        hierarchy_breaches,
        consistency,
    }
}

/// Scan a general dynamical map on the given time grid.
pub fn divisibility_scan_map<D: DynamicalMap + ?Sized>(
    lambda: &D,
    times: &[f64],
    cfg: &ScanConfig,
) -> Result<DivisibilityScanReport> {
    check_grid(times)?;
    let (pairs, untestable) = collect_pairs(times, cfg, |s, t, search| {
        general_pair(lambda, s, t, search)
    })?;
    Ok(finish(pairs, untestable, Vec::new(), FirstViolations::default(), None))
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.len() < 2 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "scan grid needs at least two increasing points".into(),
        ));
    }
    Ok(())
}

fn min_margins(gamma: [f64; 3]) -> [f64; 3] {
    let v = classify_rates(gamma);
    [v.min_p_margin(), v.min_ks_margin(), v.min_cp_margin()]
}

/// First time on the grid where margin `class` drops below the tie
/// tolerance, refined by bisection between neighbouring grid points.
fn first_crossing(traj: &TrajectoryGrid, class: usize, tol: f64) -> Result<Option<f64>> {
    let times = traj.times();
    let bad = |g: [f64; 3]| min_margins(g)[class] < -RATE_TOL;
    let Some(n) = traj.gamma().iter().position(|g| bad(*g)) else {
        return Ok(None);
    };
    if n == 0 {
        return Ok(Some(0.0));
    }
    let (mut lo, mut hi) = (times[n - 1], times[n]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if bad(traj.rates().eval(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Rates sampled at grid points inside `[s, t]` and three interior points
/// per grid interval.
fn interval_ks_margins(traj: &TrajectoryGrid, i: usize, j: usize) -> Result<Vec<f64>> {
    let times = traj.times();
    let mut out = Vec::new();
    for n in i..=j {
        out.push(classify_rates(traj.gamma()[n]).min_ks_margin());
        if n < j {
            for k in 1..4 {
                let t = times[n] + (times[n + 1] - times[n]) * k as f64 / 4.0;
                out.push(classify_rates(traj.rates().eval(t)?).min_ks_margin());
            }
        }
    }
    Ok(out)
}

fn consistency(
    traj: &TrajectoryGrid,
    pairs: &[PairVerdict],
    cfg: &ScanConfig,
) -> Result<ConsistencyCheck> {
    let times = traj.times();
    let index = |t: f64| times.partition_point(|&x| x < t);
    let mut c = ConsistencyCheck::default();
    for p in pairs {
        let (i, j) = (index(p.s), index(p.t));
        let margins = interval_ks_margins(traj, i, j)?;
        if margins.iter().any(|m| m.abs() < cfg.band) {
            c.limit_sensitive += 1;
            continue;
        }
        c.checked += 1;
        let gen_ks = margins.iter().all(|&m| m >= -RATE_TOL);
        if gen_ks && !p.ks_certified {
            c.theorem_mismatches += 1;
        }
        if p.t - p.s <= cfg.short_window + 1e-12 {
            let mean = classify_rates(traj.mean_rates(p.s, p.t)?);
            if mean.min_ks_margin().abs() < cfg.band {
                c.limit_sensitive += 1;
            } else if mean.ks_divisible_now != p.ks_certified {
                c.short_window_mismatches += 1;
            }
        }
    }
    Ok(c)
}

/// Scan a Pauli-channel trajectory on its own time grid.
pub fn divisibility_scan(traj: &TrajectoryGrid, cfg: &ScanConfig) -> Result<DivisibilityScanReport> {
    let times = traj.times();
    check_grid(times)?;
    let (pairs, untestable) =
        collect_pairs(times, cfg, |s, t, search| pauli_pair(traj, s, t, search))?;
    let generator = times
        .iter()
        .zip(traj.gamma())
        .map(|(&t, &gamma)| GeneratorPoint {
            t,
            gamma,
            verdict: classify_rates(gamma),
        })
        .collect();
    let first = FirstViolations {
        p: first_crossing(traj, 0, cfg.bisection_tol)?,
        ks: first_crossing(traj, 1, cfg.bisection_tol)?,
        cp: first_crossing(traj, 2, cfg.bisection_tol)?,
    };
    let check = consistency(traj, &pairs, cfg)?;
    Ok(finish(pairs, untestable, generator, first, Some(check)))
}
