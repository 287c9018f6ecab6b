// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Dynamical maps `t ↦ Λ_t`, their propagators and divisibility.
//!
//! Three sources of dynamics are supported: closed-form Pauli channels from
//! accumulated rates ([`TrajectoryGrid`]), amplitude damping from a complex
//! function `G(t)` ([`AmplitudeDampingSpec`]) and RK4 integration of an
//! arbitrary time-dependent generator ([`OdeSolution`]).

mod amplitude;
mod ode;
mod scan;
mod trajectory;

pub use amplitude::{amplitude_damping_map, AmplitudeDampingSpec, DEFAULT_FD_STEP};
pub use ode::{integrate_master_equation, OdeSolution, DEFAULT_STEP};
pub use scan::{
    divisibility_scan, divisibility_scan_map, positivity_margin, ConsistencyCheck,
    DivisibilityScanReport, FirstViolations, GeneratorPoint, PairVerdict, ScanConfig,
    DEFAULT_SCAN_POINTS,
};
pub use trajectory::{
    accumulate_rates, accumulate_rates_with, eigenvalues_from_accumulated, map_at,
    pauli_propagator, uniform_grid, Accumulation, TrajectoryGrid,
};

use crate::error::{Error, Result};
use crate::maps::QubitMap;
use crate::pauli::{trace_norm, QubitOperator};

/// A family of maps `Λ_t` on a closed time interval.
pub trait DynamicalMap: Sync {
    fn map_at(&self, t: f64) -> Result<QubitMap>;
    fn t_range(&self) -> (f64, f64);
}

/// Wrap a closure as a [`DynamicalMap`].
pub struct MapFamily<F> {
    f: F,
    range: (f64, f64),
}

impl<F> MapFamily<F>
where
    F: Fn(f64) -> Result<QubitMap> + Sync,
{
    pub fn new(f: F, t_min: f64, t_max: f64) -> Self {
        Self {
            f,
            range: (t_min, t_max),
        }
    }
}

impl<F> DynamicalMap for MapFamily<F>
where
    F: Fn(f64) -> Result<QubitMap> + Sync,
{
    fn map_at(&self, t: f64) -> Result<QubitMap> {
        let (lo, hi) = self.range;
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        (self.f)(t)
    }

    fn t_range(&self) -> (f64, f64) {
        self.range
    }
}

/// `V_{t,s} = Λ_t Λ_s⁻¹`.
pub fn propagator<D: DynamicalMap + ?Sized>(lambda: &D, s: f64, t: f64) -> Result<QubitMap> {
    if t < s {
        return Err(Error::InvalidInput(format!("propagator needs t ≥ s (s = {s}, t = {t})")));
    }
    let ls = lambda.map_at(s)?;
    Ok(lambda.map_at(t)?.compose(&ls.invert()?))
}

/// Largest finite-difference derivative of `t ↦ ‖Λ_t(X)‖₁` over the grid:
/// central in the interior, one-sided at the ends.
pub fn blp_monotonicity<D: DynamicalMap + ?Sized>(
    lambda: &D,
    x: &QubitOperator,
    grid: &[f64],
) -> Result<f64> {
    if !x.is_hermitian(1e-12) {
        return Err(Error::InvalidInput("BLP test needs a Hermitian operator".into()));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "BLP grid needs at least two increasing points".into(),
        ));
    }
    let norms = grid
        .iter()
        .map(|&t| Ok(trace_norm(&lambda.map_at(t)?.apply(x))))
        .collect::<Result<Vec<f64>>>()?;
    let n = grid.len();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
        let d = (norms[b] - norms[a]) / (grid[b] - grid[a]);
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{pauli_generator, RateFunctions};
    use crate::maps::PSD_TOL;
    use crate::pauli::{min_eig_hermitian, PauliCoordinates};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn models(t_max: f64) -> Vec<RateFunctions> {
        vec![
            RateFunctions::eternally_non_markovian(t_max).unwrap(),
            RateFunctions::ks_divisible_variant(t_max).unwrap(),
            RateFunctions::constant([0.3, 0.5, 0.9], t_max).unwrap(),
        ]
    }

    #[test]
    fn ode_matches_closed_form_for_enm() {
        let r = RateFunctions::eternally_non_markovian(1.0).unwrap();
        let sol = integrate_master_equation(|t| pauli_generator(r.eval(t)?), 1.0, 1e-3).unwrap();
        let m = sol.map_at(1.0).unwrap();
        let l1 = (-1f64).exp() * 1f64.cosh();
        let expect = [1.0, l1, l1, (-2f64).exp()];
        for k in 0..4 {
            assert!((m.transfer()[(k, k)] - expect[k]).abs() < 1e-6);
        }
    }

    #[test]
    fn cocycle_and_start_point() {
        for r in models(3.0) {
            let traj = accumulate_rates(&r, &uniform_grid(3.0, 31).unwrap()).unwrap();
            let v0 = propagator(&traj, 0.0, 2.1).unwrap();
            assert!(v0.max_abs_diff(&traj.map_at(2.1).unwrap()) < 1e-15);
            let (s, u, t) = (0.4, 1.3, 2.9);
            let direct = propagator(&traj, s, t).unwrap();
            let split = propagator(&traj, u, t)
                .unwrap()
                .compose(&propagator(&traj, s, u).unwrap());
            assert!(direct.max_abs_diff(&split) < 1e-10);
            let same = propagator(&traj, 1.1, 1.1).unwrap();
            assert!(same.max_abs_diff(&QubitMap::identity()) < 1e-14);
            // general route agrees with the Pauli shortcut
            let pauli = traj.propagator(s, t).unwrap().to_map();
            assert!(direct.max_abs_diff(&pauli) < 1e-12);
        }
    }

    fn random_state(rng: &mut ChaCha8Rng) -> QubitOperator {
        let mut x = [0.0f64; 3];
        for v in x.iter_mut() {
            *v = rng.random_range(-1.0..1.0);
        }
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let r: f64 = rng.random_range(0.0..1.0);
        if n > 1.0 || n == 0.0 {
            x.iter_mut().for_each(|v| *v *= r / n.max(1e-300));
        }
        QubitOperator::bloch_state(x)
    }

    #[test]
    fn cptp_maps_send_states_to_states_and_scale_bloch_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in models(2.0) {
            let traj = accumulate_rates(&r, &uniform_grid(2.0, 21).unwrap()).unwrap();
            for n in [1usize, 7, 20] {
                let t = traj.times()[n];
                let m = traj.map_at(t).unwrap();
                let lam = traj.lambda()[n];
                for _ in 0..100 {
                    let rho = random_state(&mut rng);
                    let out = m.apply(&rho);
                    assert!((out.trace() - 1.0).norm() < 1e-12);
                    assert!(min_eig_hermitian(&out).unwrap() >= -PSD_TOL);
                    let x = rho.coords().w.map(|z| 2.0 * z.re);
                    let y = out.coords().w.map(|z| 2.0 * z.re);
                    for k in 0..3 {
                        assert!((y[k] - lam[k] * x[k]).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn blp_enm_has_no_backflow() {
        let r = RateFunctions::eternally_non_markovian(5.0).unwrap();
        let grid = uniform_grid(5.0, 201).unwrap();
        let traj = accumulate_rates(&r, &grid).unwrap();
        for k in 1..4 {
            let d = blp_monotonicity(&traj, &QubitOperator::sigma(k), &grid).unwrap();
            assert!(d <= 1e-8, "σ{k}: {d}");
        }
    }

    #[test]
    fn blp_unitary_dynamics_is_flat() {
        let u = |t: f64| {
            let h = PauliCoordinates::real(0.0, [0.3, -0.4, 1.0]);
            // exp(-i t h·σ) with |h| = n: cos(nt) - i sin(nt) ĥ·σ
            let n = (0.09f64 + 0.16 + 1.0).sqrt();
            let (c, s) = ((n * t).cos(), (n * t).sin());
            let w = h.w.map(|z| Complex64::new(0.0, -s / n) * z);
            QubitOperator::from_coords(PauliCoordinates::new(Complex64::new(c, 0.0), w)).unwrap()
        };
        let fam = MapFamily::new(move |t| QubitMap::unitary_conjugation(&u(t)), 0.0, 3.0);
        let x = QubitOperator::from_coords(PauliCoordinates::real(0.2, [0.7, -0.1, 0.5])).unwrap();
        let grid = uniform_grid(3.0, 61).unwrap();
        let d = blp_monotonicity(&fam, &x, &grid).unwrap();
        assert!(d.abs() < 1e-10, "{d}");
    }

    #[test]
    fn blp_detects_negative_pair_sum() {
        // γ₂ + γ₃ < 0: λ₁ grows
        let r = RateFunctions::constant([1.0, 0.5, -1.0], 1.0).unwrap();
        let grid = uniform_grid(1.0, 11).unwrap();
        let traj = accumulate_rates(&r, &grid).unwrap();
        let d = blp_monotonicity(&traj, &QubitOperator::sigma(1), &grid).unwrap();
        assert!(d > 0.0);
    }

    #[test]
    fn blp_rejects_non_hermitian_operator() {
        let r = RateFunctions::constant([1.0; 3], 1.0).unwrap();
        let grid = uniform_grid(1.0, 3).unwrap();
        let traj = accumulate_rates(&r, &grid).unwrap();
        assert!(blp_monotonicity(&traj, &QubitOperator::sigma_minus(), &grid).is_err());
    }

    #[test]
    fn amplitude_damping_generator_reproduces_map() {
        let spec = AmplitudeDampingSpec::new(
            |t| Complex64::new(-0.3 * t - 0.1 * t * t, -0.8 * t).exp(),
            2.0,
        )
        .unwrap();
        let sol = integrate_master_equation(|t| spec.generator_at(t), 2.0, 1e-3).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let d = sol.map_at(t).unwrap().max_abs_diff(&spec.map_at(t).unwrap());
            assert!(d < 1e-7, "t = {t}: {d}");
        }
    }

    #[test]
    fn singular_start_is_reported() {
        let spec = AmplitudeDampingSpec::damped_cosine(0.0, 1.0, 3.0).unwrap();
        assert!(matches!(
            propagator(&spec, std::f64::consts::FRAC_PI_2, 3.0),
            Err(Error::NonInvertibleDynamics { .. })
        ));
    }
}
