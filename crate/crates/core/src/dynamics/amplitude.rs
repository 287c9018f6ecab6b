// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Amplitude damping driven by a single complex function `G(t)`.
//!
//! `Λ_t` acts on density-matrix entries as
//! `ρ₁₁ ↦ ρ₁₁ + (1 - |G|²)ρ₂₂`, `ρ₂₂ ↦ |G|²ρ₂₂`, `ρ₁₂ ↦ Gρ₁₂`.
//! The generator has `γ = -2 Re(Ġ/G)` and `ω = -2 Im(Ġ/G)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::generators::{generator_schrodinger, GksldData};
use crate::maps::QubitMap;
use crate::pauli::QubitOperator;

use super::DynamicalMap;

/// Default finite-difference step for `Ġ`.
pub const DEFAULT_FD_STEP: f64 = 1e-6;
/// `|G(t)|` below this makes `Λ_t` non-invertible.
pub const SINGULAR_TOL: f64 = 1e-12;

type GFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub struct AmplitudeDampingSpec {
    g: GFn,
    h_g: f64,
    t_max: f64,
}

impl fmt::Debug for AmplitudeDampingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AmplitudeDampingSpec")
            .field("h_g", &self.h_g)
            .field("t_max", &self.t_max)
            .finish_non_exhaustive()
    }
}

impl AmplitudeDampingSpec {
    pub fn new<F>(g: F, t_max: f64) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidInput(format!("t_max must be positive, got {t_max}")));
        }
        let g0 = g(0.0);
        if (g0 - 1.0).norm() > 1e-12 {
            return Err(Error::InvalidInput(format!("G(0) must be 1, got {g0}")));
        }
        Ok(Self {
            g: Arc::new(g),
            h_g: DEFAULT_FD_STEP,
            t_max,
        })
    }

    pub fn with_fd_step(mut self, h_g: f64) -> Result<Self> {
        if !(h_g > 0.0 && h_g.is_finite()) {
            return Err(Error::InvalidInput(format!("finite-difference step must be positive, got {h_g}")));
        }
        self.h_g = h_g;
        Ok(self)
    }

    /// `G(t) = e^{-(a/2)t - i(b/2)t}`, i.e. constant `γ = a`, `ω = b`.
    pub fn exp_decay(a: f64, b: f64, t_max: f64) -> Result<Self> {
        Self::new(
            move |t| Complex64::new(-0.5 * a * t, -0.5 * b * t).exp(),
            t_max,
        )
    }

    /// `G(t) = e^{-at} cos(bt)`; vanishes at `bt = π/2`.
    pub fn damped_cosine(a: f64, b: f64, t_max: f64) -> Result<Self> {
        Self::new(move |t| Complex64::new((-a * t).exp() * (b * t).cos(), 0.0), t_max)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn g(&self, t: f64) -> Complex64 {
        (self.g)(t)
    }

    fn check_range(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.t_max) {
            return Err(Error::OutOfRange {
                t,
                lo: 0.0,
                hi: self.t_max,
            });
        }
        Ok(())
    }

    fn nonsingular(&self, t: f64) -> Result<Complex64> {
        let g = self.g(t);
        if !(g.norm() >= SINGULAR_TOL) {
            return Err(Error::NonInvertibleDynamics {
                t,
                reason: format!("|G(t)| = {:e}", g.norm()),
            });
        }
        Ok(g)
    }

    /// Second-order difference quotient with step `h`: central when
    /// `t ≥ h`, one-sided three-point otherwise.
    fn difference(&self, t: f64, h: f64) -> Complex64 {
        if t >= h {
            (self.g(t + h) - self.g(t - h)) / (2.0 * h)
        } else {
            (self.g(t) * -3.0 + self.g(t + h) * 4.0 - self.g(t + 2.0 * h)) / (2.0 * h)
        }
    }

    /// `Ġ/G` from one Richardson step on the difference quotients.
    pub fn log_derivative(&self, t: f64) -> Result<Complex64> {
        self.check_range(t)?;
        let g = self.nonsingular(t)?;
        let h = self.h_g;
        let d = (self.difference(t, 0.5 * h) * 4.0 - self.difference(t, h)) / 3.0;
        Ok(d / g)
    }

    /// `(γ(t), ω(t))`.
    pub fn rates(&self, t: f64) -> Result<(f64, f64)> {
        let l = self.log_derivative(t)?;
        Ok((-2.0 * l.re, -2.0 * l.im))
    }

    pub fn gksl_at(&self, t: f64) -> Result<GksldData> {
        let (gamma, omega) = self.rates(t)?;
        GksldData::amplitude_damping(gamma, omega)
    }

    /// Schrödinger-picture generator at time `t`.
    pub fn generator_at(&self, t: f64) -> Result<QubitMap> {
        generator_schrodinger(&self.gksl_at(t)?)
    }

    /// `|G(t)| ≤ 1`, the CPTP condition for `Λ_t`.
    pub fn is_cptp_at(&self, t: f64) -> Result<bool> {
        self.check_range(t)?;
        Ok(self.g(t).norm() <= 1.0 + 1e-12)
    }
}

pub fn amplitude_damping_map(spec: &AmplitudeDampingSpec, t: f64) -> Result<QubitMap> {
    spec.check_range(t)?;
    let g = spec.nonsingular(t)?;
    let g2 = g.norm_sqr();
    QubitMap::from_action(|x| {
        let e = x.entries();
        QubitOperator::from_matrix([
            [e[0][0] + e[1][1] * (1.0 - g2), e[0][1] * g],
            [e[1][0] * g.conj(), e[1][1] * g2],
        ])
        .expect("finite entries")
    })
}

impl DynamicalMap for AmplitudeDampingSpec {
    fn map_at(&self, t: f64) -> Result<QubitMap> {
        amplitude_damping_map(self, t)
    }

    fn t_range(&self) -> (f64, f64) {
        (0.0, self.t_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_has_constant_rates() {
        let spec = AmplitudeDampingSpec::exp_decay(1.0, 0.0, 5.0).unwrap();
        for t in [0.0, 1e-7, 0.3, 2.0, 4.9] {
            let (g, w) = spec.rates(t).unwrap();
            assert!((g - 1.0).abs() < 1e-8, "γ({t}) = {g}");
            assert!(w.abs() < 1e-8);
        }
        let spec = AmplitudeDampingSpec::exp_decay(0.4, 1.5, 5.0).unwrap();
        let (g, w) = spec.rates(1.0).unwrap();
        assert!((g - 0.4).abs() < 1e-8 && (w - 1.5).abs() < 1e-8);
    }

    #[test]
    fn constant_one_is_identity() {
        let spec = AmplitudeDampingSpec::new(|_| Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert!(spec.map_at(0.7).unwrap().max_abs_diff(&QubitMap::identity()) < 1e-15);
        assert_eq!(spec.rates(0.7).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn excited_population_halves_at_ln2() {
        let spec = AmplitudeDampingSpec::exp_decay(1.0, 0.0, 2.0).unwrap();
        let rho = QubitOperator::ket_bra(1, 1);
        let out = spec.map_at(std::f64::consts::LN_2).unwrap().apply(&rho);
        assert!((out.entries()[1][1].re - 0.5).abs() < 1e-14);
        assert!((out.entries()[0][0].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_of_g_is_non_invertible() {
        let spec = AmplitudeDampingSpec::damped_cosine(0.1, 1.0, 3.0).unwrap();
        let t0 = std::f64::consts::FRAC_PI_2;
        assert!(matches!(
            spec.map_at(t0),
            Err(Error::NonInvertibleDynamics { .. })
        ));
        assert!(spec.map_at(1.0).is_ok());
    }

    #[test]
    fn g_must_start_at_one() {
        assert!(AmplitudeDampingSpec::new(|_| Complex64::new(0.5, 0.0), 1.0).is_err());
    }

    #[test]
    fn cptp_flag_tracks_modulus() {
        let spec = AmplitudeDampingSpec::new(|t| Complex64::new(1.0 + t, 0.0), 1.0).unwrap();
        assert!(spec.is_cptp_at(0.0).unwrap());
        assert!(!spec.is_cptp_at(0.5).unwrap());
    }
}
