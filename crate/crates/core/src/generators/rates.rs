// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-dependent rates `γ_k(t)` for the Pauli-class generator.

use crate::error::{Error, Result};

const DOMAIN_SLACK: f64 = 1e-12;

/// `ln cosh x` without overflow for large `|x|`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Piecewise-linear rate table.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl RateTable {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::InvalidInput(
                "rate table needs at least two (t, γ) rows of equal length".into(),
            ));
        }
        if times.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite rate table entry".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "rate table times must be strictly increasing".into(),
            ));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("non-empty table")
    }

    fn last_step(&self) -> f64 {
        let n = self.times.len();
        self.times[n - 1] - self.times[n - 2]
    }

    /// Within one table step of the last row.
    pub fn near_end(&self, t: f64) -> bool {
        t > self.t_end() - self.last_step()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = (self.times[0], self.t_end());
        if !(t >= lo - DOMAIN_SLACK && t <= hi + DOMAIN_SLACK) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        let t = t.clamp(lo, hi);
        let k = match self.times.partition_point(|&x| x <= t) {
            0 => 0,
            n if n >= self.times.len() => self.times.len() - 2,
            n => n - 1,
        };
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let (v0, v1) = (self.values[k], self.values[k + 1]);
        Ok(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
    }
}

/// A single rate function.
#[derive(Debug, Clone, PartialEq)]
pub enum RateFn {
    /// `c`
    Constant(f64),
    /// `a·tanh(b·t)`
    Tanh { a: f64, b: f64 },
    /// `a·e^{-b·t}`
    Exp { a: f64, b: f64 },
    /// Linear interpolation in a table.
    Table(RateTable),
}

impl RateFn {
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            RateFn::Constant(c) => *c,
            RateFn::Tanh { a, b } => a * (b * t).tanh(),
            RateFn::Exp { a, b } => a * (-b * t).exp(),
            RateFn::Table(tab) => tab.eval(t)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidInput(format!("rate evaluates to {v} at t = {t}")))
        }
    }

    /// `∫₀ᵗ γ(τ)dτ` when a closed form is known.
    pub fn antiderivative(&self, t: f64) -> Option<f64> {
        match self {
            RateFn::Constant(c) => Some(c * t),
            RateFn::Tanh { a, b } => Some(if *b == 0.0 { 0.0 } else { a * ln_cosh(b * t) / b }),
            RateFn::Exp { a, b } => Some(if *b == 0.0 {
                a * t
            } else {
                -a * (-b * t).exp_m1() / b
            }),
            RateFn::Table(_) => None,
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self, RateFn::Table(_))
    }

    pub fn near_table_end(&self, t: f64) -> bool {
        match self {
            RateFn::Table(tab) => tab.near_end(t),
            _ => false,
        }
    }

    fn validate(&self, t_max: f64) -> Result<()> {
        match self {
            RateFn::Constant(c) if !c.is_finite() => {
                Err(Error::InvalidInput("non-finite constant rate".into()))
            }
            RateFn::Tanh { a, b } | RateFn::Exp { a, b } if !(a.is_finite() && b.is_finite()) => {
                Err(Error::InvalidInput("non-finite rate parameter".into()))
            }
            RateFn::Table(tab) if tab.times[0] > 0.0 || tab.t_end() < t_max => {
                Err(Error::InvalidInput(format!(
                    "rate table covers [{}, {}] but the domain is [0, {t_max}]",
                    tab.times[0],
                    tab.t_end()
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Three rates `γ₁, γ₂, γ₃` on `[0, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFunctions {
    rates: [RateFn; 3],
    t_max: f64,
}

impl RateFunctions {
    pub fn new(rates: [RateFn; 3], t_max: f64) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidInput(format!("t_max must be positive, got {t_max}")));
        }
        for r in &rates {
            r.validate(t_max)?;
        }
        Ok(Self { rates, t_max })
    }

    pub fn constant(gamma: [f64; 3], t_max: f64) -> Result<Self> {
        Self::new(gamma.map(RateFn::Constant), t_max)
    }

    /// `γ₁ = γ₂ = 1`, `γ₃ = -tanh t`: CPTP and P-divisible for all times
    /// although `γ₃ < 0` for every `t > 0`.
    pub fn eternally_non_markovian(t_max: f64) -> Result<Self> {
        Self::new(
            [
                RateFn::Constant(1.0),
                RateFn::Constant(1.0),
                RateFn::Tanh { a: -1.0, b: 1.0 },
            ],
            t_max,
        )
    }

    /// `γ₁ = γ₂ = 1`, `γ₃ = -½ tanh t`: still eternally non-Markovian but
    /// KS-divisible.
    pub fn ks_divisible_variant(t_max: f64) -> Result<Self> {
        Self::new(
            [
                RateFn::Constant(1.0),
                RateFn::Constant(1.0),
                RateFn::Tanh { a: -0.5, b: 1.0 },
            ],
            t_max,
        )
    }

    pub fn rates(&self) -> &[RateFn; 3] {
        &self.rates
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn eval(&self, t: f64) -> Result<[f64; 3]> {
        if !(t >= -DOMAIN_SLACK && t <= self.t_max + DOMAIN_SLACK) {
            return Err(Error::OutOfRange {
                t,
                lo: 0.0,
                hi: self.t_max,
            });
        }
        Ok([
            self.rates[0].eval(t)?,
            self.rates[1].eval(t)?,
            self.rates[2].eval(t)?,
        ])
    }

    pub fn near_table_end(&self, t: f64) -> bool {
        self.rates.iter().any(|r| r.near_table_end(t))
    }
}
