// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Absolute tolerance used for accumulated rates.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum bisection depth.
pub const MAX_DEPTH: u32 = 40;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// `∫ₐᵇ f` to absolute tolerance `tol`, with one Richardson correction per
/// accepted panel.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad quadrature request on [{a}, {b}] with tol {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let root = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
    };
    recurse(&f, root, tol, MAX_DEPTH)
}

fn recurse<F>(f: &F, p: Panel, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (p.a + p.b);
    let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NoConvergence {
            what: format!("adaptive Simpson on [{}, {}]", p.a, p.b),
        });
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(recurse(f, l, 0.5 * tol, depth - 1)? + recurse(f, r, 0.5 * tol, depth - 1)?)
}
