// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! 800×800 SVG of the plane `p₁ + p₂ + p₃ = 1`.
//!
//! Points are drawn in barycentric coordinates with respect to the
//! positivity triangle `(1,1,-1)`, `(1,-1,1)`, `(-1,1,1)`. The boundary of
//! the KS region is traced by marching squares over the scan grid.

use std::fmt::Write;

use ksdiv::maps::cubic_margin;

use crate::region::axis;

pub const SIZE: f64 = 800.0;

const CENTER: (f64, f64) = (400.0, 430.0);
const RADIUS: f64 = 390.0;

fn vertices() -> [(f64, f64); 3] {
    let s = RADIUS * 3f64.sqrt() / 2.0;
    [
        (CENTER.0, CENTER.1 - RADIUS),
        (CENTER.0 - s, CENTER.1 + 0.5 * RADIUS),
        (CENTER.0 + s, CENTER.1 + 0.5 * RADIUS),
    ]
}

/// Screen position of a point of the plane.
pub fn project(p: [f64; 3]) -> (f64, f64) {
    let [a, b, c] = vertices();
    let w = [(1.0 - p[2]) / 2.0, (1.0 - p[1]) / 2.0, (1.0 - p[0]) / 2.0];
    (
        w[0] * a.0 + w[1] * b.0 + w[2] * c.0,
        w[0] * a.1 + w[1] * b.1 + w[2] * c.1,
    )
}

/// Nonnegative exactly on the positive maps satisfying the KS condition.
fn field(p1: f64, p2: f64) -> f64 {
    let p = [p1, p2, 1.0 - p1 - p2];
    let pos = 1.0 - p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    cubic_margin(p).min(pos)
}

/// Zero-level segments of [`field`] on a `resolution²` grid, in `(p₁, p₂)`.
pub fn ks_boundary(resolution: usize) -> Vec<[(f64, f64); 2]> {
    let ax = axis(resolution);
    let n = ax.len();
    let vals: Vec<Vec<f64>> = ax
        .iter()
        .map(|&a| ax.iter().map(|&b| field(a, b)).collect())
        .collect();
    let mut segs = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            // corners in cyclic order
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let mut pts = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (corners[e], corners[(e + 1) % 4]);
                let (va, vb) = (vals[a.0][a.1], vals[b.0][b.1]);
                if (va >= 0.0) != (vb >= 0.0) {
                    let s = va / (va - vb);
                    let x = ax[a.0] + s * (ax[b.0] - ax[a.0]);
                    let y = ax[a.1] + s * (ax[b.1] - ax[a.1]);
                    pts.push((x, y));
                }
            }
            for pair in pts.chunks_exact(2) {
                segs.push([pair[0], pair[1]]);
            }
        }
    }
    segs
}

fn polygon(out: &mut String, pts: &[[f64; 3]], style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = project(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    writeln!(out, r#"<polygon points="{}" {style}/>"#, coords.join(" ")).unwrap();
}

pub fn render_slice_svg(resolution: usize) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    polygon(
        &mut out,
        &[[1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0]],
        r##"fill="#f6e27f" stroke="#8a7a1c" stroke-width="2""##,
    );
    let mut d = String::new();
    for [a, b] in ks_boundary(resolution) {
        let (x0, y0) = project([a.0, a.1, 1.0 - a.0 - a.1]);
        let (x1, y1) = project([b.0, b.1, 1.0 - b.0 - b.1]);
        write!(d, "M{x0:.3},{y0:.3}L{x1:.3},{y1:.3}").unwrap();
    }
    writeln!(
        out,
        r##"<path d="{d}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##
    )
    .unwrap();
    polygon(
        &mut out,
        &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        r##"fill="#9cc3e6" fill-opacity="0.7" stroke="#1f4e9c" stroke-width="1.5""##,
    );
    for (p, label, dy) in [
        ([1.0, 1.0, -1.0], "(1,1,-1)", -10.0),
        ([1.0, -1.0, 1.0], "(1,-1,1)", 22.0),
        ([-1.0, 1.0, 1.0], "(-1,1,1)", 22.0),
    ] {
        let (x, y) = project(p);
        writeln!(
            out,
            r#"<text x="{x:.3}" y="{:.3}" font-family="sans-serif" font-size="16" text-anchor="middle">{label}</text>"#,
            y + dy
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
