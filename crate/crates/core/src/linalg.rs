// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Eigenvalues of small dense symmetric and Hermitian matrices.
//!
//! Cyclic Jacobi rotations on a fixed-size real symmetric matrix. Complex
//! Hermitian `n × n` matrices are handled through the real symmetric
//! embedding `[[Re, -Im], [Im, Re]]` of size `2n`, whose spectrum is the
//! Hermitian spectrum with every eigenvalue doubled.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 4×4 complex matrix, row-major.
pub type Mat4 = [[Complex64; 4]; 4];

/// Hermiticity tolerance applied before eigensolving.
pub const HERMITIAN_TOL: f64 = 1e-10;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

fn off_diagonal_mass<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                s += v * v;
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a real symmetric matrix, ascending.
///
/// Converges when the off-diagonal Frobenius mass drops below `1e-14`
/// (relative to the matrix norm when that exceeds one).
pub fn symmetric_eigenvalues<const N: usize>(m: &[[f64; N]; N]) -> Result<[f64; N]> {
    let mut a = *m;
    for i in 0..N {
        for j in 0..i {
            if !(a[i][j].is_finite() && a[j][i].is_finite()) {
                return Err(Error::InvalidInput("non-finite matrix entry".into()));
            }
            let s = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = s;
            a[j][i] = s;
        }
        if !a[i][i].is_finite() {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
    }
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    let tol = OFF_DIAGONAL_TOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a) < tol {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..N {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    if !converged && off_diagonal_mass(&a) >= tol {
        return Err(Error::NoConvergence {
            what: format!("Jacobi eigensolver ({N}×{N})"),
        });
    }
    let mut ev = [0.0; N];
    for (i, e) in ev.iter_mut().enumerate() {
        *e = a[i][i];
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Largest entrywise deviation `max |m - m†|`.
pub fn hermitian_defect4(m: &Mat4) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    d
}

/// Eigenvalues of a 4×4 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues4(m: &Mat4) -> Result<[f64; 4]> {
    if m.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    let defect = hermitian_defect4(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian (max |X - X†| = {defect:e})"
        )));
    }
    let mut e = [[0.0; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let h = 0.5 * (m[i][j] + m[j][i].conj());
            e[i][j] = h.re;
            e[i + 4][j + 4] = h.re;
            e[i][j + 4] = -h.im;
            e[i + 4][j] = h.im;
        }
    }
    let doubled = symmetric_eigenvalues(&e)?;
    // every eigenvalue appears twice, sorted pairs are adjacent
    let mut ev = [0.0; 4];
    for (k, v) in ev.iter_mut().enumerate() {
        *v = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
    }
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_is_its_own_spectrum() {
        let m = [[3.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 2.0]];
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), [-1.0, 2.0, 3.0]);
    }

    #[test]
    fn symmetric_2x2_closed_form() {
        // eigenvalues of [[a, b], [b, d]]
        let (a, b, d): (f64, f64, f64) = (0.3, -1.7, 2.2);
        let mean = 0.5 * (a + d);
        let r = ((0.5 * (a - d)).powi(2) + b * b).sqrt();
        let ev = symmetric_eigenvalues(&[[a, b], [b, d]]).unwrap();
        assert!((ev[0] - (mean - r)).abs() < 1e-14);
        assert!((ev[1] - (mean + r)).abs() < 1e-14);
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let m = [
            [4.0, 1.0, -2.0, 0.5],
            [1.0, 2.0, 0.0, 1.0],
            [-2.0, 0.0, 3.0, -1.5],
            [0.5, 1.0, -1.5, -1.0],
        ];
        let ev = symmetric_eigenvalues(&m).unwrap();
        let tr: f64 = (0..4).map(|i| m[i][i]).sum();
        let fro: f64 = m.iter().flatten().map(|v| v * v).sum();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-12);
        assert!((ev.iter().map(|v| v * v).sum::<f64>() - fro).abs() < 1e-11);
    }

    #[test]
    fn swap_over_two_has_one_negative_eigenvalue() {
        let z = c(0.0, 0.0);
        let h = c(0.5, 0.0);
        let swap = [[h, z, z, z], [z, z, h, z], [z, h, z, z], [z, z, z, h]];
        let ev = hermitian_eigenvalues4(&swap).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn complex_hermitian_matches_known_spectrum() {
        // σ2 ⊗ 𝟙 has spectrum {-1, -1, 1, 1}
        let z = c(0.0, 0.0);
        let m = [
            [z, z, c(0.0, -1.0), z],
            [z, z, z, c(0.0, -1.0)],
            [c(0.0, 1.0), z, z, z],
            [z, c(0.0, 1.0), z, z],
        ];
        let ev = hermitian_eigenvalues4(&m).unwrap();
        for (a, b) in ev.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let z = c(0.0, 0.0);
        let mut m = [[z; 4]; 4];
        m[0][1] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_eigenvalues4(&m),
            Err(Error::InvalidInput(_))
        ));
    }
}
