// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Qubit operators and the Pauli-coordinate calculus.
//!
//! Every `X ∈ M₂(ℂ)` is written as `X = w₀𝟙 + w·σ` with `w₀ ∈ ℂ`,
//! `w ∈ ℂ³`. The Pauli matrices are the standard computational-basis ones;
//! basis index 0 is `|1⟩` and index 1 is `|2⟩`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat4, HERMITIAN_TOL};

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Coefficients `(w₀, w)` of `X = w₀𝟙 + w·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoordinates {
    pub w0: Complex64,
    pub w: [Complex64; 3],
}

impl PauliCoordinates {
    pub fn new(w0: Complex64, w: [Complex64; 3]) -> Self {
        Self { w0, w }
    }

    pub fn real(w0: f64, w: [f64; 3]) -> Self {
        Self {
            w0: Complex64::new(w0, 0.0),
            w: w.map(|x| Complex64::new(x, 0.0)),
        }
    }

    /// `[w₀, w₁, w₂, w₃]`
    pub fn to_array(&self) -> [Complex64; 4] {
        [self.w0, self.w[0], self.w[1], self.w[2]]
    }

    pub fn from_array(a: [Complex64; 4]) -> Self {
        Self {
            w0: a[0],
            w: [a[1], a[2], a[3]],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().into_iter().all(finite)
    }

    /// `|w₀|² + ‖w‖²`, half the squared Frobenius norm of the operator.
    pub fn norm_sqr(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm_sqr()).sum()
    }

    /// True when `w₀` and every `w_k` are real to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.to_array().iter().all(|z| z.im.abs() <= tol)
    }

    pub fn conj(&self) -> Self {
        Self {
            w0: self.w0.conj(),
            w: self.w.map(|z| z.conj()),
        }
    }
}

/// Closed-form decomposition `w₀ = tr(X)/2`, `w_k = tr(σ_k X)/2`.
pub fn pauli_decompose(x: &Mat2) -> Result<PauliCoordinates> {
    if !x.iter().flatten().copied().all(finite) {
        return Err(Error::InvalidInput("non-finite operator entry".into()));
    }
    Ok(decompose_unchecked(x))
}

fn decompose_unchecked(x: &Mat2) -> PauliCoordinates {
    let half = 0.5;
    PauliCoordinates {
        w0: (x[0][0] + x[1][1]) * half,
        w: [
            (x[0][1] + x[1][0]) * half,
            I * (x[0][1] - x[1][0]) * half,
            (x[0][0] - x[1][1]) * half,
        ],
    }
}

fn compose_unchecked(c: &PauliCoordinates) -> Mat2 {
    let [w1, w2, w3] = c.w;
    [
        [c.w0 + w3, w1 - I * w2],
        [w1 + I * w2, c.w0 - w3],
    ]
}

/// Inverse of [`pauli_decompose`].
pub fn pauli_compose(c: &PauliCoordinates) -> Result<QubitOperator> {
    if !c.is_finite() {
        return Err(Error::InvalidInput("non-finite Pauli coordinates".into()));
    }
    Ok(QubitOperator::from_coords_unchecked(*c))
}

/// Bilinear vector product; no conjugation is applied.
pub fn complex_cross(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// A 2×2 complex operator kept together with its Pauli coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitOperator {
    entries: Mat2,
    coords: PauliCoordinates,
}

impl QubitOperator {
    pub fn from_matrix(entries: Mat2) -> Result<Self> {
        let coords = pauli_decompose(&entries)?;
        Ok(Self { entries, coords })
    }

    pub fn from_coords(coords: PauliCoordinates) -> Result<Self> {
        pauli_compose(&coords)
    }

    pub(crate) fn from_coords_unchecked(coords: PauliCoordinates) -> Self {
        Self {
            entries: compose_unchecked(&coords),
            coords,
        }
    }

    pub(crate) fn from_matrix_unchecked(entries: Mat2) -> Self {
        Self {
            entries,
            coords: decompose_unchecked(&entries),
        }
    }

    pub fn zero() -> Self {
        Self::from_matrix_unchecked([[ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Self::from_matrix_unchecked([[ONE, ZERO], [ZERO, ONE]])
    }

    /// σ₁, σ₂, σ₃ for `k = 1, 2, 3`; `k = 0` gives the identity.
    pub fn sigma(k: usize) -> Self {
        let m = match k {
            0 => [[ONE, ZERO], [ZERO, ONE]],
            1 => [[ZERO, ONE], [ONE, ZERO]],
            2 => [[ZERO, -I], [I, ZERO]],
            3 => [[ONE, ZERO], [ZERO, -ONE]],
            _ => panic!("Pauli index {k} out of range 0..=3"),
        };
        Self::from_matrix_unchecked(m)
    }

    /// `|i⟩⟨j|` with zero-based basis indices.
    pub fn ket_bra(i: usize, j: usize) -> Self {
        let mut m = [[ZERO; 2]; 2];
        m[i][j] = ONE;
        Self::from_matrix_unchecked(m)
    }

    /// Lowering operator `σ₋ = |1⟩⟨2|`.
    pub fn sigma_minus() -> Self {
        Self::ket_bra(0, 1)
    }

    /// Raising operator `σ₊ = |2⟩⟨1|`.
    pub fn sigma_plus() -> Self {
        Self::ket_bra(1, 0)
    }

    /// Density matrix `(𝟙 + x·σ)/2` for a real Bloch vector.
    pub fn bloch_state(x: [f64; 3]) -> Self {
        Self::from_coords_unchecked(PauliCoordinates::real(0.5, x.map(|v| 0.5 * v)))
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    pub fn coords(&self) -> &PauliCoordinates {
        &self.coords
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.entries;
        Self {
            entries: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
            coords: self.coords.conj(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            entries: self.entries.map(|r| r.map(|z| z * s)),
            coords: PauliCoordinates::from_array(self.coords.to_array().map(|z| z * s)),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Frobenius norm `sqrt(tr X†X)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation `max |X - X†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let m = &self.entries;
        let off = (m[0][1] - m[1][0].conj()).norm();
        off.max(2.0 * m[0][0].im.abs()).max(2.0 * m[1][1].im.abs())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() <= 1e-300 {
            return Err(Error::InvalidInput("singular operator".into()));
        }
        let m = &self.entries;
        let inv = [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]];
        QubitOperator::from_matrix(inv)
    }

    /// Maximum entrywise distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        d
    }

    /// Smallest eigenvalue of the Hermitian part, no tolerance check.
    pub(crate) fn min_eig_of_hermitian_part(&self) -> f64 {
        let c = &self.coords;
        let n = (c.w[0].re.powi(2) + c.w[1].re.powi(2) + c.w[2].re.powi(2)).sqrt();
        c.w0.re - n
    }
}

impl Add for QubitOperator {
    type Output = QubitOperator;
    fn add(self, rhs: Self) -> Self {
        let a = self.coords.to_array();
        let b = rhs.coords.to_array();
        QubitOperator::from_coords_unchecked(PauliCoordinates::from_array([
            a[0] + b[0],
            a[1] + b[1],
            a[2] + b[2],
            a[3] + b[3],
        ]))
    }
}

impl Sub for QubitOperator {
    type Output = QubitOperator;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QubitOperator {
    type Output = QubitOperator;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for QubitOperator {
    type Output = QubitOperator;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        QubitOperator::from_matrix_unchecked(m)
    }
}

impl Mul<f64> for QubitOperator {
    type Output = QubitOperator;
    fn mul(self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }
}

/// Matrices whose smallest eigenvalue can be computed after a Hermiticity
/// check at [`HERMITIAN_TOL`].
pub trait HermitianSpectrum {
    fn min_eig(&self) -> Result<f64>;
}

impl HermitianSpectrum for QubitOperator {
    /// Closed form `w₀ - ‖w‖` on the symmetrized operator.
    fn min_eig(&self) -> Result<f64> {
        if !self.coords.is_finite() {
            return Err(Error::InvalidInput("non-finite operator entry".into()));
        }
        let defect = self.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidInput(format!(
                "operator is not Hermitian (max |X - X†| = {defect:e})"
            )));
        }
        Ok(self.min_eig_of_hermitian_part())
    }
}

impl HermitianSpectrum for Mat4 {
    fn min_eig(&self) -> Result<f64> {
        Ok(linalg::hermitian_eigenvalues4(self)?[0])
    }
}

/// Smallest eigenvalue of a Hermitian 2×2 or 4×4 matrix.
pub fn min_eig_hermitian<M: HermitianSpectrum + ?Sized>(x: &M) -> Result<f64> {
    x.min_eig()
}

/// Trace norm `Tr sqrt(X†X)`, the sum of the singular values.
///
/// For 2×2 matrices `(s₁ + s₂)² = ‖X‖_F² + 2|det X|`.
pub fn trace_norm(x: &QubitOperator) -> f64 {
    let f2 = x.frobenius_norm().powi(2);
    (f2 + 2.0 * x.det().norm()).max(0.0).sqrt()
}
