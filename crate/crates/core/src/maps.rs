// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Qubit linear maps and their static classification.
//!
//! A Hermiticity-preserving map is stored as the real 4×4 matrix `M` acting
//! on Pauli coordinates `(w₀, w₁, w₂, w₃)`; complex inputs are handled by
//! linearity. In this basis trace preservation means the first row is
//! `(1, 0, 0, 0)`, unitality that the first column is `(1, 0, 0, 0)ᵀ`, and
//! the dual map `Φ♯` has transfer matrix `Mᵀ`.
//!
//! Kadison-Schwarz checks come in two flavours. [`ks_closed_form_diag`]
//! certifies unital Pauli-diagonal maps from the condition
//! `q₁² + q₂² + q₃² ≤ 1 + 2q₁q₂q₃`. [`ks_witness_search`] only refutes: it
//! looks for an `X` with `Φ(X†X) - Φ(X†)Φ(X)` not positive semidefinite.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::pauli::{min_eig_hermitian, PauliCoordinates, QubitOperator};
use crate::search::{minimize_over_operators, SearchConfig};

/// PSD acceptance tolerance.
pub const PSD_TOL: f64 = 1e-10;
/// A search margin below this is declared a violation.
pub const VIOLATION_TOL: f64 = 1e-8;
/// Determinant threshold for invertibility.
pub const INVERTIBLE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hermiticity-preserving linear map on qubit operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitMap {
    transfer: Matrix4<f64>,
}

impl QubitMap {
    pub fn from_transfer(transfer: Matrix4<f64>) -> Result<Self> {
        if transfer.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite transfer matrix".into()));
        }
        Ok(Self { transfer })
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::from_transfer(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    /// Build the transfer matrix of a linear action by evaluating it on the
    /// Pauli basis. Fails unless the action preserves Hermiticity.
    pub fn from_action<F>(action: F) -> Result<Self>
    where
        F: Fn(&QubitOperator) -> QubitOperator,
    {
        let mut m = Matrix4::zeros();
        for a in 0..4 {
            let out = action(&QubitOperator::sigma(a)).coords().to_array();
            for (b, z) in out.iter().enumerate() {
                if z.im.abs() > 1e-12 * (1.0 + z.re.abs()) {
                    return Err(Error::InvalidInput(format!(
                        "action is not Hermiticity-preserving (imaginary coordinate {:e})",
                        z.im
                    )));
                }
                m[(b, a)] = z.re;
            }
        }
        Self::from_transfer(m)
    }

    pub fn identity() -> Self {
        Self {
            transfer: Matrix4::identity(),
        }
    }

    pub fn zero() -> Self {
        Self {
            transfer: Matrix4::zeros(),
        }
    }

    /// Matrix transposition `X ↦ Xᵀ`; flips the sign of σ₂.
    pub fn transposition() -> Self {
        Self {
            transfer: Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, 1.0)),
        }
    }

    /// `X ↦ U X U†`.
    pub fn unitary_conjugation(u: &QubitOperator) -> Result<Self> {
        let ud = u.adjoint();
        Self::from_action(|x| *u * *x * ud)
    }

    pub fn transfer(&self) -> &Matrix4<f64> {
        &self.transfer
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let r = self.transfer.row(0);
        (r[0] - 1.0).abs() <= tol && r[1].abs() <= tol && r[2].abs() <= tol && r[3].abs() <= tol
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        let c = self.transfer.column(0);
        (c[0] - 1.0).abs() <= tol && c[1].abs() <= tol && c[2].abs() <= tol && c[3].abs() <= tol
    }

    pub fn apply(&self, x: &QubitOperator) -> QubitOperator {
        let w = x.coords().to_array();
        let m = &self.transfer;
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = w[0] * m[(i, 0)] + w[1] * m[(i, 1)] + w[2] * m[(i, 2)] + w[3] * m[(i, 3)];
        }
        QubitOperator::from_coords_unchecked(PauliCoordinates::from_array(out))
    }

    /// `Φ♯` defined by `Tr(X Φ(Y)) = Tr(Φ♯(X) Y)`.
    pub fn dual(&self) -> Self {
        Self {
            transfer: self.transfer.transpose(),
        }
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &QubitMap) -> Self {
        Self {
            transfer: self.transfer * other.transfer,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.transfer.determinant()
    }

    pub fn invert(&self) -> Result<Self> {
        let det = self.determinant();
        if det.abs() <= INVERTIBLE_TOL {
            return Err(Error::NonInvertible { det });
        }
        let inv = self
            .transfer
            .try_inverse()
            .ok_or(Error::NonInvertible { det })?;
        Self::from_transfer(inv)
    }

    pub fn add(&self, other: &QubitMap) -> Self {
        Self {
            transfer: self.transfer + other.transfer,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            transfer: self.transfer * s,
        }
    }

    pub fn max_abs_diff(&self, other: &QubitMap) -> f64 {
        (self.transfer - other.transfer).amax()
    }

    /// Choi matrix `(id ⊗ Φ)(|Ω⟩⟨Ω|)` with `|Ω⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn choi_matrix(&self) -> Mat4 {
        choi_matrix(self)
    }

    /// Complete positivity through the Choi spectrum.
    pub fn is_cp(&self) -> Result<bool> {
        is_cp(self)
    }

    /// The diagonal form `diag(1, q₁, q₂, q₃)` if the map has it.
    pub fn as_pauli_diagonal(&self, tol: f64) -> Option<PauliDiagonalMap> {
        let m = &self.transfer;
        for i in 0..4 {
            for j in 0..4 {
                let expect_zero = i != j;
                if expect_zero && m[(i, j)].abs() > tol {
                    return None;
                }
            }
        }
        if (m[(0, 0)] - 1.0).abs() > tol {
            return None;
        }
        Some(PauliDiagonalMap::new([m[(1, 1)], m[(2, 2)], m[(3, 3)]]))
    }
}

/// Unital trace-preserving map with `Φ(σ_k) = q_k σ_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliDiagonalMap {
    pub q: [f64; 3],
}

impl PauliDiagonalMap {
    pub fn new(q: [f64; 3]) -> Self {
        Self { q }
    }

    pub fn to_map(&self) -> QubitMap {
        let [a, b, c] = self.q;
        QubitMap {
            transfer: Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, a, b, c)),
        }
    }

    /// Weights of the equivalent Pauli mixture.
    pub fn mixture(&self) -> PauliMixtureMap {
        PauliMixtureMap::new(eigenvalues_to_mixture(self.q))
    }

    pub fn is_positive(&self) -> bool {
        is_positive_diag(self.q)
    }
}

/// `Λ(ρ) = Σ_α p_α σ_α ρ σ_α` with `σ₀ = 𝟙`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliMixtureMap {
    pub p: [f64; 4],
}

impl PauliMixtureMap {
    pub fn new(p: [f64; 4]) -> Self {
        Self { p }
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        mixture_to_eigenvalues(self.p)
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        (self.p.iter().sum::<f64>() - 1.0).abs() <= tol
    }

    /// All weights nonnegative and summing to one.
    pub fn is_cptp(&self, tol: f64) -> bool {
        self.p.iter().all(|&p| p >= -tol) && self.is_trace_preserving(1e-12)
    }

    pub fn to_map(&self) -> QubitMap {
        let [l1, l2, l3] = self.eigenvalues();
        let total: f64 = self.p.iter().sum();
        QubitMap {
            transfer: Matrix4::from_diagonal(&nalgebra::Vector4::new(total, l1, l2, l3)),
        }
    }
}

/// `λ_k` from the weights `p_α`: `(1, λ) = H p` with `H` the 4×4 ±1 matrix.
pub fn mixture_to_eigenvalues(p: [f64; 4]) -> [f64; 3] {
    let [p0, p1, p2, p3] = p;
    [p0 + p1 - p2 - p3, p0 - p1 + p2 - p3, p0 - p1 - p2 + p3]
}

/// Inverse of [`mixture_to_eigenvalues`] for trace-preserving mixtures:
/// `p = ¼ H (1, λ)`.
pub fn eigenvalues_to_mixture(l: [f64; 3]) -> [f64; 4] {
    let [l1, l2, l3] = l;
    [
        0.25 * (1.0 + l1 + l2 + l3),
        0.25 * (1.0 + l1 - l2 - l3),
        0.25 * (1.0 - l1 + l2 - l3),
        0.25 * (1.0 - l1 - l2 + l3),
    ]
}

/// Choi matrix with the normalized maximally entangled state, so a Pauli
/// mixture has Choi eigenvalues equal to its weights.
pub fn choi_matrix(map: &QubitMap) -> Mat4 {
    let mut c = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let out = map.apply(&QubitOperator::ket_bra(i, j));
            for a in 0..2 {
                for b in 0..2 {
                    c[2 * i + a][2 * j + b] = out.entries()[a][b] * 0.5;
                }
            }
        }
    }
    c
}

pub fn is_cp(map: &QubitMap) -> Result<bool> {
    Ok(min_eig_hermitian(&choi_matrix(map))? >= -PSD_TOL)
}

/// Positivity of a unital Pauli-diagonal map: every `|q_k| ≤ 1`.
pub fn is_positive_diag(q: [f64; 3]) -> bool {
    q.iter().all(|v| v.abs() <= 1.0 + 1e-12)
}

/// Result of the closed-form KS test for a unital Pauli-diagonal map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsClosedForm {
    /// `q₁² + q₂² + q₃² ≤ 1 + 2q₁q₂q₃` (within `1e-12`).
    pub certified: bool,
    /// `A ≤ βγ ∧ B ≤ αγ ∧ C ≤ αβ` (within `1e-12`).
    pub general_certified: bool,
    /// `1 + 2q₁q₂q₃ - (q₁² + q₂² + q₃²)`.
    pub margin: f64,
}

/// Right-hand minus left-hand side of `q₁² + q₂² + q₃² ≤ 1 + 2q₁q₂q₃`.
pub fn cubic_margin(q: [f64; 3]) -> f64 {
    let [a, b, c] = q;
    1.0 + 2.0 * a * b * c - (a * a + b * b + c * c)
}

/// Pairwise form `A ≤ βγ, B ≤ αγ, C ≤ αβ` with
/// `α = |1 - q₁²|`, `A = |q₁ - q₂q₃|²` and cyclic.
pub fn pairwise_certified(q: [f64; 3]) -> bool {
    let [p1, p2, p3] = q;
    let alpha = (1.0 - p1 * p1).abs();
    let beta = (1.0 - p2 * p2).abs();
    let gamma = (1.0 - p3 * p3).abs();
    let a = (p1 - p2 * p3).powi(2);
    let b = (p2 - p1 * p3).powi(2);
    let c = (p3 - p1 * p2).powi(2);
    a <= beta * gamma + 1e-12 && b <= alpha * gamma + 1e-12 && c <= alpha * beta + 1e-12
}

/// Closed-form KS certification of a unital map with `Φ(σ_k) = q_k σ_k`.
///
/// Requires positivity (`|q_k| ≤ 1`), since every KS map is positive.
pub fn ks_closed_form_diag(q: [f64; 3]) -> Result<KsClosedForm> {
    if !is_positive_diag(q) {
        return Err(Error::NotPositive(format!(
            "|q_k| ≤ 1 violated by q = {q:?}"
        )));
    }
    let margin = cubic_margin(q);
    let certified = margin >= -1e-12;
    let general_certified = pairwise_certified(q);
    // the two forms are algebraically identical for |q_k| ≤ 1
    debug_assert!(
        certified == general_certified || margin.abs() < 1e-9,
        "cubic and pairwise forms disagree at q = {q:?}"
    );
    Ok(KsClosedForm {
        certified,
        general_certified,
        margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsVerdict {
    /// Proven by a closed-form sufficient condition.
    Certified,
    /// A witness with margin below `-1e-8` was found.
    Violation,
    /// No violation found, nothing proven.
    Undecided,
}

impl KsVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            KsVerdict::Certified => "KS_CERTIFIED",
            KsVerdict::Violation => "VIOLATION",
            KsVerdict::Undecided => "UNDECIDED",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub verdict: KsVerdict,
    /// Best operator found (unit Frobenius norm); always set after a search.
    pub witness: Option<PauliCoordinates>,
    /// Smallest eigenvalue reached.
    pub margin: f64,
}

impl KsReport {
    pub(crate) fn from_search(margin: f64, witness: PauliCoordinates) -> Self {
        let verdict = if margin < -VIOLATION_TOL {
            KsVerdict::Violation
        } else {
            KsVerdict::Undecided
        };
        Self {
            verdict,
            witness: Some(witness),
            margin,
        }
    }
}

/// Which inequality [`ks_witness_search`] probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsMode {
    /// `Φ(X†X) ≥ Φ(X†)Φ(X)`, requires a unital map.
    Unital,
    /// `Φ(X†X) ≥ Φ(X†)Φ(𝟙)⁻¹Φ(X)`, requires `Φ(𝟙) > 0`.
    Generalized,
}

/// `min_eig(Φ(X†X) - Φ(X†)Φ(X))`.
pub fn ks_margin(map: &QubitMap, x: &QubitOperator) -> f64 {
    let xd = x.adjoint();
    let lhs = map.apply(&(xd * *x));
    let rhs = map.apply(&xd) * map.apply(x);
    (lhs - rhs).min_eig_of_hermitian_part()
}

fn positive_unit_image(map: &QubitMap) -> Result<QubitOperator> {
    let y = map.apply(&QubitOperator::identity());
    let lo = min_eig_hermitian(&y)?;
    if lo <= PSD_TOL {
        return Err(Error::InvalidInput(format!(
            "Φ(𝟙) is not positive definite (min eigenvalue {lo:e})"
        )));
    }
    y.inverse()
}

/// Generalized KS margin `min_eig(Φ(X†X) - Φ(X†)Φ(𝟙)⁻¹Φ(X))`.
///
/// Evaluated in the `X†X` orientation so that it pairs pointwise with
/// [`qks_check`]; over all `X` this is the same inequality as
/// `Φ(XX†) ≥ Φ(X)Φ(𝟙)⁻¹Φ(X†)`.
pub fn ks2_check(map: &QubitMap, x: &QubitOperator) -> Result<f64> {
    let yinv = positive_unit_image(map)?;
    Ok(ks2_margin_with(map, &yinv, x))
}

fn ks2_margin_with(map: &QubitMap, yinv: &QubitOperator, x: &QubitOperator) -> f64 {
    let xd = x.adjoint();
    let lhs = map.apply(&(xd * *x));
    let rhs = map.apply(&xd) * *yinv * map.apply(x);
    (lhs - rhs).min_eig_of_hermitian_part()
}

/// `min_eig(Φ(X†X) - Φ(X†)X - X†Φ(X) + X†Φ(𝟙)X)`.
pub fn qks_check(map: &QubitMap, x: &QubitOperator) -> Result<f64> {
    let xd = x.adjoint();
    let y = map.apply(&QubitOperator::identity());
    let m = map.apply(&(xd * *x)) - map.apply(&xd) * *x - xd * map.apply(x) + xd * y * *x;
    min_eig_hermitian(&m)
}

/// Refute the KS property by random-restart search.
///
/// Never certifies: the verdict is `Violation` or `Undecided`.
pub fn ks_witness_search(map: &QubitMap, mode: KsMode, cfg: &SearchConfig) -> Result<KsReport> {
    match mode {
        KsMode::Unital => {
            if !map.is_unital(1e-12) {
                return Err(Error::InvalidMode(
                    "map is not unital; use the generalized KS mode".into(),
                ));
            }
            let out = minimize_over_operators(|x| ks_margin(map, x), cfg);
            Ok(KsReport::from_search(out.value, out.argmin))
        }
        KsMode::Generalized => {
            let yinv = positive_unit_image(map)?;
            let out = minimize_over_operators(|x| ks2_margin_with(map, &yinv, x), cfg);
            Ok(KsReport::from_search(out.value, out.argmin))
        }
    }
}

/// Certify through the closed form when the map is unital Pauli-diagonal,
/// otherwise fall back to the witness search.
pub fn classify_ks(map: &QubitMap, cfg: &SearchConfig) -> Result<KsReport> {
    if let Some(d) = map.as_pauli_diagonal(1e-12) {
        if !d.is_positive() {
            // KS implies positivity; σ_k with |q_k| > 1 already breaks it
            return ks_witness_search(map, KsMode::Unital, cfg);
        }
        let cf = ks_closed_form_diag(d.q)?;
        if cf.certified {
            return Ok(KsReport {
                verdict: KsVerdict::Certified,
                witness: None,
                margin: 0.0,
            });
        }
    }
    ks_witness_search(map, KsMode::Unital, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues4;
    use crate::pauli::HermitianSpectrum;

    fn diag(q: [f64; 3]) -> QubitMap {
        PauliDiagonalMap::new(q).to_map()
    }

    #[test]
    fn mixture_eigenvalue_examples() {
        assert_eq!(mixture_to_eigenvalues([1.0, 0.0, 0.0, 0.0]), [1.0, 1.0, 1.0]);
        assert_eq!(eigenvalues_to_mixture([1.0, 1.0, 1.0]), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn enm_weights_to_eigenvalues() {
        let t: f64 = 1.0;
        let e = (-2.0 * t).exp();
        let p = [0.5 * (1.0 + e), 0.25 * (1.0 - e), 0.25 * (1.0 - e), 0.0];
        let l = mixture_to_eigenvalues(p);
        let l1 = (-t).exp() * t.cosh();
        assert!((l[0] - l1).abs() < 1e-15);
        assert!((l[1] - l1).abs() < 1e-15);
        assert!((l[2] - e).abs() < 1e-15);
        assert!((l[0] - 0.5677).abs() < 5e-5 && (l[2] - 0.1353).abs() < 5e-5);
    }

    #[test]
    fn apply_examples() {
        let q = [0.3, -0.6, 0.9];
        let phi = diag(q);
        let out = phi.apply(&QubitOperator::sigma(1));
        assert!(out.max_abs_diff(&(QubitOperator::sigma(1) * 0.3)) < 1e-15);

        let id = QubitOperator::identity();
        assert!(phi.apply(&id).max_abs_diff(&id) < 1e-15);

        let t = QubitMap::transposition();
        let out = t.apply(&QubitOperator::ket_bra(0, 1));
        assert!(out.max_abs_diff(&QubitOperator::ket_bra(1, 0)) < 1e-15);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(QubitMap::identity().dual(), QubitMap::identity());
        let d = diag([0.1, 0.2, -0.3]);
        assert_eq!(d.dual(), d);

        // dual of U·U† is U†·U
        let h = QubitOperator::sigma(1) * 0.3 + QubitOperator::sigma(3) * 0.7;
        let u = unitary_from_hermitian(&h, 1.3);
        let fwd = QubitMap::unitary_conjugation(&u).unwrap();
        let back = QubitMap::unitary_conjugation(&u.adjoint()).unwrap();
        assert!(fwd.dual().max_abs_diff(&back) < 1e-14);

        // defining identity Tr(X Φ(Y)) = Tr(Φ♯(X) Y)
        let phi = QubitMap::from_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.2, 0.5, -0.1, 0.0],
            [0.0, 0.3, 0.4, 0.2],
            [-0.1, 0.0, 0.1, 0.6],
        ])
        .unwrap();
        let x = QubitOperator::ket_bra(0, 1) + QubitOperator::sigma(3) * 0.4;
        let y = QubitOperator::ket_bra(1, 1) + QubitOperator::sigma(2) * 0.7;
        let lhs = (x * phi.apply(&y)).trace();
        let rhs = (phi.dual().apply(&x) * y).trace();
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(phi.is_trace_preserving(0.0));
        assert!(phi.dual().is_unital(0.0));
    }

    /// exp(-i h t) for Hermitian h via the closed form on Pauli coordinates.
    fn unitary_from_hermitian(h: &QubitOperator, t: f64) -> QubitOperator {
        let c = h.coords();
        let v = [c.w[0].re, c.w[1].re, c.w[2].re];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let phase = Complex64::from_polar(1.0, -c.w0.re * t);
        let s = (n * t).sin() / n;
        let coords = PauliCoordinates::new(
            Complex64::new((n * t).cos(), 0.0),
            v.map(|x| Complex64::new(0.0, -s * x)),
        );
        QubitOperator::from_coords(coords).unwrap().scale(phase)
    }

    #[test]
    fn compose_and_invert() {
        let phi = diag([0.4, -0.5, 0.8]);
        assert_eq!(phi.compose(&QubitMap::identity()), phi);
        let inv = diag([0.5, 0.25, -0.8]).invert().unwrap();
        let expect = diag([2.0, 4.0, -1.25]);
        assert!(inv.max_abs_diff(&expect) < 1e-14);
        assert!(matches!(
            diag([1.0, 0.0, 0.5]).invert(),
            Err(Error::NonInvertible { .. })
        ));
    }

    #[test]
    fn enm_propagator_between_one_and_two() {
        let lam = |t: f64| [(-t).exp() * t.cosh(), (-t).exp() * t.cosh(), (-2.0 * t).exp()];
        let v = diag(lam(2.0)).compose(&diag(lam(1.0)).invert().unwrap());
        let q = v.as_pauli_diagonal(1e-12).unwrap().q;
        let q1 = (-1f64).exp() * 2f64.cosh() / 1f64.cosh();
        assert!((q[0] - q1).abs() < 1e-14);
        assert!((q[1] - q1).abs() < 1e-14);
        assert!((q[2] - (-2f64).exp()).abs() < 1e-14);
        assert!((q[0] - 0.8970).abs() < 1e-4);
        assert!((q[2] - 0.1353).abs() < 1e-4);
    }

    #[test]
    fn choi_examples() {
        let ev = hermitian_eigenvalues4(&QubitMap::identity().choi_matrix()).unwrap();
        for (a, b) in ev.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let ev = hermitian_eigenvalues4(&QubitMap::transposition().choi_matrix()).unwrap();
        for (a, b) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn choi_of_mixture_has_weights_as_spectrum() {
        // brute-force oracle: build Σ p_α σ_α ρ σ_α directly
        let p = [0.1, 0.2, 0.3, 0.4];
        let brute = QubitMap::from_action(|x| {
            (0..4)
                .map(|a| QubitOperator::sigma(a) * *x * QubitOperator::sigma(a) * p[a])
                .fold(QubitOperator::zero(), |acc, y| acc + y)
        })
        .unwrap();
        assert!(brute.max_abs_diff(&PauliMixtureMap::new(p).to_map()) < 1e-15);
        let mut ev = hermitian_eigenvalues4(&brute.choi_matrix()).unwrap();
        ev.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(p) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn cp_and_positivity_examples() {
        assert!(is_positive_diag([1.0, 1.0, -1.0]));
        assert!(!diag([1.0, 1.0, -1.0]).is_cp().unwrap());
        assert!(is_positive_diag([1.0, 1.0, 1.0]));
        assert!(diag([1.0, 1.0, 1.0]).is_cp().unwrap());
        assert!(PauliMixtureMap::new([0.25; 4]).to_map().is_cp().unwrap());
        assert!(!is_positive_diag([1.1, 0.0, 0.0]));
    }

    #[test]
    fn closed_form_examples() {
        let v = ks_closed_form_diag([1.0, 0.0, 0.0]).unwrap();
        assert!(v.certified && v.general_certified && v.margin == 0.0);
        let v = ks_closed_form_diag([1.0, 1.0, -1.0]).unwrap();
        assert!(!v.certified && !v.general_certified);
        assert_eq!(v.margin, 1.0 - 2.0 - 3.0);
        let v = ks_closed_form_diag([1.0, 1.0, 1.0]).unwrap();
        assert!(v.certified && v.margin == 0.0);
        assert!(matches!(
            ks_closed_form_diag([1.2, 0.0, 0.0]),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn transposition_witness() {
        let x = QubitOperator::ket_bra(0, 1);
        let t = QubitMap::transposition();
        let xd = x.adjoint();
        let d = t.apply(&(xd * x)) - t.apply(&xd) * t.apply(&x);
        // |2⟩⟨2| - |1⟩⟨1|
        let target = -QubitOperator::sigma(3);
        assert!(d.max_abs_diff(&target) <= 1e-14);
        assert_eq!(ks_margin(&t, &x), -1.0);

        let rep = ks_witness_search(&t, KsMode::Unital, &SearchConfig::with_seed(1, 2000)).unwrap();
        assert_eq!(rep.verdict, KsVerdict::Violation);
        assert!(rep.margin <= -1.0 + 1e-6, "{}", rep.margin);
        let w = rep.witness.unwrap();
        assert!(w.w0.norm() < 1e-6);
    }

    #[test]
    fn example_one_map_is_not_ks() {
        let phi = diag([1.0, 1.0, -1.0]);
        let x = QubitOperator::ket_bra(0, 1);
        assert_eq!(ks_margin(&phi, &x), -1.0);
        let rep = ks_witness_search(&phi, KsMode::Unital, &SearchConfig::with_seed(5, 2000)).unwrap();
        assert_eq!(rep.verdict, KsVerdict::Violation);
        assert!(rep.margin <= -1.0 + 1e-6);
    }

    #[test]
    fn identity_is_undecided_with_zero_margin() {
        let rep = ks_witness_search(
            &QubitMap::identity(),
            KsMode::Unital,
            &SearchConfig::with_seed(2, 2000),
        )
        .unwrap();
        assert_eq!(rep.verdict, KsVerdict::Undecided);
        assert!(rep.margin >= -1e-10);
    }

    #[test]
    fn non_unital_needs_generalized_mode() {
        let phi = QubitMap::from_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0],
            [0.75, 0.0, 0.0, 0.25],
        ])
        .unwrap();
        let cfg = SearchConfig::with_seed(0, 100);
        assert!(matches!(
            ks_witness_search(&phi, KsMode::Unital, &cfg),
            Err(Error::InvalidMode(_))
        ));
        // amplitude-damping-like CP map: generalized KS holds
        let rep = ks_witness_search(&phi, KsMode::Generalized, &cfg).unwrap();
        assert_eq!(rep.verdict, KsVerdict::Undecided);
    }

    #[test]
    fn ks2_reduces_to_ks_for_unital_maps() {
        let phi = diag([0.9, 0.7, 0.65]);
        let xs = [
            QubitOperator::ket_bra(0, 1),
            QubitOperator::sigma(2) + QubitOperator::ket_bra(1, 1) * 0.3,
        ];
        for x in xs {
            let a = ks_margin(&phi, &x);
            let b = ks2_check(&phi, &x).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn ks2_requires_positive_unit_image() {
        let singular = QubitMap::from_rows([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(matches!(
            ks2_check(&singular, &QubitOperator::sigma(1)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn qks_on_sigma_one_for_pauli_dissipator() {
        // Φ(X) = ½ Σ γ_k σ_k X σ_k: direct matrix oracle gives 2(γ₂ + γ₃)
        for g in [[1.0, 1.0, -0.4], [0.3, 2.0, 0.5], [1.0, -0.2, 0.1]] {
            let phi = QubitMap::from_action(|x| {
                (1..4)
                    .map(|k| QubitOperator::sigma(k) * *x * QubitOperator::sigma(k) * (0.5 * g[k - 1]))
                    .fold(QubitOperator::zero(), |a, b| a + b)
            })
            .unwrap();
            let m = qks_check(&phi, &QubitOperator::sigma(1)).unwrap();
            assert!((m - 2.0 * (g[1] + g[2])).abs() < 1e-14);
        }
    }

    #[test]
    fn classify_uses_closed_form_for_diagonal_maps() {
        let cfg = SearchConfig::with_seed(0, 64);
        let rep = classify_ks(&diag([0.9, 0.9, 0.9]), &cfg).unwrap();
        assert_eq!(rep.verdict, KsVerdict::Certified);
        let rep = classify_ks(&diag([1.0, 1.0, -1.0]), &cfg).unwrap();
        assert_eq!(rep.verdict, KsVerdict::Violation);
    }

    #[test]
    fn choi_is_hermitian_for_hermiticity_preserving_maps() {
        let phi = QubitMap::from_rows([
            [1.0, 0.1, 0.0, 0.0],
            [0.2, 0.5, -0.1, 0.0],
            [0.0, 0.3, 0.4, 0.2],
            [-0.1, 0.0, 0.1, 0.6],
        ])
        .unwrap();
        assert!(crate::linalg::hermitian_defect4(&phi.choi_matrix()) < 1e-15);
        assert!(phi.choi_matrix().min_eig().is_ok());
    }
}
