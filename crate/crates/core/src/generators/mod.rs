// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-local generators and their dissipativity.
//!
//! Generators are stored like maps, as real 4×4 transfer matrices. For the
//! Pauli class `L(ρ) = ½ Σ γ_k (σ_k ρ σ_k - ρ)` the transfer matrix is
//! `diag(0, -(γ₂+γ₃), -(γ₃+γ₁), -(γ₁+γ₂))` and the map is self-dual.

mod rates;

pub use rates::{ln_cosh, RateFn, RateFunctions, RateTable};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maps::{KsReport, QubitMap};
use crate::pauli::{complex_cross, PauliCoordinates, QubitOperator};
use crate::search::{minimize_over_operators, SearchConfig};

/// Tie tolerance for the sign conditions on rates.
pub const RATE_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hamiltonian plus weighted jump operators.
#[derive(Debug, Clone, PartialEq)]
pub struct GksldData {
    hamiltonian: QubitOperator,
    jumps: Vec<(QubitOperator, f64)>,
}

impl GksldData {
    pub fn new(hamiltonian: QubitOperator, jumps: Vec<(QubitOperator, f64)>) -> Result<Self> {
        if !hamiltonian.is_hermitian(1e-12) {
            return Err(Error::InvalidInput(format!(
                "Hamiltonian is not Hermitian (max |H - H†| = {:e})",
                hamiltonian.hermitian_defect()
            )));
        }
        if jumps.iter().any(|(_, g)| !g.is_finite()) {
            return Err(Error::InvalidInput("non-finite jump rate".into()));
        }
        Ok(Self { hamiltonian, jumps })
    }

    /// Dissipative Pauli generator, `V_k = σ_k` with weight `γ_k / 2`.
    pub fn pauli(gamma: [f64; 3]) -> Result<Self> {
        let jumps = (0..3)
            .map(|k| (QubitOperator::sigma(k + 1), 0.5 * gamma[k]))
            .collect();
        Self::new(QubitOperator::zero(), jumps)
    }

    /// Decay `|2⟩ → |1⟩` at rate `gamma` with frequency shift `omega`.
    ///
    /// The Hamiltonian is `(ω/2) σ₋σ₊ = (ω/2)|1⟩⟨1|`, which makes the
    /// coherence evolve as `ρ₁₂ ↦ G ρ₁₂` with `Ġ/G = -(γ + iω)/2`.
    pub fn amplitude_damping(gamma: f64, omega: f64) -> Result<Self> {
        let h = (QubitOperator::sigma_minus() * QubitOperator::sigma_plus()) * (0.5 * omega);
        Self::new(h, vec![(QubitOperator::sigma_minus(), gamma)])
    }

    pub fn hamiltonian(&self) -> &QubitOperator {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[(QubitOperator, f64)] {
        &self.jumps
    }

    /// `Σ γ_k V_k† V_k`
    fn loss(&self) -> QubitOperator {
        self.jumps
            .iter()
            .fold(QubitOperator::zero(), |acc, (v, g)| acc + (v.adjoint() * *v) * *g)
    }
}

fn commutator(a: &QubitOperator, b: &QubitOperator) -> QubitOperator {
    *a * *b - *b * *a
}

fn anticommutator(a: &QubitOperator, b: &QubitOperator) -> QubitOperator {
    *a * *b + *b * *a
}

/// `L(ρ) = -i[H,ρ] + Σγ_k V_k ρ V_k† - ½{Σγ_k V_k†V_k, ρ}`.
pub fn generator_schrodinger(g: &GksldData) -> Result<QubitMap> {
    let loss = g.loss();
    QubitMap::from_action(|rho| {
        let jump = g.jumps.iter().fold(QubitOperator::zero(), |acc, (v, k)| {
            acc + (*v * *rho * v.adjoint()) * *k
        });
        commutator(&g.hamiltonian, rho).scale(-I) + jump - anticommutator(&loss, rho) * 0.5
    })
}

/// `L♯(X) = i[H,X] + Σγ_k V_k† X V_k - ½{Σγ_k V_k†V_k, X}`.
pub fn generator_heisenberg(g: &GksldData) -> Result<QubitMap> {
    let loss = g.loss();
    QubitMap::from_action(|x| {
        let jump = g.jumps.iter().fold(QubitOperator::zero(), |acc, (v, k)| {
            acc + (v.adjoint() * *x * *v) * *k
        });
        commutator(&g.hamiltonian, x).scale(I) + jump - anticommutator(&loss, x) * 0.5
    })
}

/// Transfer matrix `diag(0, -(γ₂+γ₃), -(γ₃+γ₁), -(γ₁+γ₂))`.
pub fn pauli_generator(gamma: [f64; 3]) -> Result<QubitMap> {
    let [g1, g2, g3] = gamma;
    QubitMap::from_transfer(Matrix4::from_diagonal(&Vector4::new(
        0.0,
        -(g2 + g3),
        -(g3 + g1),
        -(g1 + g2),
    )))
}

/// Generator-level position in the divisibility hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativityVerdict {
    pub p_divisible_now: bool,
    pub ks_divisible_now: bool,
    pub cp_divisible_now: bool,
    /// `γ_i + 2γ_j` for `(i, j)` = (1,2), (1,3), (2,1), (2,3), (3,1), (3,2).
    pub ks_margins: [f64; 6],
    /// `γ₂+γ₃`, `γ₃+γ₁`, `γ₁+γ₂`.
    pub p_margins: [f64; 3],
    /// `γ₁, γ₂, γ₃`.
    pub cp_margins: [f64; 3],
}

impl DissipativityVerdict {
    pub fn min_ks_margin(&self) -> f64 {
        self.ks_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_p_margin(&self) -> f64 {
        self.p_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_cp_margin(&self) -> f64 {
        self.cp_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub const ORDERED_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// Sign conditions `γ_i + γ_j ≥ 0` (P), `γ_i + 2γ_j ≥ 0` (KS), `γ_k ≥ 0`
/// (CP), each with tie tolerance [`RATE_TOL`].
pub fn classify_rates(gamma: [f64; 3]) -> DissipativityVerdict {
    let [g1, g2, g3] = gamma;
    let ks_margins = ORDERED_PAIRS.map(|(i, j)| gamma[i] + 2.0 * gamma[j]);
    let p_margins = [g2 + g3, g3 + g1, g1 + g2];
    let ok = |m: &[f64]| m.iter().all(|&v| v >= -RATE_TOL);
    // each weaker flag absorbs the stronger one so ties cannot break the order
    let cp = ok(&gamma);
    let ks = cp || ok(&ks_margins);
    let p = ks || ok(&p_margins);
    let v = DissipativityVerdict {
        p_divisible_now: p,
        ks_divisible_now: ks,
        cp_divisible_now: cp,
        ks_margins,
        p_margins,
        cp_margins: gamma,
    };
    assert!(!v.cp_divisible_now || v.ks_divisible_now);
    assert!(!v.ks_divisible_now || v.p_divisible_now);
    v
}

/// `min_eig(L♯(X†X) - L♯(X†)X - X†L♯(X))` for a Heisenberg generator.
pub fn dissipation_margin(heisenberg: &QubitMap, x: &QubitOperator) -> f64 {
    let xd = x.adjoint();
    let d = heisenberg.apply(&(xd * *x)) - heisenberg.apply(&xd) * *x - xd * heisenberg.apply(x);
    d.min_eig_of_hermitian_part()
}

/// Look for an `X` breaking dissipativity of a unital Heisenberg generator.
pub fn dissipativity_numeric(heisenberg: &QubitMap, cfg: &SearchConfig) -> Result<KsReport> {
    let unit = heisenberg.transfer().column(0).amax();
    if unit > RATE_TOL {
        return Err(Error::InvalidGenerator(format!(
            "L♯(𝟙) ≠ 0 (max coordinate {unit:e}); the generator is not trace-preserving"
        )));
    }
    let out = minimize_over_operators(|x| dissipation_margin(heisenberg, x), cfg);
    Ok(KsReport::from_search(out.value, out.argmin))
}

/// Signed measure of dissipativity for the Pauli generator: nonnegative
/// exactly when `L♯(X†X) ≥ L♯(X†)X + X†L♯(X)` for all `X`.
///
/// The dissipation function is `½ Σ γ_k [σ_k, X]†[σ_k, X]`, and it is
/// positive semidefinite for every `X` iff all pair sums `γ_i + γ_j` and
/// the symmetric function `γ₁γ₂ + γ₂γ₃ + γ₃γ₁` are nonnegative. The
/// second term enters as a signed square root so both carry rate units.
/// `γ_i + 2γ_j ≥ 0` for all ordered pairs implies this condition but is
/// not implied by it, e.g. `γ = (2, 0.8, -0.5)`.
pub fn exact_dissipativity_margin(gamma: [f64; 3]) -> f64 {
    let [g1, g2, g3] = gamma;
    let e2 = g1 * g2 + g2 * g3 + g3 * g1;
    let pair = (g1 + g2).min(g2 + g3).min(g3 + g1);
    pair.min(e2.signum() * e2.abs().sqrt())
}

/// Eigenvalues and Kossakowski-type coefficients of the rescaled map
/// `Φ(X) = ½ Σ γ'_k σ_k X σ_k` with `Σγ'_k = 2`, so that `L = Φ - id`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuLambda {
    /// `λ₁ = ½(γ'₁ - γ'₂ - γ'₃)` and cyclic.
    pub lambda: [f64; 3],
    /// `μ_k = 1 - λ_i - λ_j + λ_k = 2γ'_k`.
    pub mu: [f64; 3],
    /// `1 - λ_k = γ'_i + γ'_j`.
    pub a_coeffs: [f64; 3],
    /// The rescaled rates.
    pub normalized: [f64; 3],
}

pub fn mu_lambda_decomposition(gamma: [f64; 3]) -> Result<MuLambda> {
    let total: f64 = gamma.iter().sum();
    if !(total > 1e-14) {
        return Err(Error::DegenerateGenerator { total });
    }
    let g = gamma.map(|v| 2.0 * v / total);
    let lambda = [
        0.5 * (g[0] - g[1] - g[2]),
        0.5 * (g[1] - g[2] - g[0]),
        0.5 * (g[2] - g[0] - g[1]),
    ];
    let mut mu = [0.0; 3];
    let mut a_coeffs = [0.0; 3];
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        mu[k] = 1.0 - lambda[i] - lambda[j] + lambda[k];
        a_coeffs[k] = 1.0 - lambda[k];
        debug_assert!((mu[k] - 2.0 * g[k]).abs() <= 1e-12 * (1.0 + g[k].abs()));
        debug_assert!((a_coeffs[k] - (gamma[i] + gamma[j]) * 2.0 / total).abs() <= 1e-12);
    }
    Ok(MuLambda {
        lambda,
        mu,
        a_coeffs,
        normalized: g,
    })
}

/// The rescaled unital map `Φ` of [`MuLambda`], transfer `diag(1, λ)`.
pub fn normalized_pauli_map(gamma: [f64; 3]) -> Result<QubitMap> {
    let d = mu_lambda_decomposition(gamma)?;
    let [l1, l2, l3] = d.lambda;
    QubitMap::from_transfer(Matrix4::from_diagonal(&Vector4::new(1.0, l1, l2, l3)))
}

/// `Φ(X†X) - Φ(X†)Φ(X) + (Φ(X)-X)†(Φ(X)-X) = a𝟙 + b·σ` for the rescaled
/// map, with `a = 2 Σ (1-λ_k)|w_k|²` and `b = i S (w̄ × w)`,
/// `S = diag(μ₁, μ₂, μ₃)`. Since `w̄ × w` is purely imaginary, `b` is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipatorSplit {
    pub a: f64,
    pub b: [f64; 3],
}

impl DissipatorSplit {
    pub fn operator(&self) -> QubitOperator {
        QubitOperator::from_coords_unchecked(PauliCoordinates::real(self.a, self.b))
    }

    /// Smallest eigenvalue `a - ‖b‖`.
    pub fn min_eig(&self) -> f64 {
        self.a - self.b.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub fn dissipator_split(gamma: [f64; 3], x: &QubitOperator) -> Result<DissipatorSplit> {
    let d = mu_lambda_decomposition(gamma)?;
    let w = x.coords().w;
    let wbar = w.map(|z| z.conj());
    let cross = complex_cross(&wbar, &w);
    let a = 2.0 * (0..3).map(|k| d.a_coeffs[k] * w[k].norm_sqr()).sum::<f64>();
    let b = [0, 1, 2].map(|k| (I * cross[k] * d.mu[k]).re);
    Ok(DissipatorSplit { a, b })
}

/// Local relaxation times `T_i = 1/(γ_j + γ_k)`; `+∞` for directions that
/// do not decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationTimes {
    pub t: [f64; 3],
}

pub fn relaxation_times(gamma: [f64; 3]) -> RelaxationTimes {
    let t = [0, 1, 2].map(|i| {
        let den = gamma[(i + 1) % 3] + gamma[(i + 2) % 3];
        if den > 0.0 {
            1.0 / den
        } else {
            f64::INFINITY
        }
    });
    RelaxationTimes { t }
}

/// For KS-divisible rates with one negative `γ_k`: margins of
/// `T_i ≤ 1/|γ_k|` (`i ≠ k`) and `T_k ≤ 1/(4|γ_k|)`, indexed by `i`.
/// `None` when the bounds do not apply.
pub fn relaxation_bound_margins(gamma: [f64; 3]) -> Option<[f64; 3]> {
    if !classify_rates(gamma).ks_divisible_now {
        return None;
    }
    let (k, gk) = gamma
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    if gk >= 0.0 {
        return None;
    }
    let times = relaxation_times(gamma).t;
    let inv = 1.0 / gk.abs();
    Some([0, 1, 2].map(|i| {
        let bound = if i == k { 0.25 * inv } else { inv };
        bound - times[i]
    }))
}

/// Numerical minimum of `½(αx + βy) - √(xy)` over `(0, x_max]²`.
///
/// Log-spaced grid followed by coordinate golden-section refinement in
/// log coordinates.
pub fn am_gm_minimum(alpha: f64, beta: f64, x_max: f64) -> f64 {
    let h = |x: f64, y: f64| 0.5 * (alpha * x + beta * y) - (x * y).sqrt();
    let lo = (x_max * 1e-9).ln();
    let hi = x_max.ln();
    let n = 96;
    let node = |i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let (mut bu, mut bv, mut best) = (hi, hi, h(x_max, x_max));
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (node(i), node(j));
            let val = h(u.exp(), v.exp());
            if val < best {
                (bu, bv, best) = (u, v, val);
            }
        }
    }
    let step = (hi - lo) / (n - 1) as f64;
    for _ in 0..4 {
        let (u, fu) = golden_1d(|u| h(u.exp(), bv.exp()), (bu - step).max(lo), (bu + step).min(hi));
        if fu < best {
            (bu, best) = (u, fu);
        }
        let (v, fv) = golden_1d(|v| h(bu.exp(), v.exp()), (bv - step).max(lo), (bv + step).min(hi));
        if fv < best {
            (bv, best) = (v, fv);
        }
    }
    best
}

fn golden_1d<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::KsVerdict;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_of(m: &QubitMap) -> [f64; 4] {
        let t = m.transfer();
        [t[(0, 0)], t[(1, 1)], t[(2, 2)], t[(3, 3)]]
    }

    #[test]
    fn dephasing_transfer_matrix() {
        let g = 0.7;
        let data = GksldData::new(QubitOperator::zero(), vec![(QubitOperator::sigma(3), g)]).unwrap();
        let l = generator_schrodinger(&data).unwrap();
        let expect = QubitMap::from_rows([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, -2.0 * g, 0.0, 0.0],
            [0.0, 0.0, -2.0 * g, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(l.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn amplitude_damping_generator_acts_on_entries() {
        let (gamma, omega) = (0.8, 1.3);
        let l = generator_schrodinger(&GksldData::amplitude_damping(gamma, omega).unwrap()).unwrap();
        let rho = QubitOperator::from_matrix([[c(0.3, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.7, 0.0)]])
            .unwrap();
        let d = *l.apply(&rho).entries();
        let r = rho.entries();
        assert!((d[0][0] - r[1][1] * gamma).norm() < 1e-14);
        assert!((d[1][1] + r[1][1] * gamma).norm() < 1e-14);
        assert!((d[0][1] - r[0][1] * c(-0.5 * gamma, -0.5 * omega)).norm() < 1e-14);
    }

    #[test]
    fn pure_hamiltonian_generator_is_antisymmetric() {
        let h = QubitOperator::from_coords(PauliCoordinates::real(0.4, [0.3, -1.1, 0.6])).unwrap();
        let l = generator_schrodinger(&GksldData::new(h, vec![]).unwrap()).unwrap();
        let t = l.transfer();
        assert!((t + t.transpose()).amax() < 1e-15);
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        assert!(matches!(
            GksldData::new(QubitOperator::sigma_minus(), vec![]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn pauli_generator_examples() {
        assert_eq!(diag_of(&pauli_generator([0.0, 0.0, 0.6]).unwrap()), [0.0, -0.6, -0.6, 0.0]);
        assert_eq!(diag_of(&pauli_generator([1.0, 1.0, 1.0]).unwrap()), [0.0, -2.0, -2.0, -2.0]);
        let t1 = 1f64.tanh();
        let d = diag_of(&pauli_generator([1.0, 1.0, -t1]).unwrap());
        let expect = [0.0, -(1.0 - t1), -(1.0 - t1), -2.0];
        for (a, b) in d.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((d[1] + 0.2384).abs() < 1e-4);
    }

    #[test]
    fn pauli_generator_matches_gksl_form() {
        let g = [0.9, -0.2, 0.4];
        let via_gksl = generator_schrodinger(&GksldData::pauli(g).unwrap()).unwrap();
        assert!(via_gksl.max_abs_diff(&pauli_generator(g).unwrap()) < 1e-15);
    }

    #[test]
    fn classify_rates_examples() {
        let t1 = 1f64.tanh();
        let v = classify_rates([1.0, 1.0, -t1]);
        assert!(v.p_divisible_now && !v.ks_divisible_now && !v.cp_divisible_now);
        assert!((v.ks_margins[1] - (1.0 - 2.0 * t1)).abs() < 1e-15);
        assert!((v.ks_margins[1] + 0.523).abs() < 1e-3);
        for t in [0.0, 0.3, 1.0, 5.0, 40.0] {
            assert!(classify_rates([1.0, 1.0, -0.5 * f64::tanh(t)]).ks_divisible_now);
        }
        let v = classify_rates([1.0, 1.0, 1.0]);
        assert!(v.p_divisible_now && v.ks_divisible_now && v.cp_divisible_now);
    }

    #[test]
    fn tie_band_keeps_hierarchy() {
        let v = classify_rates([-0.9e-12, -0.9e-12, -0.9e-12]);
        assert!(v.cp_divisible_now && v.ks_divisible_now && v.p_divisible_now);
    }

    #[test]
    fn degenerate_total_rate_is_classified_directly() {
        let v = classify_rates([1.0, -1.0, 0.0]);
        assert!(v.p_divisible_now == false && !v.ks_divisible_now);
        assert!(matches!(
            mu_lambda_decomposition([1.0, -1.0, 0.0]),
            Err(Error::DegenerateGenerator { .. })
        ));
    }

    #[test]
    fn numeric_dissipativity_examples() {
        let cfg = SearchConfig::with_seed(5, 400);
        let bad = pauli_generator([1.0, 1.0, -1f64.tanh()]).unwrap();
        let r = dissipativity_numeric(&bad, &cfg).unwrap();
        assert_eq!(r.verdict, KsVerdict::Violation);
        let good = pauli_generator([1.0, 1.0, 1.0]).unwrap();
        let r = dissipativity_numeric(&good, &cfg).unwrap();
        assert_eq!(r.verdict, KsVerdict::Undecided);
        assert!(r.margin >= -1e-10);
        let deph = generator_heisenberg(
            &GksldData::new(QubitOperator::zero(), vec![(QubitOperator::sigma(3), 0.4)]).unwrap(),
        )
        .unwrap();
        assert!(dissipativity_numeric(&deph, &cfg).unwrap().margin >= -1e-10);
    }

    #[test]
    fn non_unital_heisenberg_generator_is_rejected() {
        let l = generator_schrodinger(&GksldData::amplitude_damping(1.0, 0.0).unwrap()).unwrap();
        assert!(matches!(
            dissipativity_numeric(&l, &SearchConfig::with_seed(0, 8)),
            Err(Error::InvalidGenerator(_))
        ));
        // the dual of a trace-preserving generator is fine
        assert!(dissipativity_numeric(&l.dual(), &SearchConfig::with_seed(0, 8)).is_ok());
    }

    #[test]
    fn exact_condition_admits_rates_outside_pair_bound() {
        let g = [2.0, 0.8, -0.5];
        assert!(!classify_rates(g).ks_divisible_now);
        assert!(exact_dissipativity_margin(g) > 0.0);
        let r = dissipativity_numeric(&pauli_generator(g).unwrap(), &SearchConfig::with_seed(1, 500))
            .unwrap();
        assert!(r.margin >= -1e-10, "{}", r.margin);
    }

    #[test]
    fn mu_lambda_examples() {
        let d = mu_lambda_decomposition([2.0 / 3.0; 3]).unwrap();
        for k in 0..3 {
            assert!((d.lambda[k] + 1.0 / 3.0).abs() < 1e-15);
            assert!((d.mu[k] - 4.0 / 3.0).abs() < 1e-15);
            assert!((d.a_coeffs[k] - 4.0 / 3.0).abs() < 1e-15);
        }
        let d = mu_lambda_decomposition([2.0, 0.0, 0.0]).unwrap();
        assert_eq!(d.lambda, [1.0, -1.0, -1.0]);
        assert_eq!(d.mu, [4.0, 0.0, 0.0]);
    }

    #[test]
    fn relaxation_time_examples() {
        let t = relaxation_times([1.0, 1.0, -0.25]).t;
        assert!((t[0] - 1.0 / 0.75).abs() < 1e-15 && (t[1] - 1.0 / 0.75).abs() < 1e-15);
        assert_eq!(t[2], 0.5);
        let m = relaxation_bound_margins([1.0, 1.0, -0.25]).unwrap();
        assert!((m[0] - (4.0 - 4.0 / 3.0)).abs() < 1e-14);
        assert!((m[2] - 0.5).abs() < 1e-15);
        assert_eq!(relaxation_times([1.0, 1.0, 1.0]).t, [0.5; 3]);
        assert_eq!(relaxation_times([1.0, 1.0, 0.0]).t, [1.0, 1.0, 0.5]);
        assert_eq!(relaxation_times([1.0, -1.0, -1.0]).t[0], f64::INFINITY);
        assert!(relaxation_bound_margins([1.0, 1.0, 1.0]).is_none());
    }

    #[test]
    fn am_gm_minimum_on_easy_points() {
        // α = β = 1 is the AM-GM equality case
        assert!(am_gm_minimum(1.0, 1.0, 10.0).abs() < 1e-9);
        // α = β = ½: h(10, 10) = -5
        assert!((am_gm_minimum(0.5, 0.5, 10.0) + 5.0).abs() < 1e-9);
        assert!(am_gm_minimum(1.5, 1.2, 10.0) >= -1e-12);
    }

    fn rate() -> impl Strategy<Value = f64> {
        -1.0..2.0f64
    }

    fn operator() -> impl Strategy<Value = QubitOperator> {
        prop::array::uniform8(-1.0..1.0f64).prop_map(|v| {
            let z = |k: usize| c(v[k], v[k + 4]);
            QubitOperator::from_coords(PauliCoordinates::new(z(0), [z(1), z(2), z(3)])).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn heisenberg_is_dual_of_schrodinger(
            h in prop::array::uniform4(-1.0..1.0f64),
            v1 in operator(), v2 in operator(),
            g1 in 0.0..2.0f64, g2 in -1.0..2.0f64,
        ) {
            let ham = QubitOperator::from_coords(PauliCoordinates::real(h[0], [h[1], h[2], h[3]])).unwrap();
            let data = GksldData::new(ham, vec![(v1, g1), (v2, g2)]).unwrap();
            let s = generator_schrodinger(&data).unwrap();
            let hs = generator_heisenberg(&data).unwrap();
            prop_assert!(hs.max_abs_diff(&s.dual()) < 1e-14);
        }

        #[test]
        fn pauli_generator_is_self_dual(g in prop::array::uniform3(rate())) {
            let l = pauli_generator(g).unwrap();
            prop_assert_eq!(l, l.dual());
        }

        #[test]
        fn verdicts_respect_hierarchy(g in prop::array::uniform3(-1e-11..1e-11f64)) {
            let v = classify_rates(g);
            prop_assert!(!v.cp_divisible_now || v.ks_divisible_now);
            prop_assert!(!v.ks_divisible_now || v.p_divisible_now);
        }

        #[test]
        fn verdicts_are_scale_invariant(g in prop::array::uniform3(rate()), s in 0.01..100.0f64) {
            let a = classify_rates(g);
            let b = classify_rates(g.map(|v| v * s));
            // away from the tie band scaling cannot move a verdict
            prop_assume!(a.min_ks_margin().abs() > 1e-9 && a.min_p_margin().abs() > 1e-9);
            prop_assume!(a.min_cp_margin().abs() > 1e-9);
            prop_assert_eq!(a.p_divisible_now, b.p_divisible_now);
            prop_assert_eq!(a.ks_divisible_now, b.ks_divisible_now);
            prop_assert_eq!(a.cp_divisible_now, b.cp_divisible_now);
        }

        #[test]
        fn split_matches_direct_evaluation(g in prop::array::uniform3(rate()), x in operator()) {
            prop_assume!(g.iter().sum::<f64>() > 0.1);
            let phi = normalized_pauli_map(g).unwrap();
            let xd = x.adjoint();
            let fx = phi.apply(&x);
            let direct = phi.apply(&(xd * x)) - phi.apply(&xd) * fx + (fx - x).adjoint() * (fx - x);
            let split = dissipator_split(g, &x).unwrap();
            prop_assert!(direct.max_abs_diff(&split.operator()) < 1e-10);
        }

        #[test]
        fn split_equals_dissipation_of_rescaled_generator(g in prop::array::uniform3(rate()), x in operator()) {
            prop_assume!(g.iter().sum::<f64>() > 0.1);
            let total: f64 = g.iter().sum();
            let l = pauli_generator(g.map(|v| 2.0 * v / total)).unwrap();
            let split = dissipator_split(g, &x).unwrap();
            prop_assert!((dissipation_margin(&l, &x) - split.min_eig()).abs() < 1e-10);
        }

        #[test]
        fn relaxation_bounds_hold_for_ks_rates(g in prop::array::uniform3(rate())) {
            if let Some(m) = relaxation_bound_margins(g) {
                let t = relaxation_times(g).t;
                for k in 0..3 {
                    prop_assert!(m[k] >= -1e-12 * t[k].max(1.0));
                }
            }
        }
    }
}
