//! Resource monotones of reduced states.
//!
//! All logarithms are base 2.

pub mod dictionary;
pub mod lp;
pub mod wigner;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::{binary_entropy, hermitian_eigenvalues, shannon_bits};
use crate::pauli::i_pow;
use crate::statevec::{von_neumann_entropy, DensityMatrix};
use crate::tableau::{majorana_strings, Tableau};
use crate::{Error, Result};

pub use dictionary::{dictionary, enumerate_stabilizer_states, StabilizerDictionary};
pub use wigner::{discrete_wigner, discrete_wigner_direct, mana, WignerTable};

/// Clamp applied to monotones that are nonnegative in exact arithmetic.
pub const NONNEGATIVE_TOL: f64 = 1e-9;
const ANTISYMMETRY_TOL: f64 = 1e-9;

/// `tr(ρ P)` for every Pauli `P_r` in base-4 index order.
pub fn pauli_expectations(rho: &DensityMatrix) -> Result<Vec<f64>> {
    if rho.local_dim() != 2 {
        return Err(Error::Dimension("Pauli expansions need qubits".into()));
    }
    let n = rho.num_sites();
    let m = rho.matrix();
    let dim = 1usize << n;
    Ok((0..1usize << (2 * n))
        .map(|r| {
            let p = dictionary::pauli_from_index(n, r);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                // ⟨k|ρP|k⟩ = ρ[k, k'] i^e with P|k⟩ = i^e|k'⟩.
                let (kp, e) = p.act_on_basis(k as u64);
                acc += m[(k, kp as usize)] * crate::clifford::phase_value(e);
            }
            acc.re
        })
        .collect())
}

/// Log-robustness of magic `log2 min{Σ|x_i| : Σ x_i σ_i = ρ}` over the pure
/// stabilizer states `σ_i` of `dict`.
pub fn log_robustness_of_magic(rho: &DensityMatrix, dict: &StabilizerDictionary) -> Result<f64> {
    Ok(robustness_of_magic(rho, dict)?.log2().max(0.0))
}

/// The optimal `Σ|x_i|` itself.
pub fn robustness_of_magic(rho: &DensityMatrix, dict: &StabilizerDictionary) -> Result<f64> {
    let n = dict.num_qubits();
    if rho.num_sites() != n || rho.local_dim() != 2 {
        return Err(Error::Dimension(format!(
            "{}-site d={} state against a {n}-qubit dictionary",
            rho.num_sites(),
            rho.local_dim()
        )));
    }
    let b = pauli_expectations(rho)?;
    let mut a = lp::SparseColumns::new(b.len());
    for i in 0..dict.len() {
        a.push_column(dict.column(i).map(|(r, s)| (r, s as f64)));
    }
    let sol = lp::min_l1_norm(&a, &b)?;
    Ok(sol.objective.max(1.0))
}

/// `S(diag ρ) − S(ρ)`.
pub fn relative_entropy_of_coherence(rho: &DensityMatrix) -> f64 {
    (shannon_bits(rho.diagonal()) - von_neumann_entropy(rho)).max(0.0)
}

/// Williamson eigenvalues of a real antisymmetric `2m × 2m` matrix, sorted
/// descending and clamped to `[0, 1]`.
pub fn williamson_eigenvalues(gamma: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dev = (gamma + gamma.transpose()).amax();
    if dev > ANTISYMMETRY_TOL || gamma.nrows() != gamma.ncols() || gamma.nrows() % 2 == 1 {
        return Err(Error::NotAntisymmetric(dev));
    }
    let m = gamma.nrows() / 2;
    let herm = gamma.map(|v| Complex64::new(0.0, v));
    let mut ev = hermitian_eigenvalues(&herm);
    ev.reverse();
    Ok(ev.into_iter().take(m).map(|v| v.clamp(0.0, 1.0)).collect())
}

/// Entropy of the fermionic Gaussian state with Williamson eigenvalues `λ`.
pub fn gaussian_entropy(lambda: &[f64]) -> f64 {
    lambda.iter().map(|&l| binary_entropy((1.0 + l) / 2.0)).sum()
}

/// Majorana covariance `Γ_ab = −i tr(ρ γ_a γ_b)` (`a ≠ b`) of a dense qubit
/// state, with Jordan–Wigner strings anchored at its first site.
pub fn covariance_dense(rho: &DensityMatrix) -> Result<DMatrix<f64>> {
    if rho.local_dim() != 2 {
        return Err(Error::Dimension("covariance matrices need qubits".into()));
    }
    let k = rho.num_sites();
    let gammas = majorana_strings(k);
    let m = rho.matrix();
    let mut g = DMatrix::zeros(2 * k, 2 * k);
    for a in 0..2 * k {
        for b in (a + 1)..2 * k {
            // tr(ρ P) = Σ_k ρ[k, k'] i^e with P|k⟩ = i^e |k'⟩.
            let p = gammas[a].mul(&gammas[b]);
            let tr: Complex64 = (0..rho.dim())
                .map(|col| {
                    let (row, e) = p.act_on_basis(col as u64);
                    m[(col, row as usize)] * i_pow(e)
                })
                .sum();
            let v = tr * Complex64::new(0.0, -1.0);
            g[(a, b)] = v.re;
            g[(b, a)] = -v.re;
        }
    }
    Ok(g)
}

/// Relative entropy of non-Gaussianity from a covariance matrix and the
/// state's entropy.
pub fn non_gaussianity_from_parts(gamma: &DMatrix<f64>, entropy: f64) -> Result<f64> {
    let lambda = williamson_eigenvalues(gamma)?;
    Ok((gaussian_entropy(&lambda) - entropy).max(0.0))
}

/// Relative entropy of non-Gaussianity of a dense qubit state.
pub fn relative_entropy_of_non_gaussianity(rho: &DensityMatrix) -> Result<f64> {
    non_gaussianity_from_parts(&covariance_dense(rho)?, von_neumann_entropy(rho))
}

/// Relative entropy of non-Gaussianity of `ρ_A` for a stabilizer state.
pub fn non_gaussianity_tableau(tab: &Tableau, start: usize, end: usize) -> Result<f64> {
    non_gaussianity_from_parts(&tab.covariance_matrix(start, end)?, tab.entanglement_entropy(start, end)?)
}
