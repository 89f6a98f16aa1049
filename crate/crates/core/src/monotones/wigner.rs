//! Discrete Wigner functions and mana for qutrit states.
//!
//! Phase-space points `r ∈ Z₃^{2n}` are indexed in base 3 with digits
//! `(r₁ˣ, r₁ᶻ, r₂ˣ, r₂ᶻ, …)`, the first digit most significant. The phase
//! point operators are `A_r = D_r A_0 D_r†` with `A_0 = 3^{-n} Σ_s D_s` and
//! `W_r = tr(A_r ρ)/3^n`.
//!
//! Two routes are provided. [`discrete_wigner`] computes the characteristic
//! function `c_s = tr(D_s ρ)` and applies the symplectic Fourier transform
//! `W_r = 3^{-2n} Σ_s ω^{[r,s]} c_s` one site at a time.
//! [`discrete_wigner_direct`] builds every `A_r` and takes traces.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ensembles::qutrit::{omega_pow, symplectic_form, weyl_matrix};
use crate::statevec::DensityMatrix;
use crate::{Error, Result};

/// Default cap on the number of qutrits (`3^{10}` phase-space points).
pub const MAX_WIGNER_QUTRITS: usize = 5;
/// Cap for the direct route, which stores `9^n` dense operators.
pub const MAX_DIRECT_QUTRITS: usize = 3;

/// Wigner quasi-probabilities `W_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerTable {
    pub n: usize,
    pub values: Vec<f64>,
}

impl WignerTable {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ_r |W_r|`.
    pub fn negativity_sum(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}

fn check(rho: &DensityMatrix, cap: usize) -> Result<usize> {
    if rho.local_dim() != 3 {
        return Err(Error::Dimension(format!("Wigner functions need qutrits, got d = {}", rho.local_dim())));
    }
    let n = rho.num_sites();
    if n > cap {
        return Err(Error::TooLarge(format!("{n} qutrits exceeds the Wigner cap {cap}")));
    }
    Ok(n)
}

/// Digits of a base-3 index, most significant first.
fn digits(mut idx: usize, len: usize) -> Vec<u8> {
    let mut d = vec![0u8; len];
    for k in (0..len).rev() {
        d[k] = (idx % 3) as u8;
        idx /= 3;
    }
    d
}

/// Characteristic function `c_s = tr(D_s ρ)`.
fn characteristic(rho: &DensityMatrix, n: usize) -> Vec<Complex64> {
    let dim = 3usize.pow(n as u32);
    let m = rho.matrix();
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (s, slot) in out.iter_mut().enumerate() {
        let v = digits(s, 2 * n);
        let base: i64 = (0..n).map(|l| 2 * v[2 * l] as i64 * v[2 * l + 1] as i64).sum();
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..dim {
            // D_s|l⟩ = ω^{2x·z + z·l}|l + x⟩, so tr(D_s ρ) = Σ_l ω^{…} ρ[l, l + x].
            let ld = digits(l, n);
            let mut shifted = 0usize;
            let mut phase = base;
            for q in 0..n {
                phase += v[2 * q + 1] as i64 * ld[q] as i64;
                shifted = shifted * 3 + (ld[q] + v[2 * q]) as usize % 3;
            }
            acc += omega_pow(phase) * m[(l, shifted)];
        }
        *slot = acc;
    }
    out
}

/// Wigner function through the characteristic function.
pub fn discrete_wigner(rho: &DensityMatrix) -> Result<WignerTable> {
    discrete_wigner_with_cap(rho, MAX_WIGNER_QUTRITS)
}

pub fn discrete_wigner_with_cap(rho: &DensityMatrix, cap: usize) -> Result<WignerTable> {
    let n = check(rho, cap)?;
    let mut data = characteristic(rho, n);
    // Per-site kernel K[(rx, rz), (sx, sz)] = ω^{rz·sx − rx·sz}.
    let mut kernel = [[Complex64::new(0.0, 0.0); 9]; 9];
    for (r, row) in kernel.iter_mut().enumerate() {
        for (s, k) in row.iter_mut().enumerate() {
            *k = omega_pow(symplectic_form(&[(r / 3) as u8, (r % 3) as u8], &[(s / 3) as u8, (s % 3) as u8]) as i64);
        }
    }
    let total = data.len();
    let mut buf = [Complex64::new(0.0, 0.0); 9];
    for site in 0..n {
        let stride = 9usize.pow((n - 1 - site) as u32);
        for block in (0..total).step_by(stride * 9) {
            for off in 0..stride {
                let base = block + off;
                for (r, out) in buf.iter_mut().enumerate() {
                    *out = (0..9).map(|s| kernel[r][s] * data[base + s * stride]).sum();
                }
                for (r, v) in buf.iter().enumerate() {
                    data[base + r * stride] = *v;
                }
            }
        }
    }
    let norm = 1.0 / (total as f64);
    Ok(WignerTable { n, values: data.into_iter().map(|c| c.re * norm).collect() })
}

/// Wigner function from explicit phase-point operators (`n ≤ 3`).
pub fn discrete_wigner_direct(rho: &DensityMatrix) -> Result<WignerTable> {
    let n = check(rho, MAX_DIRECT_QUTRITS)?;
    let dim = 3usize.pow(n as u32);
    let points = dim * dim;
    let weyl: Vec<DMatrix<Complex64>> = (0..points).map(|r| weyl_matrix(&digits(r, 2 * n))).collect();
    let a0 = weyl.iter().fold(DMatrix::<Complex64>::zeros(dim, dim), |acc, d| acc + d) / Complex64::new(dim as f64, 0.0);
    let values = weyl
        .iter()
        .map(|d| {
            let a = d * &a0 * d.adjoint();
            (a * rho.matrix()).trace().re / dim as f64
        })
        .collect();
    Ok(WignerTable { n, values })
}

/// Mana `log2 Σ_r |W_r|` in bits.
pub fn mana(rho: &DensityMatrix) -> Result<f64> {
    Ok(discrete_wigner(rho)?.negativity_sum().log2().max(0.0))
}

/// `e^{−iθ(X + X†)}|0⟩` for a single qutrit.
///
/// `X + X† = 3|+⟩⟨+| − 1`, so the rotation is Clifford whenever `θ` is a
/// multiple of `2π/9` and the state then has zero mana. Mana is largest at
/// `θ = π/9 (mod 2π/9)`.
pub fn qutrit_rotation_state(theta: f64) -> [Complex64; 3] {
    let h = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for k in 0..3 {
        let phase = Complex64::from_polar(1.0, -theta * eig.eigenvalues[k]);
        let v = eig.eigenvectors.column(k);
        for (i, o) in out.iter_mut().enumerate() {
            *o += phase * v[i] * v[0];
        }
    }
    out
}

/// Rotation angle of [`qutrit_magic_state`].
pub const QUTRIT_MAGIC_ANGLE: f64 = std::f64::consts::PI / 9.0;

/// The most magic member of the [`qutrit_rotation_state`] family.
pub fn qutrit_magic_state() -> [Complex64; 3] {
    qutrit_rotation_state(QUTRIT_MAGIC_ANGLE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::QuditState;

    fn pure(amps: Vec<Complex64>, n: usize) -> DensityMatrix {
        DensityMatrix::pure(&QuditState::from_amplitudes(3, n, amps).unwrap())
    }

    #[test]
    fn zero_state_is_nonnegative() {
        let rho = pure(vec![Complex64::new(1.0, 0.0), 0.0.into(), 0.0.into()], 1);
        let w = discrete_wigner(&rho).unwrap();
        assert!((w.total() - 1.0).abs() < 1e-12);
        assert!(w.values.iter().all(|&v| v > -1e-12));
        assert!(mana(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        let w = discrete_wigner(&DensityMatrix::maximally_mixed(3, 1)).unwrap();
        for v in &w.values {
            assert!((v - 1.0 / 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn magic_state_routes_agree() {
        let m = qutrit_magic_state();
        let norm: f64 = m.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let rho = pure(m.to_vec(), 1);
        let fast = discrete_wigner(&rho).unwrap();
        let direct = discrete_wigner_direct(&rho).unwrap();
        for (a, b) in fast.values.iter().zip(&direct.values) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((mana(&rho).unwrap() - 0.5305147166987785).abs() < 1e-9);
    }

    #[test]
    fn clifford_angle_gives_stabilizer_state() {
        let rho = pure(qutrit_rotation_state(2.0 * std::f64::consts::PI / 9.0).to_vec(), 1);
        assert!(mana(&rho).unwrap() < 1e-9);
    }
}
