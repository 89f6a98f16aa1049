//! Generalized Paulis and two-qutrit Clifford gates.
//!
//! Phase-space vectors are stored as `(x₁, z₁, x₂, z₂, …)` over `F₃` and the
//! Weyl operator of `v` is `D_v = ⊗_ℓ ω^{2 x_ℓ z_ℓ} X^{x_ℓ} Z^{z_ℓ}` with
//! `X|j⟩ = |j+1⟩`, `Z|j⟩ = ω^j |j⟩`. With the symplectic form
//! `[a, b] = Σ_ℓ (z_a x_b − x_a z_b)` these satisfy `D_a D_b = ω^{[a,b]} D_b D_a`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// `ω^k` with `ω = e^{2πi/3}`.
pub fn omega_pow(k: i64) -> Complex64 {
    let k = k.rem_euclid(3) as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / 3.0)
}

/// Symplectic form over `F₃` of two interleaved phase-space vectors.
pub fn symplectic_form(a: &[u8], b: &[u8]) -> u8 {
    let mut acc = 0u32;
    for l in 0..a.len() / 2 {
        acc += a[2 * l + 1] as u32 * b[2 * l] as u32 + 2 * a[2 * l] as u32 * b[2 * l + 1] as u32;
    }
    (acc % 3) as u8
}

/// Dense `D_v` on `n = v.len()/2` qutrits (site 0 most significant).
pub fn weyl_matrix(v: &[u8]) -> DMatrix<Complex64> {
    let n = v.len() / 2;
    let dim = 3usize.pow(n as u32);
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut row = 0usize;
        let mut phase = 0i64;
        for l in 0..n {
            let j = (col / 3usize.pow((n - 1 - l) as u32)) % 3;
            let (x, z) = (v[2 * l] as usize, v[2 * l + 1] as i64);
            // ω^{2xz} X^x Z^z |j⟩ = ω^{2xz + z j} |j + x⟩
            phase += 2 * x as i64 * z + z * j as i64;
            row = row * 3 + (j + x) % 3;
        }
        m[(row, col)] = omega_pow(phase);
    }
    m
}

/// Two-qutrit Clifford gate: images `U D_{g_k} U† = ω^{c_k} D_{S g_k}` of the
/// generators `X₁, Z₁, X₂, Z₂` and the dense 9×9 unitary.
#[derive(Clone, Debug)]
pub struct QutritClifford2 {
    /// `images[k]` is `S g_k` in `(x₁, z₁, x₂, z₂)` coordinates.
    pub images: [[u8; 4]; 4],
    /// Phase exponents `c_k`.
    pub phases: [u8; 4],
    pub unitary: DMatrix<Complex64>,
}

/// Order of `Sp(4, F₃)`.
pub const SYMPLECTIC_ORDER: usize = 51_840;

fn random_vector<R: Rng + ?Sized>(rng: &mut R) -> [u8; 4] {
    std::array::from_fn(|_| rng.random_range(0..3u8))
}

/// Uniform element of `Sp(4, F₃)` as the images of the standard symplectic
/// basis. Each image is drawn uniformly among the vectors satisfying the
/// required relations with the earlier ones; the number of completions does
/// not depend on earlier choices, so the result is uniform.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R) -> [[u8; 4]; 4] {
    let form = |a: &[u8; 4], b: &[u8; 4]| symplectic_form(a, b);
    let e1 = loop {
        let v = random_vector(rng);
        if v != [0; 4] {
            break v;
        }
    };
    // [Z₁, X₁] = 1
    let f1 = loop {
        let v = random_vector(rng);
        if form(&v, &e1) == 1 {
            break v;
        }
    };
    let e2 = loop {
        let v = random_vector(rng);
        if v != [0; 4] && form(&v, &e1) == 0 && form(&v, &f1) == 0 {
            break v;
        }
    };
    let f2 = loop {
        let v = random_vector(rng);
        if form(&v, &e1) == 0 && form(&v, &f1) == 0 && form(&v, &e2) == 1 {
            break v;
        }
    };
    [e1, f1, e2, f2]
}

impl QutritClifford2 {
    /// Builds the unitary from symplectic images and phase exponents.
    ///
    /// `U|00⟩` is the joint `+1` eigenvector of the images of `Z₁, Z₂` and
    /// `U|jk⟩ = X₁'^j X₂'^k U|00⟩`.
    pub fn new(images: [[u8; 4]; 4], phases: [u8; 4]) -> Self {
        let mats: Vec<DMatrix<Complex64>> =
            (0..4).map(|k| weyl_matrix(&images[k]) * omega_pow(phases[k] as i64)).collect();
        let eye = DMatrix::<Complex64>::identity(9, 9);
        let proj_of = |m: &DMatrix<Complex64>| (&eye + m + m * m) / Complex64::new(3.0, 0.0);
        let proj = proj_of(&mats[1]) * proj_of(&mats[3]);
        let col = (0..9).max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm())).unwrap();
        let mut v = proj.column(col).into_owned();
        let pivot = (0..9).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
        let phase = v[pivot] / v[pivot].norm();
        v /= phase * Complex64::new(v.norm(), 0.0);
        let mut u = DMatrix::<Complex64>::zeros(9, 9);
        for j in 0..3 {
            let mut w = v.clone();
            for _ in 0..j {
                w = &mats[0] * w;
            }
            for k in 0..3 {
                u.set_column(3 * j + k, &w);
                w = &mats[2] * w;
            }
        }
        Self { images, phases, unitary: u }
    }

    /// Uniform over the two-qutrit Clifford group modulo global phase.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let images = random_symplectic(rng);
        let phases = std::array::from_fn(|_| rng.random_range(0..3u8));
        Self::new(images, phases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_deviation;
    use crate::rng::stream;

    #[test]
    fn weyl_commutation() {
        let x1 = [1, 0, 0, 0];
        let z1 = [0, 1, 0, 0];
        let lhs = weyl_matrix(&z1) * weyl_matrix(&x1);
        let rhs = weyl_matrix(&x1) * weyl_matrix(&z1) * omega_pow(symplectic_form(&z1, &x1) as i64);
        assert!((lhs - rhs).norm() < 1e-12);
        let v = [1, 2, 2, 1];
        let cube = weyl_matrix(&v) * weyl_matrix(&v) * weyl_matrix(&v);
        assert!((cube - DMatrix::identity(9, 9)).norm() < 1e-12);
    }

    #[test]
    fn sampled_gates_conjugate_generators_to_images() {
        let mut rng = stream(11, 0);
        let gens = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        for _ in 0..20 {
            let g = QutritClifford2::random(&mut rng);
            assert!(unitarity_deviation(&g.unitary) < 1e-10);
            for k in 0..4 {
                let lhs = &g.unitary * weyl_matrix(&gens[k]) * g.unitary.adjoint();
                let rhs = weyl_matrix(&g.images[k]) * omega_pow(g.phases[k] as i64);
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn symplectic_count_by_exhaustion() {
        // Count symplectic bases directly: 80 · 27 · 8 · 3.
        let all: Vec<[u8; 4]> = (0..81u8).map(|i| [i / 27, (i / 9) % 3, (i / 3) % 3, i % 3]).collect();
        let f = |a: &[u8; 4], b: &[u8; 4]| symplectic_form(a, b);
        let mut count = 0;
        for e1 in all.iter().filter(|v| **v != [0; 4]) {
            for f1 in all.iter().filter(|v| f(v, e1) == 1) {
                for e2 in all.iter().filter(|v| **v != [0; 4] && f(v, e1) == 0 && f(v, f1) == 0) {
                    count += all.iter().filter(|v| f(v, e1) == 0 && f(v, f1) == 0 && f(v, e2) == 1).count();
                }
            }
        }
        assert_eq!(count, SYMPLECTIC_ORDER);
    }
}
