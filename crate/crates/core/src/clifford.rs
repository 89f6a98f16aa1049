//! One- and two-qubit Clifford gates given by their conjugation tables.
//!
//! A two-qubit Clifford `U` is fixed (up to a global phase) by the images
//! `U P U†` of the generators `X₁, Z₁, X₂, Z₂`. Local Paulis are packed into
//! four bits `x₁ | z₁<<1 | x₂<<2 | z₂<<3` in XZ form, and each gate caches the
//! image of all 16 patterns so a tableau row is conjugated with one lookup.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::{i_pow, PauliString};
use crate::statevec::TwoSiteGate;
use crate::{Error, Result};

/// Pauli operator `i^phase · X^x Z^z` on at most two qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalPauli {
    pub bits: u8,
    pub phase: u8,
}

impl LocalPauli {
    pub const IDENTITY: Self = Self { bits: 0, phase: 0 };

    pub fn new(bits: u8, phase: u8) -> Self {
        Self { bits: bits & 0xf, phase: phase & 3 }
    }

    fn x_mask(self) -> u8 {
        self.bits & 0b0101
    }

    fn z_mask(self) -> u8 {
        (self.bits >> 1) & 0b0101
    }

    fn y_count(self) -> u8 {
        (self.x_mask() & self.z_mask()).count_ones() as u8
    }

    /// Hermitian Pauli with the given letters, e.g. `"XZ"`, with sign `±`.
    pub fn hermitian(letters: &str, negative: bool) -> Self {
        let p: PauliString = letters.parse().expect("valid Pauli letters");
        let mut l = Self::from_pauli_string(&p);
        if negative {
            l.phase = (l.phase + 2) & 3;
        }
        l
    }

    pub fn from_pauli_string(p: &PauliString) -> Self {
        assert!(p.num_qubits() <= 2);
        let mut bits = 0u8;
        for q in 0..p.num_qubits() {
            bits |= (p.x_bit(q) as u8) << (2 * q);
            bits |= (p.z_bit(q) as u8) << (2 * q + 1);
        }
        Self { bits, phase: p.phase() }
    }

    pub fn to_pauli_string(self, n: usize) -> PauliString {
        let mut x = 0u64;
        let mut z = 0u64;
        for q in 0..n {
            x |= (((self.bits >> (2 * q)) & 1) as u64) << q;
            z |= (((self.bits >> (2 * q + 1)) & 1) as u64) << q;
        }
        PauliString::from_words(n, vec![x], vec![z], self.phase)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Self) -> Self {
        let swaps = (self.z_mask() & rhs.x_mask()).count_ones() as u8;
        Self { bits: self.bits ^ rhs.bits, phase: (self.phase + rhs.phase + 2 * swaps) & 3 }
    }

    pub fn commutes_with(self, rhs: Self) -> bool {
        let a = (self.x_mask() & rhs.z_mask()).count_ones() + (self.z_mask() & rhs.x_mask()).count_ones();
        a.is_multiple_of(2)
    }

    pub fn is_hermitian(self) -> bool {
        (self.phase + self.y_count()).is_multiple_of(2)
    }

    /// `±1` relative to the canonical Hermitian Pauli with the same letters.
    pub fn hermitian_sign(self) -> Option<i8> {
        match (self.phase + 4 - self.y_count()) & 3 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn has_x(self) -> bool {
        self.x_mask() != 0
    }
}

/// Two-qubit Clifford gate.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordGate2 {
    images: [LocalPauli; 4],
    table: [LocalPauli; 16],
}

impl fmt::Debug for CliffordGate2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["X1", "Z1", "X2", "Z2"];
        let mut list = f.debug_map();
        for (name, img) in names.iter().zip(&self.images) {
            list.entry(name, &img.to_pauli_string(2).to_string());
        }
        list.finish()
    }
}

impl CliffordGate2 {
    /// Builds a gate from the images of `X₁, Z₁, X₂, Z₂`, checking that the
    /// images are Hermitian and reproduce the generators' commutation
    /// relations.
    pub fn from_images(images: [LocalPauli; 4]) -> Result<Self> {
        for (k, img) in images.iter().enumerate() {
            if img.bits == 0 {
                return Err(Error::InvalidClifford(format!("generator {k} mapped to the identity")));
            }
            if !img.is_hermitian() {
                return Err(Error::InvalidClifford(format!("image of generator {k} is not Hermitian")));
            }
        }
        for a in 0..4 {
            for b in (a + 1)..4 {
                // X₁Z₁ and X₂Z₂ anticommute; all other pairs commute.
                let should_commute = !((a, b) == (0, 1) || (a, b) == (2, 3));
                if images[a].commutes_with(images[b]) != should_commute {
                    return Err(Error::InvalidClifford(format!(
                        "images of generators {a} and {b} have the wrong commutation relation"
                    )));
                }
            }
        }
        let mut table = [LocalPauli::IDENTITY; 16];
        for (p, slot) in table.iter_mut().enumerate() {
            let mut acc = LocalPauli::IDENTITY;
            for (g, img) in images.iter().enumerate() {
                if p >> g & 1 == 1 {
                    acc = acc.mul(*img);
                }
            }
            *slot = acc;
        }
        Ok(Self { images, table })
    }

    /// Parses images given as Hermitian strings such as `["+XX", "+ZI", "+IX", "+ZZ"]`.
    pub fn from_strs(images: [&str; 4]) -> Result<Self> {
        let mut imgs = [LocalPauli::IDENTITY; 4];
        for (slot, s) in imgs.iter_mut().zip(images) {
            let p: PauliString = s.parse()?;
            if p.num_qubits() != 2 {
                return Err(Error::InvalidClifford(format!("image {s:?} is not a two-qubit string")));
            }
            *slot = LocalPauli::from_pauli_string(&p);
        }
        Self::from_images(imgs)
    }

    pub fn identity() -> Self {
        Self::from_strs(["+XI", "+ZI", "+IX", "+IZ"]).unwrap()
    }

    /// CNOT with control on the first qubit.
    pub fn cnot() -> Self {
        Self::from_strs(["+XX", "+ZI", "+IX", "+ZZ"]).unwrap()
    }

    pub fn cz() -> Self {
        Self::from_strs(["+XZ", "+ZI", "+ZX", "+IZ"]).unwrap()
    }

    pub fn swap() -> Self {
        Self::from_strs(["+IX", "+IZ", "+XI", "+ZI"]).unwrap()
    }

    /// Hadamard on the first qubit.
    pub fn h1() -> Self {
        Self::from_strs(["+ZI", "+XI", "+IX", "+IZ"]).unwrap()
    }

    /// Phase gate `S` on the first qubit.
    pub fn s1() -> Self {
        Self::from_strs(["+YI", "+ZI", "+IX", "+IZ"]).unwrap()
    }

    pub fn images(&self) -> &[LocalPauli; 4] {
        &self.images
    }

    /// `U P U†` for a local Pauli `P`.
    #[inline]
    pub fn conjugate(&self, p: LocalPauli) -> LocalPauli {
        let img = self.table[p.bits as usize];
        LocalPauli { bits: img.bits, phase: (img.phase + p.phase) & 3 }
    }

    /// Image of the phase-free pattern `p`; used by the tableau hot loop.
    #[inline]
    pub fn pattern_image(&self, pattern: u8) -> LocalPauli {
        self.table[pattern as usize]
    }

    /// `self ∘ other`, i.e. `other` applied first.
    pub fn compose(&self, other: &Self) -> Self {
        let imgs = other.images.map(|p| self.conjugate(p));
        Self::from_images(imgs).expect("composition of Cliffords is Clifford")
    }

    pub fn inverse(&self) -> Self {
        let mut inv_table = [LocalPauli::IDENTITY; 16];
        for p in 0..16u8 {
            let img = self.table[p as usize];
            inv_table[img.bits as usize] = LocalPauli { bits: p, phase: (4 - img.phase) & 3 };
        }
        Self::from_images([inv_table[1], inv_table[2], inv_table[4], inv_table[8]])
            .expect("inverse of a Clifford is Clifford")
    }

    /// Canonical key: the four images (bits and phase) packed in 24 bits.
    pub fn key(&self) -> u32 {
        self.images
            .iter()
            .enumerate()
            .map(|(k, p)| ((p.bits as u32) | ((p.phase as u32) << 4)) << (6 * k))
            .sum()
    }

    /// Maps every computational-basis state to a single basis state (up to a
    /// phase): equivalently `Z₁` and `Z₂` are mapped to diagonal Paulis.
    pub fn is_incoherent(&self) -> bool {
        !self.images[1].has_x() && !self.images[3].has_x()
    }

    /// Action on the two-site Majoranas `γ₁ = X₁, γ₂ = Y₁, γ₃ = Z₁X₂,
    /// γ₄ = Z₁Y₂` as a signed permutation `γ_a ↦ sign · γ_{perm[a]}`, or
    /// `None` if some image is not a single Majorana.
    pub fn majorana_action(&self) -> Option<SignedPermutation> {
        let gammas = majoranas2();
        let mut perm = [0u8; 4];
        let mut sign = [1i8; 4];
        for (a, g) in gammas.iter().enumerate() {
            let img = self.conjugate(*g);
            let b = gammas.iter().position(|h| h.bits == img.bits)?;
            perm[a] = b as u8;
            let rel = (img.phase + 4 - gammas[b].phase) & 3;
            sign[a] = match rel {
                0 => 1,
                2 => -1,
                _ => return None,
            };
        }
        Some(SignedPermutation { perm, sign })
    }

    /// Dense 4×4 unitary (global phase fixed by a real positive pivot).
    ///
    /// `U|00⟩` is the joint +1 eigenvector of the images of `Z₁` and `Z₂`, and
    /// `U|b₁b₂⟩ = U X₁^{b₁} X₂^{b₂} U† U|00⟩`.
    pub fn unitary(&self) -> DMatrix<Complex64> {
        let mats = self.images.map(|p| p.to_pauli_string(2).to_matrix());
        let eye = DMatrix::<Complex64>::identity(4, 4);
        let proj = (&eye + &mats[1]) * (&eye + &mats[3]) * Complex64::new(0.25, 0.0);
        let col = (0..4)
            .max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm()))
            .unwrap();
        let mut v = proj.column(col).into_owned();
        let pivot = (0..4).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
        let phase = v[pivot] / v[pivot].norm();
        v /= phase * Complex64::new(v.norm(), 0.0);
        let mut u = DMatrix::<Complex64>::zeros(4, 4);
        for b in 0..4 {
            let mut w = v.clone();
            if b & 1 == 1 {
                w = &mats[2] * w;
            }
            if b & 2 == 2 {
                w = &mats[0] * w;
            }
            u.set_column(b, &w);
        }
        u
    }

    pub fn two_site_gate(&self) -> TwoSiteGate {
        TwoSiteGate::new(2, self.unitary()).expect("Clifford unitary is unitary")
    }
}

/// `γ₁..γ₄` on two qubits in XZ form.
pub fn majoranas2() -> [LocalPauli; 4] {
    [
        LocalPauli::hermitian("XI", false),
        LocalPauli::hermitian("YI", false),
        LocalPauli::hermitian("ZX", false),
        LocalPauli::hermitian("ZY", false),
    ]
}

/// Signed permutation `γ_a ↦ sign[a] · γ_{perm[a]}` (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: [u8; 4],
    pub sign: [i8; 4],
}

impl SignedPermutation {
    /// Real orthogonal matrix `O` with `γ_a ↦ Σ_b O_ab γ_b`.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let mut o = [[0.0; 4]; 4];
        for a in 0..4 {
            o[a][self.perm[a] as usize] = self.sign[a] as f64;
        }
        o
    }

    pub fn determinant(&self) -> i8 {
        let mut inversions = 0;
        for a in 0..4 {
            for b in (a + 1)..4 {
                if self.perm[a] > self.perm[b] {
                    inversions += 1;
                }
            }
        }
        let parity = if inversions % 2 == 0 { 1 } else { -1 };
        parity * self.sign.iter().product::<i8>()
    }
}

/// Hermitian-sign check helper used by tests and the tableau: `⟨P⟩`-style
/// phase `i^e` as a complex number.
pub fn phase_value(e: u8) -> Complex64 {
    i_pow(e)
}
