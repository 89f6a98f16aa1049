//! Bit-packed Pauli strings.
//!
//! A [`PauliString`] on `n` qubits stores the operator `i^phase · X^x Z^z`,
//! where `X^x Z^z` is the tensor product over qubits of `X_q^{x_q} Z_q^{z_q}`.
//! In this form multiplication is a pair of XORs plus a popcount for the
//! phase, and a Hermitian Pauli such as `Y = i X Z` is simply the string with
//! both bits set and `phase = 1`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn get_bit(words: &[u64], q: usize) -> bool {
    (words[q >> 6] >> (q & 63)) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], q: usize, v: bool) {
    let mask = 1u64 << (q & 63);
    if v {
        words[q >> 6] |= mask;
    } else {
        words[q >> 6] &= !mask;
    }
}

/// Copies bits `start..start + len` of `words` into a fresh word vector.
pub(crate) fn extract_bits(words: &[u64], start: usize, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; word_count(len).max(1)];
    let mut done = 0;
    while done < len {
        let src = start + done;
        let (w, off) = (src >> 6, src & 63);
        let take = (64 - off).min(len - done).min(64 - (done & 63));
        let mut chunk = words[w] >> off;
        if take < 64 {
            chunk &= (1u64 << take) - 1;
        }
        out[done >> 6] |= chunk << (done & 63);
        done += take;
    }
    out
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = word_count(n).max(1);
        Self { n, x: vec![0; w], z: vec![0; w], phase: 0 }
    }

    /// Hermitian Pauli with letter `p` on qubit `q` and identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(q, p);
        s
    }

    /// Builds the string from raw words; `phase` is the exponent of `i`.
    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        debug_assert_eq!(x.len(), word_count(n).max(1));
        debug_assert_eq!(z.len(), word_count(n).max(1));
        Self { n, x, z, phase: phase & 3 }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Exponent `k` of the prefactor `i^k` in XZ form.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        get_bit(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        get_bit(&self.z, q)
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    /// Replaces the letter on qubit `q`, keeping the string's Hermitian sign.
    pub fn set(&mut self, q: usize, p: Pauli) {
        let before = self.y_count();
        let (x, z) = p.bits();
        set_bit(&mut self.x, q, x);
        set_bit(&mut self.z, q, z);
        let after = self.y_count();
        self.phase = (self.phase + 4 + after as u8 % 4 - before as u8 % 4) & 3;
    }

    fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(a, b)| (a & b).count_ones()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones()).sum()
    }

    /// True when the operator equals its adjoint.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + self.y_count()).is_multiple_of(2)
    }

    /// Sign `s` with `self = s · (canonical Hermitian Pauli)`, or `None` when
    /// the prefactor is `±i`.
    pub fn hermitian_sign(&self) -> Option<i8> {
        let rel = (self.phase as u32 + 4 - self.y_count() % 4) % 4;
        match rel {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    pub fn mul_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        acc == 0
    }

    /// Operator product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.mul_assign_right(rhs);
        out
    }

    /// `self ← self · rhs`.
    pub fn mul_assign_right(&mut self, rhs: &Self) {
        let mut swaps = 0u32;
        for w in 0..self.x.len() {
            swaps += (self.z[w] & rhs.x[w]).count_ones();
            self.x[w] ^= rhs.x[w];
            self.z[w] ^= rhs.z[w];
        }
        self.phase = ((self.phase as u32 + rhs.phase as u32 + 2 * swaps) & 3) as u8;
    }

    /// Restriction to qubits `start..end`, phase kept.
    pub fn restrict(&self, start: usize, end: usize) -> Self {
        let len = end - start;
        Self {
            n: len,
            x: extract_bits(&self.x, start, len),
            z: extract_bits(&self.z, start, len),
            phase: self.phase,
        }
    }

    /// Embeds `self` into `n` qubits starting at `offset`.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        let mut out = Self::identity(n);
        for q in 0..self.n {
            set_bit(&mut out.x, offset + q, self.x_bit(q));
            set_bit(&mut out.z, offset + q, self.z_bit(q));
        }
        out.phase = self.phase;
        out
    }

    /// Image of the computational basis state `k` (qubit 0 = most
    /// significant bit): `self |k⟩ = i^e |k'⟩`, returned as `(k', e)`.
    pub fn act_on_basis(&self, k: u64) -> (u64, u8) {
        let (xm, zm) = self.masks_u64();
        let sign = (zm & k).count_ones() & 1;
        (k ^ xm, ((self.phase as u32 + 2 * sign) & 3) as u8)
    }

    /// X and Z masks in basis-index bit order (n ≤ 64).
    fn masks_u64(&self) -> (u64, u64) {
        assert!(self.n <= 64, "basis-index masks need n ≤ 64");
        let (mut xm, mut zm) = (0u64, 0u64);
        for q in 0..self.n {
            let bit = 1u64 << (self.n - 1 - q);
            if self.x_bit(q) {
                xm |= bit;
            }
            if self.z_bit(q) {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        assert!(self.n <= 12, "dense Pauli matrices limited to 12 qubits");
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let (kp, e) = self.act_on_basis(k as u64);
            m[(kp as usize, k)] = i_pow(e);
        }
        m
    }

    /// ⟨ψ|P|ψ⟩ on a dense qubit statevector.
    pub fn expectation_dense(&self, amps: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let (kp, e) = self.act_on_basis(k as u64);
            acc += amps[kp as usize].conj() * i_pow(e) * a;
        }
        acc
    }
}

pub(crate) fn i_pow(e: u8) -> Complex64 {
    match e & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    /// Hermitian strings print as `±` followed by letters; others as
    /// `±i` followed by letters of the canonical Hermitian part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = (self.phase as u32 + 4 - self.y_count() % 4) % 4;
        f.write_str(["+", "+i", "-", "-i"][rel as usize])?;
        for q in 0..self.n {
            let c = match self.get(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-][i]` followed by letters from `IXYZ`; letters denote the
    /// Hermitian single-qubit Paulis.
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut rel = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            rel = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            rel += 1;
            rest = r;
        }
        let n = rest.chars().count();
        let mut p = PauliString::identity(n);
        for (q, c) in rest.chars().enumerate() {
            let letter = match c {
                'I' | '_' | '.' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(format!("bad Pauli letter {other:?} in {s:?}"))),
            };
            p.set(q, letter);
        }
        p.mul_phase(rel);
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(p("X").mul(&p("Y")), p("iZ"));
        assert_eq!(p("Y").mul(&p("X")), p("-iZ"));
        assert_eq!(p("Z").mul(&p("X")), p("iY"));
        assert_eq!(p("Y").mul(&p("Y")), p("I"));
    }

    #[test]
    fn hermitian_sign_and_display() {
        assert_eq!(p("-XYZ").hermitian_sign(), Some(-1));
        assert_eq!(p("iXZ").hermitian_sign(), None);
        assert_eq!(p("-XYZ").to_string(), "-XYZ");
        assert!(p("Y").is_hermitian());
    }

    #[test]
    fn matrices_match_products() {
        let a = p("XYZ");
        let b = p("-ZZY");
        let lhs = a.mul(&b).to_matrix();
        let rhs = a.to_matrix() * b.to_matrix();
        assert!((lhs - rhs).norm() < 1e-12);
        let y = p("Y").to_matrix();
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn extract_bits_crosses_words() {
        let mut w = vec![0u64; 3];
        for q in [3usize, 63, 64, 100, 130] {
            set_bit(&mut w, q, true);
        }
        let e = extract_bits(&w, 60, 80);
        let got: Vec<usize> = (0..80).filter(|&q| get_bit(&e, q)).collect();
        assert_eq!(got, vec![3, 4, 40, 70]);
    }
}
