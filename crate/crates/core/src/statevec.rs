//! Dense statevector simulation of qubit and qutrit chains.
//!
//! Amplitudes are stored with site 0 as the most significant base-`d` digit
//! of the configuration index. This backend is exact and serves as the
//! oracle for the tableau and sparse backends.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{hermitian_eigenvalues, shannon_bits, unitarity_deviation, SPECTRUM_TOL};
use crate::{Error, Result};

/// Default cap on qutrit chains (3^14 amplitudes).
pub const MAX_QUTRITS: usize = 14;
/// Qutrit cap with the high-memory switch (3^16 amplitudes, ~0.7 GB).
pub const MAX_QUTRITS_HIGH_MEMORY: usize = 16;
/// Default cap on qubit chains.
pub const MAX_QUBITS: usize = 24;
pub const MAX_QUBITS_HIGH_MEMORY: usize = 28;

const UNITARY_TOL: f64 = 1e-10;

/// Validated `d² × d²` unitary acting on two neighbouring sites.
///
/// Row/column index of the local basis is `d·s_left + s_right`.
#[derive(Clone, Debug)]
pub struct TwoSiteGate {
    d: usize,
    mat: Vec<Complex64>,
}

impl TwoSiteGate {
    pub fn new(d: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        let dim = d * d;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::Dimension(format!(
                "two-site gate for d = {d} must be {dim}×{dim}, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let deviation = unitarity_deviation(&mat);
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitary { deviation });
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                flat.push(mat[(r, c)]);
            }
        }
        Ok(Self { d, mat: flat })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(d, DMatrix::identity(d * d, d * d)).expect("identity is unitary")
    }

    pub fn swap(d: usize) -> Self {
        let dim = d * d;
        let mut m = DMatrix::zeros(dim, dim);
        for a in 0..d {
            for b in 0..d {
                m[(b * d + a, a * d + b)] = Complex64::new(1.0, 0.0);
            }
        }
        Self::new(d, m).expect("swap is unitary")
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let dim = self.d * self.d;
        DMatrix::from_row_slice(dim, dim, &self.mat)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.d, self.matrix().adjoint()).expect("adjoint of a unitary is unitary")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuditState {
    d: usize,
    n: usize,
    amps: Vec<Complex64>,
}

impl QuditState {
    /// `|0…0⟩` on `n` sites of dimension `d` under the default size caps.
    pub fn zeros(d: usize, n: usize) -> Result<Self> {
        Self::zeros_with_limit(d, n, false)
    }

    /// As [`QuditState::zeros`], optionally lifting the caps to the
    /// high-memory limits.
    pub fn zeros_with_limit(d: usize, n: usize, high_memory: bool) -> Result<Self> {
        check_size(d, n, high_memory)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); d.pow(n as u32)];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { d, n, amps })
    }

    /// Product state from one normalized local vector per site.
    pub fn product(d: usize, locals: &[Vec<Complex64>]) -> Result<Self> {
        Self::product_with_limit(d, locals, false)
    }

    pub fn product_with_limit(d: usize, locals: &[Vec<Complex64>], high_memory: bool) -> Result<Self> {
        let n = locals.len();
        check_size(d, n, high_memory)?;
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for v in locals {
            if v.len() != d {
                return Err(Error::Dimension(format!("local vector of length {} for d = {d}", v.len())));
            }
            let mut next = Vec::with_capacity(amps.len() * d);
            for a in &amps {
                for c in v {
                    next.push(a * c);
                }
            }
            amps = next;
        }
        let mut s = Self { d, n, amps };
        s.normalize();
        Ok(s)
    }

    pub fn from_amplitudes(d: usize, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != d.pow(n as u32) {
            return Err(Error::Dimension(format!("{} amplitudes for {n} sites of d = {d}", amps.len())));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Dimension(format!("state norm² {norm} differs from 1")));
        }
        Ok(Self { d, n, amps })
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        for a in &mut self.amps {
            *a /= norm;
        }
    }

    /// Applies `gate` to sites `(left, left + 1)`.
    pub fn apply_two_site_gate(&mut self, gate: &TwoSiteGate, left: usize) -> Result<()> {
        if gate.d != self.d {
            return Err(Error::Dimension(format!("gate for d = {} on a d = {} chain", gate.d, self.d)));
        }
        if self.n < 2 || left + 1 >= self.n {
            return Err(Error::SiteOutOfRange { site: left + 1, sites: self.n });
        }
        let d = self.d;
        let dd = d * d;
        let stride_r = d.pow((self.n - left - 2) as u32);
        let stride_l = stride_r * d;
        let block = stride_l * d;
        let m = &gate.mat;
        if d == 2 {
            let m: [Complex64; 16] = std::array::from_fn(|k| m[k]);
            for base in (0..self.amps.len()).step_by(block) {
                for off in base..base + stride_r {
                    let idx = [off, off + stride_r, off + stride_l, off + stride_l + stride_r];
                    let v = idx.map(|i| self.amps[i]);
                    for (r, &i) in idx.iter().enumerate() {
                        self.amps[i] = m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] + m[4 * r + 3] * v[3];
                    }
                }
            }
            return Ok(());
        }
        let mut buf = [Complex64::new(0.0, 0.0); 9];
        let mut out = [Complex64::new(0.0, 0.0); 9];
        for base in (0..self.amps.len()).step_by(block) {
            for inner in 0..stride_r {
                let off = base + inner;
                for a in 0..d {
                    for b in 0..d {
                        buf[a * d + b] = self.amps[off + a * stride_l + b * stride_r];
                    }
                }
                for (r, o) in out.iter_mut().enumerate().take(dd) {
                    let row = &m[r * dd..(r + 1) * dd];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..dd {
                        acc += row[c] * buf[c];
                    }
                    *o = acc;
                }
                for a in 0..d {
                    for b in 0..d {
                        self.amps[off + a * stride_l + b * stride_r] = out[a * d + b];
                    }
                }
            }
        }
        Ok(())
    }

    /// Reduced density matrix of the contiguous sites `start..end`.
    pub fn partial_trace(&self, start: usize, end: usize) -> Result<DensityMatrix> {
        if start >= end || end > self.n {
            return Err(Error::InvalidSubsystem { start, end, sites: self.n });
        }
        let d = self.d;
        let dim_a = d.pow((end - start) as u32);
        let inner = d.pow((self.n - end) as u32);
        let outer = d.pow(start as u32);
        let mut rho = DMatrix::<Complex64>::zeros(dim_a, dim_a);
        let acc = match dim_a {
            2 => self.sweep::<2>(inner, outer),
            3 => self.sweep::<3>(inner, outer),
            4 => self.sweep::<4>(inner, outer),
            8 => self.sweep::<8>(inner, outer),
            9 => self.sweep::<9>(inner, outer),
            _ => Vec::new(),
        };
        if !acc.is_empty() {
            for i in 0..dim_a {
                for j in i..dim_a {
                    rho[(i, j)] = acc[i * dim_a + j];
                }
            }
        } else {
            self.accumulate_blocks(&mut rho, dim_a, inner, outer);
        }
        for i in 0..dim_a {
            rho[(i, i)].im = 0.0;
            for j in (i + 1)..dim_a {
                rho[(j, i)] = rho[(i, j)].conj();
            }
        }
        Ok(DensityMatrix { d, n: end - start, mat: rho })
    }

    /// Upper triangle of the reduced density matrix of a `D`-dimensional
    /// block in one sweep over the amplitudes.
    fn sweep<const D: usize>(&self, inner: usize, outer: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); D * D];
        for o in 0..outer {
            let block = &self.amps[o * D * inner..(o + 1) * D * inner];
            for k in 0..inner {
                let v: [Complex64; D] = std::array::from_fn(|i| block[i * inner + k]);
                for i in 0..D {
                    for j in i..D {
                        acc[i * D + j] += v[i] * v[j].conj();
                    }
                }
            }
        }
        acc
    }

    fn accumulate_blocks(&self, rho: &mut DMatrix<Complex64>, dim_a: usize, inner: usize, outer: usize) {
        for o in 0..outer {
            let base = o * dim_a * inner;
            for i in 0..dim_a {
                let ri = &self.amps[base + i * inner..base + (i + 1) * inner];
                for j in i..dim_a {
                    let rj = &self.amps[base + j * inner..base + (j + 1) * inner];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (a, b) in ri.iter().zip(rj) {
                        acc += a * b.conj();
                    }
                    rho[(i, j)] += acc;
                }
            }
        }
    }
}


fn check_size(d: usize, n: usize, high_memory: bool) -> Result<()> {
    let cap = match (d, high_memory) {
        (2, false) => MAX_QUBITS,
        (2, true) => MAX_QUBITS_HIGH_MEMORY,
        (3, false) => MAX_QUTRITS,
        (3, true) => MAX_QUTRITS_HIGH_MEMORY,
        _ => return Err(Error::Dimension(format!("local dimension {d} not supported (2 or 3)"))),
    };
    if n > cap {
        return Err(Error::TooLarge(format!(
            "{n} sites of dimension {d} exceeds the dense cap of {cap}{}",
            if high_memory { "" } else { " (enable high-memory mode to raise it)" }
        )));
    }
    Ok(())
}

/// Density matrix of `n` sites of dimension `d`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    d: usize,
    n: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity.
    pub fn new(d: usize, n: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        let dim = d.pow(n as u32);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::Dimension(format!("density matrix must be {dim}×{dim}")));
        }
        let herm = (&mat - mat.adjoint()).camax();
        if herm > 1e-10 {
            return Err(Error::NonHermitian(format!("deviation {herm:e}")));
        }
        let tr: f64 = (0..dim).map(|i| mat[(i, i)].re).sum();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Dimension(format!("trace {tr} differs from 1")));
        }
        let rho = Self { d, n, mat };
        if rho.eigenvalues().first().is_some_and(|&e| e < -SPECTRUM_TOL) {
            return Err(Error::Dimension("density matrix has a negative eigenvalue".into()));
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|` for a full chain.
    pub fn pure(state: &QuditState) -> Self {
        state.partial_trace(0, state.n).expect("full range is valid")
    }

    pub fn maximally_mixed(d: usize, n: usize) -> Self {
        let dim = d.pow(n as u32);
        let mat = DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        Self { d, n, mat }
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }
}

/// Von Neumann entropy in bits; eigenvalues are clamped to `[0, 1]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_bits(rho.eigenvalues())
}

/// Haar-random unitary of size `dim`: Ginibre matrix, QR, and the phases of
/// `R`'s diagonal folded back into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    assert!(dim >= 2, "Haar unitaries need dim ≥ 2");
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..dim {
        let rc = r[(c, c)];
        let phase = if rc.norm() > 0.0 { rc / rc.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    q
}
