//! Sparse-vector simulation of permutation-phase circuits.
//!
//! A permutation-phase gate `U = Σ_b e^{iφ_b} |π(b)⟩⟨b|` only relabels basis
//! configurations and decorates them with phases, so the number of nonzero
//! amplitudes never changes. A state with `2^{L_c}` nonzero amplitudes is
//! simulated at cost `O(2^{L_c} · L)` per layer regardless of `L`.
//!
//! Configurations are `u128` bit patterns with site 0 as the most
//! significant of the `L` used bits, matching the dense index convention.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::{hermitian_eigenvalues, shannon_bits};
use crate::statevec::{DensityMatrix, QuditState, TwoSiteGate};
use crate::{Error, Result};

pub const MAX_SITES: usize = 128;
/// Default cap on `|A|` for dense reduced density matrices.
pub const MAX_DENSE_SUBSYSTEM: usize = 12;

/// `U_{π,φ} = Σ_b e^{iφ_b} |π(b)⟩⟨b|` on two qubits, `b = 2·s_left + s_right`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PermutationPhaseGate {
    perm: [u8; 4],
    phases: [f64; 4],
}

impl PermutationPhaseGate {
    pub fn new(perm: [u8; 4], phases: [f64; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &p in &perm {
            if p > 3 || seen[p as usize] {
                return Err(Error::Dimension(format!("{perm:?} is not a permutation of 0..4")));
            }
            seen[p as usize] = true;
        }
        Ok(Self { perm, phases })
    }

    pub fn identity() -> Self {
        Self { perm: [0, 1, 2, 3], phases: [0.0; 4] }
    }

    pub fn swap() -> Self {
        Self { perm: [0, 2, 1, 3], phases: [0.0; 4] }
    }

    /// Uniform permutation and independent uniform phases in `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut perm = [0u8, 1, 2, 3];
        perm.shuffle(rng);
        let phases = std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
        Self { perm, phases }
    }

    /// Reads a monomial unitary (one nonzero per column) as a
    /// permutation-phase gate.
    pub fn from_unitary(u: &DMatrix<Complex64>) -> Option<Self> {
        if u.nrows() != 4 || u.ncols() != 4 {
            return None;
        }
        let mut perm = [0u8; 4];
        let mut phases = [0.0; 4];
        for b in 0..4 {
            let nz: Vec<usize> = (0..4).filter(|&r| u[(r, b)].norm() > 1e-9).collect();
            if nz.len() != 1 || (u[(nz[0], b)].norm() - 1.0).abs() > 1e-9 {
                return None;
            }
            perm[b] = nz[0] as u8;
            phases[b] = u[(nz[0], b)].arg();
        }
        Self::new(perm, phases).ok()
    }

    pub fn perm(&self) -> [u8; 4] {
        self.perm
    }

    pub fn phases(&self) -> [f64; 4] {
        self.phases
    }

    pub fn unitary(&self) -> DMatrix<Complex64> {
        let mut u = DMatrix::zeros(4, 4);
        for b in 0..4 {
            u[(self.perm[b] as usize, b)] = Complex64::from_polar(1.0, self.phases[b]);
        }
        u
    }

    pub fn two_site_gate(&self) -> TwoSiteGate {
        TwoSiteGate::new(2, self.unitary()).expect("permutation-phase gates are unitary")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    n: usize,
    support: Vec<(u128, Complex64)>,
}

impl SparseState {
    /// Single configuration with amplitude 1.
    pub fn basis(n: usize, config: u128) -> Result<Self> {
        check_sites(n)?;
        Ok(Self { n, support: vec![(config, Complex64::new(1.0, 0.0))] })
    }

    /// `|0…0⟩ ⊗ |+⟩^{⊗len} ⊗ |0…0⟩` with the plus block on `start..start+len`.
    pub fn plus_cluster(n: usize, start: usize, len: usize) -> Result<Self> {
        check_sites(n)?;
        if start + len > n || len > 24 {
            return Err(Error::TooLarge(format!("plus cluster {start}..{} on {n} sites", start + len)));
        }
        let amp = Complex64::new((0.5f64).powf(len as f64 / 2.0), 0.0);
        let shift = n - start - len;
        let support = (0..1u128 << len).map(|c| (c << shift, amp)).collect();
        Ok(Self { n, support })
    }

    /// Builds a state from arbitrary entries; sorts and checks the norm.
    pub fn from_entries(n: usize, mut support: Vec<(u128, Complex64)>) -> Result<Self> {
        check_sites(n)?;
        support.sort_by_key(|e| e.0);
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Dimension("duplicate configuration in sparse state".into()));
        }
        let norm: f64 = support.iter().map(|e| e.1.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Dimension(format!("sparse state norm² {norm} differs from 1")));
        }
        Ok(Self { n, support })
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(u128, Complex64)] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.support.iter().map(|e| e.1.norm_sqr()).sum()
    }

    /// Applies `gate` to sites `(left, left + 1)`; the support is re-sorted.
    pub fn apply_pp_gate(&mut self, gate: &PermutationPhaseGate, left: usize) -> Result<()> {
        if left + 1 >= self.n {
            return Err(Error::SiteOutOfRange { site: left + 1, sites: self.n });
        }
        let shift = self.n - left - 2;
        let mask = 3u128 << shift;
        let factors = gate.phases.map(|p| Complex64::from_polar(1.0, p));
        for (cfg, amp) in &mut self.support {
            let b = ((*cfg >> shift) & 3) as usize;
            *cfg = (*cfg & !mask) | ((gate.perm[b] as u128) << shift);
            *amp *= factors[b];
        }
        self.support.sort_unstable_by_key(|e| e.0);
        Ok(())
    }

    fn split(&self, start: usize, end: usize) -> (u32, u128) {
        let k = end - start;
        let shift = (self.n - end) as u32;
        let mask = if k == 128 { u128::MAX } else { ((1u128 << k) - 1) << shift };
        (shift, mask)
    }

    /// Dense `ρ_A` for `A = start..end`, grouping the support by the
    /// configuration outside `A`.
    pub fn reduced_density(&self, start: usize, end: usize) -> Result<DensityMatrix> {
        if start >= end || end > self.n {
            return Err(Error::InvalidSubsystem { start, end, sites: self.n });
        }
        let k = end - start;
        if k > MAX_DENSE_SUBSYSTEM {
            return Err(Error::TooLarge(format!("|A| = {k} exceeds the dense cap {MAX_DENSE_SUBSYSTEM}")));
        }
        let (shift, mask) = self.split(start, end);
        let mut entries: Vec<(u128, usize, Complex64)> =
            self.support.iter().map(|&(c, a)| (c & !mask, ((c & mask) >> shift) as usize, a)).collect();
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let dim = 1usize << k;
        let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
        for group in entries.chunk_by(|a, b| a.0 == b.0) {
            for &(_, i, ai) in group {
                for &(_, j, aj) in group {
                    rho[(i, j)] += ai * aj.conj();
                }
            }
        }
        DensityMatrix::new(2, k, rho)
    }

    /// Relative entropy of coherence of `ρ_A`, without forming the full
    /// `2^{|A|}` matrix.
    ///
    /// `ρ_A = Σ_g v_g v_g†` over groups `g` of support entries sharing the
    /// outside configuration. Linking A-configurations that co-occur in a
    /// group splits `ρ_A` into independent blocks; singleton blocks are
    /// diagonal and contribute nothing. Each remaining block is diagonalized
    /// through whichever of its density matrix or its Gram matrix is smaller.
    pub fn coherence(&self, start: usize, end: usize) -> Result<f64> {
        if start >= end || end > self.n {
            return Err(Error::InvalidSubsystem { start, end, sites: self.n });
        }
        let (shift, mask) = self.split(start, end);
        let mut entries: Vec<(u128, u128, Complex64)> =
            self.support.iter().map(|&(c, a)| (c & !mask, (c & mask) >> shift, a)).collect();
        entries.sort_unstable_by_key(|e| (e.0, e.1));

        // Dense ids for A-configurations.
        let mut a_cfgs: Vec<u128> = entries.iter().map(|e| e.1).collect();
        a_cfgs.sort_unstable();
        a_cfgs.dedup();
        let id = |c: u128| a_cfgs.binary_search(&c).expect("present");
        let mut uf = UnionFind::new(a_cfgs.len());
        let groups: Vec<&[(u128, u128, Complex64)]> = entries.chunk_by(|a, b| a.0 == b.0).collect();
        for g in &groups {
            let first = id(g[0].1);
            for e in &g[1..] {
                uf.union(first, id(e.1));
            }
        }
        // Collect blocks: configs and groups per root.
        let mut block_of_root = vec![usize::MAX; a_cfgs.len()];
        let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for c in 0..a_cfgs.len() {
            let r = uf.find(c);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push((Vec::new(), Vec::new()));
            }
            blocks[block_of_root[r]].0.push(c);
        }
        for (gi, g) in groups.iter().enumerate() {
            let b = block_of_root[uf.find(id(g[0].1))];
            blocks[b].1.push(gi);
        }
        let mut total = 0.0;
        for (cfgs, gids) in &blocks {
            if cfgs.len() < 2 {
                continue;
            }
            let local = |c: usize| cfgs.binary_search(&c).expect("config in block");
            let mut diag = vec![0.0; cfgs.len()];
            for &gi in gids {
                for e in groups[gi] {
                    diag[local(id(e.1))] += e.2.norm_sqr();
                }
            }
            let eig = if cfgs.len() <= gids.len() {
                let mut m = DMatrix::<Complex64>::zeros(cfgs.len(), cfgs.len());
                for &gi in gids {
                    let g = groups[gi];
                    for ei in g {
                        for ej in g {
                            m[(local(id(ei.1)), local(id(ej.1)))] += ei.2 * ej.2.conj();
                        }
                    }
                }
                hermitian_eigenvalues(&m)
            } else {
                // Gram matrix ⟨v_g, v_h⟩ shares the nonzero spectrum.
                let mut m = DMatrix::<Complex64>::zeros(gids.len(), gids.len());
                for (x, &gx) in gids.iter().enumerate() {
                    for (y, &gy) in gids.iter().enumerate().skip(x) {
                        let mut acc = Complex64::new(0.0, 0.0);
                        let (a, b) = (groups[gx], groups[gy]);
                        let (mut i, mut j) = (0, 0);
                        while i < a.len() && j < b.len() {
                            match a[i].1.cmp(&b[j].1) {
                                std::cmp::Ordering::Less => i += 1,
                                std::cmp::Ordering::Greater => j += 1,
                                std::cmp::Ordering::Equal => {
                                    acc += a[i].2.conj() * b[j].2;
                                    i += 1;
                                    j += 1;
                                }
                            }
                        }
                        m[(x, y)] = acc;
                        m[(y, x)] = acc.conj();
                    }
                }
                hermitian_eigenvalues(&m)
            };
            total += shannon_bits(diag) - shannon_bits(eig);
        }
        Ok(total.max(0.0))
    }

    /// Dense amplitudes (for oracles; `n ≤ 24`).
    pub fn to_dense(&self) -> Result<QuditState> {
        if self.n > 24 {
            return Err(Error::TooLarge(format!("{} sites for a dense copy", self.n)));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for &(c, a) in &self.support {
            amps[c as usize] = a;
        }
        QuditState::from_amplitudes(2, self.n, amps)
    }
}

fn check_sites(n: usize) -> Result<()> {
    if !(2..=MAX_SITES).contains(&n) {
        return Err(Error::TooLarge(format!("sparse backend supports 2..={MAX_SITES} sites, got {n}")));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotones::relative_entropy_of_coherence;
    use crate::rng::stream;

    #[test]
    fn identity_gate_is_noop() {
        let mut s = SparseState::plus_cluster(6, 2, 2).unwrap();
        let before = s.clone();
        s.apply_pp_gate(&PermutationPhaseGate::identity(), 1).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn swap_moves_configuration() {
        let mut s = SparseState::basis(2, 0b01).unwrap();
        s.apply_pp_gate(&PermutationPhaseGate::swap(), 0).unwrap();
        assert_eq!(s.support(), &[(0b10, Complex64::new(1.0, 0.0))]);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(PermutationPhaseGate::new([0, 0, 1, 2], [0.0; 4]).is_err());
    }

    #[test]
    fn zero_state_reduces_to_pure_zero() {
        let s = SparseState::basis(8, 0).unwrap();
        let rho = s.reduced_density(2, 5).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert_eq!(s.coherence(2, 5).unwrap(), 0.0);
    }

    #[test]
    fn plus_cluster_is_maximally_coherent() {
        let s = SparseState::plus_cluster(12, 4, 4).unwrap();
        let rho = s.reduced_density(4, 8).unwrap();
        assert!((relative_entropy_of_coherence(&rho) - 4.0).abs() < 1e-10);
        assert!((s.coherence(4, 8).unwrap() - 4.0).abs() < 1e-10);
        assert_eq!(s.support_size(), 16);
    }

    #[test]
    fn matches_dense_evolution() {
        let mut rng = stream(3, 0);
        let mut s = SparseState::plus_cluster(12, 4, 4).unwrap();
        let mut d = s.to_dense().unwrap();
        for layer in 0..12 {
            let mut left = layer % 2;
            while left + 1 < 12 {
                let g = PermutationPhaseGate::random(&mut rng);
                s.apply_pp_gate(&g, left).unwrap();
                d.apply_two_site_gate(&g.two_site_gate(), left).unwrap();
                left += 2;
            }
            assert_eq!(s.support_size(), 16);
            let sd = s.to_dense().unwrap();
            for (a, b) in sd.amplitudes().iter().zip(d.amplitudes()) {
                assert!((a - b).norm() < 1e-10);
            }
            for (start, end) in [(0, 4), (3, 9), (6, 12), (5, 7)] {
                let rs = s.reduced_density(start, end).unwrap();
                let rd = d.partial_trace(start, end).unwrap();
                assert!((rs.matrix() - rd.matrix()).camax() < 1e-10);
                let fast = s.coherence(start, end).unwrap();
                let dense = relative_entropy_of_coherence(&rd);
                assert!((fast - dense).abs() < 1e-9, "layer {layer} A={start}..{end}: {fast} vs {dense}");
            }
        }
    }

    #[test]
    fn norm_conserved_over_many_gates() {
        let mut rng = stream(4, 0);
        let mut s = SparseState::plus_cluster(40, 16, 8).unwrap();
        for _ in 0..10_000 {
            let left = rng.random_range(0..39);
            s.apply_pp_gate(&PermutationPhaseGate::random(&mut rng), left).unwrap();
        }
        assert_eq!(s.support_size(), 256);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }
}
