//! Stabilizer tableaux for qubit chains.
//!
//! The tableau keeps `n` destabilizer rows followed by `n` stabilizer rows,
//! each a bit-packed Pauli string in XZ form with a phase exponent. Gates are
//! applied by conjugating every row through the gate's 16-entry lookup
//! table. Subsystem quantities use the stabilizer rows restricted to the
//! subsystem:
//!
//! * `rank_A` is the GF(2) rank of the restricted rows (x-bits then z-bits);
//! * `rank_x` is the rank of their x-bits alone.
//!
//! The subgroup `G_A` of stabilizers supported in `A` has `log2|G_A| =
//! 2|A| − rank_A`, and its diagonal part (only `I`/`Z` on `A`) has
//! `log2|G_A^Z| = |A| − rank_x`. The entropy of `ρ_A` is `|A| − log2|G_A|`
//! and its relative entropy of coherence is `log2|G_A| − log2|G_A^Z|`.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::clifford::CliffordGate2;
use crate::pauli::{extract_bits, get_bit, set_bit, word_count, Pauli, PauliString};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    // 2n rows: destabilizers 0..n, stabilizers n..2n.
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Vec<u8>,
}

/// Ranks of the stabilizer subgroups supported inside a subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubgroupReport {
    /// `log2 |G_A|`.
    pub rank_full: usize,
    /// `log2 |G_A^Z|`.
    pub rank_diagonal: usize,
}

impl Tableau {
    /// Tableau of `|0…0⟩`.
    pub fn new(n: usize) -> Self {
        let words = word_count(n).max(1);
        let mut t = Self { n, words, x: vec![0; 2 * n * words], z: vec![0; 2 * n * words], phase: vec![0; 2 * n] };
        for q in 0..n {
            set_bit(t.row_x_mut(q), q, true);
            set_bit(t.row_z_mut(n + q), q, true);
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn row_x(&self, r: usize) -> &[u64] {
        &self.x[r * self.words..(r + 1) * self.words]
    }

    #[inline]
    fn row_z(&self, r: usize) -> &[u64] {
        &self.z[r * self.words..(r + 1) * self.words]
    }

    fn row_x_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.x[r * self.words..(r + 1) * self.words]
    }

    fn row_z_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.z[r * self.words..(r + 1) * self.words]
    }

    fn row(&self, r: usize) -> PauliString {
        PauliString::from_words(self.n, self.row_x(r).to_vec(), self.row_z(r).to_vec(), self.phase[r])
    }

    /// Stabilizer generator `k` (`0 ≤ k < n`).
    pub fn stabilizer(&self, k: usize) -> PauliString {
        self.row(self.n + k)
    }

    pub fn destabilizer(&self, k: usize) -> PauliString {
        self.row(k)
    }

    /// Conjugates every row by the two-qubit Clifford `gate` acting on `(i, j)`.
    pub fn apply_clifford(&mut self, gate: &CliffordGate2, i: usize, j: usize) -> Result<()> {
        for q in [i, j] {
            if q >= self.n {
                return Err(Error::SiteOutOfRange { site: q, sites: self.n });
            }
        }
        if i == j {
            return Err(Error::InvalidClifford("two-qubit gate on a single site".into()));
        }
        let (wi, bi) = (i >> 6, i & 63);
        let (wj, bj) = (j >> 6, j & 63);
        for r in 0..2 * self.n {
            let base = r * self.words;
            let xi = (self.x[base + wi] >> bi) & 1;
            let zi = (self.z[base + wi] >> bi) & 1;
            let xj = (self.x[base + wj] >> bj) & 1;
            let zj = (self.z[base + wj] >> bj) & 1;
            let pattern = (xi | zi << 1 | xj << 2 | zj << 3) as u8;
            if pattern == 0 {
                continue;
            }
            let img = gate.pattern_image(pattern);
            let nb = img.bits as u64;
            self.x[base + wi] = (self.x[base + wi] & !(1 << bi)) | ((nb & 1) << bi);
            self.z[base + wi] = (self.z[base + wi] & !(1 << bi)) | (((nb >> 1) & 1) << bi);
            self.x[base + wj] = (self.x[base + wj] & !(1 << bj)) | (((nb >> 2) & 1) << bj);
            self.z[base + wj] = (self.z[base + wj] & !(1 << bj)) | (((nb >> 3) & 1) << bj);
            self.phase[r] = (self.phase[r] + img.phase) & 3;
        }
        Ok(())
    }

    /// Hadamard on qubit `q`.
    pub fn apply_h(&mut self, q: usize) -> Result<()> {
        self.check_site(q)?;
        for r in 0..2 * self.n {
            let xs = get_bit(self.row_x(r), q);
            let zs = get_bit(self.row_z(r), q);
            if xs && zs {
                self.phase[r] = (self.phase[r] + 2) & 3;
            }
            set_bit(self.row_x_mut(r), q, zs);
            set_bit(self.row_z_mut(r), q, xs);
        }
        Ok(())
    }

    /// Phase gate `S` on qubit `q`: `X → Y`, `Z → Z`.
    pub fn apply_s(&mut self, q: usize) -> Result<()> {
        self.check_site(q)?;
        for r in 0..2 * self.n {
            let xs = get_bit(self.row_x(r), q);
            let zs = get_bit(self.row_z(r), q);
            if xs {
                // X Z^z → (iXZ) Z^z = i X Z^{z+1}
                self.phase[r] = (self.phase[r] + 1) & 3;
                set_bit(self.row_z_mut(r), q, !zs);
            }
        }
        Ok(())
    }

    fn check_site(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::SiteOutOfRange { site: q, sites: self.n })
        } else {
            Ok(())
        }
    }

    fn check_range(&self, start: usize, end: usize) -> Result<()> {
        if start >= end || end > self.n {
            Err(Error::InvalidSubsystem { start, end, sites: self.n })
        } else {
            Ok(())
        }
    }

    /// Stabilizer rows restricted to `start..end` as `[x-bits | z-bits]`
    /// words, `k.div_ceil(64)` words per half.
    fn restricted_stabilizers(&self, start: usize, end: usize) -> (usize, Vec<Vec<u64>>) {
        let k = end - start;
        let half = word_count(k).max(1);
        let rows = (0..self.n)
            .map(|s| {
                let r = self.n + s;
                let mut v = extract_bits(self.row_x(r), start, k);
                v.resize(half, 0);
                let mut zv = extract_bits(self.row_z(r), start, k);
                zv.resize(half, 0);
                v.extend(zv);
                v
            })
            .collect();
        (half, rows)
    }

    /// `log2|G_A|` and `log2|G_A^Z|` from one elimination pass over the
    /// restricted rows, x-bit columns of `A` first and z-bit columns after.
    pub fn subsystem_ranks(&self, start: usize, end: usize) -> Result<SubgroupReport> {
        self.check_range(start, end)?;
        let k = end - start;
        let (half, mut rows) = self.restricted_stabilizers(start, end);
        let mut rank = 0usize;
        let mut rank_x = None;
        for col in 0..2 * k {
            if col == k {
                rank_x = Some(rank);
            }
            if rank == rows.len() {
                break;
            }
            let w = if col < k { col >> 6 } else { half + ((col - k) >> 6) };
            let b = if col < k { col & 63 } else { (col - k) & 63 };
            let Some(p) = (rank..rows.len()).find(|&r| (rows[r][w] >> b) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if (row[w] >> b) & 1 == 1 {
                    for (a, c) in row.iter_mut().zip(&pivot) {
                        *a ^= c;
                    }
                }
            }
            rank += 1;
        }
        let rank_x = rank_x.unwrap_or(rank);
        Ok(SubgroupReport { rank_full: 2 * k - rank, rank_diagonal: k - rank_x })
    }

    /// Entanglement entropy (bits) of `ρ_A` for `A = start..end`.
    pub fn entanglement_entropy(&self, start: usize, end: usize) -> Result<f64> {
        let r = self.subsystem_ranks(start, end)?;
        Ok((end - start - r.rank_full) as f64)
    }

    /// Relative entropy of coherence (bits) of `ρ_A`.
    pub fn coherence(&self, start: usize, end: usize) -> Result<f64> {
        let r = self.subsystem_ranks(start, end)?;
        Ok((r.rank_full - r.rank_diagonal) as f64)
    }

    /// `⟨P⟩ ∈ {−1, 0, +1}` for a Hermitian Pauli `P` on all qubits.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<i8> {
        if p.num_qubits() != self.n {
            return Err(Error::Dimension(format!("{}-qubit Pauli on a {}-qubit tableau", p.num_qubits(), self.n)));
        }
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.to_string()));
        }
        let (px, pz) = (p.x_words(), p.z_words());
        let anticommutes = |r: usize| {
            let (rx, rz) = (self.row_x(r), self.row_z(r));
            let mut acc = 0u32;
            for w in 0..self.words {
                acc ^= ((rx[w] & pz[w]) ^ (rz[w] & px[w])).count_ones();
            }
            acc & 1 == 1
        };
        if (self.n..2 * self.n).any(anticommutes) {
            return Ok(0);
        }
        let mut prod = PauliString::identity(self.n);
        for k in 0..self.n {
            if anticommutes(k) {
                prod.mul_assign_right(&self.row(self.n + k));
            }
        }
        Ok(sign_of_ratio(p.phase(), prod.phase()))
    }

    /// Majorana covariance matrix of `ρ_A` with Jordan–Wigner strings
    /// anchored at `start`: `γ_{2k} = Z…Z X_k`, `γ_{2k+1} = Z…Z Y_k`.
    pub fn covariance_matrix(&self, start: usize, end: usize) -> Result<DMatrix<f64>> {
        self.check_range(start, end)?;
        let k = end - start;
        let (half, stab) = self.restricted_stabilizers(start, end);
        let destab: Vec<Vec<u64>> = (0..self.n)
            .map(|r| {
                let mut v = extract_bits(self.row_x(r), start, k);
                v.resize(half, 0);
                let mut zv = extract_bits(self.row_z(r), start, k);
                zv.resize(half, 0);
                v.extend(zv);
                v
            })
            .collect();
        let gammas = majorana_strings(k);
        let mut gamma = DMatrix::<f64>::zeros(2 * k, 2 * k);
        let mut cand = vec![0u64; 2 * half];
        for a in 0..2 * k {
            for b in (a + 1)..2 * k {
                let prod = gammas[a].mul(&gammas[b]);
                cand[..half].copy_from_slice(&prod.x_words()[..half]);
                cand[half..].copy_from_slice(&prod.z_words()[..half]);
                let anti = |row: &Vec<u64>| {
                    let mut acc = 0u32;
                    for w in 0..half {
                        acc ^= ((row[w] & cand[half + w]) ^ (row[half + w] & cand[w])).count_ones();
                    }
                    acc & 1 == 1
                };
                if stab.iter().any(anti) {
                    continue;
                }
                // γ_a γ_b = i^e · (XZ pattern); Γ_ab = −i⟨γ_a γ_b⟩.
                let mut full = PauliString::identity(self.n);
                for (s, row) in destab.iter().enumerate() {
                    if anti(row) {
                        full.mul_assign_right(&self.row(self.n + s));
                    }
                }
                let embedded = prod.embed(self.n, start);
                // ⟨i^e X^x Z^z⟩ with the stabilizer product i^f X^x Z^z = +1.
                let expect_phase = (embedded.phase() + 4 - full.phase()) & 3;
                // −i · i^{expect_phase}
                let value = match (expect_phase + 3) & 3 {
                    0 => 1.0,
                    2 => -1.0,
                    _ => unreachable!("Majorana bilinear has an imaginary expectation"),
                };
                gamma[(a, b)] = value;
                gamma[(b, a)] = -value;
            }
        }
        Ok(gamma)
    }

    /// Stabilizer rows in reduced row-echelon form with signs, used to
    /// compare states independently of generator choice.
    pub fn canonical_stabilizers(&self) -> Vec<PauliString> {
        let mut rows: Vec<PauliString> = (0..self.n).map(|k| self.stabilizer(k)).collect();
        let mut rank = 0;
        let columns = (0..self.n).map(|q| (q, true)).chain((0..self.n).map(|q| (q, false)));
        for (q, is_x) in columns {
            let bit = |p: &PauliString| if is_x { p.x_bit(q) } else { p.z_bit(q) };
            let Some(p) = (rank..rows.len()).find(|&r| bit(&rows[r])) else { continue };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && bit(row) {
                    row.mul_assign_right(&pivot);
                }
            }
            rank += 1;
        }
        rows
    }

    /// Hex dump of all rows; see [`Tableau::from_hex_dump`].
    ///
    /// ```text
    /// qres-tableau v1 n=<qubits> words=<words per half-row>
    /// D <phase> <x words> <z words>     (n destabilizer rows)
    /// S <phase> <x words> <z words>     (n stabilizer rows)
    /// ```
    ///
    /// Words are 16 hex digits, least significant word first; bit `q % 64` of
    /// word `q / 64` is qubit `q`. The phase is the exponent of `i` in XZ form.
    pub fn to_hex_dump(&self) -> String {
        let mut out = format!("qres-tableau v1 n={} words={}\n", self.n, self.words);
        for r in 0..2 * self.n {
            let tag = if r < self.n { 'D' } else { 'S' };
            let _ = write!(out, "{tag} {}", self.phase[r]);
            for w in self.row_x(r).iter().chain(self.row_z(r)) {
                let _ = write!(out, " {w:016x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_hex_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty tableau dump".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("qres-tableau") || fields.next() != Some("v1") {
            return Err(Error::Parse(format!("unsupported tableau header {header:?}")));
        }
        let mut n = None;
        let mut words = None;
        for f in fields {
            if let Some(v) = f.strip_prefix("n=") {
                n = v.parse().ok();
            } else if let Some(v) = f.strip_prefix("words=") {
                words = v.parse().ok();
            }
        }
        let (n, words): (usize, usize) =
            (n.ok_or_else(|| Error::Parse("missing n".into()))?, words.ok_or_else(|| Error::Parse("missing words".into()))?);
        if words != word_count(n).max(1) {
            return Err(Error::Parse("word count does not match n".into()));
        }
        let mut t = Self { n, words, x: vec![0; 2 * n * words], z: vec![0; 2 * n * words], phase: vec![0; 2 * n] };
        for r in 0..2 * n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            let expected_tag = if r < n { "D" } else { "S" };
            if parts.len() != 2 + 2 * words || parts[0] != expected_tag {
                return Err(Error::Parse(format!("malformed row {r}: {line:?}")));
            }
            t.phase[r] = parts[1].parse::<u8>().map_err(|e| Error::Parse(e.to_string()))? & 3;
            for w in 0..words {
                t.x[r * words + w] = u64::from_str_radix(parts[2 + w], 16).map_err(|e| Error::Parse(e.to_string()))?;
                t.z[r * words + w] =
                    u64::from_str_radix(parts[2 + words + w], 16).map_err(|e| Error::Parse(e.to_string()))?;
            }
        }
        Ok(t)
    }

    /// Checks that stabilizers commute, each destabilizer anticommutes only
    /// with its partner, and the stabilizer rows are independent.
    pub fn check_invariants(&self) -> Result<()> {
        for a in 0..2 * self.n {
            for b in (a + 1)..2 * self.n {
                let commute = self.row(a).commutes_with(&self.row(b));
                let partners = b == a + self.n && a < self.n;
                if commute == partners {
                    return Err(Error::InvalidClifford(format!("rows {a} and {b} violate symplectic structure")));
                }
            }
        }
        let canon = self.canonical_stabilizers();
        if canon.iter().any(|p| p.is_identity()) {
            return Err(Error::InvalidClifford("stabilizer rows are dependent".into()));
        }
        if canon.iter().any(|p| !p.is_hermitian()) {
            return Err(Error::InvalidClifford("non-Hermitian stabilizer row".into()));
        }
        Ok(())
    }
}

/// `⟨P⟩` for `P = i^p X^x Z^z` when the stabilizer product with the same
/// bits is `i^q X^x Z^z` with eigenvalue +1.
fn sign_of_ratio(p: u8, q: u8) -> i8 {
    match (p + 4 - q) & 3 {
        0 => 1,
        2 => -1,
        _ => unreachable!("Hermitian Pauli has a real expectation"),
    }
}

/// Majorana strings on `k` qubits: `γ_{2m} = Z_0…Z_{m−1} X_m`,
/// `γ_{2m+1} = Z_0…Z_{m−1} Y_m` (0-based).
pub fn majorana_strings(k: usize) -> Vec<PauliString> {
    let mut out = Vec::with_capacity(2 * k);
    for m in 0..k {
        for letter in [Pauli::X, Pauli::Y] {
            let mut p = PauliString::identity(k);
            for q in 0..m {
                p.set(q, Pauli::Z);
            }
            p.set(m, letter);
            out.push(p);
        }
    }
    out
}
