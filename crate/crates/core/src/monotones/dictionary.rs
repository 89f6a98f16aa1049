//! Pure stabilizer states of up to four qubits as Pauli-basis vectors.
//!
//! A state `σ = 2^{-n} Σ_{g ∈ S} g` is stored through its `2^n` nonzero
//! Pauli expectations `tr(σ P_r) = ±1`. Pauli `P_r` has index `r`
//! with one base-4 digit per qubit (`I=0, X=1, Y=2, Z=3`, qubit 0 most
//! significant).
//!
//! Cache file layout (all integers little-endian):
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `QRESSTAB` |
//! | 4     | format version (1) |
//! | 4     | `n` |
//! | 4     | column count |
//! | 8     | first 8 bytes of SHA-256 of the payload |
//! | rest  | column-major `i8` coefficients, `4^n` per column |

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use once_cell::sync::OnceCell;
use sha2::{Digest, Sha256};

use crate::pauli::PauliString;
use crate::{Error, Result};

pub const MAX_DICTIONARY_QUBITS: usize = 4;
const MAGIC: &[u8; 8] = b"QRESSTAB";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 4 + 8;

/// `2^n ∏_{k=1}^{n} (2^k + 1)`.
pub fn stabilizer_state_count(n: usize) -> usize {
    (1..=n).fold(1usize << n, |acc, k| acc * ((1usize << k) + 1))
}

/// Base-4 index of a Pauli's letters (phase ignored).
pub fn pauli_index(p: &PauliString) -> usize {
    let n = p.num_qubits();
    (0..n).fold(0, |acc, q| acc * 4 + letter_digit(p.x_bit(q), p.z_bit(q)))
}

/// Hermitian Pauli with index `r`.
pub fn pauli_from_index(n: usize, r: usize) -> PauliString {
    let text: String = (0..n).map(|q| ['I', 'X', 'Y', 'Z'][(r >> (2 * (n - 1 - q))) & 3]).collect();
    text.parse().expect("valid letters")
}

fn letter_digit(x: bool, z: bool) -> usize {
    match (x, z) {
        (false, false) => 0,
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
    }
}

/// Compact Pauli on `n ≤ 8` qubits: bit `q` of `x`/`z` is qubit `q`.
#[derive(Clone, Copy)]
struct SmallPauli {
    x: u8,
    z: u8,
    phase: u8,
}

impl SmallPauli {
    fn hermitian(x: u8, z: u8) -> Self {
        Self { x, z, phase: ((x & z).count_ones() & 3) as u8 }
    }

    fn mul(self, rhs: Self) -> Self {
        let swaps = (self.z & rhs.x).count_ones() as u8;
        Self { x: self.x ^ rhs.x, z: self.z ^ rhs.z, phase: (self.phase + rhs.phase + 2 * swaps) & 3 }
    }

    fn sign(self) -> i8 {
        match (self.phase + 4 - ((self.x & self.z).count_ones() as u8 & 3)) & 3 {
            0 => 1,
            2 => -1,
            _ => unreachable!("products of commuting Hermitian Paulis are Hermitian"),
        }
    }

    fn index(self, n: usize) -> usize {
        (0..n).fold(0, |acc, q| acc * 4 + letter_digit(self.x >> q & 1 == 1, self.z >> q & 1 == 1))
    }
}

/// Maximal isotropic subspaces of `F₂^{2n}`, each given by `n` generators
/// encoded as `x | z << n`.
fn lagrangian_subspaces(n: usize) -> Vec<Vec<u16>> {
    let full = 1usize << (2 * n);
    let mask = (1u16 << n) - 1;
    let commute = |a: u16, b: u16| {
        let (ax, az, bx, bz) = (a & mask, a >> n, b & mask, b >> n);
        ((ax & bz) ^ (az & bx)).count_ones() % 2 == 0
    };
    type Key = [u64; 4];
    let key_of = |span: &[u16]| {
        let mut k = [0u64; 4];
        for &v in span {
            k[(v >> 6) as usize] |= 1 << (v & 63);
        }
        k
    };
    // (generators, span) at the current depth.
    let mut level: Vec<(Vec<u16>, Vec<u16>)> = vec![(Vec::new(), vec![0])];
    for _ in 0..n {
        let mut seen: HashSet<Key> = HashSet::new();
        let mut next = Vec::new();
        for (gens, span) in &level {
            let in_span = key_of(span);
            for v in 1..full as u16 {
                if in_span[(v >> 6) as usize] >> (v & 63) & 1 == 1 || !gens.iter().all(|&g| commute(g, v)) {
                    continue;
                }
                let mut new_span = span.clone();
                new_span.extend(span.iter().map(|&s| s ^ v));
                let key = key_of(&new_span);
                if seen.insert(key) {
                    let mut g = gens.clone();
                    g.push(v);
                    next.push((g, new_span));
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|(g, _)| g).collect()
}

/// All pure `n`-qubit stabilizer states as sparse `±1` Pauli columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerDictionary {
    n: usize,
    /// `2^n` row indices per column, ascending.
    rows: Vec<u16>,
    signs: Vec<i8>,
}

/// Enumerates the dictionary: Lagrangian subspaces in discovery order, then
/// the `2^n` sign assignments of their generators.
pub fn enumerate_stabilizer_states(n: usize) -> Result<StabilizerDictionary> {
    check_size(n)?;
    let per = 1usize << n;
    let mut rows = Vec::with_capacity(stabilizer_state_count(n) * per);
    let mut signs = Vec::with_capacity(rows.capacity());
    let mask = (1u16 << n) - 1;
    for gens in lagrangian_subspaces(n) {
        let gens: Vec<SmallPauli> = gens.iter().map(|&g| SmallPauli::hermitian((g & mask) as u8, (g >> n) as u8)).collect();
        for sign_bits in 0..per {
            let signed: Vec<SmallPauli> = gens
                .iter()
                .enumerate()
                .map(|(k, g)| SmallPauli { phase: (g.phase + if sign_bits >> k & 1 == 1 { 2 } else { 0 }) & 3, ..*g })
                .collect();
            let mut col: Vec<(u16, i8)> = (0..per)
                .map(|subset| {
                    let p = (0..n)
                        .filter(|k| subset >> k & 1 == 1)
                        .fold(SmallPauli { x: 0, z: 0, phase: 0 }, |acc, k| acc.mul(signed[k]));
                    (p.index(n) as u16, p.sign())
                })
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            for (r, s) in col {
                rows.push(r);
                signs.push(s);
            }
        }
    }
    Ok(StabilizerDictionary { n, rows, signs })
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DICTIONARY_QUBITS {
        return Err(Error::TooLarge(format!(
            "stabilizer dictionaries are built for 1..={MAX_DICTIONARY_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

static CACHED: [OnceCell<StabilizerDictionary>; MAX_DICTIONARY_QUBITS] =
    [OnceCell::new(), OnceCell::new(), OnceCell::new(), OnceCell::new()];

/// Process-wide dictionary for `n` qubits, built on first use.
pub fn dictionary(n: usize) -> Result<&'static StabilizerDictionary> {
    check_size(n)?;
    CACHED[n - 1].get_or_try_init(|| enumerate_stabilizer_states(n))
}

impl StabilizerDictionary {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len() >> self.n
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Nonzero entries `(r, tr(σ_i P_r))` of column `i`.
    pub fn column(&self, i: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let per = 1 << self.n;
        self.rows[i * per..(i + 1) * per].iter().zip(&self.signs[i * per..(i + 1) * per]).map(|(&r, &s)| (r as usize, s))
    }

    /// Column `i` as a dense `4^n` vector of `±1/0`.
    pub fn dense_column(&self, i: usize) -> Vec<i8> {
        let mut v = vec![0i8; 1 << (2 * self.n)];
        for (r, s) in self.column(i) {
            v[r] = s;
        }
        v
    }

    /// Pauli coefficients `tr(σ_i P_r)/2^n` of column `i`.
    pub fn pauli_vector(&self, i: usize) -> Vec<f64> {
        let scale = 1.0 / (1u32 << self.n) as f64;
        self.dense_column(i).into_iter().map(|s| s as f64 * scale).collect()
    }

    fn payload(&self) -> Vec<u8> {
        (0..self.len()).flat_map(|i| self.dense_column(i)).map(|s| s as u8).collect()
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let payload = self.payload();
        let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.extend_from_slice(&(self.len() as u32).to_le_bytes());
        out.extend_from_slice(&checksum(&payload));
        out.extend_from_slice(&payload);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, out)?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        let bad = |what: &str| Error::Parse(format!("{}: {what}", path.display()));
        if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
            return Err(bad("not a stabilizer dictionary cache"));
        }
        let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
        if word(8) != VERSION as usize {
            return Err(bad("unsupported cache version"));
        }
        let (n, count) = (word(12), word(16));
        if n == 0 || n > MAX_DICTIONARY_QUBITS || count != stabilizer_state_count(n) {
            return Err(bad("inconsistent header"));
        }
        let payload = &bytes[HEADER_LEN..];
        let dim = 1usize << (2 * n);
        if payload.len() != count * dim {
            return Err(bad("truncated payload"));
        }
        if checksum(payload) != bytes[20..28] {
            return Err(bad("checksum mismatch"));
        }
        let mut rows = Vec::with_capacity(count << n);
        let mut signs = Vec::with_capacity(count << n);
        for col in payload.chunks(dim) {
            for (r, &b) in col.iter().enumerate() {
                if b != 0 {
                    rows.push(r as u16);
                    signs.push(b as i8);
                }
            }
        }
        if rows.len() != count << n {
            return Err(bad("columns do not have 2^n nonzero entries"));
        }
        Ok(Self { n, rows, signs })
    }

    /// Reads `dir/stabilizers-n{n}.bin`, rebuilding and rewriting it when
    /// it is missing or fails validation.
    pub fn load_or_build(n: usize, dir: &Path) -> Result<Self> {
        let path = cache_path(dir, n);
        match Self::read_cache(&path) {
            Ok(d) if d.n == n => Ok(d),
            _ => {
                let d = enumerate_stabilizer_states(n)?;
                d.write_cache(&path)?;
                Ok(d)
            }
        }
    }
}

pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("stabilizers-n{n}.bin"))
}

fn checksum(payload: &[u8]) -> [u8; 8] {
    let digest = Sha256::digest(payload);
    digest[..8].try_into().expect("digest has 32 bytes")
}
