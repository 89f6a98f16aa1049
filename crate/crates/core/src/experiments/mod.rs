//! Random brickwall circuits, Monte-Carlo averaging of local monotones and
//! the growth and spreading experiments built on them.
//!
//! Layers are numbered from 1. Odd layers hold candidate gates on sites
//! `(0, 1), (2, 3), …` and even layers on `(1, 2), (3, 4), …`; each candidate
//! is kept with probability `ε`. Within a realization every random draw comes
//! from one stream in (layer, site) order: the Bernoulli draw for a slot,
//! then the gate if the slot is kept.

pub mod fit;

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordGate2;
use crate::ensembles::{clifford_group, Ensemble, EnsembleSpec, SampledGate};
use crate::monotones::wigner::{qutrit_rotation_state, QUTRIT_MAGIC_ANGLE};
use crate::monotones::{
    dictionary, log_robustness_of_magic, mana, non_gaussianity_tableau, relative_entropy_of_coherence,
    relative_entropy_of_non_gaussianity,
};
use crate::rng::{stream, StreamRng};
use crate::sparse::SparseState;
use crate::statevec::{
    QuditState, MAX_QUBITS, MAX_QUBITS_HIGH_MEMORY, MAX_QUTRITS, MAX_QUTRITS_HIGH_MEMORY,
};
use crate::tableau::Tableau;
use crate::{Error, Result};

pub use fit::{
    extract_peak_time, fit_decay, fit_growth, fit_spread, front_velocity, linear_fit, peak_attenuation,
    significant_peaks, threshold_time, DecayFit, FitResult, FrontFit, LinearFit, PeakFit,
};

/// Largest subsystem for LRoM (the stabilizer dictionaries stop at 4 qubits).
pub const MAX_LROM_SITES: usize = 4;
pub const MAX_MANA_SITES: usize = 5;
/// Dense covariance matrices cost `O(L_A² 8^{L_A})`.
pub const MAX_DENSE_NG_SITES: usize = 6;
pub const MAX_DENSE_COHERENCE_SITES: usize = 10;
/// Largest plus or T cluster on the sparse backend (`2^len` configurations).
pub const MAX_SPARSE_CLUSTER: usize = 20;

/// Realizations evaluated in parallel before their results are folded in.
const CHUNK: usize = 256;

/// Default dilution for growth runs.
pub const GROWTH_EPSILON: f64 = 1.0;
/// Default dilution for sparse coherence spreading.
pub const SPARSE_SPREAD_EPSILON: f64 = 0.65;
/// Default dilution for chiral matchgate runs.
pub const CHIRAL_EPSILON: f64 = 0.7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Dense,
    Tableau,
    Sparse,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dense => "dense",
            Self::Tableau => "tableau",
            Self::Sparse => "sparse",
        })
    }
}

/// Initial product states. Clusters sit at offset `⌊(L − size)/2⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    AllZero,
    /// `cos(π/8)|0⟩ + sin(π/8)|1⟩` on `size` qubits.
    TCluster { size: usize },
    PlusCluster { size: usize },
    /// `blocks` copies of `(|0000⟩ + |1100⟩ + |0011⟩ − |1111⟩)/2`.
    FermionicCluster { blocks: usize },
    /// `e^{−iθ(X + X†)}|0⟩` on `size` qutrits; `angle` defaults to
    /// [`QUTRIT_MAGIC_ANGLE`].
    QutritMagicCluster {
        size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        angle: Option<f64>,
    },
}

impl InitialState {
    /// Number of sites covered by the cluster (0 for the all-zero state).
    pub fn cluster_sites(&self) -> usize {
        match *self {
            Self::AllZero => 0,
            Self::TCluster { size } | Self::PlusCluster { size } | Self::QutritMagicCluster { size, .. } => size,
            Self::FermionicCluster { blocks } => 4 * blocks,
        }
    }

    /// First site of the cluster on a chain of `sites`.
    pub fn cluster_offset(&self, sites: usize) -> usize {
        (sites - self.cluster_sites().min(sites)) / 2
    }

    fn is_stabilizer(&self) -> bool {
        matches!(self, Self::AllZero | Self::PlusCluster { .. } | Self::FermionicCluster { .. })
    }
}

/// Local resource monotones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotone {
    Lrom,
    Coherence,
    NonGaussianity,
    Mana,
}

impl Monotone {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lrom => "lrom",
            Self::Coherence => "coherence",
            Self::NonGaussianity => "non_gaussianity",
            Self::Mana => "mana",
        }
    }

    /// Level used for threshold times unless overridden.
    pub fn default_threshold(&self) -> f64 {
        match self {
            Self::Lrom | Self::Mana => 0.01,
            Self::Coherence | Self::NonGaussianity => 0.1,
        }
    }

    /// Checks that `backend` on `d`-level sites can evaluate the monotone on
    /// `size` contiguous sites.
    pub fn check_support(&self, backend: Backend, d: usize, size: usize) -> Result<()> {
        let fail = |why: String| Err(Error::Incompatible(format!("{} on the {backend} backend: {why}", self.name())));
        if size == 0 {
            return fail("empty subsystem".into());
        }
        let want_d = if *self == Self::Mana { 3 } else { 2 };
        if d != want_d {
            return fail(format!("needs d = {want_d}, chain has d = {d}"));
        }
        let cap = match (self, backend) {
            (Self::Lrom, Backend::Dense) => MAX_LROM_SITES,
            (Self::Mana, Backend::Dense) => MAX_MANA_SITES,
            (Self::Coherence, Backend::Dense) => MAX_DENSE_COHERENCE_SITES,
            (Self::NonGaussianity, Backend::Dense) => MAX_DENSE_NG_SITES,
            (Self::Coherence | Self::NonGaussianity, Backend::Tableau) => usize::MAX,
            (Self::Coherence, Backend::Sparse) => usize::MAX,
            _ => return fail("not available".into()),
        };
        if size > cap {
            return fail(format!("subsystem of {size} sites exceeds the cap of {cap}"));
        }
        Ok(())
    }
}

impl std::str::FromStr for Monotone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lrom" => Ok(Self::Lrom),
            "coherence" => Ok(Self::Coherence),
            "non_gaussianity" => Ok(Self::NonGaussianity),
            "mana" => Ok(Self::Mana),
            other => Err(Error::Parse(format!("unknown monotone `{other}`"))),
        }
    }
}

impl fmt::Display for Monotone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything needed to reproduce a Monte-Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    /// Local dimension.
    pub d: usize,
    /// Chain length `L`.
    pub sites: usize,
    /// Number of layers `T`.
    pub depth: usize,
    pub epsilon: f64,
    pub ensemble: EnsembleSpec,
    pub backend: Backend,
    pub initial_state: InitialState,
    pub seed: u64,
    pub realizations: usize,
    /// Lifts the dense statevector caps.
    #[serde(default)]
    pub high_memory: bool,
}

impl CircuitSpec {
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        let inc = |m: String| Err(Error::Incompatible(m));
        if self.d != 2 && self.d != 3 {
            return cfg(format!("local dimension d = {} (expected 2 or 3)", self.d));
        }
        if self.sites < 2 {
            return cfg(format!("chain of {} sites (need at least 2)", self.sites));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return cfg(format!("epsilon = {} outside [0, 1]", self.epsilon));
        }
        if self.realizations == 0 {
            return cfg("realizations must be at least 1".into());
        }
        self.ensemble.validate()?;
        if self.ensemble.local_dim() != self.d {
            return inc(format!("ensemble {} acts on d = {}, chain has d = {}", self.ensemble, self.ensemble.local_dim(), self.d));
        }
        let init = self.initial_state;
        let cluster = init.cluster_sites();
        if !matches!(init, InitialState::AllZero) && cluster == 0 {
            return cfg("initial cluster of size 0".into());
        }
        if cluster > self.sites {
            return cfg(format!("initial cluster of {cluster} sites on a chain of {}", self.sites));
        }
        let qutrit_state = matches!(init, InitialState::QutritMagicCluster { .. });
        if qutrit_state != (self.d == 3) && !matches!(init, InitialState::AllZero) {
            return inc(format!("initial state {init:?} does not live on d = {} sites", self.d));
        }
        match self.backend {
            Backend::Dense => {
                let cap = match (self.d, self.high_memory) {
                    (2, false) => MAX_QUBITS,
                    (2, true) => MAX_QUBITS_HIGH_MEMORY,
                    (_, false) => MAX_QUTRITS,
                    (_, true) => MAX_QUTRITS_HIGH_MEMORY,
                };
                if self.sites > cap {
                    return Err(Error::TooLarge(format!(
                        "{} sites of dimension {} exceeds the dense cap of {cap}",
                        self.sites, self.d
                    )));
                }
            }
            Backend::Tableau => {
                if !self.ensemble.is_clifford() {
                    return inc(format!("tableau backend needs a Clifford ensemble, got {}", self.ensemble));
                }
                if !init.is_stabilizer() {
                    return inc(format!("tableau backend needs a stabilizer initial state, got {init:?}"));
                }
            }
            Backend::Sparse => {
                if !self.ensemble.is_permutation_phase() {
                    return inc(format!("sparse backend needs a permutation-phase ensemble, got {}", self.ensemble));
                }
                if self.sites > crate::sparse::MAX_SITES {
                    return Err(Error::TooLarge(format!(
                        "{} sites exceeds the sparse cap of {}",
                        self.sites,
                        crate::sparse::MAX_SITES
                    )));
                }
                if matches!(init, InitialState::TCluster { .. } | InitialState::PlusCluster { .. })
                    && cluster > MAX_SPARSE_CLUSTER
                {
                    return Err(Error::TooLarge(format!(
                        "cluster of {cluster} superposed sites exceeds the sparse cap of {MAX_SPARSE_CLUSTER}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Which sublattice a layer acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    /// Parity of the 1-based layer `t`.
    pub fn of_layer(t: usize) -> Self {
        if t % 2 == 1 {
            Self::Odd
        } else {
            Self::Even
        }
    }

    pub fn first_left_site(self) -> usize {
        match self {
            Self::Odd => 0,
            Self::Even => 1,
        }
    }
}

/// A validated spec with its gate ensemble resolved.
#[derive(Clone, Debug)]
pub struct Circuit {
    spec: CircuitSpec,
    ensemble: Ensemble,
}

impl Circuit {
    pub fn new(spec: &CircuitSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec: spec.clone(), ensemble: Ensemble::new(spec.ensemble, spec.seed)? })
    }

    pub fn spec(&self) -> &CircuitSpec {
        &self.spec
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    /// Gates of one layer with their left sites.
    pub fn build_layer<R: Rng + ?Sized>(&self, parity: Parity, rng: &mut R) -> Vec<(SampledGate, usize)> {
        let mut out = Vec::new();
        let mut left = parity.first_left_site();
        while left + 1 < self.spec.sites {
            if rng.random_bool(self.spec.epsilon) {
                out.push((self.ensemble.sample(rng), left));
            }
            left += 2;
        }
        out
    }

    /// Fresh copy of the initial state on the configured backend.
    pub fn initial_state(&self) -> Result<Simulation> {
        prepare(&self.spec)
    }

    /// Random stream of realization `index`.
    pub fn realization_rng(&self, index: usize) -> StreamRng {
        stream(self.spec.seed, index as u64)
    }
}

/// State of one realization on one of the three backends.
#[derive(Clone, Debug)]
pub enum Simulation {
    Dense(QuditState),
    Tableau(Tableau),
    Sparse(SparseState),
}

impl Simulation {
    pub fn apply(&mut self, gate: &SampledGate, left: usize) -> Result<()> {
        let group = clifford_group();
        match (self, gate) {
            (Self::Dense(s), SampledGate::Clifford(id)) => s.apply_two_site_gate(group.dense(*id), left),
            (Self::Dense(s), SampledGate::Dense(g)) => s.apply_two_site_gate(g, left),
            (Self::Dense(s), SampledGate::PermutationPhase(g)) => s.apply_two_site_gate(&g.two_site_gate(), left),
            (Self::Tableau(t), SampledGate::Clifford(id)) => t.apply_clifford(group.gate(*id), left, left + 1),
            (Self::Sparse(s), SampledGate::PermutationPhase(g)) => s.apply_pp_gate(g, left),
            (Self::Sparse(s), SampledGate::Clifford(id)) => match group.permutation_phase(*id) {
                Some(g) => s.apply_pp_gate(g, left),
                None => Err(Error::Incompatible("non-monomial Clifford on the sparse backend".into())),
            },
            (Self::Tableau(_), _) => Err(Error::Incompatible("non-Clifford gate on the tableau backend".into())),
            (Self::Sparse(_), SampledGate::Dense(_)) => {
                Err(Error::Incompatible("dense gate on the sparse backend".into()))
            }
        }
    }

    pub fn apply_layer(&mut self, layer: &[(SampledGate, usize)]) -> Result<()> {
        for (g, left) in layer {
            self.apply(g, *left)?;
        }
        Ok(())
    }

    /// Monotone of the reduced state on `start..end`.
    pub fn evaluate(&self, monotone: Monotone, start: usize, end: usize) -> Result<f64> {
        match (self, monotone) {
            (Self::Dense(s), m) => {
                let rho = s.partial_trace(start, end)?;
                match m {
                    Monotone::Lrom => log_robustness_of_magic(&rho, dictionary(end - start)?),
                    Monotone::Coherence => Ok(relative_entropy_of_coherence(&rho)),
                    Monotone::NonGaussianity => relative_entropy_of_non_gaussianity(&rho),
                    Monotone::Mana => mana(&rho),
                }
            }
            (Self::Tableau(t), Monotone::Coherence) => t.coherence(start, end),
            (Self::Tableau(t), Monotone::NonGaussianity) => non_gaussianity_tableau(t, start, end),
            (Self::Sparse(s), Monotone::Coherence) => s.coherence(start, end),
            (_, m) => Err(Error::Incompatible(format!("{m} is not available on this backend"))),
        }
    }

    pub fn num_sites(&self) -> usize {
        match self {
            Self::Dense(s) => s.num_sites(),
            Self::Tableau(t) => t.num_qubits(),
            Self::Sparse(s) => s.num_sites(),
        }
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Configurations and amplitudes of one four-qubit fermionic block.
const FERMIONIC_BLOCK: [(u8, f64); 4] = [(0b0000, 0.5), (0b1100, 0.5), (0b0011, 0.5), (0b1111, -0.5)];

/// Support of the fermionic cluster, site `s` on bit `sites − 1 − s`.
fn fermionic_entries(sites: usize, offset: usize, blocks: usize) -> Vec<(u128, Complex64)> {
    let mut entries = vec![(0u128, real(1.0))];
    for b in 0..blocks {
        let shift = sites - offset - 4 * (b + 1);
        entries = entries
            .into_iter()
            .flat_map(|(c, a)| FERMIONIC_BLOCK.iter().map(move |&(bits, s)| (c | (bits as u128) << shift, a * s)))
            .collect();
    }
    entries
}

fn local_vectors(spec: &CircuitSpec) -> Vec<Vec<Complex64>> {
    let d = spec.d;
    let mut zero = vec![real(0.0); d];
    zero[0] = real(1.0);
    let mut out = vec![zero; spec.sites];
    let off = spec.initial_state.cluster_offset(spec.sites);
    let local: Option<Vec<Complex64>> = match spec.initial_state {
        InitialState::TCluster { .. } => {
            let t = std::f64::consts::PI / 8.0;
            Some(vec![real(t.cos()), real(t.sin())])
        }
        InitialState::PlusCluster { .. } => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            Some(vec![real(h), real(h)])
        }
        InitialState::QutritMagicCluster { angle, .. } => {
            Some(qutrit_rotation_state(angle.unwrap_or(QUTRIT_MAGIC_ANGLE)).to_vec())
        }
        _ => None,
    };
    if let Some(v) = local {
        for slot in out.iter_mut().skip(off).take(spec.initial_state.cluster_sites()) {
            *slot = v.clone();
        }
    }
    out
}

fn prepare(spec: &CircuitSpec) -> Result<Simulation> {
    let n = spec.sites;
    let init = spec.initial_state;
    let off = init.cluster_offset(n);
    match spec.backend {
        Backend::Dense => {
            if let InitialState::FermionicCluster { blocks } = init {
                let mut amps = vec![real(0.0); 1usize << n];
                for (c, a) in fermionic_entries(n, off, blocks) {
                    amps[c as usize] = a;
                }
                return Ok(Simulation::Dense(QuditState::from_amplitudes(2, n, amps)?));
            }
            Ok(Simulation::Dense(QuditState::product_with_limit(spec.d, &local_vectors(spec), spec.high_memory)?))
        }
        Backend::Tableau => {
            let mut t = Tableau::new(n);
            match init {
                InitialState::AllZero => {}
                InitialState::PlusCluster { size } => {
                    for q in off..off + size {
                        t.apply_h(q)?;
                    }
                }
                InitialState::FermionicCluster { blocks } => {
                    let (cz, cnot) = (CliffordGate2::cz(), CliffordGate2::cnot());
                    for b in 0..blocks {
                        let q = off + 4 * b;
                        t.apply_h(q)?;
                        t.apply_h(q + 2)?;
                        t.apply_clifford(&cz, q, q + 2)?;
                        t.apply_clifford(&cnot, q, q + 1)?;
                        t.apply_clifford(&cnot, q + 2, q + 3)?;
                    }
                }
                other => return Err(Error::Incompatible(format!("{other:?} is not a stabilizer state"))),
            }
            Ok(Simulation::Tableau(t))
        }
        Backend::Sparse => {
            let state = match init {
                InitialState::AllZero => SparseState::basis(n, 0)?,
                InitialState::PlusCluster { size } => SparseState::plus_cluster(n, off, size)?,
                InitialState::TCluster { size } => {
                    let t = std::f64::consts::PI / 8.0;
                    let (c, s) = (t.cos(), t.sin());
                    let shift = n - off - size;
                    let entries = (0..1u128 << size)
                        .map(|cfg| {
                            let ones = cfg.count_ones() as i32;
                            (cfg << shift, real(s.powi(ones) * c.powi(size as i32 - ones)))
                        })
                        .collect();
                    SparseState::from_entries(n, entries)?
                }
                InitialState::FermionicCluster { blocks } => {
                    SparseState::from_entries(n, fermionic_entries(n, off, blocks))?
                }
                other => return Err(Error::Incompatible(format!("{other:?} on the sparse backend"))),
            };
            Ok(Simulation::Sparse(state))
        }
    }
}

/// Monte-Carlo means of a monotone on fixed subsystems.
#[derive(Clone, Debug)]
struct Moments {
    /// `[region][t]`.
    mean: Vec<Vec<f64>>,
    stderr: Vec<Vec<f64>>,
}

/// Welford accumulator over realizations, folded in realization order.
struct Accumulator {
    count: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Accumulator {
    fn new(len: usize) -> Self {
        Self { count: 0, mean: vec![0.0; len], m2: vec![0.0; len] }
    }

    fn push(&mut self, sample: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(sample) {
            let delta = x - *m;
            *m += delta / n;
            *s += delta * (x - *m);
        }
    }
}

fn realization(circuit: &Circuit, monotone: Monotone, regions: &[(usize, usize)], index: usize) -> Result<Vec<f64>> {
    let depth = circuit.spec.depth;
    let mut rng = circuit.realization_rng(index);
    let mut sim = circuit.initial_state()?;
    let mut out = Vec::with_capacity((depth + 1) * regions.len());
    for t in 0..=depth {
        if t > 0 {
            let layer = circuit.build_layer(Parity::of_layer(t), &mut rng);
            sim.apply_layer(&layer)?;
        }
        for &(a, b) in regions {
            out.push(sim.evaluate(monotone, a, b)?);
        }
    }
    Ok(out)
}

fn run_regions(circuit: &Circuit, monotone: Monotone, regions: &[(usize, usize)]) -> Result<Moments> {
    let spec = &circuit.spec;
    let r = regions.len();
    let len = (spec.depth + 1) * r;
    let mut acc = Accumulator::new(len);
    let mut start = 0;
    while start < spec.realizations {
        let end = (start + CHUNK).min(spec.realizations);
        let batch: Vec<Result<Vec<f64>>> =
            (start..end).into_par_iter().map(|i| realization(circuit, monotone, regions, i)).collect();
        for sample in batch {
            acc.push(&sample?);
        }
        start = end;
    }
    let n = acc.count as f64;
    let mut mean = vec![Vec::with_capacity(spec.depth + 1); r];
    let mut stderr = vec![Vec::with_capacity(spec.depth + 1); r];
    for (k, (m, s)) in acc.mean.iter().zip(&acc.m2).enumerate() {
        let region = k % r;
        mean[region].push(*m);
        let err = if acc.count > 1 { (s / (n - 1.0)).max(0.0).sqrt() / n.sqrt() } else { 0.0 };
        stderr[region].push(err);
    }
    Ok(Moments { mean, stderr })
}

/// Mean monotone on centered subsystems of several sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceSeries {
    pub monotone: Monotone,
    pub subsystem_sizes: Vec<usize>,
    pub times: Vec<usize>,
    /// `[size index][t]`.
    pub mean: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub realizations: usize,
}

/// First site of a centered subsystem of `size` sites.
pub fn centered_start(sites: usize, size: usize) -> usize {
    (sites - size) / 2
}

/// Growth experiment: evolve `|0…0⟩` and track the monotone of centered
/// subsystems after every layer.
pub fn run_growth(spec: &CircuitSpec, monotone: Monotone, sizes: &[usize]) -> Result<ResourceSeries> {
    let circuit = Circuit::new(spec)?;
    if spec.initial_state != InitialState::AllZero {
        return Err(Error::Incompatible("growth runs start from the all-zero state".into()));
    }
    if sizes.is_empty() {
        return Err(Error::Config("no subsystem sizes given".into()));
    }
    let mut regions = Vec::new();
    for &k in sizes {
        if k == 0 || k > spec.sites {
            return Err(Error::Config(format!("subsystem size {k} on a chain of {} sites", spec.sites)));
        }
        monotone.check_support(spec.backend, spec.d, k)?;
        let s = centered_start(spec.sites, k);
        regions.push((s, s + k));
    }
    let m = run_regions(&circuit, monotone, &regions)?;
    Ok(ResourceSeries {
        monotone,
        subsystem_sizes: sizes.to_vec(),
        times: (0..=spec.depth).collect(),
        mean: m.mean,
        stderr: m.stderr,
        realizations: spec.realizations,
    })
}

/// Mean monotone over relative positions and times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadGrid {
    pub monotone: Monotone,
    pub subsystem_size: usize,
    /// Center of `A` minus center of the cluster, in sites.
    pub x_r: Vec<f64>,
    pub times: Vec<usize>,
    /// `[x_r index][t]`.
    pub mean: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub realizations: usize,
}

/// All positions of a `size`-site subsystem on the chain, as
/// `(x_r, first site)` pairs in increasing `x_r`.
pub fn spread_placements(sites: usize, init: &InitialState, size: usize) -> Vec<(f64, usize)> {
    let twice_center = (2 * init.cluster_offset(sites) + init.cluster_sites()) as i64 - 1;
    (0..=sites.saturating_sub(size))
        .map(|s| (((2 * s + size) as i64 - 1 - twice_center) as f64 / 2.0, s))
        .collect()
}

/// First site of the subsystem whose center sits `x_r` from the cluster
/// center.
pub fn placement_for(sites: usize, init: &InitialState, size: usize, x_r: f64) -> Result<usize> {
    let doubled = (2.0 * x_r).round();
    let bad = || Error::Config(format!("x_r = {x_r} does not place a {size}-site subsystem on the chain"));
    if (2.0 * x_r - doubled).abs() > 1e-9 {
        return Err(bad());
    }
    let twice_center = (2 * init.cluster_offset(sites) + init.cluster_sites()) as i64 - 1;
    let twice_start = doubled as i64 + twice_center + 1 - size as i64;
    if twice_start < 0 || twice_start % 2 != 0 || (twice_start / 2) as usize + size > sites {
        return Err(bad());
    }
    Ok((twice_start / 2) as usize)
}

/// Spreading experiment: track the monotone of a `size`-site subsystem at
/// every relative position in `grid` (all placements when `None`).
pub fn run_spread(spec: &CircuitSpec, monotone: Monotone, size: usize, grid: Option<&[f64]>) -> Result<SpreadGrid> {
    let circuit = Circuit::new(spec)?;
    if spec.initial_state == InitialState::AllZero {
        return Err(Error::Incompatible("spreading runs need a clustered initial state".into()));
    }
    if size == 0 || size > spec.sites {
        return Err(Error::Config(format!("subsystem size {size} on a chain of {} sites", spec.sites)));
    }
    monotone.check_support(spec.backend, spec.d, size)?;
    let placements: Vec<(f64, usize)> = match grid {
        None => spread_placements(spec.sites, &spec.initial_state, size),
        Some(xs) => xs
            .iter()
            .map(|&x| placement_for(spec.sites, &spec.initial_state, size, x).map(|s| (x, s)))
            .collect::<Result<_>>()?,
    };
    if placements.is_empty() {
        return Err(Error::Config("empty x_r grid".into()));
    }
    let regions: Vec<(usize, usize)> = placements.iter().map(|&(_, s)| (s, s + size)).collect();
    let m = run_regions(&circuit, monotone, &regions)?;
    Ok(SpreadGrid {
        monotone,
        subsystem_size: size,
        x_r: placements.iter().map(|p| p.0).collect(),
        times: (0..=spec.depth).collect(),
        mean: m.mean,
        stderr: m.stderr,
        realizations: spec.realizations,
    })
}
