//! Two-site gate ensembles.
//!
//! The two-qubit Clifford group is enumerated once from its conjugation
//! tables and cached together with dense unitaries and, for incoherent
//! members, permutation-phase forms. Subsets (incoherent gates, Clifford
//! matchgates, chirality classes) are index lists into that cache.

pub mod qutrit;

use std::collections::HashMap;
use std::fmt;

use once_cell::sync::Lazy;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordGate2, LocalPauli, SignedPermutation};
use crate::rng::{stream, AUXILIARY_STREAM};
use crate::sparse::PermutationPhaseGate;
use crate::statevec::{haar_random_unitary, TwoSiteGate};
use crate::{Error, Result};

pub use qutrit::QutritClifford2;

/// `|C₂|` modulo global phase.
pub const CLIFFORD_COUNT: usize = 11_520;
pub const INCOHERENT_COUNT: usize = 768;
pub const MATCHGATE_COUNT: usize = 192;

/// All two-qubit Cliffords modulo phase, in a fixed order: the images of
/// `X₁, Z₁, X₂, Z₂` run over all symplectic bases of `F₂⁴` in pattern order,
/// then over the 16 sign choices.
pub fn enumerate_c2() -> Vec<CliffordGate2> {
    let hermitian = |bits: u8, negative: bool| {
        let y = ((bits & 0b0101) & ((bits >> 1) & 0b0101)).count_ones() as u8;
        LocalPauli::new(bits, y + if negative { 2 } else { 0 })
    };
    let mut out = Vec::with_capacity(CLIFFORD_COUNT);
    for a in 1..16u8 {
        for b in 1..16u8 {
            for c in 1..16u8 {
                for d in 1..16u8 {
                    let base = [a, b, c, d].map(|p| hermitian(p, false));
                    if CliffordGate2::from_images(base).is_err() {
                        continue;
                    }
                    for signs in 0..16u8 {
                        let bits = [a, b, c, d];
                        let images = std::array::from_fn(|k| hermitian(bits[k], signs >> k & 1 == 1));
                        out.push(CliffordGate2::from_images(images).expect("signs do not affect validity"));
                    }
                }
            }
        }
    }
    out
}

/// Gates mapping computational-basis states to basis states up to phase.
pub fn filter_incoherent(gates: &[CliffordGate2]) -> Vec<CliffordGate2> {
    gates.iter().copied().filter(CliffordGate2::is_incoherent).collect()
}

/// Parity-preserving gates acting as signed permutations on `γ₁..γ₄`.
pub fn filter_matchgate(gates: &[CliffordGate2]) -> Vec<CliffordGate2> {
    gates.iter().copied().filter(is_matchgate).collect()
}

pub fn is_matchgate(g: &CliffordGate2) -> bool {
    g.majorana_action().is_some_and(|o| o.determinant() == 1)
}

/// Direction in which a Clifford matchgate transports Majorana operators
/// through a uniform brickwall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    LeftMoving,
    RightMoving,
    Neutral,
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::LeftMoving => "left-moving",
            Chirality::RightMoving => "right-moving",
            Chirality::Neutral => "neutral",
        })
    }
}

/// Asymptotic velocities (sites per layer) of single Majoranas in a
/// brickwall built from copies of the gate with action `o`.
///
/// A Majorana with local label `a` leaves the gate as `o(a)`; in the next
/// layer its site is the other half of a shifted gate, so its label becomes
/// `o(a) ± 2`. Each cycle of `a ↦ o(a) ± 2` is a trajectory whose velocity
/// is the mean of `site(o(a)) − site(a)` along it.
pub fn majorana_velocities(o: &SignedPermutation) -> Vec<f64> {
    let site = |a: u8| (a / 2) as i32;
    let next = |a: u8| {
        let b = o.perm[a as usize];
        if b < 2 {
            b + 2
        } else {
            b - 2
        }
    };
    let mut seen = [false; 4];
    let mut velocities = Vec::new();
    for start in 0..4u8 {
        if seen[start as usize] {
            continue;
        }
        let (mut a, mut total, mut len) = (start, 0i32, 0i32);
        while !seen[a as usize] {
            seen[a as usize] = true;
            total += site(o.perm[a as usize]) - site(a);
            len += 1;
            a = next(a);
        }
        velocities.push(total as f64 / len as f64);
    }
    velocities
}

/// Classifies a matchgate by its fastest Majorana fronts: right-moving if
/// the fastest rightward trajectory outruns the fastest leftward one,
/// left-moving in the mirror case, neutral otherwise.
///
/// The mean displacement over all labels is always zero (the action is a
/// permutation), so chirality shows up as an asymmetry of front speeds.
pub fn classify_matchgate_chirality(g: &CliffordGate2) -> Result<Chirality> {
    if !is_matchgate(g) {
        return Err(Error::NotMatchgate);
    }
    let v = majorana_velocities(&g.majorana_action().expect("matchgate"));
    let right = v.iter().copied().fold(0.0f64, f64::max);
    let left = v.iter().copied().fold(0.0f64, |m, x| m.max(-x));
    Ok(if right > left + 1e-12 {
        Chirality::RightMoving
    } else if left > right + 1e-12 {
        Chirality::LeftMoving
    } else {
        Chirality::Neutral
    })
}

/// Enumerated two-qubit Clifford group with per-gate caches.
pub struct CliffordGroup {
    gates: Vec<CliffordGate2>,
    index: HashMap<u32, u16>,
    dense: Vec<TwoSiteGate>,
    pp: Vec<Option<PermutationPhaseGate>>,
    incoherent: Vec<u16>,
    not_incoherent: Vec<u16>,
    matchgate: Vec<u16>,
    not_matchgate: Vec<u16>,
    chirality: HashMap<u16, Chirality>,
    swap: u16,
}

static GROUP: Lazy<CliffordGroup> = Lazy::new(CliffordGroup::build);

/// Shared, lazily built cache of `C₂`.
pub fn clifford_group() -> &'static CliffordGroup {
    &GROUP
}

impl CliffordGroup {
    fn build() -> Self {
        let gates = enumerate_c2();
        let index = gates.iter().enumerate().map(|(i, g)| (g.key(), i as u16)).collect();
        let dense: Vec<TwoSiteGate> = gates.iter().map(CliffordGate2::two_site_gate).collect();
        let pp = gates
            .iter()
            .zip(&dense)
            .map(|(g, d)| if g.is_incoherent() { PermutationPhaseGate::from_unitary(&d.matrix()) } else { None })
            .collect();
        let ids = |f: &dyn Fn(&CliffordGate2) -> bool| -> Vec<u16> {
            (0..gates.len() as u16).filter(|&i| f(&gates[i as usize])).collect()
        };
        let incoherent = ids(&|g| g.is_incoherent());
        let not_incoherent = ids(&|g| !g.is_incoherent());
        let matchgate = ids(&is_matchgate);
        let not_matchgate = ids(&|g| !is_matchgate(g));
        let chirality = matchgate
            .iter()
            .map(|&i| (i, classify_matchgate_chirality(&gates[i as usize]).expect("matchgate")))
            .collect();
        let swap = gates.iter().position(|g| *g == CliffordGate2::swap()).expect("SWAP is Clifford") as u16;
        Self { gates, index, dense, pp, incoherent, not_incoherent, matchgate, not_matchgate, chirality, swap }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[CliffordGate2] {
        &self.gates
    }

    pub fn gate(&self, id: u16) -> &CliffordGate2 {
        &self.gates[id as usize]
    }

    /// Index of `g` by canonical conjugation table.
    pub fn lookup(&self, g: &CliffordGate2) -> Option<u16> {
        self.index.get(&g.key()).copied()
    }

    pub fn dense(&self, id: u16) -> &TwoSiteGate {
        &self.dense[id as usize]
    }

    /// Permutation-phase form of an incoherent gate.
    pub fn permutation_phase(&self, id: u16) -> Option<&PermutationPhaseGate> {
        self.pp[id as usize].as_ref()
    }

    pub fn incoherent(&self) -> &[u16] {
        &self.incoherent
    }

    pub fn not_incoherent(&self) -> &[u16] {
        &self.not_incoherent
    }

    pub fn matchgates(&self) -> &[u16] {
        &self.matchgate
    }

    pub fn not_matchgates(&self) -> &[u16] {
        &self.not_matchgate
    }

    pub fn chirality(&self, id: u16) -> Option<Chirality> {
        self.chirality.get(&id).copied()
    }

    /// Matchgate ids of one chirality class, in enumeration order.
    pub fn chirality_class(&self, class: Chirality) -> Vec<u16> {
        self.matchgate.iter().copied().filter(|i| self.chirality[i] == class).collect()
    }

    pub fn swap_id(&self) -> u16 {
        self.swap
    }
}

/// Gate ensemble kinds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    /// Haar-random two-qubit unitaries.
    Haar4,
    CliffordFull,
    CliffordMinusIncoherent,
    CliffordIncoherent,
    CliffordMinusMatchgate,
    CliffordMatchgate,
    /// SWAP with probability `p`, otherwise a uniform incoherent Clifford.
    SwapOrIncoherent { p: f64 },
    /// Uniform basis permutation with independent uniform phases.
    PermutationPhase,
    QutritHaar9,
    QutritClifford2,
    /// Uniform over a fixed selection of `left` left-moving, `right`
    /// right-moving and `generic` neutral Clifford matchgates.
    ChiralMatchgateMix { left: usize, right: usize, generic: usize },
}

impl EnsembleSpec {
    pub const CHIRAL_DEFAULT: Self = Self::ChiralMatchgateMix { left: 10, right: 10, generic: 10 };

    pub fn name(&self) -> &'static str {
        match self {
            Self::Haar4 => "haar4",
            Self::CliffordFull => "clifford_full",
            Self::CliffordMinusIncoherent => "clifford_minus_incoherent",
            Self::CliffordIncoherent => "clifford_incoherent",
            Self::CliffordMinusMatchgate => "clifford_minus_matchgate",
            Self::CliffordMatchgate => "clifford_matchgate",
            Self::SwapOrIncoherent { .. } => "swap_or_incoherent",
            Self::PermutationPhase => "permutation_phase",
            Self::QutritHaar9 => "qutrit_haar9",
            Self::QutritClifford2 => "qutrit_clifford2",
            Self::ChiralMatchgateMix { .. } => "chiral_matchgate_mix",
        }
    }

    /// Local dimension of the sites the gates act on.
    pub fn local_dim(&self) -> usize {
        match self {
            Self::QutritHaar9 | Self::QutritClifford2 => 3,
            _ => 2,
        }
    }

    /// Whether every member is a two-qubit Clifford.
    pub fn is_clifford(&self) -> bool {
        matches!(
            self,
            Self::CliffordFull
                | Self::CliffordMinusIncoherent
                | Self::CliffordIncoherent
                | Self::CliffordMinusMatchgate
                | Self::CliffordMatchgate
                | Self::SwapOrIncoherent { .. }
                | Self::ChiralMatchgateMix { .. }
        )
    }

    /// Whether every member is a permutation-phase gate.
    pub fn is_permutation_phase(&self) -> bool {
        matches!(self, Self::CliffordIncoherent | Self::SwapOrIncoherent { .. } | Self::PermutationPhase)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::SwapOrIncoherent { p } if !(0.0..=1.0).contains(&p) => {
                Err(Error::Config(format!("SWAP probability p = {p} outside [0, 1]")))
            }
            Self::ChiralMatchgateMix { left, right, generic } => {
                let g = clifford_group();
                for (n, class) in
                    [(left, Chirality::LeftMoving), (right, Chirality::RightMoving), (generic, Chirality::Neutral)]
                {
                    let have = g.chirality_class(class).len();
                    if n > have {
                        return Err(Error::Config(format!("requested {n} {class} matchgates, only {have} exist")));
                    }
                }
                if left + right + generic == 0 {
                    return Err(Error::EmptyEnsemble("chiral matchgate mix with no gates".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SwapOrIncoherent { p } => write!(f, "{}(p={p})", self.name()),
            Self::ChiralMatchgateMix { left, right, generic } => {
                write!(f, "{}(left={left}, right={right}, generic={generic})", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// One drawn gate.
#[derive(Clone, Debug)]
pub enum SampledGate {
    /// Member of the cached two-qubit Clifford group.
    Clifford(u16),
    PermutationPhase(PermutationPhaseGate),
    Dense(TwoSiteGate),
}

impl SampledGate {
    /// Dense form for the statevector backend.
    pub fn to_dense(&self) -> TwoSiteGate {
        match self {
            Self::Clifford(id) => clifford_group().dense(*id).clone(),
            Self::PermutationPhase(g) => g.two_site_gate(),
            Self::Dense(g) => g.clone(),
        }
    }
}

#[derive(Clone, Debug)]
enum Pool {
    Ids(Vec<u16>),
    SwapOr(f64),
    Haar(usize),
    PermutationPhase,
    QutritClifford,
}

/// Ensemble ready for sampling; fixed selections (the chiral mix) are
/// resolved at construction.
#[derive(Clone, Debug)]
pub struct Ensemble {
    spec: EnsembleSpec,
    pool: Pool,
}

impl Ensemble {
    /// Resolves `spec`; `selection_seed` keys the auxiliary stream that picks
    /// the members of a chiral mix.
    pub fn new(spec: EnsembleSpec, selection_seed: u64) -> Result<Self> {
        spec.validate()?;
        let g = clifford_group();
        let pool = match spec {
            EnsembleSpec::Haar4 => Pool::Haar(4),
            EnsembleSpec::QutritHaar9 => Pool::Haar(9),
            EnsembleSpec::CliffordFull => Pool::Ids((0..g.len() as u16).collect()),
            EnsembleSpec::CliffordMinusIncoherent => Pool::Ids(g.not_incoherent().to_vec()),
            EnsembleSpec::CliffordIncoherent => Pool::Ids(g.incoherent().to_vec()),
            EnsembleSpec::CliffordMinusMatchgate => Pool::Ids(g.not_matchgates().to_vec()),
            EnsembleSpec::CliffordMatchgate => Pool::Ids(g.matchgates().to_vec()),
            EnsembleSpec::SwapOrIncoherent { p } => Pool::SwapOr(p),
            EnsembleSpec::PermutationPhase => Pool::PermutationPhase,
            EnsembleSpec::QutritClifford2 => Pool::QutritClifford,
            EnsembleSpec::ChiralMatchgateMix { left, right, generic } => {
                let mut rng = stream(selection_seed, AUXILIARY_STREAM);
                let mut ids = Vec::new();
                for (n, class) in
                    [(left, Chirality::LeftMoving), (right, Chirality::RightMoving), (generic, Chirality::Neutral)]
                {
                    let members = g.chirality_class(class);
                    let mut picked: Vec<usize> = sample(&mut rng, members.len(), n).into_vec();
                    picked.sort_unstable();
                    ids.extend(picked.into_iter().map(|k| members[k]));
                }
                Pool::Ids(ids)
            }
        };
        if let Pool::Ids(ids) = &pool {
            if ids.is_empty() {
                return Err(Error::EmptyEnsemble(spec.to_string()));
            }
        }
        Ok(Self { spec, pool })
    }

    pub fn spec(&self) -> EnsembleSpec {
        self.spec
    }

    /// Clifford ids the ensemble draws from, if it is a finite Clifford set.
    pub fn members(&self) -> Option<&[u16]> {
        match &self.pool {
            Pool::Ids(ids) => Some(ids),
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledGate {
        match &self.pool {
            Pool::Ids(ids) => SampledGate::Clifford(ids[rng.random_range(0..ids.len())]),
            Pool::SwapOr(p) => {
                let g = clifford_group();
                if rng.random_bool(*p) {
                    SampledGate::Clifford(g.swap_id())
                } else {
                    let inc = g.incoherent();
                    SampledGate::Clifford(inc[rng.random_range(0..inc.len())])
                }
            }
            Pool::Haar(dim) => {
                let d = if *dim == 4 { 2 } else { 3 };
                SampledGate::Dense(TwoSiteGate::new(d, haar_random_unitary(*dim, rng)).expect("Haar unitary"))
            }
            Pool::PermutationPhase => SampledGate::PermutationPhase(PermutationPhaseGate::random(rng)),
            Pool::QutritClifford => SampledGate::Dense(
                TwoSiteGate::new(3, QutritClifford2::random(rng).unitary).expect("Clifford unitary"),
            ),
        }
    }
}

/// Draws one gate from `spec`. Chiral mixes are resolved from a selection
/// seed taken from `rng`; use [`Ensemble`] to keep a selection fixed.
pub fn sample_gate<R: Rng + ?Sized>(spec: EnsembleSpec, rng: &mut R) -> Result<SampledGate> {
    let seed = rng.random();
    Ok(Ensemble::new(spec, seed)?.sample(rng))
}

/// Uniform two-qutrit Clifford gate.
pub fn sample_qutrit_clifford2<R: Rng + ?Sized>(rng: &mut R) -> QutritClifford2 {
    QutritClifford2::random(rng)
}

/// Cardinalities reported by `ensembles verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnsembleCounts {
    pub clifford: usize,
    pub incoherent: usize,
    pub matchgate: usize,
    pub left_moving: usize,
    pub right_moving: usize,
    pub neutral: usize,
}

pub fn ensemble_counts() -> EnsembleCounts {
    let g = clifford_group();
    EnsembleCounts {
        clifford: g.len(),
        incoherent: g.incoherent().len(),
        matchgate: g.matchgates().len(),
        left_moving: g.chirality_class(Chirality::LeftMoving).len(),
        right_moving: g.chirality_class(Chirality::RightMoving).len(),
        neutral: g.chirality_class(Chirality::Neutral).len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_cardinalities() {
        let c = ensemble_counts();
        assert_eq!(c.clifford, CLIFFORD_COUNT);
        assert_eq!(c.incoherent, INCOHERENT_COUNT);
        assert_eq!(c.matchgate, MATCHGATE_COUNT);
        assert_eq!(c.left_moving + c.right_moving + c.neutral, MATCHGATE_COUNT);
        assert!(c.left_moving >= 10 && c.right_moving >= 10 && c.neutral >= 10);
    }

    #[test]
    fn contains_textbook_gates() {
        let g = clifford_group();
        for gate in [CliffordGate2::identity(), CliffordGate2::cnot(), CliffordGate2::swap(), CliffordGate2::cz()] {
            assert!(g.lookup(&gate).is_some());
        }
        let inc = |gate: CliffordGate2| gate.is_incoherent();
        assert!(inc(CliffordGate2::swap()) && inc(CliffordGate2::cnot()) && inc(CliffordGate2::cz()));
        assert!(!inc(CliffordGate2::h1()));
    }

    #[test]
    fn closed_under_inverse_and_composition() {
        let g = clifford_group();
        let mut rng = stream(5, 0);
        for _ in 0..500 {
            let a = g.gate(rng.random_range(0..g.len() as u16));
            let b = g.gate(rng.random_range(0..g.len() as u16));
            assert!(g.lookup(&a.compose(b)).is_some());
            assert!(g.lookup(&a.inverse()).is_some());
        }
    }

    #[test]
    fn incoherent_iff_monomial_unitary() {
        let g = clifford_group();
        for id in 0..g.len() as u16 {
            let u = g.dense(id).matrix();
            let monomial = (0..4).all(|c| (0..4).filter(|&r| u[(r, c)].norm() > 1e-9).count() == 1);
            assert_eq!(monomial, g.gate(id).is_incoherent(), "gate {id}");
            assert_eq!(monomial, g.permutation_phase(id).is_some());
        }
    }

    #[test]
    fn matchgates_preserve_parity() {
        let g = clifford_group();
        let zz = LocalPauli::hermitian("ZZ", false);
        for &id in g.matchgates() {
            let gate = g.gate(id);
            assert_eq!(gate.conjugate(zz), zz);
            let o = gate.majorana_action().unwrap().matrix();
            for a in 0..4 {
                for b in 0..4 {
                    let dot: f64 = (0..4).map(|k| o[k][a] * o[k][b]).sum();
                    assert_eq!(dot, if a == b { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn swap_or_incoherent_with_unit_probability() {
        let e = Ensemble::new(EnsembleSpec::SwapOrIncoherent { p: 1.0 }, 0).unwrap();
        let mut rng = stream(1, 0);
        for _ in 0..100 {
            match e.sample(&mut rng) {
                SampledGate::Clifford(id) => assert_eq!(*clifford_group().gate(id), CliffordGate2::swap()),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn chirality_examples() {
        assert_eq!(classify_matchgate_chirality(&CliffordGate2::identity()).unwrap(), Chirality::Neutral);
        let fswap = CliffordGate2::swap().compose(&CliffordGate2::cz());
        assert_eq!(classify_matchgate_chirality(&fswap).unwrap(), Chirality::Neutral);
        assert!(classify_matchgate_chirality(&CliffordGate2::cnot()).is_err());
    }

    #[test]
    fn chiral_mix_selection_is_reproducible() {
        let spec = EnsembleSpec::CHIRAL_DEFAULT;
        let a = Ensemble::new(spec, 9).unwrap();
        let b = Ensemble::new(spec, 9).unwrap();
        assert_eq!(a.members(), b.members());
        assert_eq!(a.members().unwrap().len(), 30);
    }
}
