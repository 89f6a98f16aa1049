//! Experiment configuration files.
//!
//! A config is a flat TOML document. Only `kind`, `monotone`, `sites` and
//! `seed` are required; everything else has a default that depends on the
//! experiment and the monotone. The ensemble and the initial state are
//! inline tables tagged by `kind`:
//!
//! ```toml
//! kind = "spread"
//! monotone = "lrom"
//! sites = 16
//! seed = 7
//! depth = 12
//! ensemble = { kind = "clifford_full" }
//! initial_state = { kind = "t_cluster", size = 4 }
//! subsystem_size = 2
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::ensembles::EnsembleSpec;
use crate::experiments::{
    placement_for, Backend, CircuitSpec, InitialState, Monotone, CHIRAL_EPSILON, GROWTH_EPSILON,
    SPARSE_SPREAD_EPSILON,
};
use crate::{Error, Result};

pub const DEFAULT_REALIZATIONS: usize = 200;
/// Arrival level for front velocities.
pub const DEFAULT_LEVEL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Growth,
    Spread,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Growth => "growth",
            Self::Spread => "spread",
        }
    }
}

/// The config file as written, before defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub kind: Option<ExperimentKind>,
    pub monotone: Option<Monotone>,
    pub sites: Option<usize>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub high_memory: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_r: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gzip: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    // Tables go last so the echoed TOML stays valid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialState>,
}

/// A fully resolved and validated run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    pub monotone: Monotone,
    pub spec: CircuitSpec,
    /// Growth: subsystem sizes.
    pub subsystem_sizes: Vec<usize>,
    /// Spread: subsystem size and optional explicit `x_r` grid.
    pub subsystem_size: Option<usize>,
    pub x_r: Option<Vec<f64>>,
    pub theta: f64,
    pub level: f64,
    pub output: Option<PathBuf>,
    pub gzip: bool,
    /// Worker threads; does not affect results.
    pub workers: Option<usize>,
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    resolve(file)
}

fn default_ensemble(kind: ExperimentKind, m: Monotone) -> EnsembleSpec {
    match (kind, m) {
        (ExperimentKind::Growth, Monotone::Lrom) => EnsembleSpec::Haar4,
        (ExperimentKind::Growth, Monotone::Coherence) => EnsembleSpec::CliffordMinusIncoherent,
        (ExperimentKind::Growth, Monotone::NonGaussianity) => EnsembleSpec::CliffordMinusMatchgate,
        (ExperimentKind::Growth, Monotone::Mana) => EnsembleSpec::QutritHaar9,
        (ExperimentKind::Spread, Monotone::Lrom) => EnsembleSpec::CliffordFull,
        (ExperimentKind::Spread, Monotone::Coherence) => EnsembleSpec::PermutationPhase,
        (ExperimentKind::Spread, Monotone::NonGaussianity) => EnsembleSpec::CliffordMatchgate,
        (ExperimentKind::Spread, Monotone::Mana) => EnsembleSpec::QutritClifford2,
    }
}

fn default_backend(m: Monotone, e: &EnsembleSpec) -> Backend {
    let stabilizer_monotone = matches!(m, Monotone::Coherence | Monotone::NonGaussianity);
    if stabilizer_monotone && e.is_clifford() {
        Backend::Tableau
    } else if m == Monotone::Coherence && e.is_permutation_phase() {
        Backend::Sparse
    } else {
        Backend::Dense
    }
}

fn default_initial_state(kind: ExperimentKind, m: Monotone) -> InitialState {
    match (kind, m) {
        (ExperimentKind::Growth, _) => InitialState::AllZero,
        (_, Monotone::Lrom) => InitialState::TCluster { size: 4 },
        (_, Monotone::Coherence) => InitialState::PlusCluster { size: 8 },
        (_, Monotone::NonGaussianity) => InitialState::FermionicCluster { blocks: 1 },
        (_, Monotone::Mana) => InitialState::QutritMagicCluster { size: 5, angle: None },
    }
}

fn default_sizes(m: Monotone, backend: Backend, sites: usize) -> Vec<usize> {
    let sizes = match (m, backend) {
        (Monotone::Lrom, _) => vec![1, 2, 3, 4],
        (Monotone::Mana, _) => vec![2, 3, 4],
        (_, Backend::Tableau | Backend::Sparse) => {
            let v: Vec<usize> = (2..8).map(|p| 1 << p).filter(|&k| k <= sites / 2).collect();
            if v.is_empty() {
                vec![(sites / 2).max(1)]
            } else {
                v
            }
        }
        (_, Backend::Dense) => vec![2, 4],
    };
    sizes.into_iter().filter(|&k| k <= sites).collect()
}

fn default_size(m: Monotone, backend: Backend) -> usize {
    match (m, backend) {
        (Monotone::Mana, _) => 3,
        (Monotone::Coherence, Backend::Tableau | Backend::Sparse) => 8,
        (Monotone::NonGaussianity, Backend::Tableau) => 16,
        _ => 2,
    }
}

fn required<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required field `{name}`")))
}

/// Fills defaults and validates.
pub fn resolve(f: ConfigFile) -> Result<RunConfig> {
    let kind = required(f.kind, "kind")?;
    let monotone = required(f.monotone, "monotone")?;
    let sites = required(f.sites, "sites")?;
    let seed = required(f.seed, "seed")?;
    if seed > i64::MAX as u64 {
        return Err(Error::Config(format!("seed {seed} exceeds {} (TOML integers are signed)", i64::MAX)));
    }
    let ensemble = f.ensemble.unwrap_or_else(|| default_ensemble(kind, monotone));
    let backend = f.backend.unwrap_or_else(|| default_backend(monotone, &ensemble));
    let initial_state = f.initial_state.unwrap_or_else(|| default_initial_state(kind, monotone));
    let epsilon = f.epsilon.unwrap_or(match (kind, ensemble) {
        (_, EnsembleSpec::ChiralMatchgateMix { .. }) => CHIRAL_EPSILON,
        (ExperimentKind::Spread, _) if backend == Backend::Sparse => SPARSE_SPREAD_EPSILON,
        _ => GROWTH_EPSILON,
    });
    let spec = CircuitSpec {
        d: f.d.unwrap_or(ensemble.local_dim()),
        sites,
        depth: f.depth.unwrap_or(sites),
        epsilon,
        ensemble,
        backend,
        initial_state,
        seed,
        realizations: f.realizations.unwrap_or(DEFAULT_REALIZATIONS),
        high_memory: f.high_memory.unwrap_or(false),
    };
    spec.validate()?;
    let theta = f.theta.unwrap_or(monotone.default_threshold());
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Config(format!("theta = {theta} must be positive")));
    }
    let level = f.level.unwrap_or(DEFAULT_LEVEL);
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::Config(format!("level = {level} must be nonnegative")));
    }
    if f.workers == Some(0) {
        return Err(Error::Config("workers must be at least 1".into()));
    }
    let mut cfg = RunConfig {
        kind,
        monotone,
        spec,
        subsystem_sizes: Vec::new(),
        subsystem_size: None,
        x_r: None,
        theta,
        level,
        output: f.output,
        gzip: f.gzip.unwrap_or(false),
        workers: f.workers,
    };
    match kind {
        ExperimentKind::Growth => {
            if f.subsystem_size.is_some() || f.x_r.is_some() {
                return Err(Error::Config("`subsystem_size` and `x_r` only apply to spread runs".into()));
            }
            if initial_state != InitialState::AllZero {
                return Err(Error::Incompatible("growth runs start from the all-zero state".into()));
            }
            let sizes = f.subsystem_sizes.unwrap_or_else(|| default_sizes(monotone, backend, sites));
            if sizes.is_empty() {
                return Err(Error::Config("no subsystem sizes".into()));
            }
            for &k in &sizes {
                if k == 0 || k > sites {
                    return Err(Error::Config(format!("subsystem size {k} on a chain of {sites} sites")));
                }
                monotone.check_support(backend, cfg.spec.d, k)?;
            }
            cfg.subsystem_sizes = sizes;
        }
        ExperimentKind::Spread => {
            if f.subsystem_sizes.is_some() {
                return Err(Error::Config("`subsystem_sizes` only applies to growth runs; use `subsystem_size`".into()));
            }
            if initial_state == InitialState::AllZero {
                return Err(Error::Incompatible("spread runs need a clustered initial state".into()));
            }
            let size = f.subsystem_size.unwrap_or_else(|| default_size(monotone, backend));
            if size == 0 || size > sites {
                return Err(Error::Config(format!("subsystem size {size} on a chain of {sites} sites")));
            }
            monotone.check_support(backend, cfg.spec.d, size)?;
            if let Some(xs) = &f.x_r {
                if xs.is_empty() {
                    return Err(Error::Config("empty x_r grid".into()));
                }
                for &x in xs {
                    placement_for(sites, &initial_state, size, x)?;
                }
            }
            cfg.subsystem_size = Some(size);
            cfg.x_r = f.x_r;
        }
    }
    Ok(cfg)
}

impl RunConfig {
    /// The config as a file with every default written out.
    pub fn to_file(&self) -> ConfigFile {
        let s = &self.spec;
        ConfigFile {
            kind: Some(self.kind),
            monotone: Some(self.monotone),
            sites: Some(s.sites),
            seed: Some(s.seed),
            depth: Some(s.depth),
            realizations: Some(s.realizations),
            epsilon: Some(s.epsilon),
            d: Some(s.d),
            backend: Some(s.backend),
            high_memory: Some(s.high_memory),
            subsystem_sizes: (self.kind == ExperimentKind::Growth).then(|| self.subsystem_sizes.clone()),
            subsystem_size: self.subsystem_size,
            x_r: self.x_r.clone(),
            theta: Some(self.theta),
            level: Some(self.level),
            output: self.output.clone(),
            gzip: Some(self.gzip),
            workers: self.workers,
            ensemble: Some(s.ensemble),
            initial_state: Some(s.initial_state),
        }
    }

    /// TOML that parses back to this config.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(&self.to_file()).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_growth_config() {
        let cfg = parse_config("kind = \"growth\"\nmonotone = \"coherence\"\nsites = 32\nseed = 5\n").unwrap();
        assert_eq!(cfg.spec.backend, Backend::Tableau);
        assert_eq!(cfg.spec.ensemble, EnsembleSpec::CliffordMinusIncoherent);
        assert_eq!(cfg.spec.epsilon, 1.0);
        assert_eq!(cfg.subsystem_sizes, vec![4, 8, 16]);
        assert_eq!(cfg.theta, 0.1);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = "kind = \"growth\"\nmonotone = \"coherence\"\nsites = 32\nseed = 5\n";
        let e = parse_config(&format!("{base}backend = \"tableau\"\nensemble = {{ kind = \"haar4\" }}\n")).unwrap_err();
        assert!(matches!(e, Error::Incompatible(_)), "{e}");
        assert!(matches!(parse_config(&format!("{base}epsilon = 1.3\n")), Err(Error::Config(_))));
        let e = parse_config(&format!("{base}colour = 1\n")).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
        assert!(parse_config("kind = \"growth\"\nsites = 4\nseed = 1\n").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let text = "kind = \"spread\"\nmonotone = \"lrom\"\nsites = 12\nseed = 3\nx_r = [0.0, 1.0]\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.spec.initial_state, InitialState::TCluster { size: 4 });
        let again = parse_config(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
    }
}
