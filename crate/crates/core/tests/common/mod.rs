//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use qres::clifford::CliffordGate2;
use qres::ensembles::{clifford_group, EnsembleSpec};
use qres::experiments::{Backend, Circuit, CircuitSpec, InitialState, Parity, Simulation};
use qres::monotones::dictionary::pauli_from_index;
use qres::monotones::{covariance_dense, relative_entropy_of_coherence};
use qres::pauli::PauliString;
use qres::statevec::von_neumann_entropy;
use qres::tableau::Tableau;

pub fn spec(
    sites: usize,
    ensemble: EnsembleSpec,
    backend: Backend,
    initial_state: InitialState,
    seed: u64,
    realizations: usize,
) -> CircuitSpec {
    CircuitSpec {
        d: ensemble.local_dim(),
        sites,
        depth: sites,
        epsilon: 1.0,
        ensemble,
        backend,
        initial_state,
        seed,
        realizations,
        high_memory: false,
    }
}

/// Contiguous subsystems checked at every layer.
fn subsystems(sites: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=4 {
        for s in 0..=sites - k {
            out.push((s, s + k));
        }
    }
    for s in (0..=sites - 6).step_by(3) {
        out.push((s, s + 6));
    }
    out
}

/// Runs the same Clifford circuits on the tableau and a dense vector and
/// compares entropy, coherence and covariance on every layer. Returns the
/// number of comparisons made.
pub fn tableau_matches_dense(sites: usize, realizations: usize, seed: u64) -> Result<usize, String> {
    let s = spec(sites, EnsembleSpec::CliffordFull, Backend::Tableau, InitialState::AllZero, seed, realizations);
    let circuit = Circuit::new(&s).map_err(|e| e.to_string())?;
    let mut checks = 0;
    for r in 0..realizations {
        let mut rng = circuit.realization_rng(r);
        let mut tab = circuit.initial_state().map_err(|e| e.to_string())?;
        let mut dense = Simulation::Dense(qres::statevec::QuditState::zeros(2, sites).unwrap());
        for t in 1..=s.depth {
            let layer = circuit.build_layer(Parity::of_layer(t), &mut rng);
            tab.apply_layer(&layer).map_err(|e| e.to_string())?;
            dense.apply_layer(&layer).map_err(|e| e.to_string())?;
            let (Simulation::Tableau(tab), Simulation::Dense(psi)) = (&tab, &dense) else { unreachable!() };
            for &(a, b) in &subsystems(sites) {
                let rho = psi.partial_trace(a, b).unwrap();
                let where_ = format!("realization {r}, layer {t}, sites {a}..{b}");
                let (s_t, s_d) = (tab.entanglement_entropy(a, b).unwrap(), von_neumann_entropy(&rho));
                if (s_t - s_d).abs() > 1e-9 {
                    return Err(format!("entropy {s_t} vs {s_d} at {where_}"));
                }
                let (c_t, c_d) = (tab.coherence(a, b).unwrap(), relative_entropy_of_coherence(&rho));
                if (c_t - c_d).abs() > 1e-9 {
                    return Err(format!("coherence {c_t} vs {c_d} at {where_}"));
                }
                let (g_t, g_d) = (tab.covariance_matrix(a, b).unwrap(), covariance_dense(&rho).unwrap());
                let dev = (g_t - g_d).abs().max();
                if dev > 1e-9 {
                    return Err(format!("covariance deviates by {dev} at {where_}"));
                }
                checks += 3;
            }
        }
    }
    Ok(checks)
}

/// Same comparison for permutation-phase circuits on a `|+⟩` cluster:
/// amplitudes and subsystem coherence of the sparse and dense states.
pub fn sparse_matches_dense(sites: usize, cluster: usize, realizations: usize, seed: u64) -> Result<usize, String> {
    let init = InitialState::PlusCluster { size: cluster };
    let s = spec(sites, EnsembleSpec::PermutationPhase, Backend::Sparse, init, seed, realizations);
    let mut dense_spec = s.clone();
    dense_spec.backend = Backend::Dense;
    let circuit = Circuit::new(&s).map_err(|e| e.to_string())?;
    let dense_circuit = Circuit::new(&dense_spec).map_err(|e| e.to_string())?;
    let mut checks = 0;
    for r in 0..realizations {
        let mut rng = circuit.realization_rng(r);
        let mut sparse = circuit.initial_state().map_err(|e| e.to_string())?;
        let mut dense = dense_circuit.initial_state().map_err(|e| e.to_string())?;
        for t in 1..=s.depth {
            let layer = circuit.build_layer(Parity::of_layer(t), &mut rng);
            sparse.apply_layer(&layer).map_err(|e| e.to_string())?;
            dense.apply_layer(&layer).map_err(|e| e.to_string())?;
            let (Simulation::Sparse(sp), Simulation::Dense(psi)) = (&sparse, &dense) else { unreachable!() };
            let expanded = sp.to_dense().unwrap();
            let dev = expanded
                .amplitudes()
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            if dev > 1e-12 {
                return Err(format!("amplitudes deviate by {dev} (realization {r}, layer {t})"));
            }
            for &(a, b) in &subsystems(sites) {
                let c_s = sp.coherence(a, b).unwrap();
                let c_d = relative_entropy_of_coherence(&psi.partial_trace(a, b).unwrap());
                if (c_s - c_d).abs() > 1e-9 {
                    return Err(format!("coherence {c_s} vs {c_d} (realization {r}, layer {t}, sites {a}..{b})"));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

/// Pauli expectation vector of a stabilizer state, indexed like the
/// dictionary columns.
pub fn pauli_vector(tab: &Tableau) -> Vec<i8> {
    let n = tab.num_qubits();
    (0..1usize << (2 * n)).map(|r| tab.pauli_expectation(&pauli_from_index(n, r)).unwrap()).collect()
}

/// Orbit of `|00⟩` under the enumerated two-qubit Clifford group.
pub fn c2_orbit() -> HashSet<Vec<i8>> {
    clifford_group()
        .gates()
        .iter()
        .map(|g| {
            let mut t = Tableau::new(2);
            t.apply_clifford(g, 0, 1).unwrap();
            pauli_vector(&t)
        })
        .collect()
}

/// Breadth-first search over states reachable from `|0…0⟩` with H, S and
/// CNOT in both directions on every pair, keyed by canonical generators.
pub fn stabilizer_bfs(n: usize) -> Vec<Tableau> {
    let cnot = CliffordGate2::cnot();
    let key = |t: &Tableau| -> Vec<PauliString> { t.canonical_stabilizers() };
    let start = Tableau::new(n);
    let mut seen = HashSet::from([key(&start)]);
    let mut states = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        let mut next = Vec::new();
        for q in 0..n {
            let mut h = t.clone();
            h.apply_h(q).unwrap();
            next.push(h);
            let mut s = t.clone();
            s.apply_s(q).unwrap();
            next.push(s);
            for p in 0..n {
                if p != q {
                    let mut c = t.clone();
                    c.apply_clifford(&cnot, q, p).unwrap();
                    next.push(c);
                }
            }
        }
        for u in next {
            if seen.insert(key(&u)) {
                states.push(u.clone());
                queue.push_back(u);
            }
        }
    }
    states
}
