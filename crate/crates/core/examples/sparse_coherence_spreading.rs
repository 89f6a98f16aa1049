//! Coherence spreading from a |+⟩ cluster under random basis permutations
//! with phases, on the sparse backend.
//!
//! `cargo run --release --example sparse_coherence_spreading -- [realizations]`

use qres::ensembles::EnsembleSpec;
use qres::experiments::{front_velocity, run_spread, Backend, CircuitSpec, InitialState, Monotone};

fn main() -> qres::Result<()> {
    let realizations = std::env::args().nth(1).map_or(100, |s| s.parse().expect("realizations"));
    let spec = CircuitSpec {
        d: 2,
        sites: 64,
        depth: 100,
        epsilon: 0.65,
        ensemble: EnsembleSpec::PermutationPhase,
        backend: Backend::Sparse,
        initial_state: InitialState::PlusCluster { size: 8 },
        seed: 5,
        realizations,
        high_memory: false,
    };
    let grid = run_spread(&spec, Monotone::Coherence, 8, None)?;
    for (x, row) in grid.x_r.iter().zip(&grid.mean).step_by(4) {
        let cells: Vec<String> = row.iter().step_by(10).map(|m| format!("{m:.2}")).collect();
        println!("x_r = {x:5}: {}", cells.join(" "));
    }
    let f = front_velocity(&grid, 1e-6)?;
    println!("v_front = {:.3} ({} arrivals), v_peak = {:?}", f.v_front, f.arrivals, f.v_peak);
    Ok(())
}
