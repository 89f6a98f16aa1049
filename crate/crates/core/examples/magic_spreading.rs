//! Spreading of magic from a cluster of |T⟩ states under Clifford gates,
//! measured by the two-site log-robustness of magic on a statevector.
//!
//! `cargo run --release --example magic_spreading -- [realizations]`

use qres::ensembles::EnsembleSpec;
use qres::experiments::{fit_spread, run_spread, Backend, CircuitSpec, InitialState, Monotone};

fn main() -> qres::Result<()> {
    let realizations = std::env::args().nth(1).map_or(20, |s| s.parse().expect("realizations"));
    let spec = CircuitSpec {
        d: 2,
        sites: 14,
        depth: 8,
        epsilon: 1.0,
        ensemble: EnsembleSpec::CliffordFull,
        backend: Backend::Dense,
        initial_state: InitialState::TCluster { size: 4 },
        seed: 3,
        realizations,
        high_memory: false,
    };
    let grid = run_spread(&spec, Monotone::Lrom, 2, None)?;
    println!("  x_r  LRoM(t = 0..{})", spec.depth);
    for (x, row) in grid.x_r.iter().zip(&grid.mean) {
        let cells: Vec<String> = row.iter().map(|m| format!("{m:.3}")).collect();
        println!("{x:5} {}", cells.join(" "));
    }
    let fit = fit_spread(&grid, 1e-6);
    println!("outer front velocity {:?}, peak velocity {:?}", fit.v_front, fit.v_peak);
    Ok(())
}
