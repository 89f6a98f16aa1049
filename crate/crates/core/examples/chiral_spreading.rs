//! Non-Gaussianity of a fermionic cluster under a mix of chiral Clifford
//! matchgates, tracked with the stabilizer tableau. Prints the total and
//! the center of mass of the local non-Gaussianity every eight layers.
//!
//! `cargo run --release --example chiral_spreading -- [left] [right] [generic]`

use qres::ensembles::EnsembleSpec;
use qres::experiments::{run_spread, Backend, CircuitSpec, InitialState, Monotone, CHIRAL_EPSILON};

fn main() -> qres::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().expect("gate count"));
    let (left, right, generic) = (args.next().unwrap_or(10), args.next().unwrap_or(0), args.next().unwrap_or(10));
    let spec = CircuitSpec {
        d: 2,
        sites: 64,
        depth: 32,
        epsilon: CHIRAL_EPSILON,
        ensemble: EnsembleSpec::ChiralMatchgateMix { left, right, generic },
        backend: Backend::Tableau,
        initial_state: InitialState::FermionicCluster { blocks: 1 },
        seed: 4,
        realizations: 200,
        high_memory: false,
    };
    let grid = run_spread(&spec, Monotone::NonGaussianity, 4, None)?;
    for t in (0..=spec.depth).step_by(8) {
        let total: f64 = grid.mean.iter().map(|m| m[t]).sum();
        let com = grid.x_r.iter().zip(&grid.mean).map(|(x, m)| x * m[t]).sum::<f64>() / total;
        println!("t = {t:2}: total NG {total:.3}, center of mass {com:+.2}");
    }
    Ok(())
}
