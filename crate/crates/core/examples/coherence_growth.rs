//! Coherence growth from |0…0⟩ under Clifford gates that create coherence,
//! simulated with the stabilizer tableau, followed by timescale fits.
//!
//! `cargo run --release --example coherence_growth -- [realizations] [epsilon]`

use qres::ensembles::EnsembleSpec;
use qres::experiments::{fit_growth, run_growth, Backend, CircuitSpec, InitialState, Monotone};

fn main() -> qres::Result<()> {
    let mut args = std::env::args().skip(1);
    let realizations = args.next().map_or(200, |s| s.parse().expect("realizations"));
    let epsilon = args.next().map_or(0.3, |s| s.parse().expect("epsilon"));
    let spec = CircuitSpec {
        d: 2,
        sites: 64,
        depth: 120,
        epsilon,
        ensemble: EnsembleSpec::CliffordMinusIncoherent,
        backend: Backend::Tableau,
        initial_state: InitialState::AllZero,
        seed: 1,
        realizations,
        high_memory: false,
    };
    let series = run_growth(&spec, Monotone::Coherence, &[4, 8, 16])?;
    for (i, size) in series.subsystem_sizes.iter().enumerate() {
        let sample: Vec<String> = series.mean[i].iter().step_by(10).map(|m| format!("{m:.3}")).collect();
        println!("L_A = {size:2}: C_d every 10 layers [{}]", sample.join(", "));
    }
    for f in fit_growth(&series, 0.1) {
        println!(
            "L_A = {:2}: τ_m = {:?}, τ_d = {:?}, τ_θ = {:?} {}",
            f.subsystem_size.unwrap_or(0),
            f.tau_m,
            f.tau_d,
            f.tau_theta,
            f.notes.join("; ")
        );
    }
    Ok(())
}
