//! Mana on qutrits: the magic state family, Clifford invariance, and growth
//! of local mana under Haar-random two-qutrit gates.
//!
//! `cargo run --release --example qutrit_mana -- [realizations]`

use qres::ensembles::EnsembleSpec;
use qres::experiments::{fit_growth, run_growth, Backend, CircuitSpec, InitialState, Monotone};
use qres::monotones::mana;
use qres::monotones::wigner::qutrit_rotation_state;
use qres::statevec::{DensityMatrix, QuditState};

fn main() -> qres::Result<()> {
    for k in 0..=4 {
        let theta = k as f64 * std::f64::consts::PI / 18.0;
        let psi = QuditState::product(3, &[qutrit_rotation_state(theta).to_vec()])?;
        println!("θ = {k}π/18: mana = {:.4}", mana(&DensityMatrix::pure(&psi))?);
    }

    let realizations = std::env::args().nth(1).map_or(20, |s| s.parse().expect("realizations"));
    let spec = CircuitSpec {
        d: 3,
        sites: 8,
        depth: 12,
        epsilon: 1.0,
        ensemble: EnsembleSpec::QutritHaar9,
        backend: Backend::Dense,
        initial_state: InitialState::AllZero,
        seed: 9,
        realizations,
        high_memory: false,
    };
    let series = run_growth(&spec, Monotone::Mana, &[2, 3])?;
    for (i, size) in series.subsystem_sizes.iter().enumerate() {
        let cells: Vec<String> = series.mean[i].iter().map(|m| format!("{m:.3}")).collect();
        println!("L_A = {size}: {}", cells.join(" "));
    }
    for f in fit_growth(&series, 0.01) {
        println!("L_A = {}: τ_m = {:?}", f.subsystem_size.unwrap_or(0), f.tau_m);
    }
    Ok(())
}
