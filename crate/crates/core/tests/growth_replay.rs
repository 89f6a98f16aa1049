//! Replays a dense LRoM growth run with a hand-written loop over the public
//! building blocks and compares it with `run_growth`.
#![allow(clippy::needless_range_loop)]

use qres::ensembles::{Ensemble, EnsembleSpec};
use qres::experiments::{centered_start, run_growth, Backend, CircuitSpec, InitialState, Monotone};
use qres::monotones::{dictionary, log_robustness_of_magic};
use qres::rng::stream;
use qres::statevec::QuditState;
use rand::Rng;

#[test]
fn dense_lrom_growth_matches_hand_rolled_loop() {
    let (sites, size, depth, reps, eps, seed) = (16, 2, 16, 10, 0.8, 12345);
    let spec = CircuitSpec {
        d: 2,
        sites,
        depth,
        epsilon: eps,
        ensemble: EnsembleSpec::Haar4,
        backend: Backend::Dense,
        initial_state: InitialState::AllZero,
        seed,
        realizations: reps,
        high_memory: false,
    };
    let series = run_growth(&spec, Monotone::Lrom, &[size]).unwrap();

    let ensemble = Ensemble::new(EnsembleSpec::Haar4, seed).unwrap();
    let start = centered_start(sites, size);
    assert_eq!(start, 7);
    let mut samples = vec![Vec::new(); depth + 1];
    for r in 0..reps {
        let mut rng = stream(seed, r as u64);
        let mut psi = QuditState::zeros(2, sites).unwrap();
        for t in 0..=depth {
            if t > 0 {
                // Odd layers start at site 0, even layers at site 1.
                let first = if t % 2 == 1 { 0 } else { 1 };
                for left in (first..sites - 1).step_by(2) {
                    if rng.random_bool(eps) {
                        let g = ensemble.sample(&mut rng).to_dense();
                        psi.apply_two_site_gate(&g, left).unwrap();
                    }
                }
            }
            let rho = psi.partial_trace(start, start + size).unwrap();
            samples[t].push(log_robustness_of_magic(&rho, dictionary(size).unwrap()).unwrap());
        }
    }
    for (t, xs) in samples.iter().enumerate() {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((series.mean[0][t] - mean).abs() < 1e-12, "t = {t}");
        assert!((series.stderr[0][t] - (var / n).sqrt()).abs() < 1e-12, "t = {t}");
    }
    assert!(series.mean[0][0].abs() < 1e-12);
    assert!(series.mean[0].iter().any(|&m| m > 0.0));
}
