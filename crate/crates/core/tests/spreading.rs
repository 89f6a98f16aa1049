use qres::ensembles::{clifford_group, majorana_velocities, Chirality, Ensemble, EnsembleSpec, SampledGate};
use qres::rng::stream;
use qres::experiments::{run_spread, Backend, CircuitSpec, InitialState, Monotone, SpreadGrid};

fn spread(ensemble: EnsembleSpec, backend: Backend, init: InitialState, m: Monotone, size: usize, sites: usize) -> SpreadGrid {
    let spec = CircuitSpec {
        d: 2,
        sites,
        depth: 16,
        epsilon: 0.7,
        ensemble,
        backend,
        initial_state: init,
        seed: 31,
        realizations: 400,
        high_memory: false,
    };
    run_spread(&spec, m, size, None).unwrap()
}

/// Mirror cells `(x, t)` and `(−x, t)` agree within three combined standard
/// errors. Each cell is a separate 3σ test, so a false-alarm rate of about
/// 0.3% is expected; more than 1% of cells outside the band is a failure.
#[test]
fn symmetric_setups_give_mirror_symmetric_grids() {
    let g = spread(EnsembleSpec::PermutationPhase, Backend::Sparse, InitialState::PlusCluster { size: 4 }, Monotone::Coherence, 2, 32);
    let (mut cells, mut outside) = (0, 0);
    for (i, x) in g.x_r.iter().enumerate() {
        let j = g.x_r.iter().position(|y| *y == -x).expect("mirror position");
        for t in 0..g.times.len() {
            let band = 3.0 * (g.stderr[i][t].powi(2) + g.stderr[j][t].powi(2)).sqrt();
            cells += 1;
            if (g.mean[i][t] - g.mean[j][t]).abs() > band + 1e-12 {
                outside += 1;
            }
        }
    }
    assert!(outside * 100 <= cells, "{outside} of {cells} mirror cells differ by more than 3σ");
}

/// Position of one Majorana: site and which of its two operators.
#[derive(Clone, Copy)]
struct Majorana {
    site: i64,
    kind: u8,
}

/// One brickwall layer of `gate_at(left)` applied to a Majorana on an
/// unbounded chain: odd layers pair sites (2k, 2k+1), even layers (2k+1, 2k+2).
fn step(m: Majorana, t: usize, gate_at: &mut dyn FnMut(i64) -> [u8; 4]) -> Majorana {
    let first = if t % 2 == 1 { 0 } else { 1 };
    let left = m.site - (m.site - first).rem_euclid(2);
    let perm = gate_at(left);
    let b = perm[(2 * (m.site - left)) as usize + m.kind as usize];
    Majorana { site: left + (b / 2) as i64, kind: b % 2 }
}

/// Velocities of single Majoranas in a uniform brickwall, measured by
/// direct simulation, agree with the cycle formula and the class label.
#[test]
fn chirality_classes_match_simulated_majorana_fronts() {
    let group = clifford_group();
    let layers = 400;
    for class in [Chirality::LeftMoving, Chirality::RightMoving, Chirality::Neutral] {
        for id in group.chirality_class(class) {
            let action = group.gate(id).majorana_action().unwrap();
            let mut measured = Vec::new();
            for (site, kind) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let mut m = Majorana { site, kind };
                for t in 1..=layers {
                    m = step(m, t, &mut |_| action.perm);
                }
                measured.push((m.site - site) as f64 / layers as f64);
            }
            let predicted = majorana_velocities(&action);
            let fastest = |v: &[f64]| (v.iter().copied().fold(0.0, f64::max), v.iter().copied().fold(0.0, |a, x| f64::max(a, -x)));
            let (mr, ml) = fastest(&measured);
            let (pr, pl) = fastest(&predicted);
            assert!((mr - pr).abs() < 0.01 && (ml - pl).abs() < 0.01, "gate {id}: measured {measured:?}, predicted {predicted:?}");
            let label = if mr > ml + 0.01 {
                Chirality::RightMoving
            } else if ml > mr + 0.01 {
                Chirality::LeftMoving
            } else {
                Chirality::Neutral
            };
            assert_eq!(label, class, "gate {id}");
        }
    }
}

/// In random circuits the label of a Majorana performs a Markov chain whose
/// transition matrix averages permutations, so it is doubly stochastic and
/// the stationary drift (mean displacement over labels) vanishes for every
/// mix, however chiral its members are.
#[test]
fn random_chiral_mixes_have_no_majorana_drift() {
    let group = clifford_group();
    let (layers, walkers) = (40, 4000);
    for (left, right) in [(10, 0), (0, 10)] {
        let ensemble = Ensemble::new(EnsembleSpec::ChiralMatchgateMix { left, right, generic: 0 }, 1).unwrap();
        let mut rng = stream(2, left as u64);
        let d: Vec<f64> = (0..walkers)
            .map(|w| {
                let mut m = Majorana { site: (w % 2) as i64, kind: ((w / 2) % 2) as u8 };
                let start = m.site;
                for t in 1..=layers {
                    m = step(m, t, &mut |_| {
                        let SampledGate::Clifford(id) = ensemble.sample(&mut rng) else { unreachable!() };
                        group.gate(id).majorana_action().unwrap().perm
                    });
                }
                (m.site - start) as f64
            })
            .collect();
        let n = d.len() as f64;
        let mean = d.iter().sum::<f64>() / n;
        let se = (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
        assert!(mean.abs() < 4.0 * se + 1e-12, "mix ({left}, {right}): drift {mean} ± {se}");
    }
}
