//! Builds the pure stabilizer states on up to four qubits and evaluates the
//! log-robustness of magic of a few product states.
//!
//! Pass a directory to cache the dictionaries on disk:
//! `cargo run --release --example stabilizer_dictionary -- /tmp/stab`

use std::f64::consts::PI;

use qres::monotones::dictionary::StabilizerDictionary;
use qres::monotones::{dictionary, log_robustness_of_magic};
use qres::statevec::{DensityMatrix, QuditState};
use qres::Complex64;

fn t_product(n: usize) -> DensityMatrix {
    let t = vec![Complex64::new((PI / 8.0).cos(), 0.0), Complex64::new((PI / 8.0).sin(), 0.0)];
    DensityMatrix::pure(&QuditState::product(2, &vec![t; n]).unwrap())
}

fn main() {
    let cache = std::env::args().nth(1).map(std::path::PathBuf::from);
    for n in 1..=4 {
        let start = std::time::Instant::now();
        let dict = match &cache {
            Some(dir) => {
                std::fs::create_dir_all(dir).unwrap();
                StabilizerDictionary::load_or_build(n, dir).unwrap()
            }
            None => dictionary(n).unwrap().clone(),
        };
        println!("n = {n}: {} stabilizer states ({:.2?})", dict.len(), start.elapsed());
    }
    for n in 1..=3 {
        let lrom = log_robustness_of_magic(&t_product(n), dictionary(n).unwrap()).unwrap();
        println!("LRoM of |T⟩^⊗{n} = {lrom:.6} bits");
    }
}
