//! Enumerates the two-qubit Clifford group and its incoherent and matchgate
//! subsets, then prints the chirality of each matchgate class.

use qres::ensembles::{clifford_group, ensemble_counts, majorana_velocities, Chirality};

fn main() {
    let c = ensemble_counts();
    println!("Clifford: {}  incoherent: {}  matchgates: {}", c.clifford, c.incoherent, c.matchgate);
    println!("left-moving: {}  right-moving: {}  neutral: {}", c.left_moving, c.right_moving, c.neutral);

    let g = clifford_group();
    for class in [Chirality::LeftMoving, Chirality::RightMoving, Chirality::Neutral] {
        let id = g.chirality_class(class)[0];
        let action = g.gate(id).majorana_action().expect("matchgate");
        println!("{class}: first member maps γ_a to ±γ_{:?}, velocities {:?}", action.perm, majorana_velocities(&action));
    }
}
