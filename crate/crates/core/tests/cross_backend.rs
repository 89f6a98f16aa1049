mod common;

#[test]
fn tableau_agrees_with_dense_on_clifford_circuits() {
    let checks = common::tableau_matches_dense(10, 8, 5).unwrap();
    assert!(checks > 0);
}

#[test]
fn sparse_agrees_with_dense_on_permutation_phase_circuits() {
    let checks = common::sparse_matches_dense(10, 4, 8, 6).unwrap();
    assert!(checks > 0);
}
