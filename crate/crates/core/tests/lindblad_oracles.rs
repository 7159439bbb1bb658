//! Master-equation cross-checks against independent integrators.

mod common;

#[test]
fn partial_secular_matches_redfield_on_driven_three_level() {
    let d = common::redfield_max_deviation();
    eprintln!("largest population difference {d:.5}");
    assert!(d < 0.05, "{d}");
}

#[test]
fn vanishing_threshold_reduces_to_rate_equation() {
    let d = common::rate_equation_max_deviation();
    assert!(d < 1e-10, "{d}");
}

#[test]
fn trajectories_stay_physical() {
    let (drift, min_ev) = common::toy_physicality();
    assert!(drift < 1e-10, "{drift}");
    assert!(min_ev > -1e-8, "{min_ev}");
}
