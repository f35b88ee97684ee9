//! Minimizing the energy functional over a ball in the alpha-norm and
//! certifying that the minimum is an interior critical point — the local
//! minimizer that the small-lambda existence theory provides.
//!
//! Run with: `cargo run --example ball_minimizer`

use graphelliptic::fixtures;
use graphelliptic::solvers::{minimize_in_ball, SolveOptions, SolverError};

fn main() {
    let spec = fixtures::cubic_problem();
    let opts = SolveOptions::default();

    // In the unit ball the cubic's energy dips below zero away from the
    // origin: the minimizer is the golden-ratio-conjugate solution with
    // ||u||_alpha^2 = 3 - sqrt(5) < 1.
    let m = minimize_in_ball(&spec, 1.0, &opts).expect("interior minimum");
    println!("ball rho = 1:");
    println!("  energy        {:.12}", m.energy);
    println!("  ||u||_alpha^2 {:.12}", m.alpha_norm_sq);
    println!("  margin        {:.12}", m.margin);
    println!("  critical point certified: {}", m.critical);
    assert!(m.critical && !m.trivial);
    assert!((m.alpha_norm_sq - (3.0 - 5.0_f64.sqrt())).abs() < 1e-9);

    // Shrink the ball until the constraint binds: the minimum moves to the
    // sphere and is no longer a free critical point, which the solver
    // reports instead of returning an uncertified function.
    match minimize_in_ball(&spec, 0.5, &opts) {
        Err(SolverError::NoInteriorMinimizer { margin }) => {
            println!("ball rho = 0.5: constrained minimum only (margin {margin:.2e})");
        }
        other => panic!("expected a boundary minimum report, got {other:?}"),
    }

    // For f(t) = t^3 the potential is quartic and the origin is the unique
    // minimizer in a small ball: the theory's trivial case.
    let cube = fixtures::cube_problem();
    let m0 = minimize_in_ball(&cube, 0.5, &opts).expect("trivial minimum");
    println!(
        "pure cube in rho = 0.5: trivial = {}, energy = {}",
        m0.trivial, m0.energy
    );
    assert!(m0.trivial);
}
