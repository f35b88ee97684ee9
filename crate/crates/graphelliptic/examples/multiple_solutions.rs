//! Finding every classical solution of a semilinear Dirichlet problem by
//! deflated Newton search, with residual and Palais-Smale certificates.
//!
//! The model problem on the 3-path with f(t) = 1 + t^3 and lambda = 1 has
//! exactly three solutions, the interior values being the roots of
//! t^3 - 2t + 1: the golden-ratio conjugate (sqrt(5)-1)/2, the value 1, and
//! -(1+sqrt(5))/2.
//!
//! Run with: `cargo run --example multiple_solutions`

use graphelliptic::fixtures;
use graphelliptic::solvers::{find_all_solutions, SolveOptions};

fn main() {
    let spec = fixtures::cubic_problem();
    let opts = SolveOptions::default(); // seed 0, budget 64
    let report = find_all_solutions(&spec, &opts).expect("solver converges");

    println!(
        "found {} solutions in {} attempts ({} converged)",
        report.solutions.len(),
        report.attempts,
        report.converged
    );
    println!(
        "admissible: {:?} (lambda = {}, lambda* = {:?})",
        report.hypotheses.lambda_admissible,
        report.hypotheses.lambda,
        report.hypotheses.lambda_star
    );
    println!(
        "Palais-Smale certificate usable: {} (radius bound {:?}, covers all: {:?})",
        report.ps.usable, report.ps.radius_bound, report.ps.covers_solutions
    );
    println!();
    println!("   energy        ||u||_a^2     sup|u|       residual   sign");
    for s in &report.solutions {
        println!(
            "  {:>10.6}  {:>10.6}  {:>10.6}  {:>10.2e}   {:?}",
            s.energy, s.alpha_norm_sq, s.sup_norm, s.classical_residual, s.sign
        );
    }

    let x2 = spec.domain.local_of_id("x2").unwrap();
    let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
    let values: Vec<f64> = report.solutions.iter().map(|s| s.u.value(x2)).collect();
    println!();
    println!("interior values: {values:?}");
    assert_eq!(report.solutions.len(), 3);
    assert!((values[0] - golden).abs() < 1e-9, "lowest energy at {golden}");
}
