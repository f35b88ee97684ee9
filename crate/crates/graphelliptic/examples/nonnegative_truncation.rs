//! Producing a nonnegative solution by solving with the positive-part
//! truncation of f and certifying, after the fact, that the negative part
//! vanished and the function solves the original problem.
//!
//! Run with: `cargo run --example nonnegative_truncation`

use graphelliptic::fixtures;
use graphelliptic::solvers::{solve_truncated, SolveOptions, SolverError};

fn main() {
    // f(t) = t^3 vanishes at zero and its truncation t -> (t^+)^3 keeps only
    // the positive branch; on the 3-path the nontrivial truncated solution
    // is sqrt(2) at the interior vertex.
    let spec = fixtures::cube_problem();
    let (solution, report) = solve_truncated(&spec, &SolveOptions::default()).expect("solves");
    let x2 = spec.domain.local_of_id("x2").unwrap();
    println!(
        "nonnegative solution: u(x2) = {:.12} (residual {:.2e})",
        solution.u.value(x2),
        solution.classical_residual
    );
    println!(
        "candidates seen by the truncated solver: {}",
        report.solutions.len()
    );
    assert!((solution.u.value(x2) - 2.0_f64.sqrt()).abs() < 1e-10);
    assert!(solution.u.values().iter().all(|&v| v >= 0.0));

    // The sign information must come from the equation, not the solver: for
    // f(t) = t the truncated problem has no nontrivial solution, and that is
    // reported rather than returning the zero function.
    match solve_truncated(&fixtures::linear_problem(), &SolveOptions::default()) {
        Err(SolverError::OnlyTrivialFound) => println!("linear f: only the trivial solution"),
        other => panic!("expected the trivial-only report, got {other:?}"),
    }
}
