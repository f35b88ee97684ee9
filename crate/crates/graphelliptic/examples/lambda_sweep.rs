//! Sweeping the coupling parameter `lambda` across its admissible range.
//!
//! The multiplicity theory gives a threshold `lambda_star`: for every
//! `lambda` in `(0, lambda_star)` the problem `-Delta u = alpha u +
//! lambda f(x, u)` admits at least two nontrivial solutions.  This example
//! scans a grid of couplings, solves at each one, and emits the same CSV
//! the `sweep` subcommand produces.
//!
//! Run with: `cargo run --example lambda_sweep`

use graphelliptic::cli;
use graphelliptic::fixtures;
use graphelliptic::solvers::{find_all_solutions, SolveOptions};
use graphelliptic::variational::lambda_star;
use graphelliptic::Tolerances;

fn main() {
    let spec = fixtures::cubic_problem();
    let tol = Tolerances::default();
    let lstar = lambda_star(&spec, &tol).expect("threshold");
    println!("admissibility threshold lambda_star = {lstar:.12}");

    // Library-level sweep: re-solve the problem at each coupling.
    let opts = SolveOptions::default();
    println!("{:>8} {:>6} {:>12} {:>10}", "lambda", "count", "min energy", "admissible");
    for i in 0..6 {
        let li = 0.4 + 0.4 * i as f64;
        let report = find_all_solutions(&spec.with_lambda(li), &opts).expect("solve");
        let min_energy = report
            .solutions
            .iter()
            .map(|s| s.energy)
            .fold(f64::INFINITY, f64::min);
        println!(
            "{li:>8.2} {:>6} {min_energy:>12.6} {:>10}",
            report.solutions.len(),
            li < lstar
        );
        if li < 1.0 {
            // Well below the threshold the cubic problem has three
            // distinct solutions.
            assert!(report.solutions.len() >= 3);
        }
    }

    // The same scan through the command layer, as machine-readable CSV.
    let csv = cli::cmd_sweep(
        fixtures::P3_JSON,
        fixtures::CUBIC_PROBLEM_JSON,
        "0.4:2.4:6",
        0,
        64,
    )
    .expect("sweep");
    println!("\nsweep CSV:\n{csv}");
    assert!(csv.starts_with("lambda,n_solutions,min_energy,lambda_star,admissible\n"));
}
