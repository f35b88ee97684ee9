//! Positive solutions of the discrete Yamabe-type equation
//! `-Delta u = gamma u + |u|^(p-2) u` for `gamma < lambda_1` and `p > 2`,
//! via truncation plus a strict-positivity certificate.
//!
//! Run with: `cargo run --example yamabe_positive`

use graphelliptic::fixtures;
use graphelliptic::solvers::{yamabe_solve, SolveOptions, SolverError};
use graphelliptic::spectral::lambda1;
use std::sync::Arc;

fn main() {
    let opts = SolveOptions::default();

    // On the 3-path: gamma = 0, p = 3 gives -Delta u = u^2 with positive
    // solution u = 2; gamma = 1, p = 4 gives -Delta u = u + u^3 with u = 1.
    let p3 = Arc::new(fixtures::p3());
    let x2 = p3.local_of_id("x2").unwrap();
    for (gamma, p, expect) in [(0.0, 3.0, 2.0), (1.0, 4.0, 1.0)] {
        let (u, _) = yamabe_solve(&p3, gamma, p, &opts).expect("positive solution");
        println!(
            "3-path gamma={gamma} p={p}: u(x2) = {:.12} (expected {expect})",
            u.u.value(x2)
        );
        assert!((u.u.value(x2) - expect).abs() < 1e-9);
    }

    // On the 5-path the solution has no elementary closed form but is
    // strictly positive on the interior.
    let p5 = Arc::new(fixtures::p5());
    let (u, _) = yamabe_solve(&p5, 0.0, 3.0, &opts).expect("positive solution");
    print!("5-path gamma=0 p=3: interior values");
    for &l in p5.interior() {
        print!(" {:.8}", u.u.value(l));
        assert!(u.u.value(l) > 0.0);
    }
    println!();

    // The hypothesis gamma < lambda_1 is enforced, not assumed.
    let lam1 = lambda1(&p3).lambda1;
    match yamabe_solve(&p3, lam1, 3.0, &opts) {
        Err(SolverError::HypothesisViolated { reason }) => {
            println!("gamma = lambda_1 rejected: {reason}");
        }
        other => panic!("expected rejection, got {other:?}"),
    }
}
