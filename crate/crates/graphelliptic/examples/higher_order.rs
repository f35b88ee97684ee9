//! Higher-order energies: the constants `lambda_(m,p)` on constraint
//! classes with iterated-Laplacian boundary conditions, and solutions of
//! the poly-Laplacian problem `(-Delta)^m u = lambda f(x, u)`.
//!
//! Run with: `cargo run --example higher_order`

use graphelliptic::fixtures;
use graphelliptic::higher_order::mp_solve;
use graphelliptic::solvers::SolveOptions;
use graphelliptic::spectral::{kappa_mp, lambda1, lambda_mp, SpectralError};
use graphelliptic::variational::load_problem;
use std::sync::Arc;

fn main() {
    let p5 = Arc::new(fixtures::p5());
    let p3 = Arc::new(fixtures::p3());

    // m = 1, p = 2 recovers the classical first Dirichlet eigenvalue.
    let base = lambda1(&p5).lambda1;
    let r = lambda_mp(&p5, 1, 2.0).expect("order 1");
    println!("five-path lambda_(1,2) = {:.12}  (lambda_1 = {base:.12})", r.lambda);
    assert!((r.lambda - base).abs() < 1e-12);

    // m = 2 on the five-path: after the second-order boundary conditions
    // the class is one-dimensional and lambda_(2,2) = 6 exactly.
    let r = lambda_mp(&p5, 2, 2.0).expect("order 2");
    println!(
        "five-path lambda_(2,2) = {}  (class dim {}, exact = {})",
        r.lambda, r.class_dim, r.exact
    );
    assert_eq!(r.class_dim, 1);
    assert_eq!(r.lambda, 6.0);

    // Non-quadratic exponents on the three-path have the closed form
    // lambda_(1,p) = 1 + 2 (1/2)^(p/2); these come from the descent
    // heuristic, so `exact` is false and we compare loosely.
    for p in [3.0, 4.0] {
        let r = lambda_mp(&p3, 1, p).expect("order 1");
        let closed = 1.0 + 2.0 * 0.5_f64.powf(p / 2.0);
        println!(
            "three-path lambda_(1,{p}) = {:.12}  (closed form {closed:.12}), kappa = {:.6}",
            r.lambda,
            kappa_mp(&p3, r.lambda, p)
        );
        assert!(!r.exact);
        assert!((r.lambda - closed).abs() < 1e-8);
    }

    // On the three-path the order-2 constraint class collapses to zero:
    // there is nothing left to minimize over.
    assert!(matches!(
        lambda_mp(&p3, 2, 2.0),
        Err(SpectralError::TrivialConstraintClass)
    ));
    println!("three-path order 2: constraint class is trivial (as expected)");

    // Biharmonic problem on the five-path with f = 1 + t^3: solutions are
    // multiples c e of the class generator e (the middle bump), where c
    // solves 6c - 1 - c^3 = 0 -- three real roots, hence three solutions.
    let spec = load_problem(&p5, fixtures::CUBIC_PROBLEM_JSON)
        .expect("problem")
        .spec;
    let report = mp_solve(&spec, 2, 2.0, &SolveOptions::default()).expect("solve");
    let x3 = p5.local_of_id("x3").unwrap();
    println!("biharmonic cubic on the five-path: {} solutions", report.solutions.len());
    for s in &report.solutions {
        let c = s.u.value(x3);
        let crit = 6.0 * c - 1.0 - c * c * c;
        println!("  u(x3) = {c:>12.8}   energy = {:>12.8}   |6c-1-c^3| = {:.2e}", s.energy, crit.abs());
        assert!(crit.abs() < 1e-7);
    }
    assert_eq!(report.solutions.len(), 3);
}
