//! The first Dirichlet eigenvalue, its eigenfunction certificate, and the
//! sup-norm embedding constant it induces.
//!
//! Run with: `cargo run --example first_eigenvalue`

use graphelliptic::fixtures;
use graphelliptic::graph::VertexFn;
use graphelliptic::spectral::{kappa_mp, lambda1, rayleigh_quotient};

fn main() {
    for (name, dom) in [
        ("3-path", fixtures::p3()),
        ("5-path", fixtures::p5()),
        ("4-star", fixtures::s4()),
    ] {
        let e = lambda1(&dom);
        println!(
            "{name}: lambda_1 = {:.12}  (eigen residual {:.2e})",
            e.lambda1, e.residual
        );
        println!(
            "  embedding: ||u||_inf <= {:.6} * ||u|| on the Dirichlet class",
            kappa_mp(&dom, e.lambda1, 2.0)
        );
        // The eigenfunction attains the infimum of the Rayleigh quotient...
        let attained = rayleigh_quotient(&dom, &e.eigenfunction).unwrap();
        println!("  quotient at eigenfunction: {attained:.12}");
        // ...and every other Dirichlet-class function sits above it.
        let trial = VertexFn::interior_indicator(&dom);
        let above = rayleigh_quotient(&dom, &trial).unwrap();
        println!("  quotient at interior indicator: {above:.12}");
        assert!(above >= e.lambda1 - 1e-12);
    }

    // Closed forms: 2 on the 3-path, 3 on the 4-star, 2 - sqrt(2) on the
    // 5-path.
    assert_eq!(lambda1(&fixtures::p3()).lambda1, 2.0);
    assert_eq!(lambda1(&fixtures::s4()).lambda1, 3.0);
    let p5 = lambda1(&fixtures::p5()).lambda1;
    assert!((p5 - (2.0 - 2.0_f64.sqrt())).abs() < 1e-12);
    println!("closed forms confirmed");
}
