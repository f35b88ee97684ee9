//! Verifying the variational hypotheses of a problem document: coefficient
//! regime, superquadraticity (Ambrosetti-Rabinowitz), sublinearity at the
//! origin, and the admissibility threshold lambda*.
//!
//! Run with: `cargo run --example hypothesis_checks`

use graphelliptic::fixtures;
use graphelliptic::variational::{verify_hypotheses, AlphaRegime};
use graphelliptic::Tolerances;

fn main() {
    let tol = Tolerances::default();

    for (name, spec) in [
        ("cubic f(t) = 1 + t^3", fixtures::cubic_problem()),
        ("signed square f(t) = |t| t", fixtures::signed_square_problem()),
        ("pure cube f(t) = t^3", fixtures::cube_problem()),
        ("linear f(t) = t", fixtures::linear_problem()),
    ] {
        let h = verify_hypotheses(&spec, &tol);
        println!("{name}:");
        println!(
            "  alpha regime: {:?} (norm bounds {:?})",
            h.regime, h.norm_bounds
        );
        if let Some(ar) = &h.ar {
            print!(
                "  superquadratic (beta = {}, r0 = {}): {}",
                ar.beta,
                ar.r0,
                if ar.pass { "pass" } else { "FAIL" }
            );
            match &ar.witness {
                Some(w) => println!("  [witness: t f = {} < {} = beta F at t = {}]", w.lhs, w.rhs, w.t),
                None => println!(),
            }
        }
        println!(
            "  sublinear at origin: {} (limsup f/t = {})",
            if h.f1l.pass { "pass" } else { "no" },
            h.f1l.worst_limit
        );
        match h.lambda_star {
            Some(ls) => println!(
                "  lambda* = {ls:.10}; lambda = {} admissible: {:?}",
                h.lambda, h.lambda_admissible
            ),
            None => println!("  lambda* unavailable in this regime"),
        }
        assert!(h.regime != AlphaRegime::Invalid);
        println!();
    }

    // The cubic's threshold has closed form (4/3) * 2^(1/3): the three-
    // solutions theorem applies to every lambda below it.
    let h = verify_hypotheses(&fixtures::cubic_problem(), &tol);
    let closed = (4.0 / 3.0) * 2.0_f64.powf(1.0 / 3.0);
    let ls = h.lambda_star.unwrap();
    println!("cubic lambda* = {ls:.12} vs closed form {closed:.12}");
    assert!((ls - closed).abs() <= 1e-7 * closed);
}
