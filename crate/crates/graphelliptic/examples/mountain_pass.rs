//! The mountain-pass geometry made concrete: a valley (ball minimizer), an
//! escape point of lower energy far along a ray, and a saddle polished from
//! the maximum of the connecting path.
//!
//! Run with: `cargo run --example mountain_pass`

use graphelliptic::fixtures;
use graphelliptic::solvers::{mountain_pass, SolveOptions};

fn main() {
    let spec = fixtures::cubic_problem();
    let mp = mountain_pass(&spec, 1.0, &SolveOptions::default()).expect("saddle found");

    println!("valley:  energy {:.10} (||u||_a^2 = {:.6})", mp.valley.energy, mp.valley.alpha_norm_sq);
    println!("far end: t = {} along the interior indicator", mp.t_far);
    println!("path max energy before polish: {:.10}", mp.path_max_energy);
    println!(
        "saddle:  energy {:.10}, residual {:.2e}",
        mp.saddle.energy, mp.saddle.classical_residual
    );

    // For the cubic on the 3-path the saddle is the constant-1 interior
    // solution with energy exactly -1/4 — higher than the valley, as the
    // geometry demands.
    let x2 = spec.domain.local_of_id("x2").unwrap();
    println!("saddle interior value: {:.12}", mp.saddle.u.value(x2));
    assert!((mp.saddle.u.value(x2) - 1.0).abs() < 1e-9);
    assert!((mp.saddle.energy - (-0.25)).abs() < 1e-10);
    assert!(mp.saddle.energy > mp.valley.energy);
    assert!(mp.path_max_energy >= mp.saddle.energy - 1e-12);
}
