//! The mu-Laplacian, gradient form, slope, and the discrete
//! integration-by-parts identity.
//!
//! Run with: `cargo run --example laplacian_calculus`

use graphelliptic::calculus::{
    check_parts_identity, dirichlet_energy, gradient_form, laplacian, slope,
};
use graphelliptic::fixtures;
use graphelliptic::graph::VertexFn;

fn main() {
    let dom = fixtures::p5();
    // A tent profile over the 5-path.
    let u = VertexFn::from_values(&dom, vec![0.0, 1.0, 2.0, 1.0, 0.0]).unwrap();
    let v = VertexFn::from_values(&dom, vec![0.0, -1.0, 0.5, 2.0, 0.0]).unwrap();

    println!("vertex  u  Delta u  |grad u|  Gamma(u,v)");
    for l in 0..dom.len() {
        println!(
            "  {}  {:>4}  {:>6}  {:>8.5}  {:>8.4}",
            dom.id_of(l),
            u.value(l),
            laplacian(&dom, &u, l).unwrap(),
            slope(&dom, &u, l).unwrap(),
            gradient_form(&dom, &u, &v, l).unwrap(),
        );
    }

    // The Dirichlet energy is the integral of the carre du champ.
    println!(
        "dirichlet energy of u: {}",
        dirichlet_energy(&dom, &u).unwrap()
    );

    // Integration by parts holds exactly on Dirichlet-class functions:
    //   integral Gamma(u, v) dmu = - integral (Delta u) v dmu.
    let defect = check_parts_identity(&dom, &u, &v).unwrap();
    println!("integration-by-parts defect: {defect:.3e}");
    assert!(defect <= 1e-12);
}
