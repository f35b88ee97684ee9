//! Building a weighted graph, decomposing a domain into interior and
//! boundary, and inspecting its measures.
//!
//! Run with: `cargo run --example graph_basics`

use graphelliptic::graph::{integrate, load_graph, Domain, VertexFn, WeightedGraph};
use std::sync::Arc;

fn main() {
    // Programmatic construction: a 5-cycle with one chord and non-uniform
    // vertex measure. Edges are undirected with positive weights.
    let graph = Arc::new(
        WeightedGraph::from_parts(
            &[("a", 1.0), ("b", 0.5), ("c", 2.0), ("d", 1.0), ("e", 1.5)],
            &[
                ("a", "b", 1.0),
                ("b", "c", 2.0),
                ("c", "d", 1.0),
                ("d", "e", 1.0),
                ("e", "a", 0.5),
                ("b", "d", 0.25),
            ],
        )
        .expect("well-formed graph"),
    );

    // A domain is any connected vertex subset; its boundary may be designated
    // explicitly or defaults to the members with neighbors outside the set.
    let dom = Domain::decompose(&graph, &["a", "b", "c", "d", "e"], Some(&["a", "e"]))
        .expect("connected domain");

    println!("domain of {} vertices:", dom.len());
    println!("  interior: {} vertices", dom.interior_count());
    println!("  boundary: {} vertices", dom.boundary_count());
    println!("  volume mu(D) = {}", dom.volume());
    println!("  smallest measure mu_0 = {}", dom.mu_min());
    for l in 0..dom.len() {
        println!(
            "  {:>2} {}  mu = {:>4}  degree-in-D = {}",
            l,
            if dom.is_boundary(l) { "boundary" } else { "interior" },
            dom.mu(l),
            dom.degree_in(l),
        );
    }

    // Vertex functions are values over the domain; integration is against mu.
    let mut u = VertexFn::zeros(&dom);
    u.set(dom.local_of_id("c").unwrap(), 2.0);
    println!("integral of 2*e_c dmu = {}", integrate(&dom, &u).unwrap());

    // The same domain can be described as a JSON document.
    let doc = load_graph(
        r#"{
            "vertices": [{"id": "x1", "mu": 1.0}, {"id": "x2", "mu": 1.0},
                         {"id": "x3", "mu": 1.0}],
            "edges": [{"a": "x1", "b": "x2", "w": 1.0},
                      {"a": "x2", "b": "x3", "w": 1.0}],
            "domain": {"vertices": ["x1", "x2", "x3"], "boundary": ["x1", "x3"]}
        }"#,
    )
    .expect("valid document");
    let path = doc.domain().expect("connected");
    println!(
        "3-path from JSON: interior {} / boundary {}",
        path.interior_count(),
        path.boundary_count()
    );
}
