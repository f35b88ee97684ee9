//! Property tests for the serialization boundary: the report float format
//! must round-trip every finite double, and a graph document must load into
//! exactly the adjacency it encodes.

use graphelliptic::graph::load_graph;
use graphelliptic::report::fmt_float;
use proptest::prelude::*;
use serde_json::json;

proptest! {
    #[test]
    fn report_floats_roundtrip_bit_exactly(v in any::<f64>()) {
        prop_assume!(v.is_finite());
        let s = fmt_float(v);
        let back: f64 = s.parse().expect("report float must re-parse");
        prop_assert_eq!(back.to_bits(), v.to_bits(), "{} -> {}", v, s);
    }

    #[test]
    fn graph_documents_load_what_they_encode(
        (mus, edges) in graph_parts()
    ) {
        let n = mus.len();
        let doc = json!({
            "vertices": (0..n)
                .map(|i| json!({"id": format!("v{i}"), "mu": mus[i]}))
                .collect::<Vec<_>>(),
            "edges": edges
                .iter()
                .map(|&(a, b, w)| {
                    json!({"a": format!("v{a}"), "b": format!("v{b}"), "w": w})
                })
                .collect::<Vec<_>>(),
        });
        let loaded = load_graph(&doc.to_string()).expect("valid document");
        let g = &loaded.graph;
        prop_assert_eq!(g.vertex_count(), n);
        prop_assert_eq!(g.edge_count(), edges.len());
        for (i, &mu) in mus.iter().enumerate() {
            let x = g.index_of(&format!("v{i}")).expect("vertex present");
            prop_assert_eq!(g.mu(x), mu);
        }
        for &(a, b, w) in &edges {
            let x = g.index_of(&format!("v{a}")).unwrap();
            let y = g.index_of(&format!("v{b}")).unwrap();
            prop_assert!(g.neighbors(x).iter().any(|&(z, wz)| z == y && wz == w));
            prop_assert!(g.neighbors(y).iter().any(|&(z, wz)| z == x && wz == w));
        }
    }
}

/// Vertex measures plus a connected symmetric edge list (random tree and a
/// few extra chords, no duplicate pairs).
fn graph_parts() -> impl Strategy<Value = (Vec<f64>, Vec<(usize, usize, f64)>)> {
    (2usize..=9).prop_flat_map(|n| {
        (
            prop::collection::vec(0.1f64..10.0, n),
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec(0.1f64..10.0, n - 1),
            prop::collection::vec(
                (
                    any::<prop::sample::Index>(),
                    any::<prop::sample::Index>(),
                    0.1f64..10.0,
                ),
                0..=4,
            ),
        )
            .prop_map(move |(mus, parents, tree_ws, chords)| {
                let mut edges: Vec<(usize, usize, f64)> = Vec::new();
                for (i, (p, w)) in parents.iter().zip(tree_ws).enumerate() {
                    edges.push((p.index(i + 1), i + 1, w));
                }
                for (ia, ib, w) in chords {
                    let (a, b) = (ia.index(n), ib.index(n));
                    let (a, b) = (a.min(b), a.max(b));
                    if a != b && !edges.iter().any(|&(x, y, _)| (x.min(y), x.max(y)) == (a, b)) {
                        edges.push((a, b, w));
                    }
                }
                (mus, edges)
            })
    })
}
