//! Small reference graphs and problems used by tests, examples, and docs.
//!
//! * `P3`: the 3-path `x1 - x2 - x3`, unit weights and measure, boundary
//!   `{x1, x3}` — one interior vertex, first eigenvalue exactly 2.
//! * `P5`: the 5-path with boundary at the endpoints — first eigenvalue
//!   `2 - sqrt(2)`.
//! * `S4`: the star with center `c` and three leaves, boundary = leaves —
//!   first eigenvalue exactly 3.
//! * `P7` window: the middle five vertices of a 7-path, whose boundary is
//!   *computed* (`y2`, `y6`) rather than designated; it matches `P5` exactly
//!   and is used to confirm that restricting sums to the domain is consistent
//!   with embedding into a larger graph.

use crate::graph::{load_graph, Domain, VertexFn};
use crate::variational::{load_problem, ProblemSpec};
use std::sync::Arc;

pub const P3_JSON: &str = include_str!("../fixtures/p3.json");
pub const P5_JSON: &str = include_str!("../fixtures/p5.json");
pub const S4_JSON: &str = include_str!("../fixtures/s4.json");
pub const P7_JSON: &str = include_str!("../fixtures/p7.json");

/// Problem document: `f(t) = 1 + t^3`, `alpha = 0`, `lambda = 1` — the
/// three-solution cubic on `P3`.
pub const CUBIC_PROBLEM_JSON: &str = include_str!("../fixtures/cubic.json");
/// Problem document: `f(t) = |t| t`, `alpha = 0`, `lambda = 1`.
pub const SIGNED_SQUARE_PROBLEM_JSON: &str = include_str!("../fixtures/signed_square.json");
/// Problem document: `f(t) = t^3` (vanishing at 0, one-sided superquadratic).
pub const CUBE_PROBLEM_JSON: &str = include_str!("../fixtures/cube.json");
/// Problem document: `f(t) = t` — linear, fails the superquadraticity check.
pub const LINEAR_PROBLEM_JSON: &str = include_str!("../fixtures/linear.json");

fn domain_of(json: &str) -> Domain {
    load_graph(json)
        .expect("fixture document is valid")
        .domain()
        .expect("fixture domain decomposes")
}

/// 3-path with boundary `{x1, x3}`.
pub fn p3() -> Domain {
    domain_of(P3_JSON)
}

/// 5-path with boundary `{x1, x5}`.
pub fn p5() -> Domain {
    domain_of(P5_JSON)
}

/// Star with three leaves as boundary.
pub fn s4() -> Domain {
    domain_of(S4_JSON)
}

/// Middle five vertices of a 7-path; boundary computed, not designated.
pub fn p7_window() -> Domain {
    domain_of(P7_JSON)
}

/// The `P3` function `(0, t, 0)`.
pub fn p3_fn(dom: &Domain, t: f64) -> VertexFn {
    let mut u = VertexFn::zeros(dom);
    u.set(dom.local_of_id("x2").expect("P3 domain"), t);
    u
}

fn problem_on(dom: Domain, json: &str) -> ProblemSpec {
    load_problem(&Arc::new(dom), json)
        .expect("fixture problem parses")
        .spec
}

/// `-Delta u = 1 + u^3` on `P3` (`alpha = 0`, `lambda = 1`): three classical
/// solutions `u(x2) in {1, (sqrt(5)-1)/2, -(1+sqrt(5))/2}`.
pub fn cubic_problem() -> ProblemSpec {
    problem_on(p3(), CUBIC_PROBLEM_JSON)
}

/// `-Delta u = |u| u` on `P3`: solutions `u(x2) in {0, 2, -2}` with the
/// nontrivial pair at equal energy `4/3`.
pub fn signed_square_problem() -> ProblemSpec {
    problem_on(p3(), SIGNED_SQUARE_PROBLEM_JSON)
}

/// `-Delta u = u^3` on `P3`: vanishes at zero, so the positive-part
/// truncation scheme applies; nonnegative solution `u(x2) = sqrt(2)`.
pub fn cube_problem() -> ProblemSpec {
    problem_on(p3(), CUBE_PROBLEM_JSON)
}

/// `-Delta u = u` on `P3`: linear, fails the growth check (used as the
/// negative control).
pub fn linear_problem() -> ProblemSpec {
    problem_on(p3(), LINEAR_PROBLEM_JSON)
}
