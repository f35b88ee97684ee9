//! End-to-end acceptance gate.
//!
//! Each test covers one acceptance criterion and prints a single
//! `acceptance NN <name>: PASS|FAIL` line (visible with `--nocapture`).
//! Every reference number is recomputed inside this file by a route that
//! does not share code with the library: closed forms, hand-assembled
//! eigenproblems, dense grid maximization, companion matrices, and
//! brute-force Newton iterations.

use graphelliptic::calculus::{
    check_parts_identity, dirichlet_energy, energy_inner_product, laplacian_fn,
};
use graphelliptic::fixtures;
use graphelliptic::graph::{Domain, VertexFn, WeightedGraph};
use graphelliptic::higher_order::{mp_energy, mp_operator_weak, mp_solve, HigherOrderError};
use graphelliptic::solvers::{
    find_all_solutions, solve_truncated, yamabe_solve, SolveOptions, SolverError,
};
use graphelliptic::spectral::{lambda1, lambda_mp, SpectralError};
use graphelliptic::variational::{
    embedding_residuals, energy, lambda_star, load_problem, unbounded_below_escape,
    verify_hypotheses, weak_form, ProblemSpec,
};
use graphelliptic::Tolerances;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

/// Runs one criterion body and prints its verdict line, repanicking on
/// failure so the test is still reported as failed by the harness.
fn criterion(label: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    println!(
        "acceptance {label}: {}",
        if outcome.is_ok() { "PASS" } else { "FAIL" }
    );
    if let Err(panic) = outcome {
        resume_unwind(panic);
    }
}

fn fixture_domains() -> Vec<(&'static str, Arc<Domain>)> {
    vec![
        ("three-path", Arc::new(fixtures::p3())),
        ("five-path", Arc::new(fixtures::p5())),
        ("three-leaf star", Arc::new(fixtures::s4())),
        ("seven-path window", Arc::new(fixtures::p7_window())),
    ]
}

const PROBLEM_FAMILIES: [(&str, &str); 4] = [
    ("cubic", fixtures::CUBIC_PROBLEM_JSON),
    ("signed square", fixtures::SIGNED_SQUARE_PROBLEM_JSON),
    ("pure cube", fixtures::CUBE_PROBLEM_JSON),
    ("linear", fixtures::LINEAR_PROBLEM_JSON),
];

// ---------------------------------------------------------------------------
// Test-local oracles
// ---------------------------------------------------------------------------

/// First Dirichlet eigenvalue from a hand-assembled symmetric reduction
/// `M^(-1/2) L M^(-1/2)` of the interior operator.
fn oracle_lambda1(dom: &Domain) -> f64 {
    let interior = dom.interior();
    let n = interior.len();
    let pos: std::collections::HashMap<usize, usize> =
        interior.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (i, &x) in interior.iter().enumerate() {
        let mut diag = 0.0;
        for &(y, w) in dom.neighbors_in(x) {
            diag += w;
            if let Some(&j) = pos.get(&y) {
                a[(i, j)] -= w / (dom.mu(x) * dom.mu(y)).sqrt();
            }
        }
        a[(i, i)] += diag / dom.mu(x);
    }
    a.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, &v| m.min(v))
}

/// Laplacian at one vertex straight from the adjacency data.
fn oracle_laplacian(dom: &Domain, u: &VertexFn, x: usize) -> f64 {
    let s: f64 = dom
        .neighbors_in(x)
        .iter()
        .map(|&(y, w)| w * (u.value(y) - u.value(x)))
        .sum();
    s / dom.mu(x)
}

/// Dirichlet energy as the plain sum over undirected in-domain edges.
fn oracle_dirichlet(dom: &Domain, u: &VertexFn) -> f64 {
    let mut acc = 0.0;
    for x in 0..dom.len() {
        for &(y, w) in dom.neighbors_in(x) {
            if y > x {
                let d = u.value(y) - u.value(x);
                acc += w * d * d;
            }
        }
    }
    acc
}

fn random_dirichlet(dom: &Domain, rng: &mut ChaCha8Rng, amp: f64) -> VertexFn {
    let vals: Vec<f64> = (0..dom.interior_count())
        .map(|_| rng.gen_range(-amp..amp))
        .collect();
    VertexFn::from_interior(dom, &vals)
}

fn random_full(dom: &Domain, rng: &mut ChaCha8Rng, amp: f64) -> VertexFn {
    VertexFn::from_values(dom, (0..dom.len()).map(|_| rng.gen_range(-amp..amp)).collect())
        .expect("length matches")
}

/// Random connected weighted graph on at most 12 vertices together with a
/// domain: either a proper connected subset (natural boundary) or the full
/// vertex set with a designated boundary.
fn random_domain(rng: &mut ChaCha8Rng) -> Domain {
    let n = rng.gen_range(3..=12usize);
    let vertices: Vec<(String, f64)> = (0..n)
        .map(|i| (format!("v{i}"), rng.gen_range(0.5..2.0)))
        .collect();
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    let mut present = std::collections::HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        present.insert((j, i));
        edges.push((format!("v{j}"), format!("v{i}"), rng.gen_range(0.5..2.0)));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !present.contains(&(i, j)) && rng.gen::<f64>() < 0.2 {
                edges.push((format!("v{i}"), format!("v{j}"), rng.gen_range(0.5..2.0)));
            }
        }
    }
    let graph = Arc::new(WeightedGraph::from_parts(&vertices, &edges).expect("valid graph"));

    if rng.gen::<bool>() {
        // Proper connected subset; its natural boundary is nonempty because
        // the ambient graph is connected.
        let target = rng.gen_range(2..n);
        let start = rng.gen_range(0..n);
        let mut chosen = vec![start];
        let mut seen = vec![false; n];
        seen[start] = true;
        for _ in 0..20 * n {
            if chosen.len() >= target {
                break;
            }
            let base = chosen[rng.gen_range(0..chosen.len())];
            let nbrs = graph.neighbors(base);
            let &(next, _) = &nbrs[rng.gen_range(0..nbrs.len())];
            if !seen[next] {
                seen[next] = true;
                chosen.push(next);
            }
        }
        let ids: Vec<String> = chosen.iter().map(|&g| graph.id(g).to_owned()).collect();
        if let Ok(dom) = Domain::decompose(&graph, &ids, None) {
            return dom;
        }
        // Fell through on an empty interior; use the designated variant.
    }
    let all: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let bd: Vec<String> = order[..rng.gen_range(1..n)]
        .iter()
        .map(|&i| format!("v{i}"))
        .collect();
    Domain::decompose(&graph, &all, Some(&bd)).expect("full set with designated boundary")
}

/// Real roots of `sum_k b[k] t^k` via the companion matrix, polished by
/// Newton. Returns `None` for ill-conditioned instances (near-multiple
/// roots, borderline complex pairs, out-of-range roots) so the caller can
/// resample.
fn oracle_poly_real_roots(b: &[f64]) -> Option<Vec<f64>> {
    let d = b.len() - 1;
    let lead = b[d];
    if lead.abs() < 1e-2 {
        return None;
    }
    let eval = |t: f64| b.iter().rev().fold(0.0, |acc, &c| acc * t + c);
    let deriv = |t: f64| {
        let mut acc = 0.0;
        for k in (1..=d).rev() {
            acc = acc * t + b[k] * k as f64;
        }
        acc
    };
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -b[i] / lead;
    }
    let mut roots = Vec::new();
    for z in comp.complex_eigenvalues().iter() {
        let scale = 1.0 + (z.re * z.re + z.im * z.im).sqrt();
        if z.im.abs() <= 1e-8 * scale {
            let mut t = z.re;
            for _ in 0..60 {
                let p = eval(t);
                let dp = deriv(t);
                if dp.abs() < 1e-6 {
                    return None;
                }
                let step = p / dp;
                t -= step;
                if step.abs() < 1e-15 * (1.0 + t.abs()) {
                    break;
                }
            }
            roots.push(t);
        } else if z.im.abs() < 3e-3 * scale {
            return None; // too close to the axis to classify safely
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    if roots.windows(2).any(|w| w[1] - w[0] < 1e-4) {
        return None;
    }
    if roots.iter().any(|r| r.abs() > 8.0 || deriv(*r).abs() < 1e-4) {
        return None;
    }
    Some(roots)
}

// ---------------------------------------------------------------------------
// 1. First-eigenvalue exactness
// ---------------------------------------------------------------------------

#[test]
fn a01_first_eigenvalue_exactness() {
    criterion("01 first-eigenvalue exactness", || {
        let budget = std::time::Duration::from_millis(100);

        let p3 = fixtures::p3();
        let start = Instant::now();
        let e3 = lambda1(&p3);
        assert!(start.elapsed() < budget, "three-path eigensolve too slow");
        assert_eq!(e3.lambda1, 2.0, "three-path eigenvalue must be exactly 2");

        let s4 = fixtures::s4();
        let start = Instant::now();
        let e4 = lambda1(&s4);
        assert!(start.elapsed() < budget, "star eigensolve too slow");
        assert_eq!(e4.lambda1, 3.0, "star eigenvalue must be exactly 3");

        let p5 = fixtures::p5();
        let start = Instant::now();
        let e5 = lambda1(&p5);
        assert!(start.elapsed() < budget, "five-path eigensolve too slow");
        let closed = 2.0 - 2.0_f64.sqrt();
        let dense = oracle_lambda1(&p5);
        assert!(
            (e5.lambda1 - closed).abs() <= 1e-10,
            "five-path eigenvalue {} vs closed form {closed}",
            e5.lambda1
        );
        assert!(
            (e5.lambda1 - dense).abs() <= 1e-10,
            "five-path eigenvalue {} vs dense oracle {dense}",
            e5.lambda1
        );

        // Same agreement on the remaining fixture for good measure.
        let p7 = fixtures::p7_window();
        let e7 = lambda1(&p7);
        assert!((e7.lambda1 - oracle_lambda1(&p7)).abs() <= 1e-10);
    });
}

// ---------------------------------------------------------------------------
// 2. Summation by parts
// ---------------------------------------------------------------------------

#[test]
fn a02_summation_by_parts_identity() {
    criterion("02 summation-by-parts identity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        for case in 0..1000 {
            let dom = random_domain(&mut rng);
            let u = random_full(&dom, &mut rng, 1.0);
            let v = random_dirichlet(&dom, &mut rng, 1.0);
            let bound = 1e-12 * (1.0 + u.sup_norm() * v.sup_norm());

            // Library route.
            let residual = check_parts_identity(&dom, &u, &v).expect("matching domain");
            assert!(
                residual <= bound,
                "case {case}: library identity residual {residual:.3e} > {bound:.3e}"
            );

            // Local route: edge double sum against the vertex sum.
            let mut gamma = 0.0;
            for x in 0..dom.len() {
                for &(y, w) in dom.neighbors_in(x) {
                    if y > x {
                        gamma += w * (u.value(y) - u.value(x)) * (v.value(y) - v.value(x));
                    }
                }
            }
            let lap_v: f64 = (0..dom.len())
                .map(|x| dom.mu(x) * oracle_laplacian(&dom, &u, x) * v.value(x))
                .sum();
            assert!(
                (gamma + lap_v).abs() <= bound,
                "case {case}: local identity residual {:.3e}",
                (gamma + lap_v).abs()
            );

            // The two routes share the same Laplacian values.
            let lap = laplacian_fn(&dom, &u).expect("matching domain");
            for x in 0..dom.len() {
                let diff = (lap.value(x) - oracle_laplacian(&dom, &u, x)).abs();
                assert!(diff <= 1e-12 * (1.0 + u.sup_norm()));
            }
        }
    });
}

// ---------------------------------------------------------------------------
// 3. Embedding inequalities
// ---------------------------------------------------------------------------

#[test]
fn a03_sup_and_lnu_embeddings() {
    criterion("03 sup and L^nu embeddings", || {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        let nus = [1.5, 2.0, 3.0, 6.0];
        for (name, dom) in fixture_domains() {
            let lam = lambda1(&dom).lambda1;
            let lam_oracle = oracle_lambda1(&dom);
            for i in 0..1000 {
                let u = random_dirichlet(&dom, &mut rng, 1.0);
                let nu = nus[i % nus.len()];

                // Library route; negated residual is the slack.
                let (sup_res, lnu_res) = embedding_residuals(&dom, lam, &u, nu);
                assert!(sup_res <= 1e-12, "{name}: sup slack {:.3e}", -sup_res);
                assert!(lnu_res <= 1e-12, "{name}: L^nu slack {:.3e}", -lnu_res);

                // Local route from the edge sums and the dense eigenvalue.
                let bound =
                    oracle_dirichlet(&dom, &u).sqrt() / (dom.mu_min() * lam_oracle.sqrt());
                let sup = (0..dom.len()).fold(0.0_f64, |m, l| m.max(u.value(l).abs()));
                assert!(sup <= bound + 1e-12, "{name}: sup {sup} vs bound {bound}");
                let lnu = (0..dom.len())
                    .map(|l| dom.mu(l) * u.value(l).abs().powf(nu))
                    .sum::<f64>()
                    .powf(1.0 / nu);
                assert!(lnu <= dom.volume().powf(1.0 / nu) * bound + 1e-12);
            }
        }

        // Tightness: the middle bump on the three-path attains the sup bound
        // exactly (energy 2, eigenvalue 2, unit measure).
        let p3 = fixtures::p3();
        let bump = fixtures::p3_fn(&p3, 1.0);
        let (sup_res, _) = embedding_residuals(&p3, lambda1(&p3).lambda1, &bump, 2.0);
        assert_eq!(sup_res, 0.0, "middle bump must attain equality");
    });
}

// ---------------------------------------------------------------------------
// 4. Energy gradient against central differences
// ---------------------------------------------------------------------------

#[test]
fn a04_energy_gradient_consistency() {
    criterion("04 energy gradient vs central differences", || {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let h = 1e-5;
        for (dom_name, dom) in fixture_domains() {
            for (fam_name, json) in PROBLEM_FAMILIES {
                let spec = load_problem(&dom, json).expect("fixture problem").spec;
                for case in 0..500 {
                    let u = random_dirichlet(&dom, &mut rng, 1.0);
                    let v = random_dirichlet(&dom, &mut rng, 1.0);
                    let shift = |s: f64| {
                        VertexFn::from_values(
                            &dom,
                            u.values()
                                .iter()
                                .zip(v.values())
                                .map(|(a, b)| a + s * b)
                                .collect(),
                        )
                        .expect("length matches")
                    };
                    let central =
                        (energy(&spec, &shift(h)) - energy(&spec, &shift(-h))) / (2.0 * h);
                    let exact = weak_form(&spec, &u, &v);
                    assert!(
                        (exact - central).abs() <= 1e-6 * (1.0 + central.abs()),
                        "{dom_name}/{fam_name} case {case}: gradient {exact} vs \
                         central difference {central}"
                    );
                }
            }
        }
    });
}

// ---------------------------------------------------------------------------
// 5. Multiplicity on the cubic fixture
// ---------------------------------------------------------------------------

/// Coupling threshold for the cubic fixture by dense grid plus ternary
/// refinement of `z -> mu0^2 lambda_1 z^2 / max_{|t|<=z} |F(t)|`. On this
/// nonlinearity `F(t) = t + t^4/4` is increasing and dominant on `t >= 0`,
/// so the inner maximum is exactly `F(z)`.
fn oracle_cubic_threshold() -> f64 {
    let g = |z: f64| 2.0 * z * z / (z + z.powi(4) / 4.0);
    let (mut best_z, mut best) = (0.0, 0.0);
    let mut z = 1e-3;
    while z <= 5.0 {
        if g(z) > best {
            best = g(z);
            best_z = z;
        }
        z += 1e-3;
    }
    let (mut lo, mut hi) = (best_z - 2e-3, best_z + 2e-3);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    g(0.5 * (lo + hi))
}

#[test]
fn a05_cubic_multiplicity_with_threshold() {
    criterion("05 cubic multiplicity below the threshold", || {
        let spec = fixtures::cubic_problem();
        let tol = Tolerances::default();

        let sqrt5 = 5.0_f64.sqrt();
        let golden = [-(1.0 + sqrt5) / 2.0, (sqrt5 - 1.0) / 2.0, 1.0];
        for r in golden {
            assert!(
                (r.powi(3) - 2.0 * r + 1.0).abs() <= 1e-12,
                "closed-form root {r} fails its own equation"
            );
        }

        let oracle = oracle_cubic_threshold();
        let closed = (4.0 / 3.0) * 2.0_f64.powf(1.0 / 3.0);

        // The runtime budget covers the library work: threshold plus solve.
        let start = Instant::now();
        let lstar = lambda_star(&spec, &tol).expect("threshold");
        assert!(
            ((lstar - oracle) / oracle).abs() <= 1e-8,
            "threshold {lstar} vs grid oracle {oracle}"
        );
        assert!(((lstar - closed) / closed).abs() <= 1e-8);
        assert!(spec.lambda < lstar, "the fixture coupling must be admissible");

        let report = find_all_solutions(&spec, &SolveOptions::default()).expect("solve");
        let solve_time = start.elapsed();
        assert_eq!(report.solutions.len(), 3, "expected exactly three solutions");
        let x2 = spec.domain.local_of_id("x2").unwrap();
        let mut got: Vec<f64> = report.solutions.iter().map(|s| s.u.value(x2)).collect();
        got.sort_by(|a, b| a.total_cmp(b));
        for (g, r) in got.iter().zip(&golden) {
            assert!((g - r).abs() <= 1e-8, "root {g} vs {r}");
        }
        for s in &report.solutions {
            assert!(s.u.sup_norm() > 1e-6, "trivial function slipped through");
        }
        let inside: Vec<&_> = report
            .solutions
            .iter()
            .filter(|s| s.alpha_norm_sq < 1.0)
            .collect();
        assert!(
            !inside.is_empty(),
            "no solution inside the unit ball of the alpha norm"
        );
        // The small positive root carries alpha-norm-squared 2 t^2 = 3 - sqrt(5).
        let small = (sqrt5 - 1.0) / 2.0;
        assert!(inside
            .iter()
            .any(|s| (s.alpha_norm_sq - 2.0 * small * small).abs() <= 1e-9));

        assert!(
            solve_time < std::time::Duration::from_secs(1),
            "multiplicity run took {solve_time:?}, exceeding one second"
        );
    });
}

// ---------------------------------------------------------------------------
// 6. Positive solutions of the power problem
// ---------------------------------------------------------------------------

/// Symmetric positive solution `(a, b, a)` of `-Delta u = u^2` on the
/// five-path interior, by residual grid search plus Newton on
/// `(2a - b - a^2, 2b - 2a - b^2)`.
fn oracle_five_path_square() -> (f64, f64) {
    let f = |a: f64, b: f64| (2.0 * a - b - a * a, 2.0 * b - 2.0 * a - b * b);
    let (mut a, mut b, mut best) = (0.0, 0.0, f64::INFINITY);
    for i in 1..=60 {
        for j in 1..=60 {
            let (x, y) = (0.05 * i as f64, 0.05 * j as f64);
            let (r1, r2) = f(x, y);
            let r = r1 * r1 + r2 * r2;
            if r < best {
                best = r;
                a = x;
                b = y;
            }
        }
    }
    for _ in 0..80 {
        let (r1, r2) = f(a, b);
        // Jacobian [[2 - 2a, -1], [-2, 2 - 2b]].
        let (j11, j12, j21, j22) = (2.0 - 2.0 * a, -1.0, -2.0, 2.0 - 2.0 * b);
        let det = j11 * j22 - j12 * j21;
        a -= (j22 * r1 - j12 * r2) / det;
        b -= (j11 * r2 - j21 * r1) / det;
    }
    let (r1, r2) = f(a, b);
    assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12, "oracle did not converge");
    // Cross-check: eliminating b gives a^3 - 4a^2 + 6a - 2 = 0.
    assert!((a.powi(3) - 4.0 * a * a + 6.0 * a - 2.0).abs() < 1e-10);
    (a, b)
}

#[test]
fn a06_positive_solutions() {
    criterion("06 positive solutions of the power problem", || {
        let opts = SolveOptions::default();
        let p3 = Arc::new(fixtures::p3());
        let x2 = p3.local_of_id("x2").unwrap();

        // Closed forms on the three-path: 2t = t^2 gives 2; 2t = t + t^3
        // gives 1.
        let (sol, _) = yamabe_solve(&p3, 0.0, 3.0, &opts).expect("positive solution");
        assert!((sol.u.value(x2) - 2.0).abs() <= 1e-10, "{}", sol.u.value(x2));
        let (sol, _) = yamabe_solve(&p3, 1.0, 4.0, &opts).expect("positive solution");
        assert!((sol.u.value(x2) - 1.0).abs() <= 1e-10, "{}", sol.u.value(x2));

        // Five-path against the grid-plus-Newton oracle.
        let p5 = Arc::new(fixtures::p5());
        let (sol, _) = yamabe_solve(&p5, 0.0, 3.0, &opts).expect("positive solution");
        for &l in p5.interior() {
            assert!(sol.u.value(l) > 0.0, "interior value not strictly positive");
        }
        let (a, b) = oracle_five_path_square();
        let expect = [("x2", a), ("x3", b), ("x4", a)];
        for (id, want) in expect {
            let got = sol.u.value(p5.local_of_id(id).unwrap());
            assert!((got - want).abs() <= 1e-8, "{id}: {got} vs oracle {want}");
        }

        // The spectral gate is enforced.
        for gamma in [2.0, 2.5] {
            assert!(matches!(
                yamabe_solve(&p3, gamma, 3.0, &opts),
                Err(SolverError::HypothesisViolated { .. })
            ));
        }
    });
}

// ---------------------------------------------------------------------------
// 7. Positive-part truncation
// ---------------------------------------------------------------------------

#[test]
fn a07_nonnegative_truncation() {
    criterion("07 nonnegative solution via truncation", || {
        let spec = fixtures::cube_problem();
        let (sol, _) = solve_truncated(&spec, &SolveOptions::default()).expect("solve");
        let x2 = spec.domain.local_of_id("x2").unwrap();
        // 2t = t^3 on the positive axis gives sqrt(2).
        assert!(
            (sol.u.value(x2) - 2.0_f64.sqrt()).abs() <= 1e-10,
            "{}",
            sol.u.value(x2)
        );
        assert!(sol.u.sup_norm() > 1e-9, "solution must be nontrivial");
        // The negative part vanishes identically.
        let neg_sup = (0..spec.domain.len())
            .map(|l| (-sol.u.value(l)).max(0.0))
            .fold(0.0_f64, f64::max);
        assert_eq!(neg_sup, 0.0, "negative part must be identically zero");
    });
}

// ---------------------------------------------------------------------------
// 8. Root completeness on one-interior-vertex fixtures
// ---------------------------------------------------------------------------

#[test]
fn a08_one_interior_root_completeness() {
    criterion("08 solver completeness vs companion roots", || {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        let doms = [Arc::new(fixtures::p3()), Arc::new(fixtures::s4())];
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        while accepted < 50 {
            attempts += 1;
            assert!(attempts < 5000, "resampling loop stuck");
            let dom = &doms[accepted % 2];
            let x = dom.interior()[0];
            let ratio = dom.degree_in(x) / dom.mu(x);

            let deg = rng.gen_range(1..=5usize);
            let mut coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            coeffs[deg] = sign * rng.gen_range(0.3..2.0);

            // Classical equation at the only interior vertex:
            // (deg_w/mu) t = f(t), i.e. f(t) - (deg_w/mu) t = 0.
            let mut poly = coeffs.clone();
            poly[1] -= ratio;
            let Some(roots) = oracle_poly_real_roots(&poly) else {
                continue;
            };
            accepted += 1;

            let terms: Vec<String> = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{{\"c\":{c:?},\"kind\":\"pow\",\"k\":{k}}}"))
                .collect();
            let json = format!(
                "{{\"alpha\":0.0,\"lambda\":1.0,\"f\":{{\"terms\":[{}]}}}}",
                terms.join(",")
            );
            let spec = load_problem(dom, &json).expect("generated problem").spec;
            let opts = SolveOptions {
                seed: 0,
                budget: 128,
                radius: Some(16.0),
                tol: Tolerances::default(),
            };
            match find_all_solutions(&spec, &opts) {
                Ok(report) => {
                    let mut got: Vec<f64> =
                        report.solutions.iter().map(|s| s.u.value(x)).collect();
                    got.sort_by(|a, b| a.total_cmp(b));
                    assert_eq!(
                        got.len(),
                        roots.len(),
                        "instance {accepted}: solver found {got:?}, oracle {roots:?}"
                    );
                    for (g, r) in got.iter().zip(&roots) {
                        assert!(
                            (g - r).abs() <= 1e-8,
                            "instance {accepted}: {g} vs oracle root {r}"
                        );
                    }
                }
                Err(SolverError::NonConvergence) => {
                    assert!(
                        roots.is_empty(),
                        "instance {accepted}: solver converged nowhere, oracle {roots:?}"
                    );
                }
                Err(e) => panic!("instance {accepted}: unexpected error {e}"),
            }
        }
    });
}

// ---------------------------------------------------------------------------
// 9. First-order reduction of the higher-order machinery
// ---------------------------------------------------------------------------

#[test]
fn a09_first_order_reduction() {
    criterion("09 higher-order machinery at order (1, 2)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        for (name, dom) in fixture_domains() {
            // Eigenvalue agreement.
            let base = lambda1(&dom).lambda1;
            let mp = lambda_mp(&dom, 1, 2.0).expect("order 1");
            assert!(
                (mp.lambda - base).abs() <= 1e-9,
                "{name}: lambda {} vs {base}",
                mp.lambda
            );
            assert!(mp.exact);

            // Norms, pairings, energies on random functions.
            let spec = load_problem(&dom, fixtures::CUBIC_PROBLEM_JSON)
                .expect("fixture problem")
                .spec;
            for _ in 0..200 {
                let u = random_full(&dom, &mut rng, 1.0);
                let v = random_full(&dom, &mut rng, 1.0);
                let nsq = graphelliptic::higher_order::wmp_norm(&dom, &u, 1, 2.0).powi(2);
                let dir = dirichlet_energy(&dom, &u).expect("matching domain");
                assert!((nsq - dir).abs() <= 1e-12 * (1.0 + dir.abs()));
                let pair = mp_operator_weak(&dom, &u, &v, 1, 2.0).expect("p = 2");
                let inner = energy_inner_product(&dom, &u, &v).expect("matching domain");
                assert!((pair - inner).abs() <= 1e-12 * (1.0 + inner.abs()));
                let ej = energy(&spec, &u);
                let mj = mp_energy(&spec, &u, 1, 2.0);
                assert!((mj - ej).abs() <= 1e-12 * (1.0 + ej.abs()));
            }

            // Solution sets coincide. The budget is high enough that both
            // multistarts saturate the full critical set on every fixture.
            let opts = SolveOptions {
                seed: 0,
                budget: 1024,
                radius: Some(8.0),
                tol: Tolerances::default(),
            };
            let base_report = find_all_solutions(&spec, &opts).expect("base solve");
            let mp_report = mp_solve(&spec, 1, 2.0, &opts).expect("order-1 solve");
            assert_eq!(
                mp_report.solutions.len(),
                base_report.solutions.len(),
                "{name}: base found {}, order-1 found {}",
                base_report.solutions.len(),
                mp_report.solutions.len()
            );
            let mut used = vec![false; base_report.solutions.len()];
            for ms in &mp_report.solutions {
                let hit = base_report.solutions.iter().enumerate().find(|(i, bs)| {
                    !used[*i] && ms.u.sup_distance(&bs.u) <= 1e-8
                });
                let (i, _) = hit.unwrap_or_else(|| {
                    panic!("{name}: unmatched order-1 solution (energy {})", ms.energy)
                });
                used[i] = true;
            }
        }

        // Order 2 on the three-path has no admissible nonzero function.
        assert!(matches!(
            lambda_mp(&fixtures::p3(), 2, 2.0),
            Err(SpectralError::TrivialConstraintClass)
        ));
        assert!(matches!(
            mp_solve(&fixtures::cubic_problem(), 2, 2.0, &SolveOptions::default()),
            Err(HigherOrderError::TrivialConstraintClass { m: 2 })
        ));
    });
}

// ---------------------------------------------------------------------------
// 10. Unboundedness below along the indicator ray
// ---------------------------------------------------------------------------

#[test]
fn a10_energy_unbounded_below() {
    criterion("10 energy unbounded below on verified problems", || {
        // Local primitives F for the fixture nonlinearities.
        let problems: [(&str, ProblemSpec, fn(f64) -> f64); 4] = [
            ("cubic", fixtures::cubic_problem(), |t| t + t.powi(4) / 4.0),
            ("signed square", fixtures::signed_square_problem(), |t| {
                t.abs().powi(3) / 3.0
            }),
            ("pure cube", fixtures::cube_problem(), |t| t.powi(4) / 4.0),
            ("linear", fixtures::linear_problem(), |t| t * t / 2.0),
        ];
        let tol = Tolerances::default();
        let mut verified = 0usize;
        for (name, spec, f_primitive) in problems {
            let report = verify_hypotheses(&spec, &tol);
            let pass = report.ar.as_ref().map(|a| a.pass).unwrap_or(false);
            if name == "linear" {
                assert!(!pass, "the linear control must fail the growth check");
                continue;
            }
            assert!(pass, "{name}: growth check unexpectedly failed");
            verified += 1;

            let dom = &spec.domain;
            let u0 = VertexFn::interior_indicator(dom);
            let (t, j) = unbounded_below_escape(&spec, &u0, -1e6, 1e6)
                .unwrap_or_else(|| panic!("{name}: no escape below -1e6 for t <= 1e6"));
            assert!(t <= 1e6 && j < -1e6);

            // Local energy at the same scale: alpha vanishes on these
            // fixtures, so J(t u0) = t^2 E(u0)/2 - sum mu F(t u0).
            let scaled = u0.scaled(t);
            let local = oracle_dirichlet(dom, &scaled) / 2.0
                - (0..dom.len())
                    .map(|l| dom.mu(l) * f_primitive(scaled.value(l)))
                    .sum::<f64>();
            assert!((local - j).abs() <= 1e-9 * (1.0 + j.abs()));
            assert!(local < -1e6);
        }
        assert_eq!(verified, 3, "three fixtures carry growth certificates");
    });
}

// ---------------------------------------------------------------------------
// 11. Determinism
// ---------------------------------------------------------------------------

fn run_binary(args: &[&str], threads: Option<&str>) -> String {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_graphelliptic"));
    cmd.args(args).env_remove("GRAPHELLIPTIC_THREADS");
    if let Some(t) = threads {
        cmd.env("GRAPHELLIPTIC_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "binary failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn a11_deterministic_outputs() {
    criterion("11 deterministic solve and sweep output", || {
        let dir = std::env::temp_dir();
        let gpath = dir.join(format!("graphelliptic-acc-{}-graph.json", std::process::id()));
        let ppath = dir.join(format!("graphelliptic-acc-{}-problem.json", std::process::id()));
        std::fs::write(&gpath, fixtures::P3_JSON).expect("write graph");
        std::fs::write(&ppath, fixtures::CUBIC_PROBLEM_JSON).expect("write problem");
        let g = gpath.to_str().unwrap();
        let p = ppath.to_str().unwrap();

        let solve_args = ["solve", g, p, "--seed", "7", "--budget", "48"];
        let first = run_binary(&solve_args, None);
        let second = run_binary(&solve_args, None);
        assert!(!first.is_empty());
        assert_eq!(first, second, "solve output must be byte-identical");

        // Library route with a distinct seed, twice.
        let args = graphelliptic::cli::SolveArgs {
            seed: 23,
            budget: 48,
            ..Default::default()
        };
        let one = graphelliptic::cli::cmd_solve(fixtures::P3_JSON, fixtures::CUBIC_PROBLEM_JSON, &args)
            .expect("solve");
        let two = graphelliptic::cli::cmd_solve(fixtures::P3_JSON, fixtures::CUBIC_PROBLEM_JSON, &args)
            .expect("solve");
        assert_eq!(one, two);

        let sweep_args = [
            "sweep",
            g,
            p,
            "--lambda-grid",
            "0.5:2.0:7",
            "--seed",
            "3",
            "--budget",
            "24",
        ];
        let narrow = run_binary(&sweep_args, Some("1"));
        let wide = run_binary(&sweep_args, Some("8"));
        assert_eq!(narrow, wide, "sweep must not depend on the thread count");
        assert!(narrow.starts_with("lambda,n_solutions,min_energy,lambda_star,admissible\n"));

        let _ = std::fs::remove_file(&gpath);
        let _ = std::fs::remove_file(&ppath);
    });
}
