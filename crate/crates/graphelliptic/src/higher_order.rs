//! Higher-order calculus: iterated Laplacians, the slopes `|grad^k u|`, the
//! `W^{m,p}_0` norms and poly-Laplacian weak forms, the constraint class
//! `C_0^m(D)`, and a solver for `(m, p)` problems
//! `poly-Laplacian u = lambda f(x, u)` over that class.
//!
//! The constraint class consists of the functions whose slopes of order
//! `0 .. m-1` vanish on the boundary. Each vanishing condition is linear —
//! even orders pin an iterated Laplacian to zero at a boundary vertex, odd
//! orders force the previous iterate to be constant across the boundary
//! vertex's edges — so the class is a linear subspace, computed here as an
//! orthonormal null-space basis of the stacked constraint matrix. The class
//! can collapse to `{0}` (for instance `m = 2` on the 3-path), which is
//! reported as [`HigherOrderError::TrivialConstraintClass`] rather than
//! silently producing the zero solution.
//!
//! For `m = 1`, `p = 2` everything here reduces to the first-order theory:
//! the norm is the Dirichlet energy, the weak form is the energy inner
//! product, and [`mp_solve`] finds the same solutions as
//! [`crate::solvers::find_all_solutions`].

use crate::calculus::{gradient_form, laplacian_fn, slope};
use crate::graph::{Domain, VertexFn};
use crate::solvers::SolveOptions;
use crate::variational::{potential_integral, ProblemSpec};
use crate::Tolerances;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HigherOrderError {
    #[error("constraint class C_0^{m}(D) contains only the zero function")]
    TrivialConstraintClass { m: u32 },
    #[error("weak form is singular for p < 2: |grad^m u| vanishes at vertex {vertex:?}")]
    ZeroSlopeSingularity { vertex: String },
    #[error("the higher-order solver requires alpha = 0")]
    AlphaUnsupported,
    #[error("no attempt converged within the restart budget")]
    NonConvergence,
}

/// `Delta^j u`, every application restricted to the domain.
pub fn iterated_laplacian(dom: &Domain, u: &VertexFn, j: u32) -> VertexFn {
    let mut g = u.clone();
    for _ in 0..j {
        g = laplacian_fn(dom, &g).expect("matching domain");
    }
    g
}

/// The order-`k` slope `|grad^k u|` as a vertex function:
/// `|Delta^(k/2) u|` for even `k`, `|grad Delta^((k-1)/2) u|` for odd `k`,
/// and `|u|` for `k = 0`.
pub fn higher_slope(dom: &Domain, u: &VertexFn, k: u32) -> VertexFn {
    if k == 0 {
        let mut v = u.clone();
        for l in 0..dom.len() {
            v.set(l, u.value(l).abs());
        }
        return v;
    }
    if k % 2 == 0 {
        let g = iterated_laplacian(dom, u, k / 2);
        let mut v = VertexFn::zeros(dom);
        for l in 0..dom.len() {
            v.set(l, g.value(l).abs());
        }
        v
    } else {
        let g = iterated_laplacian(dom, u, (k - 1) / 2);
        let mut v = VertexFn::zeros(dom);
        for l in 0..dom.len() {
            v.set(l, slope(dom, &g, l).expect("matching domain"));
        }
        v
    }
}

/// `||u||_{W^{m,p}_0} = (integral |grad^m u|^p dmu)^(1/p)`.
pub fn wmp_norm(dom: &Domain, u: &VertexFn, m: u32, p: f64) -> f64 {
    let s = higher_slope(dom, u, m);
    (0..dom.len())
        .map(|l| dom.mu(l) * s.value(l).powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Per-vertex pairing terms: `(Delta^(m/2) u)(Delta^(m/2) v)` for even `m`,
/// `Gamma(Delta^((m-1)/2) u, Delta^((m-1)/2) v)` for odd `m`.
fn pairing_terms(dom: &Domain, u: &VertexFn, v: &VertexFn, m: u32) -> Vec<f64> {
    if m % 2 == 0 {
        let gu = iterated_laplacian(dom, u, m / 2);
        let gv = iterated_laplacian(dom, v, m / 2);
        (0..dom.len()).map(|l| gu.value(l) * gv.value(l)).collect()
    } else {
        let gu = iterated_laplacian(dom, u, (m - 1) / 2);
        let gv = iterated_laplacian(dom, v, (m - 1) / 2);
        (0..dom.len())
            .map(|l| gradient_form(dom, &gu, &gv, l).expect("matching domain"))
            .collect()
    }
}

/// Weak poly-Laplacian pairing — the Gateaux derivative of
/// `(1/p) ||u||^p_{W^{m,p}_0}` in direction `v`:
///
/// * odd `m`: `integral |grad^m u|^(p-2) Gamma(Delta^((m-1)/2) u,
///   Delta^((m-1)/2) v) dmu`;
/// * even `m`: `integral |grad^m u|^(p-2) (Delta^(m/2) u)(Delta^(m/2) v)
///   dmu`.
///
/// For `p < 2` the weight is infinite wherever the slope vanishes, so the
/// exact form refuses such inputs with
/// [`HigherOrderError::ZeroSlopeSingularity`]; use
/// [`mp_operator_weak_regularized`] in that regime. (For `p >= 2` a
/// vanishing slope forces the pairing term to vanish too, so those vertices
/// simply drop out.)
pub fn mp_operator_weak(
    dom: &Domain,
    u: &VertexFn,
    v: &VertexFn,
    m: u32,
    p: f64,
) -> Result<f64, HigherOrderError> {
    let s = higher_slope(dom, u, m);
    let pair = pairing_terms(dom, u, v, m);
    let mut acc = 0.0;
    for l in 0..dom.len() {
        let sl = s.value(l);
        if sl == 0.0 {
            if p < 2.0 {
                return Err(HigherOrderError::ZeroSlopeSingularity {
                    vertex: dom.id_of(l).to_owned(),
                });
            }
            continue; // pairing vanishes with the slope
        }
        let weight = if p == 2.0 { 1.0 } else { sl.powf(p - 2.0) };
        acc += dom.mu(l) * weight * pair[l];
    }
    Ok(acc)
}

/// Regularized weak pairing: the weight `|grad^m u|^(p-2)` is replaced by
/// `(|grad^m u|^2 + eps^2)^((p-2)/2)`, which is finite for every `p > 1`.
pub fn mp_operator_weak_regularized(
    dom: &Domain,
    u: &VertexFn,
    v: &VertexFn,
    m: u32,
    p: f64,
    eps: f64,
) -> f64 {
    let s = higher_slope(dom, u, m);
    let pair = pairing_terms(dom, u, v, m);
    (0..dom.len())
        .map(|l| {
            let w = (s.value(l) * s.value(l) + eps * eps).powf((p - 2.0) / 2.0);
            dom.mu(l) * w * pair[l]
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Matrix of `u -> Delta_mu u` on the full domain coordinates.
pub(crate) fn mu_laplacian_matrix(dom: &Domain) -> DMatrix<f64> {
    let n = dom.len();
    let mut t = DMatrix::zeros(n, n);
    for x in 0..n {
        let inv_mu = 1.0 / dom.mu(x);
        for &(y, w) in dom.neighbors_in(x) {
            t[(x, y)] += w * inv_mu;
            t[(x, x)] -= w * inv_mu;
        }
    }
    t
}

/// Full-domain stiffness `K` with `u^T K v = integral Gamma(u, v) dmu`.
pub(crate) fn full_stiffness_matrix(dom: &Domain) -> DMatrix<f64> {
    let n = dom.len();
    let mut k = DMatrix::zeros(n, n);
    for x in 0..n {
        for &(y, w) in dom.neighbors_in(x) {
            k[(x, y)] -= w;
            k[(x, x)] += w;
        }
    }
    k
}

/// Orthonormal basis of the constraint class `C_0^m(D)` (columns over the
/// full domain coordinates), or `None` when the class is `{0}`. Expects
/// `m >= 1`.
///
/// Constraints, for each boundary vertex `x` and order `j = 0 .. m-1`:
/// even `j` — `Delta^(j/2) u(x) = 0`; odd `j` — `Delta^((j-1)/2) u(y) =
/// Delta^((j-1)/2) u(x)` for every domain neighbor `y` of `x`. The order-0
/// conditions are imposed structurally — the null space is computed in
/// interior coordinates — so basis functions vanish exactly on the boundary.
pub fn constraint_class_basis(dom: &Domain, m: u32, tol: &Tolerances) -> Option<DMatrix<f64>> {
    let n = dom.len();
    let interior = dom.interior();
    let ni = interior.len();
    if ni == 0 {
        return None;
    }
    let t = mu_laplacian_matrix(dom);
    let restrict = |row: nalgebra::RowDVector<f64>| -> DVector<f64> {
        DVector::from_iterator(ni, interior.iter().map(|&l| row[l]))
    };
    let mut power = DMatrix::identity(n, n); // T^(j/2) as j advances
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for j in 1..m {
        if j % 2 == 0 {
            power = &t * &power;
            for &x in dom.boundary() {
                rows.push(restrict(power.row(x).into_owned()));
            }
        } else {
            for &x in dom.boundary() {
                for &(y, _) in dom.neighbors_in(x) {
                    rows.push(restrict((power.row(y) - power.row(x)).into_owned()));
                }
            }
        }
    }
    // Pad with zero rows so the thin SVD carries the full set of right
    // singular vectors (the padding changes neither rank nor null space).
    let mut c = DMatrix::zeros(rows.len().max(ni), ni);
    for (i, r) in rows.iter().enumerate() {
        c.row_mut(i).copy_from(&r.transpose());
    }
    let svd = c.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol.rank_rel * smax.max(1.0))
        .count();
    let dim = ni - rank;
    if dim == 0 {
        return None;
    }
    // Rows rank.. of V^T span the null space; orthonormal by construction.
    let mut basis = DMatrix::zeros(n, dim);
    for k in 0..dim {
        for (i, &l) in interior.iter().enumerate() {
            basis[(l, k)] = v_t[(rank + k, i)];
        }
    }
    Some(basis)
}

// ---------------------------------------------------------------------------
// Energy and solve over the constraint class
// ---------------------------------------------------------------------------

/// Higher-order energy `J(u) = ||u||^p_{W^{m,p}_0} / (p lambda) -
/// integral F(x, u) dmu`.
pub fn mp_energy(spec: &ProblemSpec, u: &VertexFn, m: u32, p: f64) -> f64 {
    wmp_norm(&spec.domain, u, m, p).powf(p) / (p * spec.lambda)
        - potential_integral(spec, u)
}

#[derive(Debug, Clone)]
pub struct MpSolution {
    pub u: VertexFn,
    pub energy: f64,
    /// Sup norm of the energy gradient projected onto the constraint class.
    pub projected_residual: f64,
}

#[derive(Debug)]
pub struct MpSolveReport {
    pub solutions: Vec<MpSolution>,
    pub class_dim: usize,
    pub attempts: usize,
    pub converged: usize,
}

/// Dual vector of the weak pairing: `a_vec(u)[x] = a_p(u, e_x)`, so that
/// `a_p(u, v) = sum_x a_vec[x] v(x)`. Uses the regularized weight for
/// `p < 2`.
pub(crate) fn mp_dual_vector(
    dom: &Domain,
    t: &DMatrix<f64>,
    u: &DVector<f64>,
    m: u32,
    p: f64,
    tol: &Tolerances,
) -> DVector<f64> {
    let n = dom.len();
    let uf = VertexFn::from_values(dom, u.as_slice().to_vec()).expect("matching length");
    let s = higher_slope(dom, &uf, m);
    let weight = |l: usize| -> f64 {
        if p == 2.0 {
            1.0
        } else if p > 2.0 {
            s.value(l).powf(p - 2.0)
        } else {
            let eps = tol.regularize_eps;
            (s.value(l) * s.value(l) + eps * eps).powf((p - 2.0) / 2.0)
        }
    };
    if m % 2 == 0 {
        // a_vec = (T^(m/2))^T (mu . W . Delta^(m/2) u)
        let k = m / 2;
        let mut g = u.clone();
        for _ in 0..k {
            g = t * g;
        }
        let mut rhs = DVector::zeros(n);
        for l in 0..n {
            rhs[l] = dom.mu(l) * weight(l) * g[l];
        }
        for _ in 0..k {
            rhs = t.transpose() * rhs;
        }
        rhs
    } else {
        // a_vec = (T^k)^T K_W (T^k u) with edge weights scaled by the mean
        // of the endpoint slope weights.
        let k = (m - 1) / 2;
        let mut g = u.clone();
        for _ in 0..k {
            g = t * g;
        }
        let mut kw: DMatrix<f64> = DMatrix::zeros(n, n);
        for x in 0..n {
            for &(y, w) in dom.neighbors_in(x) {
                let we = w * 0.5 * (weight(x) + weight(y));
                kw[(x, y)] -= we;
                kw[(x, x)] += we;
            }
        }
        let mut rhs = &kw * g;
        for _ in 0..k {
            rhs = t.transpose() * rhs;
        }
        rhs
    }
}

/// Finds critical points of the higher-order energy over the constraint
/// class by deflated Newton on the class coordinates (finite-difference
/// Jacobian), with seeded restarts as in the first-order solver. Requires
/// `alpha = 0`; for `m = 1`, `p = 2` the critical points coincide with the
/// classical solutions of the first-order problem.
pub fn mp_solve(
    spec: &ProblemSpec,
    m: u32,
    p: f64,
    opts: &SolveOptions,
) -> Result<MpSolveReport, HigherOrderError> {
    let tol = &opts.tol;
    let dom = &spec.domain;
    if (0..dom.len()).any(|l| spec.alpha.at(l) != 0.0) {
        return Err(HigherOrderError::AlphaUnsupported);
    }
    let basis = constraint_class_basis(dom, m, tol)
        .ok_or(HigherOrderError::TrivialConstraintClass { m })?;
    let dim = basis.ncols();
    let t = mu_laplacian_matrix(dom);

    // Gradient of J in class coordinates.
    let grad = |c: &DVector<f64>| -> DVector<f64> {
        let u = &basis * c;
        let a = mp_dual_vector(dom, &t, &u, m, p, tol);
        let uf = VertexFn::from_values(dom, u.as_slice().to_vec()).expect("matching length");
        let mut g = a / spec.lambda;
        for l in 0..dom.len() {
            g[l] -= dom.mu(l) * spec.f.eval(l, uf.value(l));
        }
        basis.transpose() * g
    };
    let fd_jacobian = |c: &DVector<f64>| -> DMatrix<f64> {
        let h = 1e-7;
        let mut j = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut cp = c.clone();
            let mut cm = c.clone();
            cp[col] += h;
            cm[col] -= h;
            let gp = grad(&cp);
            let gm = grad(&cm);
            for row in 0..dim {
                j[(row, col)] = (gp[row] - gm[row]) / (2.0 * h);
            }
        }
        j
    };
    let newton = |x0: &DVector<f64>, found: &[DVector<f64>], loose: bool| -> Option<DVector<f64>> {
        let tau = tol.deflation_tau;
        let mut x = x0.clone();
        for _ in 0..tol.newton_max_iter {
            let g = grad(&x);
            let sup = x.iter().fold(0.0_f64, |mx, v| mx.max(v.abs()));
            if !g.iter().all(|v| v.is_finite()) || sup > 1e8 {
                return None;
            }
            let res = g.iter().fold(0.0_f64, |mx, v| mx.max(v.abs()));
            let target = if loose { 1e-6 } else { tol.solve_residual };
            if res <= target * (1.0 + sup) {
                return Some(x);
            }
            let mut d = 1.0;
            let mut w = DVector::zeros(dim);
            for xi in found {
                let diff = &x - xi;
                let denom = diff.norm_squared() + tau;
                d /= denom;
                w += diff * (2.0 / denom);
            }
            let j = fd_jacobian(&x);
            let jd = &j * d - (&g * d) * w.transpose();
            let gd = &g * d;
            let svd = jd.clone().svd(false, false);
            let sigma_min = svd
                .singular_values
                .iter()
                .fold(f64::INFINITY, |mn, s| mn.min(*s));
            let neg = -gd.clone();
            let step = if sigma_min < tol.singular_min {
                let jt = jd.transpose();
                let a = &jt * &jd + DMatrix::identity(dim, dim) * tol.levenberg_shift;
                a.lu().solve(&(&jt * &neg))?
            } else {
                jd.clone().lu().solve(&neg)?
            };
            if !step.iter().all(|s| s.is_finite()) {
                return None;
            }
            x += step;
        }
        None
    };

    let mut found: Vec<DVector<f64>> = Vec::new();
    let mut converged = 0usize;
    let budget = opts.budget.max(1);
    for k in 0..budget {
        let x0 = if k == 0 {
            DVector::zeros(dim)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(
                opts.seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k as u64),
            );
            let frac = k as f64 / (budget.saturating_sub(1).max(1)) as f64;
            let scale = opts.radius.unwrap_or(8.0) * frac.max(0.02);
            DVector::from_vec(
                (0..dim)
                    .map(|_| rng.gen_range(-1.0..1.0) * scale)
                    .collect::<Vec<f64>>(),
            )
        };
        let Some(near) = newton(&x0, &found, true) else {
            continue;
        };
        let Some(root) = newton(&near, &[], false) else {
            continue;
        };
        converged += 1;
        let distinct = found.iter().all(|xi| {
            (&root - xi).iter().fold(0.0_f64, |mx, v| mx.max(v.abs())) > tol.distinct_sup
        });
        if distinct {
            found.push(root);
        }
    }
    if converged == 0 {
        return Err(HigherOrderError::NonConvergence);
    }
    let mut solutions: Vec<MpSolution> = found
        .into_iter()
        .map(|c| {
            let residual = grad(&c).iter().fold(0.0_f64, |mx, v| mx.max(v.abs()));
            let u = VertexFn::from_values(dom, (&basis * &c).as_slice().to_vec())
                .expect("matching length");
            MpSolution {
                energy: mp_energy(spec, &u, m, p),
                projected_residual: residual,
                u,
            }
        })
        .collect();
    solutions.sort_by(|a, b| {
        let ka = a
            .u
            .values()
            .iter()
            .fold(f64::NEG_INFINITY, |mx, &v| mx.max(v));
        let kb = b
            .u
            .values()
            .iter()
            .fold(f64::NEG_INFINITY, |mx, &v| mx.max(v));
        a.energy.total_cmp(&b.energy).then(ka.total_cmp(&kb))
    });
    Ok(MpSolveReport {
        solutions,
        class_dim: dim,
        attempts: budget,
        converged,
    })
}
