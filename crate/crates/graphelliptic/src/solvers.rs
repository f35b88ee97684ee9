//! Numerical realization of the multiplicity theory: finds classical
//! solutions of `-Delta_mu u = alpha u + lambda f(x, u)` with zero boundary
//! values.
//!
//! The main entry point is [`find_all_solutions`]: damped Newton iteration
//! with deflation of previously found roots, restarted from seeded random
//! starts inside an `alpha`-norm ball whose radius comes from the
//! Palais-Smale boundedness certificate when the growth condition holds.
//! Everything is deterministic for a fixed seed: restarts run sequentially
//! and each attempt derives its generator from the base seed and the attempt
//! index only.
//!
//! On top of that sit the structured drivers:
//!
//! * [`minimize_in_ball`] — the constrained local minimization that realizes
//!   the small-solution half of the two-solution theorems;
//! * [`solve_truncated`] — the positive-part truncation scheme for
//!   nonlinearities vanishing at zero, yielding nonnegative solutions;
//! * [`yamabe_solve`] — the discrete Yamabe-type equation
//!   `-Delta_mu u = gamma u + u^(p-1)`, `u > 0` on the interior;
//! * [`mountain_pass`] — a path-based saddle search used to cross-check the
//!   deflated solver.

use crate::calculus::{assemble_stiffness, dirichlet_energy, Stiffness};
use crate::graph::{Domain, VertexFn};
use crate::numeric::golden_max;
use crate::spectral::lambda1;
use crate::variational::{
    alpha_norm_sq, classical_residual_max, energy, verify_hypotheses, weak_form,
    weak_gradient, weak_residual_sup, ArParams, Coefficient, HypothesisReport,
    Nonlinearity, ProblemSpec, Term, TermKind, VariationalError,
};
use crate::Tolerances;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("no attempt converged within the restart budget")]
    NonConvergence,
    #[error("constrained minimizer sits on the sphere (margin {margin:.3e}); no interior minimizer certified")]
    NoInteriorMinimizer { margin: f64 },
    #[error("truncated problem produced only the trivial solution")]
    OnlyTrivialFound,
    #[error("negative part of the selected solution is nonzero (sup {sup:.3e}, energy {energy:.3e})")]
    NegativePartNonzero { sup: f64, energy: f64 },
    #[error("selected solution is not strictly positive on the interior (min {min:.3e})")]
    PositivityFailure { min: f64 },
    #[error("hypothesis violated: {reason}")]
    HypothesisViolated { reason: String },
    #[error(transparent)]
    Variational(#[from] VariationalError),
}

/// Sign pattern of a solution on the interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignProfile {
    Zero,
    Positive,
    Negative,
    Mixed,
}

/// One classical solution with its certificates.
#[derive(Debug, Clone)]
pub struct Solution {
    pub u: VertexFn,
    pub energy: f64,
    pub alpha_norm_sq: f64,
    pub sup_norm: f64,
    /// `max over the interior of |-Delta u - alpha u - lambda f(x, u)|`.
    pub classical_residual: f64,
    /// Dual norm of the energy gradient over the Dirichlet class.
    pub weak_residual: f64,
    pub sign: SignProfile,
}

/// Palais-Smale boundedness certificate.
///
/// When the growth condition holds with exponent `beta > 2`, every sequence
/// with bounded energy and vanishing gradient satisfies the a priori bound
/// `a ||u||^2 <= lambda c0 + (lambda/beta) g0 ||u|| + (lambda/beta) K`, where
/// `a = 1/2 - 1/beta`, `c0`/`g0` bound the energy and gradient along the
/// sequence (normalized here from the zero trajectory), and `K` bounds
/// `integral |t f - beta F|` over the small-argument region. Solving the
/// quadratic gives the radius bound reported here; it doubles as the sampling
/// radius for the restarts.
#[derive(Debug, Clone)]
pub struct PsDiagnostic {
    pub usable: bool,
    pub beta: Option<f64>,
    /// Root of the certificate quadratic: an a priori `alpha`-norm bound.
    pub radius_bound: Option<f64>,
    /// Restart sampling radius actually used (certificate radius clamped to
    /// `[4, 1e3]`, or 8 when the certificate is unusable).
    pub sampling_radius: f64,
    /// Largest residual of the algebraic identity
    /// `lambda J(u) - (lambda/beta) <J'(u), u> = a ||u||_alpha^2 +
    /// (lambda/beta) integral (f u - beta F) dmu` over the found solutions.
    pub identity_max_residual: f64,
    /// Certificate radius dominates every found solution's norm.
    pub covers_solutions: Option<bool>,
}

/// Full outcome of a multi-start solve.
#[derive(Debug)]
pub struct SolveReport {
    pub solutions: Vec<Solution>,
    pub attempts: usize,
    /// Attempts that polished to a critical point (before deduplication).
    pub converged: usize,
    pub budget: usize,
    pub seed: u64,
    pub hypotheses: HypothesisReport,
    pub ps: PsDiagnostic,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub seed: u64,
    pub budget: usize,
    /// Overrides the sampling radius derived from the certificate.
    pub radius: Option<f64>,
    pub tol: Tolerances,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            budget: 64,
            radius: None,
            tol: Tolerances::default(),
        }
    }
}

// ---------------------------------------------------------------------------
// Newton machinery
// ---------------------------------------------------------------------------

fn interior_fn(dom: &Domain, x: &DVector<f64>) -> VertexFn {
    VertexFn::from_interior(dom, x.as_slice())
}

/// `G(x) = L x - mu alpha x - lambda mu f(x)` on interior coordinates
/// (`mu` times the classical residual).
fn residual_vec(spec: &ProblemSpec, stiff: &Stiffness, x: &DVector<f64>) -> DVector<f64> {
    let dom = &spec.domain;
    let mut g = &stiff.interior * x;
    for (i, &l) in dom.interior().iter().enumerate() {
        g[i] -= dom.mu(l)
            * (spec.alpha.at(l) * x[i] + spec.lambda * spec.f.eval(l, x[i]));
    }
    g
}

fn jacobian(spec: &ProblemSpec, stiff: &Stiffness, x: &DVector<f64>) -> DMatrix<f64> {
    let dom = &spec.domain;
    let mut j = stiff.interior.clone();
    for (i, &l) in dom.interior().iter().enumerate() {
        j[(i, i)] -=
            dom.mu(l) * (spec.alpha.at(l) + spec.lambda * spec.f.eval_dt(l, x[i]));
    }
    j
}

/// Solves `J s = -g`, switching to a Levenberg-regularized normal system when
/// the Jacobian is near singular.
fn newton_step(j: &DMatrix<f64>, g: &DVector<f64>, tol: &Tolerances) -> Option<DVector<f64>> {
    let svd = j.clone().svd(false, false);
    let sigma_min = svd.singular_values.iter().fold(f64::INFINITY, |m, s| m.min(*s));
    let step = if sigma_min < tol.singular_min {
        let jt = j.transpose();
        let a = &jt * j + DMatrix::identity(j.nrows(), j.ncols()) * tol.levenberg_shift;
        a.lu().solve(&(&jt * -g))?
    } else {
        j.clone().lu().solve(&(-g))?
    };
    step.iter().all(|s| s.is_finite()).then_some(step)
}

/// Undeflated damped Newton from `x0`; converges when the classical residual
/// drops below `solve_residual * (1 + sup |u|)`.
fn polish(
    spec: &ProblemSpec,
    stiff: &Stiffness,
    x0: &DVector<f64>,
    tol: &Tolerances,
) -> Option<DVector<f64>> {
    let dom = &spec.domain;
    let mut x = x0.clone();
    for _ in 0..tol.newton_max_iter {
        let g = residual_vec(spec, stiff, &x);
        // max |R| = max |G / mu| over the interior
        let res = dom
            .interior()
            .iter()
            .enumerate()
            .map(|(i, &l)| (g[i] / dom.mu(l)).abs())
            .fold(0.0_f64, f64::max);
        let sup = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if res <= tol.solve_residual * (1.0 + sup) {
            return Some(x);
        }
        if !res.is_finite() || sup > 1e8 {
            return None;
        }
        let j = jacobian(spec, stiff, &x);
        let mut step = newton_step(&j, &g, tol)?;
        // Backtrack on the residual norm; accept the full step if nothing
        // helps (allows escaping flat regions).
        let base = g.norm();
        let mut accepted = false;
        for _ in 0..8 {
            let trial = &x + &step;
            if residual_vec(spec, stiff, &trial).norm() < base * (1.0 - 1e-12) {
                x = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            x += step * 256.0; // undo the halvings: full step
        }
    }
    None
}

/// Deflated Newton: drives `G_d(x) = d(x) G(x)` to zero, where
/// `d(x) = prod_i 1 / (||x - x_i||^2 + tau)` repels the iteration from the
/// already-found roots `x_i`.
fn deflated_search(
    spec: &ProblemSpec,
    stiff: &Stiffness,
    x0: &DVector<f64>,
    found: &[DVector<f64>],
    tol: &Tolerances,
) -> Option<DVector<f64>> {
    let dom = &spec.domain;
    let tau = tol.deflation_tau;
    let deflation = |x: &DVector<f64>| -> (f64, DVector<f64>) {
        let mut d = 1.0;
        let mut w = DVector::zeros(x.len());
        for xi in found {
            let diff = x - xi;
            let denom = diff.norm_squared() + tau;
            d /= denom;
            w += diff * (2.0 / denom);
        }
        (d, w)
    };
    let mut x = x0.clone();
    for _ in 0..tol.newton_max_iter {
        let g = residual_vec(spec, stiff, &x);
        let sup = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !g.iter().all(|v| v.is_finite()) || sup > 1e8 {
            return None;
        }
        let res = dom
            .interior()
            .iter()
            .enumerate()
            .map(|(i, &l)| (g[i] / dom.mu(l)).abs())
            .fold(0.0_f64, f64::max);
        if res <= 1e-6 * (1.0 + sup) {
            // Close enough to a root: hand over to the undeflated polish.
            return Some(x);
        }
        let (d, w) = deflation(&x);
        let j = jacobian(spec, stiff, &x);
        // J_d = d J - d G w^T  (rank-one correction from the deflation factor)
        let jd = &j * d - (&g * d) * w.transpose();
        let gd = &g * d;
        let mut step = newton_step(&jd, &gd, tol)?;
        let base = gd.norm();
        let mut accepted = false;
        for _ in 0..8 {
            let trial = &x + &step;
            let (dt, _) = deflation(&trial);
            if (residual_vec(spec, stiff, &trial) * dt).norm() < base * (1.0 - 1e-12) {
                x = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            let full = step * 256.0;
            if full.norm() <= 1e-14 * (1.0 + x.norm()) {
                return None; // stagnated
            }
            x += full;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Palais-Smale certificate
// ---------------------------------------------------------------------------

/// Residual of the exact algebraic identity behind the certificate.
pub fn ps_identity_residual(spec: &ProblemSpec, u: &VertexFn, beta: f64) -> f64 {
    let dom = &spec.domain;
    let lhs = spec.lambda * energy(spec, u)
        - spec.lambda / beta * weak_form(spec, u, u);
    let integral: f64 = (0..dom.len())
        .map(|l| {
            let t = u.value(l);
            dom.mu(l) * (spec.f.eval(l, t) * t - beta * spec.f.potential(l, t))
        })
        .sum();
    let rhs = (0.5 - 1.0 / beta) * alpha_norm_sq(spec, u)
        + spec.lambda / beta * integral;
    (lhs - rhs).abs()
}

/// Builds the boundedness certificate; see [`PsDiagnostic`].
pub fn ps_boundedness_diagnostic(spec: &ProblemSpec, tol: &Tolerances) -> PsDiagnostic {
    let mut diag = PsDiagnostic {
        usable: false,
        beta: None,
        radius_bound: None,
        sampling_radius: 8.0,
        identity_max_residual: 0.0,
        covers_solutions: None,
    };
    let Some(ArParams { beta, r0 }) = spec.f.ar else {
        return diag;
    };
    diag.beta = Some(beta);
    if beta <= 2.0 {
        return diag; // a = 1/2 - 1/beta degenerates
    }
    let dom = &spec.domain;
    // K bounds integral |t f - beta F| over the region |u| <= r0.
    let mut k_bd = 0.0_f64;
    for l in 0..dom.len() {
        for positive in [true, false] {
            let f_side = spec.f.f_side(l, positive);
            let sign = if positive { 1.0 } else { -1.0 };
            let mut terms: Vec<(f64, f64)> = f_side
                .terms
                .iter()
                .map(|&(c, e)| (sign * c, e + 1.0))
                .collect();
            for (c, e) in spec.f.potential_side(l, positive).terms {
                terms.push((-beta * c, e));
            }
            let h = crate::numeric::HalfLineFn::new(terms);
            let (m, _) = h.max_abs_on(r0, tol.extremum);
            k_bd = k_bd.max(m);
        }
    }
    k_bd *= dom.volume();
    let zero = VertexFn::zeros(dom);
    let c0 = energy(spec, &zero).abs() + 1.0;
    let g0 = weak_residual_sup(spec, &zero) + 1.0;
    let a = 0.5 - 1.0 / beta;
    let b = spec.lambda * g0 / beta;
    let d = spec.lambda * c0 + spec.lambda * k_bd / beta;
    let radius = (b + (b * b + 4.0 * a * d).sqrt()) / (2.0 * a);
    diag.usable = true;
    diag.radius_bound = Some(radius);
    diag.sampling_radius = radius.clamp(4.0, 1e3);
    diag
}

// ---------------------------------------------------------------------------
// Multi-start deflated solve
// ---------------------------------------------------------------------------

fn classify_sign(dom: &Domain, u: &VertexFn, tol: &Tolerances) -> SignProfile {
    if u.sup_norm() <= tol.trivial_sup {
        return SignProfile::Zero;
    }
    let vals = u.interior_values(dom);
    if vals.iter().all(|&v| v > tol.positivity_min) {
        SignProfile::Positive
    } else if vals.iter().all(|&v| v < -tol.positivity_min) {
        SignProfile::Negative
    } else {
        SignProfile::Mixed
    }
}

fn make_solution(spec: &ProblemSpec, u: VertexFn, tol: &Tolerances) -> Solution {
    let energy_v = energy(spec, &u);
    Solution {
        energy: energy_v,
        alpha_norm_sq: alpha_norm_sq(spec, &u),
        sup_norm: u.sup_norm(),
        classical_residual: classical_residual_max(spec, &u),
        weak_residual: weak_residual_sup(spec, &u),
        sign: classify_sign(&spec.domain, &u, tol),
        u,
    }
}

fn interior_max(dom: &Domain, u: &VertexFn) -> f64 {
    dom.interior()
        .iter()
        .map(|&l| u.value(l))
        .fold(f64::NEG_INFINITY, f64::max)
}

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Finds classical solutions by deflated Newton with seeded restarts.
///
/// Attempt 0 starts from zero; attempt `k >= 1` draws a start uniformly at a
/// radius that expands with `k` up to the sampling radius. Found roots are
/// deflated so later attempts are pushed toward new solutions; each converged
/// iterate is re-polished without deflation, deduplicated at sup-distance
/// `distinct_sup`, and certified by its classical and weak residuals. Errors
/// with [`SolverError::NonConvergence`] only when *no* attempt converges.
pub fn find_all_solutions(
    spec: &ProblemSpec,
    opts: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    let tol = &opts.tol;
    let dom = &spec.domain;
    let stiff = assemble_stiffness(dom);
    let n = dom.interior_count();
    let hypotheses = verify_hypotheses(spec, tol);
    let mut ps = ps_boundedness_diagnostic(spec, tol);
    let radius = opts.radius.unwrap_or(ps.sampling_radius);
    ps.sampling_radius = radius;

    let mut found: Vec<DVector<f64>> = Vec::new();
    let mut converged = 0usize;
    let budget = opts.budget.max(1);
    for k in 0..budget {
        let x0 = if k == 0 {
            DVector::zeros(n)
        } else {
            let mut rng =
                ChaCha8Rng::seed_from_u64(opts.seed ^ SEED_STRIDE.wrapping_mul(k as u64));
            let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = interior_fn(dom, &DVector::from_vec(dir.clone()));
            let norm = alpha_norm_sq(spec, &v).max(0.0).sqrt();
            if norm == 0.0 {
                continue;
            }
            let frac = k as f64 / (budget.saturating_sub(1).max(1)) as f64;
            let target = radius * frac.max(0.02) * rng.gen::<f64>().sqrt();
            DVector::from_vec(dir) * (target / norm)
        };
        let Some(near) = deflated_search(spec, &stiff, &x0, &found, tol) else {
            continue;
        };
        let Some(root) = polish(spec, &stiff, &near, tol) else {
            continue;
        };
        converged += 1;
        let distinct = found.iter().all(|xi| {
            (&root - xi)
                .iter()
                .fold(0.0_f64, |m, v| m.max(v.abs()))
                > tol.distinct_sup
        });
        if distinct {
            found.push(root);
        }
    }
    if converged == 0 {
        return Err(SolverError::NonConvergence);
    }

    let mut solutions: Vec<Solution> = found
        .into_iter()
        .map(|x| make_solution(spec, interior_fn(dom, &x), tol))
        .collect();
    solutions.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(interior_max(dom, &a.u).total_cmp(&interior_max(dom, &b.u)))
    });

    if let Some(beta) = ps.beta {
        if ps.usable {
            ps.identity_max_residual = solutions
                .iter()
                .map(|s| ps_identity_residual(spec, &s.u, beta))
                .fold(0.0, f64::max);
            let max_norm = solutions
                .iter()
                .map(|s| s.alpha_norm_sq.max(0.0).sqrt())
                .fold(0.0, f64::max);
            ps.covers_solutions = ps.radius_bound.map(|r| r >= max_norm);
        }
    }

    Ok(SolveReport {
        solutions,
        attempts: budget,
        converged,
        budget,
        seed: opts.seed,
        hypotheses,
        ps,
    })
}

// ---------------------------------------------------------------------------
// Constrained minimization in the alpha-norm ball
// ---------------------------------------------------------------------------

/// Outcome of [`minimize_in_ball`].
#[derive(Debug, Clone)]
pub struct BallMinimum {
    pub u: VertexFn,
    pub energy: f64,
    pub alpha_norm_sq: f64,
    /// `rho - ||u||_alpha^2`; strictly positive for a certified interior
    /// minimizer.
    pub margin: f64,
    /// The minimizer is the zero function.
    pub trivial: bool,
    /// Newton polish confirmed a critical point at the minimizer.
    pub critical: bool,
}

/// Minimizes the energy over the ball `||u||_alpha^2 <= rho` by projected
/// gradient descent with Armijo backtracking, then certifies an interior
/// minimizer by an undeflated Newton polish. Returns
/// [`SolverError::NoInteriorMinimizer`] when the best point sits on the
/// sphere, as the variational argument requires a strictly interior minimum.
pub fn minimize_in_ball(
    spec: &ProblemSpec,
    rho: f64,
    opts: &SolveOptions,
) -> Result<BallMinimum, SolverError> {
    let tol = &opts.tol;
    let dom = &spec.domain;
    let stiff = assemble_stiffness(dom);
    let n = dom.interior_count();
    let project = |x: &mut DVector<f64>| {
        let nsq = alpha_norm_sq(spec, &interior_fn(dom, x));
        if nsq > rho {
            *x *= (rho / nsq).sqrt();
        }
    };
    let energy_of = |x: &DVector<f64>| energy(spec, &interior_fn(dom, x));

    let mut best: Option<(DVector<f64>, f64)> = None;
    for start in 0..8 {
        let mut x = if start == 0 {
            DVector::zeros(n)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(
                opts.seed ^ SEED_STRIDE.wrapping_mul(start as u64),
            );
            let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut x = DVector::from_vec(dir);
            let nsq = alpha_norm_sq(spec, &interior_fn(dom, &x));
            if nsq > 0.0 {
                x *= (rho * rng.gen::<f64>() / nsq).sqrt();
            }
            x
        };
        project(&mut x);
        let mut j = energy_of(&x);
        for _ in 0..5000 {
            let u = interior_fn(dom, &x);
            let r = weak_gradient(spec, &u);
            let g = DVector::from_vec(
                dom.interior()
                    .iter()
                    .map(|&l| dom.mu(l) * r.value(l))
                    .collect::<Vec<f64>>(),
            );
            let gnorm_sq = g.norm_squared();
            if gnorm_sq == 0.0 {
                break;
            }
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..40 {
                let mut trial = &x - &g * step;
                project(&mut trial);
                let jt = energy_of(&trial);
                if jt <= j - 1e-4 * step * gnorm_sq {
                    let progress = j - jt;
                    x = trial;
                    j = jt;
                    moved = true;
                    if progress <= tol.descent_stall * (1.0 + j.abs()) {
                        moved = false; // converged rather than stepping
                    }
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        match &best {
            Some((_, bj)) if *bj <= j => {}
            _ => best = Some((x, j)),
        }
    }
    let (x, j) = best.expect("at least one start ran");
    let nsq = alpha_norm_sq(spec, &interior_fn(dom, &x));
    let margin = rho - nsq;
    if margin < tol.ball_margin_rel * rho {
        return Err(SolverError::NoInteriorMinimizer { margin });
    }
    // Certify criticality by polishing; keep the descent point if the polish
    // wanders out of the ball (then the minimizer is reported uncertified).
    let mut critical = false;
    let mut xf = x.clone();
    let mut jf = j;
    if let Some(p) = polish(spec, &stiff, &x, tol) {
        let pn = alpha_norm_sq(spec, &interior_fn(dom, &p));
        let drift = (&p - &x).norm();
        if rho - pn >= tol.ball_margin_rel * rho && drift <= 0.1 * (1.0 + x.norm()) {
            jf = energy_of(&p);
            xf = p;
            critical = true;
        }
    }
    let u = interior_fn(dom, &xf);
    let trivial = u.sup_norm() <= tol.trivial_sup;
    Ok(BallMinimum {
        alpha_norm_sq: alpha_norm_sq(spec, &u),
        margin: rho - alpha_norm_sq(spec, &u),
        energy: jf,
        trivial,
        critical,
        u,
    })
}

// ---------------------------------------------------------------------------
// Truncation scheme and the positive-solution driver
// ---------------------------------------------------------------------------

fn negative_part(dom: &Domain, u: &VertexFn) -> VertexFn {
    let mut v = VertexFn::zeros(dom);
    for l in 0..dom.len() {
        v.set(l, (-u.value(l)).max(0.0));
    }
    v
}

/// Solves via the positive-part truncation: replaces `f` by `f_+`, solves,
/// selects the lowest-energy nontrivial solution, and certifies that its
/// negative part vanishes — so it solves the *original* problem and is
/// nonnegative. Requires `f(x, 0) = 0` and a non-positive `alpha` (that is
/// what makes the energy argument against negative parts work).
pub fn solve_truncated(
    spec: &ProblemSpec,
    opts: &SolveOptions,
) -> Result<(Solution, SolveReport), SolverError> {
    let tol = &opts.tol;
    let dom = &spec.domain;
    if !spec.f.vanishes_at_zero(dom.interior()) {
        return Err(SolverError::HypothesisViolated {
            reason: "truncation requires f(x, 0) = 0 on the interior".into(),
        });
    }
    if spec.alpha.regime != crate::variational::AlphaRegime::NonPositive {
        return Err(SolverError::HypothesisViolated {
            reason: "truncation requires alpha <= 0 on the domain".into(),
        });
    }
    let truncated = spec.with_nonlinearity(spec.f.truncate_positive());
    let report = find_all_solutions(&truncated, opts)?;
    let pick = report
        .solutions
        .iter()
        .find(|s| s.sign != SignProfile::Zero)
        .ok_or(SolverError::OnlyTrivialFound)?;
    let neg = negative_part(dom, &pick.u);
    let neg_sup = neg.sup_norm();
    if neg_sup > tol.trivial_sup {
        return Err(SolverError::NegativePartNonzero {
            sup: neg_sup,
            energy: dirichlet_energy(dom, &neg).expect("matching domain"),
        });
    }
    // Nonnegative, so f_+ agrees with f along u: re-certify against the
    // original nonlinearity.
    let solution = make_solution(spec, pick.u.clone(), tol);
    Ok((solution, report))
}

/// Solves the discrete Yamabe-type problem `-Delta_mu u = gamma u + u^(p-1)`
/// with `u > 0` on the interior and zero boundary values. Requires
/// `gamma < lambda_1` and `p > 2`.
pub fn yamabe_solve(
    dom: &Arc<Domain>,
    gamma: f64,
    p: f64,
    opts: &SolveOptions,
) -> Result<(Solution, SolveReport), SolverError> {
    let tol = &opts.tol;
    let lam1 = lambda1(dom).lambda1;
    if gamma >= lam1 {
        return Err(SolverError::HypothesisViolated {
            reason: format!("gamma = {gamma} must lie below lambda_1 = {lam1}"),
        });
    }
    if !(p > 2.0) {
        return Err(SolverError::HypothesisViolated {
            reason: format!("exponent p = {p} must exceed 2"),
        });
    }
    let f = Nonlinearity::new(
        vec![Term {
            coeff: Coefficient::Scalar(1.0),
            kind: TermKind::SignedPower(p),
        }],
        Some(ArParams { beta: p, r0: 1.0 }),
    )
    .truncate_positive();
    let spec = ProblemSpec::new(Arc::clone(dom), Coefficient::Scalar(gamma), f, 1.0);
    let report = find_all_solutions(&spec, opts)?;
    let pick = report
        .solutions
        .iter()
        .find(|s| s.sign != SignProfile::Zero)
        .ok_or(SolverError::OnlyTrivialFound)?;
    // Certification chain: the negative part carries no energy, hence
    // vanishes; then the minimum principle forces strict interior positivity.
    let neg = negative_part(dom, &pick.u);
    let neg_energy = dirichlet_energy(dom, &neg).expect("matching domain");
    if neg.sup_norm() > tol.trivial_sup || neg_energy > tol.trivial_sup {
        return Err(SolverError::NegativePartNonzero {
            sup: neg.sup_norm(),
            energy: neg_energy,
        });
    }
    let min_interior = dom
        .interior()
        .iter()
        .map(|&l| pick.u.value(l))
        .fold(f64::INFINITY, f64::min);
    if min_interior <= tol.positivity_min {
        return Err(SolverError::PositivityFailure { min: min_interior });
    }
    // The solution is nonnegative, so it also solves the untruncated
    // equation with f(t) = |t|^(p-2) t; re-certify against that form.
    let untruncated = spec.with_nonlinearity(Nonlinearity::new(
        vec![Term {
            coeff: Coefficient::Scalar(1.0),
            kind: TermKind::SignedPower(p),
        }],
        Some(ArParams { beta: p, r0: 1.0 }),
    ));
    let solution = make_solution(&untruncated, pick.u.clone(), tol);
    Ok((solution, report))
}

// ---------------------------------------------------------------------------
// Mountain-pass cross-check
// ---------------------------------------------------------------------------

/// Outcome of the path-based saddle search.
#[derive(Debug)]
pub struct MountainPassResult {
    pub saddle: Solution,
    pub valley: BallMinimum,
    /// Energy maximum along the segment before polishing.
    pub path_max_energy: f64,
    /// Scale of the far endpoint along the interior indicator.
    pub t_far: f64,
}

/// Cross-checks the deflated solver with the mountain-pass geometry: takes
/// the ball minimizer as one endpoint, walks the interior-indicator ray until
/// the energy drops below the valley by 1, maximizes the energy along the
/// connecting segment, and polishes the maximizer to a critical point.
pub fn mountain_pass(
    spec: &ProblemSpec,
    rho: f64,
    opts: &SolveOptions,
) -> Result<MountainPassResult, SolverError> {
    let tol = &opts.tol;
    let dom = &spec.domain;
    let stiff = assemble_stiffness(dom);
    let valley = minimize_in_ball(spec, rho, opts)?;
    let u0 = VertexFn::interior_indicator(dom);
    let target = valley.energy - 1.0;
    let mut t = 1.0;
    let mut escaped = false;
    while t <= 1e6 {
        if energy(spec, &u0.scaled(t)) < target {
            escaped = true;
            break;
        }
        t *= 2.0;
    }
    if !escaped {
        return Err(SolverError::HypothesisViolated {
            reason: "energy does not drop below the valley along the indicator ray".into(),
        });
    }
    let a = DVector::from_vec(valley.u.interior_values(dom));
    let b = DVector::from_vec(u0.scaled(t).interior_values(dom));
    let path_energy = |s: f64| -> f64 {
        let x = &a * (1.0 - s) + &b * s;
        energy(spec, &interior_fn(dom, &x))
    };
    let (s_star, path_max) = golden_max(&path_energy, 0.0, 1.0, 1e-12);
    let x_star = &a * (1.0 - s_star) + &b * s_star;
    let root = polish(spec, &stiff, &x_star, tol).ok_or(SolverError::NonConvergence)?;
    let saddle = make_solution(spec, interior_fn(dom, &root), tol);
    Ok(MountainPassResult {
        saddle,
        valley,
        path_max_energy: path_max,
        t_far: t,
    })
}
