//! Discrete elliptic calculus on weighted finite graphs.
//!
//! The crate models a finite graph `(V, w)` with symmetric edge weights and a
//! positive vertex measure `mu`, restricted to a domain `D` that splits into a
//! vertex boundary and an interior. On that structure it provides:
//!
//! * the `mu`-Laplacian, gradient form, slope, and discrete integration
//!   ([`calculus`]),
//! * Dirichlet eigenvalues `lambda_1` and their `(m, p)` generalizations with
//!   certificates ([`spectral`]),
//! * energy functionals for `-Delta_mu u = alpha*u + lambda*f(x, u)` with zero
//!   boundary data, together with the hypothesis checks (superquadratic growth,
//!   admissible `lambda` intervals, embedding constants) that govern them
//!   ([`variational`]),
//! * solvers that recover *multiple distinct* classical solutions by deflated
//!   Newton iteration, constrained ball minimization, sign-truncation, and a
//!   positive-solution scheme for the graph Yamabe-type equation ([`solvers`]),
//! * higher-order `(m, p)` operators, norms, and energies on iterated
//!   Laplacians ([`higher_order`]).
//!
//! Every runnable capability has a corresponding example under `examples/`;
//! `cargo run --example multiple_solutions` is a good starting point. The
//! `graphelliptic` binary exposes the same operations as subcommands over JSON
//! graph/problem documents (see the README for the document schemas).
//!
//! Determinism is a contract: all randomized routines take an explicit seed and
//! produce identical results for identical inputs, independent of thread count.

pub mod calculus;
pub mod cli;
pub mod fixtures;
pub mod graph;
pub mod higher_order;
pub(crate) mod numeric;
pub mod report;
pub mod solvers;
pub mod spectral;
pub mod variational;

/// Central record of every numeric tolerance used by the crate.
///
/// All operations read their thresholds from one of these records (library
/// entry points default to [`Tolerances::default`]), so a tolerance is defined
/// in exactly one place.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Relative slack for exact algebraic identities (summation by parts,
    /// bilinearity, norm collapses).
    pub identity_rel: f64,
    /// Max-norm residual accepted for eigenpairs, `||L u - lambda M u||_inf`.
    pub eigen_residual: f64,
    /// Classical interior residual accepted for a solution, scaled by
    /// `1 + ||u||_inf`.
    pub solve_residual: f64,
    /// Sup-norm separation below which two candidate solutions are merged.
    pub distinct_sup: f64,
    /// Central-difference step for gradient verification.
    pub fd_step: f64,
    /// Accepted mismatch of analytic vs central-difference directional
    /// derivatives, scaled by `1 + |J(u)|`.
    pub fd_gradient: f64,
    /// Relative accuracy of the one-dimensional `lambda_star` maximization.
    pub lambda_star_rel: f64,
    /// Accuracy of interval extremization (max of `|F|`, `|f|`, ...) when the
    /// closed-form critical-point route is unavailable.
    pub extremum: f64,
    /// Required relative interior margin `rho - ||u||_alpha^2 >= margin * rho`
    /// for a ball minimizer.
    pub ball_margin_rel: f64,
    /// Shift `tau` in the deflation factor `1 / (||u - u*||^2 + tau)`.
    pub deflation_tau: f64,
    /// Strict-positivity threshold for interior values of positive solutions.
    pub positivity_min: f64,
    /// Sup-norm threshold under which a solution is flagged trivial.
    pub trivial_sup: f64,
    /// Smallest singular value below which the Newton system is considered
    /// near-singular and Levenberg damping engages.
    pub singular_min: f64,
    /// Levenberg shift added to the damped normal equations.
    pub levenberg_shift: f64,
    /// Iteration cap for a single Newton run.
    pub newton_max_iter: usize,
    /// Relative singular-value cutoff used when computing constraint
    /// null spaces.
    pub rank_rel: f64,
    /// Regularization `eps` in `(|s|^2 + eps^2)^((p-2)/2)` for `p < 2`.
    pub regularize_eps: f64,
    /// Relative stagnation threshold for quotient/energy descent loops.
    pub descent_stall: f64,
    /// Largest interior size solved by dense factorization; beyond it the
    /// spectral routines switch to shifted inverse iteration.
    pub dense_max: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity_rel: 1e-12,
            eigen_residual: 1e-10,
            solve_residual: 1e-10,
            distinct_sup: 1e-6,
            fd_step: 1e-6,
            fd_gradient: 1e-6,
            lambda_star_rel: 1e-8,
            extremum: 1e-10,
            ball_margin_rel: 1e-8,
            deflation_tau: 1e-8,
            positivity_min: 1e-10,
            trivial_sup: 1e-9,
            singular_min: 1e-10,
            levenberg_shift: 1e-8,
            newton_max_iter: 100,
            rank_rel: 1e-10,
            regularize_eps: 1e-10,
            descent_stall: 1e-13,
            dense_max: 512,
        }
    }
}
