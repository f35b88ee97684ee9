//! Variational structure of the Dirichlet problem
//! `-Delta_mu u = alpha(x) u + lambda f(x, u)` on a domain, with zero boundary
//! values.
//!
//! The energy functional is
//! `J(u) = ||u||_alpha^2 / (2 lambda) - integral F(x, u) dmu`, where
//! `||u||_alpha^2 = integral |grad u|^2 dmu - integral alpha u^2 dmu` and `F`
//! is the primitive of the nonlinearity. Critical points of `J` over the
//! Dirichlet class are exactly the classical solutions; this module provides
//! the functional, its weak gradient, the classical residual, and every
//! hypothesis check the solvers report on: the linear-coefficient regime, the
//! norm-equivalence constants, the sup-norm embedding constant `kappa`, the
//! superquadraticity (growth) condition with its grid falsifier and symbolic
//! leading-term check, the admissible `lambda` interval, and the threshold
//! `lambda_star`.

use crate::calculus::{
    assemble_stiffness, dirichlet_energy, energy_inner_product, laplacian,
};
use crate::graph::{Domain, DomainError, VertexFn};
use crate::numeric::{golden_max, HalfLineFn};
use crate::spectral::lambda1;
use crate::Tolerances;
use serde::Deserialize;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VariationalError {
    #[error("problem document parse failure: {0}")]
    Parse(String),
    #[error("unknown vertex id {id:?} in coefficient map")]
    UnknownVertex { id: String },
    #[error("linear coefficient is outside the valid regimes (alpha not <= 0 and integral |alpha| dmu >= mu_0^2 lambda_1)")]
    InvalidAlphaRegime,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Scalar-or-per-vertex coefficient, resolved against a domain's local order.
#[derive(Debug, Clone)]
pub enum Coefficient {
    Scalar(f64),
    PerVertex(Vec<f64>),
}

impl Coefficient {
    pub fn at(&self, local: usize) -> f64 {
        match self {
            Coefficient::Scalar(c) => *c,
            Coefficient::PerVertex(v) => v[local],
        }
    }

    fn resolve(&self, dom: &Domain) -> Vec<f64> {
        (0..dom.len()).map(|l| self.at(l)).collect()
    }
}

/// One term of the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TermKind {
    /// `c * t^k`, integer `k >= 0`.
    IntegerPower(u32),
    /// `c * |t|^(q-2) t`, real `q > 1` (odd-symmetric power).
    SignedPower(f64),
}

#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: Coefficient,
    pub kind: TermKind,
}

/// Superquadraticity parameters `(beta, r0)`: `t f >= beta F > 0` is expected
/// for `|t| >= r0` (or `t >= r0` for the one-sided variant).
#[derive(Debug, Clone, Copy)]
pub struct ArParams {
    pub beta: f64,
    pub r0: f64,
}

/// Nonlinearity `f(x, t) = sum of terms`, optionally truncated to its
/// positive part (`f_+(x, t) = f(x, t)` for `t >= 0`, zero for `t < 0`).
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    pub terms: Vec<Term>,
    pub ar: Option<ArParams>,
    truncated: bool,
}

impl Nonlinearity {
    pub fn new(terms: Vec<Term>, ar: Option<ArParams>) -> Self {
        Nonlinearity {
            terms,
            ar,
            truncated: false,
        }
    }

    /// The positive-part truncation `f_+`.
    pub fn truncate_positive(&self) -> Nonlinearity {
        Nonlinearity {
            terms: self.terms.clone(),
            ar: self.ar,
            truncated: true,
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// `f(x_local, t)`.
    pub fn eval(&self, local: usize, t: f64) -> f64 {
        if self.truncated && t < 0.0 {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|term| {
                let c = term.coeff.at(local);
                match term.kind {
                    TermKind::IntegerPower(k) => c * t.powi(k as i32),
                    TermKind::SignedPower(q) => {
                        if t == 0.0 {
                            0.0
                        } else {
                            c * t.abs().powf(q - 2.0) * t
                        }
                    }
                }
            })
            .sum()
    }

    /// `d f / d t (x_local, t)`; for the truncation the left derivative at 0
    /// is 0 and the kink takes the right branch value.
    pub fn eval_dt(&self, local: usize, t: f64) -> f64 {
        if self.truncated && t < 0.0 {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|term| {
                let c = term.coeff.at(local);
                match term.kind {
                    TermKind::IntegerPower(k) => {
                        if k == 0 {
                            0.0
                        } else {
                            c * k as f64 * t.powi(k as i32 - 1)
                        }
                    }
                    TermKind::SignedPower(q) => {
                        if t == 0.0 {
                            if q == 2.0 {
                                c
                            } else {
                                0.0
                            }
                        } else {
                            c * (q - 1.0) * t.abs().powf(q - 2.0)
                        }
                    }
                }
            })
            .sum()
    }

    /// Primitive `F(x_local, t) = integral_0^t f(x_local, s) ds`.
    pub fn potential(&self, local: usize, t: f64) -> f64 {
        let t = if self.truncated { t.max(0.0) } else { t };
        self.terms
            .iter()
            .map(|term| {
                let c = term.coeff.at(local);
                match term.kind {
                    TermKind::IntegerPower(k) => {
                        c * t.powi(k as i32 + 1) / (k as f64 + 1.0)
                    }
                    TermKind::SignedPower(q) => c * t.abs().powf(q) / q,
                }
            })
            .sum()
    }

    /// True when `f(x, 0) = 0` at every given vertex.
    pub fn vanishes_at_zero(&self, locals: &[usize]) -> bool {
        locals.iter().all(|&l| self.eval(l, 0.0) == 0.0)
    }

    /// `f` restricted to `t = sigma >= 0` as a power sum in `sigma`.
    pub(crate) fn f_side(&self, local: usize, positive: bool) -> HalfLineFn {
        if self.truncated && !positive {
            return HalfLineFn::default();
        }
        HalfLineFn::new(
            self.terms
                .iter()
                .map(|term| {
                    let c = term.coeff.at(local);
                    match term.kind {
                        // f(-sigma) = c (-sigma)^k = c (-1)^k sigma^k
                        TermKind::IntegerPower(k) => {
                            let sign = if positive || k % 2 == 0 { 1.0 } else { -1.0 };
                            (sign * c, k as f64)
                        }
                        // f(-sigma) = -c sigma^(q-1)
                        TermKind::SignedPower(q) => {
                            let sign = if positive { 1.0 } else { -1.0 };
                            (sign * c, q - 1.0)
                        }
                    }
                })
                .collect(),
        )
    }

    /// `F` restricted to `t = +-sigma`, `sigma >= 0`, as a power sum.
    pub(crate) fn potential_side(&self, local: usize, positive: bool) -> HalfLineFn {
        if self.truncated && !positive {
            return HalfLineFn::default();
        }
        HalfLineFn::new(
            self.terms
                .iter()
                .map(|term| {
                    let c = term.coeff.at(local);
                    match term.kind {
                        // F(-sigma) = c (-1)^(k+1) sigma^(k+1) / (k+1)
                        TermKind::IntegerPower(k) => {
                            let e = k as f64 + 1.0;
                            let sign = if positive || k % 2 == 1 { 1.0 } else { -1.0 };
                            (sign * c / e, e)
                        }
                        // F is even for signed powers.
                        TermKind::SignedPower(q) => (c / q, q),
                    }
                })
                .collect(),
        )
    }

    /// Max of `|F(x, s)|` over the given vertices and `|s| <= z`, with the
    /// smallest maximizing `|s|` reported (positive side preferred on exact
    /// magnitude ties), as `(max, argmax_s, vertex_local)`.
    pub fn max_abs_potential(
        &self,
        locals: &[usize],
        z: f64,
        tol: &Tolerances,
    ) -> (f64, f64, usize) {
        let mut best = (0.0_f64, 0.0_f64, locals.first().copied().unwrap_or(0));
        let mut first = true;
        for &l in locals {
            for positive in [true, false] {
                let side = self.potential_side(l, positive);
                let (v, sigma) = side.max_abs_on(z, tol.extremum);
                let s = if positive { sigma } else { -sigma };
                let better = if first {
                    true
                } else {
                    v > best.0 * (1.0 + 1e-14) + f64::MIN_POSITIVE
                        || ((v - best.0).abs() <= 1e-14 * (best.0.abs() + 1.0)
                            && s.abs() < best.1.abs() - 1e-300)
                };
                if better {
                    best = (v.max(best.0), s, l);
                    first = false;
                }
            }
        }
        best
    }

    /// Max of `|f(x, s)|` over the given vertices and `|s| <= z`.
    pub fn max_abs_f(&self, locals: &[usize], z: f64, tol: &Tolerances) -> f64 {
        let mut best = 0.0_f64;
        for &l in locals {
            for positive in [true, false] {
                let side = self.f_side(l, positive);
                let (v, _) = side.max_abs_on(z, tol.extremum);
                best = best.max(v);
            }
        }
        best
    }

    /// Smallest exponent appearing in `F` with a nonzero coefficient across
    /// the given vertices, or `None` when `F` vanishes identically.
    fn min_potential_exponent(&self, locals: &[usize]) -> Option<f64> {
        let mut min_e: Option<f64> = None;
        for &l in locals {
            let sides: &[bool] = if self.truncated { &[true] } else { &[true, false] };
            for &positive in sides {
                for (c, e) in merged_terms(&self.potential_side(l, positive)) {
                    if c.abs() > 0.0 {
                        min_e = Some(min_e.map_or(e, |m: f64| m.min(e)));
                    }
                }
            }
        }
        min_e
    }
}

/// Groups a power sum by exponent (within 1e-9) and drops canceled terms.
fn merged_terms(side: &HalfLineFn) -> Vec<(f64, f64)> {
    let mut terms: Vec<(f64, f64)> = Vec::new();
    let scale = side
        .terms
        .iter()
        .fold(0.0_f64, |m, &(c, _)| m.max(c.abs()));
    'next: for &(c, e) in &side.terms {
        for entry in terms.iter_mut() {
            if (entry.1 - e).abs() <= 1e-9 {
                entry.0 += c;
                continue 'next;
            }
        }
        terms.push((c, e));
    }
    terms.retain(|&(c, _)| c.abs() > 1e-13 * (scale + 1.0));
    terms
}

/// Regime of the linear coefficient `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaRegime {
    /// `alpha <= 0` on all of `D`.
    NonPositive,
    /// `integral |alpha| dmu < mu_0^2 lambda_1`.
    SmallL1,
    /// Neither condition holds; the `alpha`-norm machinery is unavailable.
    Invalid,
}

/// Linear coefficient with its classified regime.
#[derive(Debug, Clone)]
pub struct LinearCoefficient {
    values: Vec<f64>,
    pub regime: AlphaRegime,
    /// `integral_D |alpha| dmu`.
    pub abs_integral: f64,
}

impl LinearCoefficient {
    /// Resolves and classifies `alpha` on the domain (`lambda_1` of the same
    /// domain must be supplied). Non-positive coefficients take the
    /// `NonPositive` regime even when the smallness condition also holds.
    pub fn classify(dom: &Domain, alpha: &Coefficient, lambda_1: f64) -> Self {
        let values = alpha.resolve(dom);
        let abs_integral: f64 = (0..dom.len()).map(|l| dom.mu(l) * values[l].abs()).sum();
        let regime = if values.iter().all(|&a| a <= 0.0) {
            AlphaRegime::NonPositive
        } else if abs_integral < dom.mu_min().powi(2) * lambda_1 {
            AlphaRegime::SmallL1
        } else {
            AlphaRegime::Invalid
        };
        LinearCoefficient {
            values,
            regime,
            abs_integral,
        }
    }

    pub fn at(&self, local: usize) -> f64 {
        self.values[local]
    }
}

/// A fully assembled problem instance on a domain.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub domain: Arc<Domain>,
    pub alpha: LinearCoefficient,
    pub f: Nonlinearity,
    pub lambda: f64,
    /// Cached first Dirichlet eigenvalue of the domain.
    pub lambda_1: f64,
}

impl ProblemSpec {
    pub fn new(
        domain: Arc<Domain>,
        alpha: Coefficient,
        f: Nonlinearity,
        lambda: f64,
    ) -> ProblemSpec {
        let lambda_1 = lambda1(&domain).lambda1;
        let alpha = LinearCoefficient::classify(&domain, &alpha, lambda_1);
        ProblemSpec {
            domain,
            alpha,
            f,
            lambda,
            lambda_1,
        }
    }

    /// Same problem at a different `lambda`.
    pub fn with_lambda(&self, lambda: f64) -> ProblemSpec {
        ProblemSpec {
            lambda,
            ..self.clone()
        }
    }

    /// Same domain and `alpha`, different nonlinearity.
    pub fn with_nonlinearity(&self, f: Nonlinearity) -> ProblemSpec {
        ProblemSpec { f, ..self.clone() }
    }
}

// ---------------------------------------------------------------------------
// Problem document parsing
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoeff {
    Num(f64),
    Map(HashMap<String, f64>),
}

#[derive(Deserialize)]
#[serde(tag = "kind")]
enum RawTerm {
    #[serde(rename = "pow")]
    Pow { c: RawCoeff, k: u32 },
    #[serde(rename = "spow")]
    Spow { c: RawCoeff, q: f64 },
}

#[derive(Deserialize)]
struct RawAr {
    beta: f64,
    r0: f64,
}

#[derive(Deserialize)]
struct RawF {
    terms: Vec<RawTerm>,
    #[serde(default)]
    ar: Option<RawAr>,
}

#[derive(Deserialize)]
struct RawOrder {
    m: u32,
    p: f64,
}

#[derive(Deserialize)]
struct RawProblem {
    alpha: RawCoeff,
    lambda: f64,
    f: RawF,
    #[serde(default)]
    order: Option<RawOrder>,
}

fn resolve_coeff(raw: &RawCoeff, dom: &Domain) -> Result<Coefficient, VariationalError> {
    match raw {
        RawCoeff::Num(c) => Ok(Coefficient::Scalar(*c)),
        RawCoeff::Map(map) => {
            let mut values = vec![0.0; dom.len()];
            for (id, &v) in map {
                let l = dom
                    .local_of_id(id)
                    .ok_or_else(|| VariationalError::UnknownVertex { id: id.clone() })?;
                values[l] = v;
            }
            Ok(Coefficient::PerVertex(values))
        }
    }
}

/// Parsed problem document: the spec plus the optional higher-order `(m, p)`
/// section.
pub struct ProblemDocument {
    pub spec: ProblemSpec,
    pub order: Option<(u32, f64)>,
}

/// Parses a problem document against an already-decomposed domain.
pub fn load_problem(
    dom: &Arc<Domain>,
    json: &str,
) -> Result<ProblemDocument, VariationalError> {
    let raw: RawProblem =
        serde_json::from_str(json).map_err(|e| VariationalError::Parse(e.to_string()))?;
    if !raw.lambda.is_finite() || raw.lambda <= 0.0 {
        return Err(VariationalError::Parse(format!(
            "lambda must be positive, got {}",
            raw.lambda
        )));
    }
    let mut terms = Vec::new();
    for t in &raw.f.terms {
        let term = match t {
            RawTerm::Pow { c, k } => Term {
                coeff: resolve_coeff(c, dom)?,
                kind: TermKind::IntegerPower(*k),
            },
            RawTerm::Spow { c, q } => {
                if !q.is_finite() || *q <= 1.0 {
                    return Err(VariationalError::Parse(format!(
                        "spow exponent must satisfy q > 1, got {q}"
                    )));
                }
                Term {
                    coeff: resolve_coeff(c, dom)?,
                    kind: TermKind::SignedPower(*q),
                }
            }
        };
        terms.push(term);
    }
    let ar = raw.f.ar.map(|a| ArParams {
        beta: a.beta,
        r0: a.r0,
    });
    if let Some(order) = &raw.order {
        if order.m == 0 || !order.p.is_finite() || order.p <= 1.0 {
            return Err(VariationalError::Parse(
                "order requires m >= 1 and p > 1".into(),
            ));
        }
    }
    let alpha = resolve_coeff(&raw.alpha, dom)?;
    let spec = ProblemSpec::new(
        Arc::clone(dom),
        alpha,
        Nonlinearity::new(terms, ar),
        raw.lambda,
    );
    Ok(ProblemDocument {
        spec,
        order: raw.order.map(|o| (o.m, o.p)),
    })
}

// ---------------------------------------------------------------------------
// Norms, embedding, energy
// ---------------------------------------------------------------------------

/// `||u||_alpha^2 = integral |grad u|^2 dmu - integral alpha u^2 dmu`.
pub fn alpha_norm_sq(spec: &ProblemSpec, u: &VertexFn) -> f64 {
    let dom = &spec.domain;
    let mass: f64 = (0..dom.len())
        .map(|l| dom.mu(l) * spec.alpha.at(l) * u.value(l) * u.value(l))
        .sum();
    dirichlet_energy(dom, u).expect("matching domain") - mass
}

pub fn alpha_norm(spec: &ProblemSpec, u: &VertexFn) -> f64 {
    alpha_norm_sq(spec, u).max(0.0).sqrt()
}

/// `<u, v>_alpha = integral Gamma(u, v) dmu - integral alpha u v dmu`.
pub fn alpha_inner(spec: &ProblemSpec, u: &VertexFn, v: &VertexFn) -> f64 {
    let dom = &spec.domain;
    let mass: f64 = (0..dom.len())
        .map(|l| dom.mu(l) * spec.alpha.at(l) * u.value(l) * v.value(l))
        .sum();
    energy_inner_product(dom, u, v).expect("matching domain") - mass
}

/// Equivalence constants `c1 ||u|| <= ||u||_alpha <= c2 ||u||` for the current
/// regime (`None` when the regime is invalid).
pub fn norm_equivalence_bounds(spec: &ProblemSpec) -> Option<(f64, f64)> {
    let ratio =
        spec.alpha.abs_integral / (spec.domain.mu_min().powi(2) * spec.lambda_1);
    match spec.alpha.regime {
        AlphaRegime::NonPositive => Some((1.0, (1.0 + ratio).sqrt())),
        AlphaRegime::SmallL1 => Some(((1.0 - ratio).sqrt(), 2.0_f64.sqrt())),
        AlphaRegime::Invalid => None,
    }
}

/// Sup-norm embedding constant: `||u||_inf <= kappa ||u||_alpha` on the
/// Dirichlet class. `None` when the regime is invalid.
pub fn kappa(spec: &ProblemSpec) -> Option<f64> {
    let base = 1.0 / (spec.domain.mu_min() * spec.lambda_1.sqrt());
    match spec.alpha.regime {
        AlphaRegime::NonPositive => Some(base),
        AlphaRegime::SmallL1 => {
            let ratio =
                spec.alpha.abs_integral / (spec.domain.mu_min().powi(2) * spec.lambda_1);
            Some(base / (1.0 - ratio).sqrt())
        }
        AlphaRegime::Invalid => None,
    }
}

/// Residuals of the two embedding inequalities for a Dirichlet-class `u`:
///
/// * `||u||_inf - ||u|| / (mu_0 sqrt(lambda_1))`
/// * `||u||_{L^nu} - mu(D)^(1/nu) ||u|| / (mu_0 sqrt(lambda_1))`
///
/// Both are `<= 0` up to rounding; zero residual witnesses tightness.
pub fn embedding_residuals(dom: &Domain, lambda_1: f64, u: &VertexFn, nu: f64) -> (f64, f64) {
    let norm = dirichlet_energy(dom, u)
        .expect("matching domain")
        .max(0.0)
        .sqrt();
    let bound = norm / (dom.mu_min() * lambda_1.sqrt());
    let sup_res = u.sup_norm() - bound;
    let lnu: f64 = (0..dom.len())
        .map(|l| dom.mu(l) * u.value(l).abs().powf(nu))
        .sum::<f64>()
        .powf(1.0 / nu);
    let lnu_res = lnu - dom.volume().powf(1.0 / nu) * bound;
    (sup_res, lnu_res)
}

/// `integral F(x, u(x)) dmu`.
pub fn potential_integral(spec: &ProblemSpec, u: &VertexFn) -> f64 {
    let dom = &spec.domain;
    (0..dom.len())
        .map(|l| dom.mu(l) * spec.f.potential(l, u.value(l)))
        .sum()
}

/// Energy `J(u) = ||u||_alpha^2 / (2 lambda) - integral F(x, u) dmu`.
pub fn energy(spec: &ProblemSpec, u: &VertexFn) -> f64 {
    alpha_norm_sq(spec, u) / (2.0 * spec.lambda) - potential_integral(spec, u)
}

/// Gateaux derivative `<J'(u), v> = <u, v>_alpha / lambda -
/// integral f(x, u) v dmu`.
pub fn weak_form(spec: &ProblemSpec, u: &VertexFn, v: &VertexFn) -> f64 {
    let dom = &spec.domain;
    let fv: f64 = (0..dom.len())
        .map(|l| dom.mu(l) * spec.f.eval(l, u.value(l)) * v.value(l))
        .sum();
    alpha_inner(spec, u, v) / spec.lambda - fv
}

/// Pointwise representation of the weak gradient: the vertex function `r`
/// with `r(x) = -Delta_mu u(x)/lambda - alpha(x) u(x)/lambda - f(x, u(x))` on
/// the interior and zero on the boundary, so that
/// `<J'(u), v> = integral r v dmu` for every Dirichlet-class `v`.
pub fn weak_gradient(spec: &ProblemSpec, u: &VertexFn) -> VertexFn {
    let dom = &spec.domain;
    let mut r = VertexFn::zeros(dom);
    for &l in dom.interior() {
        let lap = laplacian(dom, u, l).expect("matching domain");
        r.set(
            l,
            -lap / spec.lambda - spec.alpha.at(l) * u.value(l) / spec.lambda
                - spec.f.eval(l, u.value(l)),
        );
    }
    r
}

/// Classical residual `R(x) = -Delta_mu u(x) - alpha(x) u(x) -
/// lambda f(x, u(x))` at the interior vertices (in [`Domain::interior`]
/// order).
pub fn classical_residual(spec: &ProblemSpec, u: &VertexFn) -> Vec<f64> {
    let dom = &spec.domain;
    dom.interior()
        .iter()
        .map(|&l| {
            let lap = laplacian(dom, u, l).expect("matching domain");
            -lap - spec.alpha.at(l) * u.value(l) - spec.lambda * spec.f.eval(l, u.value(l))
        })
        .collect()
}

pub fn classical_residual_max(spec: &ProblemSpec, u: &VertexFn) -> f64 {
    classical_residual(spec, u)
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.abs()))
}

/// Exact dual norm of the weak gradient over the Dirichlet class equipped
/// with the energy norm: `sup { <J'(u), v> : ||v|| = 1 }`.
pub fn weak_residual_sup(spec: &ProblemSpec, u: &VertexFn) -> f64 {
    let dom = &spec.domain;
    let s = assemble_stiffness(dom);
    let r = weak_gradient(spec, u);
    let g = nalgebra::DVector::from_vec(
        dom.interior()
            .iter()
            .map(|&l| dom.mu(l) * r.value(l))
            .collect::<Vec<_>>(),
    );
    let chol = s
        .interior
        .clone()
        .cholesky()
        .expect("stiffness is positive definite");
    let z = chol.solve(&g);
    g.dot(&z).max(0.0).sqrt()
}

/// Constants `(c_weak, c_classical)` relating the residual notions on this
/// problem: `weak_residual_sup <= c_weak * max|R|` and
/// `max|R| <= c_classical * weak_residual_sup`, for every `u`.
pub fn weak_classical_constants(spec: &ProblemSpec) -> (f64, f64) {
    let dom = &spec.domain;
    let c_weak =
        dom.volume() / (spec.lambda * dom.mu_min() * spec.lambda_1.sqrt());
    let c_classical = spec.lambda
        * dom
            .interior()
            .iter()
            .map(|&l| dom.degree_in(l).sqrt() / dom.mu(l))
            .fold(0.0_f64, f64::max);
    (c_weak, c_classical)
}

// ---------------------------------------------------------------------------
// Hypothesis checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArVariant {
    /// `t f(x, t) >= beta F(x, t) > 0` for `|t| >= r0`.
    TwoSided,
    /// Same inequality required only for `t >= r0`.
    PositiveSide,
}

/// Sampling grid for the growth check: geometric points from `r0` to `t_max`.
#[derive(Debug, Clone, Copy)]
pub struct ArGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl ArGrid {
    pub fn standard(r0: f64) -> ArGrid {
        ArGrid {
            t_max: 100.0 * r0.max(1.0),
            samples: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ArWitness {
    pub vertex: String,
    pub t: f64,
    /// `t f(x, t)`.
    pub lhs: f64,
    /// `beta F(x, t)`.
    pub rhs: f64,
}

/// Outcome of the superquadraticity check.
#[derive(Debug, Clone)]
pub struct ArCheck {
    pub pass: bool,
    pub beta: f64,
    pub r0: f64,
    pub variant: ArVariant,
    /// First grid point violating the inequality, if any.
    pub witness: Option<ArWitness>,
    /// Leading-term comparison: the inequality holds for all sufficiently
    /// large `t > 0`.
    pub symbolic_positive: bool,
    /// Same for `t < 0`; `None` for the one-sided variant.
    pub symbolic_negative: Option<bool>,
}

fn symbolic_side_ok(f: &Nonlinearity, l: usize, beta: f64, positive: bool) -> bool {
    // g = t f - beta F on the chosen side; condition holds for large |t| iff
    // the leading term of g is positive (or g vanishes identically) and the
    // leading term of F is positive.
    let f_side = f.f_side(l, positive);
    let mut g_terms: Vec<(f64, f64)> = f_side
        .terms
        .iter()
        .map(|&(c, e)| {
            // t * f: on the negative side t = -sigma multiplies f(-sigma).
            let sign = if positive { 1.0 } else { -1.0 };
            (sign * c, e + 1.0)
        })
        .collect();
    for (c, e) in f.potential_side(l, positive).terms {
        g_terms.push((-beta * c, e));
    }
    let g = merged_terms(&HalfLineFn::new(g_terms));
    let f_lead = merged_terms(&f.potential_side(l, positive))
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let f_ok = matches!(f_lead, Some((c, _)) if c > 0.0);
    let g_ok = match g.into_iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
        None => true, // exact equality t f = beta F
        Some((c, _)) => c > 0.0,
    };
    f_ok && g_ok
}

/// Grid falsifier for `t f(x, t) >= beta F(x, t) > 0` on `|t| >= r0`
/// (or `t >= r0`), plus the symbolic leading-term sufficiency report.
pub fn check_ar(
    dom: &Domain,
    f: &Nonlinearity,
    beta: f64,
    r0: f64,
    variant: ArVariant,
    grid: ArGrid,
) -> ArCheck {
    let mut check = ArCheck {
        pass: beta > 2.0 && r0 > 0.0,
        beta,
        r0,
        variant,
        witness: None,
        symbolic_positive: (0..dom.len()).all(|l| symbolic_side_ok(f, l, beta, true)),
        symbolic_negative: match variant {
            ArVariant::TwoSided => {
                Some((0..dom.len()).all(|l| symbolic_side_ok(f, l, beta, false)))
            }
            ArVariant::PositiveSide => None,
        },
    };
    if !check.pass {
        return check;
    }
    let signs: &[f64] = match variant {
        ArVariant::TwoSided => &[1.0, -1.0],
        ArVariant::PositiveSide => &[1.0],
    };
    let n = grid.samples.max(2);
    'outer: for l in 0..dom.len() {
        for &sign in signs {
            for j in 0..n {
                let t = sign * r0 * (grid.t_max / r0).powf(j as f64 / (n - 1) as f64);
                let lhs = t * f.eval(l, t);
                let rhs = beta * f.potential(l, t);
                let pot = f.potential(l, t);
                let ok = lhs >= rhs - 1e-12 * (1.0 + lhs.abs() + rhs.abs()) && pot > 0.0;
                if !ok {
                    check.pass = false;
                    check.witness = Some(ArWitness {
                        vertex: dom.id_of(l).to_owned(),
                        t,
                        lhs,
                        rhs,
                    });
                    break 'outer;
                }
            }
        }
    }
    check
}

/// Constants `(b1, b2)` of the superquadratic lower bound
/// `F(x, t) >= b1 |t|^beta - b2`:
/// `b1 = min_x min(F(x, r0), F(x, -r0)) / r0^beta` and
/// `b2 = max_x ( max_{|t| <= r0} |F(x, t)| + min(F(x, r0), F(x, -r0)) )`.
pub fn superquadratic_bounds(
    dom: &Domain,
    f: &Nonlinearity,
    beta: f64,
    r0: f64,
    tol: &Tolerances,
) -> (f64, f64) {
    let mut b1 = f64::INFINITY;
    let mut b2 = f64::NEG_INFINITY;
    for l in 0..dom.len() {
        let m = f.potential(l, r0).min(f.potential(l, -r0)) / r0.powf(beta);
        let (cap, _, _) = f.max_abs_potential(&[l], r0, tol);
        b1 = b1.min(m);
        b2 = b2.max(cap + m * r0.powf(beta));
    }
    (b1, b2)
}

/// Admissible-interval endpoint
/// `Lambda(rho) = rho / (2 max_{x in D, |s| <= kappa sqrt(rho)} |F(x, s)|)`;
/// `+inf` when `F` vanishes on the ball.
pub fn lambda_admissible(
    spec: &ProblemSpec,
    rho: f64,
    tol: &Tolerances,
) -> Result<f64, VariationalError> {
    let kap = kappa(spec).ok_or(VariationalError::InvalidAlphaRegime)?;
    let z = kap * rho.max(0.0).sqrt();
    let locals: Vec<usize> = (0..spec.domain.len()).collect();
    let (max_f, _, _) = spec.f.max_abs_potential(&locals, z, tol);
    if max_f == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(rho / (2.0 * max_f))
}

/// Threshold `lambda_star = sup_{rho > 0} rho / max_{x, |s| <= kappa
/// sqrt(rho)} |F(x, s)| = (1/kappa^2) sup_{z > 0} z^2 / max_{x, |s| <= z}
/// |F(x, s)|`, with `+inf` when the potential is superquadratic at the origin
/// (the quotient blows up as `z -> 0`).
pub fn lambda_star(spec: &ProblemSpec, tol: &Tolerances) -> Result<f64, VariationalError> {
    let kap = kappa(spec).ok_or(VariationalError::InvalidAlphaRegime)?;
    let locals: Vec<usize> = (0..spec.domain.len()).collect();
    let min_e = spec.f.min_potential_exponent(&locals);
    match min_e {
        None => return Ok(f64::INFINITY), // F identically zero
        Some(e) if e > 2.0 + 1e-12 => return Ok(f64::INFINITY),
        _ => {}
    }
    // Hoist the interior extremum candidates of every one-sided potential:
    // they do not depend on the interval, so the scan below only has to
    // evaluate each side at `z` and compare against the cached values.
    struct Side {
        f: HalfLineFn,
        at_zero: f64,
        crit: Vec<(f64, f64)>, // ascending (abscissa, |F|)
    }
    let sides: Vec<Side> = locals
        .iter()
        .flat_map(|&l| {
            [true, false].into_iter().map(move |positive| {
                let f = spec.f.potential_side(l, positive);
                let crit = f
                    .stationary_points(1e30, tol.extremum)
                    .into_iter()
                    .map(|r| (r, f.eval(r).abs()))
                    .collect();
                let at_zero = f.eval(0.0).abs();
                Side { f, at_zero, crit }
            })
        })
        .collect();
    let phi = |z: f64| -> f64 {
        let mut g = 0.0_f64;
        for side in &sides {
            g = g.max(side.at_zero).max(side.f.eval(z).abs());
            for &(r, v) in &side.crit {
                if r >= z {
                    break;
                }
                g = g.max(v);
            }
        }
        if g == 0.0 {
            f64::INFINITY
        } else {
            z * z / g
        }
    };
    // Coarse log-spaced scan over twelve decades, then golden refinement.
    let decades = (-6.0, 6.0);
    let n = 600;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    let zs: Vec<f64> = (0..=n)
        .map(|i| 10f64.powf(decades.0 + (decades.1 - decades.0) * i as f64 / n as f64))
        .collect();
    for (i, &z) in zs.iter().enumerate() {
        let v = phi(z);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    if !best_v.is_finite() {
        return Ok(f64::INFINITY);
    }
    // Growing tail: extend to the right; superquadratic potentials always
    // decay, so unbounded growth means lambda_star is infinite.
    if best_i == n {
        let mut z = zs[n];
        let mut v = best_v;
        for _ in 0..20 {
            z *= 10.0;
            let nv = phi(z);
            if nv <= v * (1.0 + 1e-9) {
                break;
            }
            v = nv;
        }
        if v > best_v * (1.0 + 1e-6) {
            return Ok(f64::INFINITY);
        }
    }
    if best_i == 0 {
        // Increasing toward 0 would mean a superquadratic origin, which the
        // symbolic test above already routed to the sentinel.
        return Ok(best_v / (kap * kap));
    }
    let lo = zs[best_i - 1];
    let hi = zs[(best_i + 1).min(n)];
    let (_, v) = golden_max(&phi, lo, hi, 0.01 * tol.lambda_star_rel);
    Ok(v.max(best_v) / (kap * kap))
}

/// Smallness check of the nonlinearity on `[-m0, m0]`:
/// `max_{interior x, |t| <= m0} |f| <= mu_0^2 m0 lambda_1 / (2 (sigma + 1))`.
#[derive(Debug, Clone)]
pub struct F1Check {
    pub pass: bool,
    pub max_abs_f: f64,
    pub bound: f64,
    pub m0: f64,
    pub sigma: f64,
}

pub fn check_f1(
    dom: &Domain,
    lambda_1: f64,
    f: &Nonlinearity,
    m0: f64,
    sigma: f64,
    tol: &Tolerances,
) -> F1Check {
    let max_abs_f = f.max_abs_f(dom.interior(), m0, tol);
    let bound = dom.mu_min().powi(2) * m0 * lambda_1 / (2.0 * (sigma + 1.0));
    F1Check {
        pass: max_abs_f <= bound * (1.0 + 1e-12),
        max_abs_f,
        bound,
        m0,
        sigma,
    }
}

/// Measure-vs-nonlinearity smallness `mu_0 > 2 sqrt(max_{[-1,1]} f /
/// lambda_1)`; a strict special case of [`check_f1`] at `m0 = 1`,
/// `sigma = 1`.
#[derive(Debug, Clone)]
pub struct SmallnessCheck {
    pub pass: bool,
    pub max_f: f64,
    pub threshold: f64,
}

pub fn check_corollary_smallness(
    dom: &Domain,
    lambda_1: f64,
    f: &Nonlinearity,
    tol: &Tolerances,
) -> SmallnessCheck {
    // Signed max of f over interior vertices and [-1, 1].
    let mut max_f = f64::NEG_INFINITY;
    for &l in dom.interior() {
        for positive in [true, false] {
            let side = f.f_side(l, positive);
            let mut candidates = vec![0.0, 1.0];
            if let Some(dcs) = side.derivative().as_poly() {
                candidates.extend(
                    crate::numeric::poly_real_roots(&dcs)
                        .into_iter()
                        .filter(|&r| r > 0.0 && r < 1.0),
                );
            } else {
                let eval = |s: f64| side.eval(s);
                let (s, _) = crate::numeric::scan_max(&eval, 0.0, 1.0, 512, tol.extremum);
                candidates.push(s);
            }
            for s in candidates {
                max_f = max_f.max(side.eval(s));
            }
        }
    }
    let threshold = 2.0 * (max_f.max(0.0) / lambda_1).sqrt();
    SmallnessCheck {
        pass: dom.mu_min() > threshold,
        max_f,
        threshold,
    }
}

/// Sublinearity at the origin: `limsup_{t -> 0+} f(x, t)/t < lambda_1` at
/// every interior vertex.
#[derive(Debug, Clone)]
pub struct F1lCheck {
    pub pass: bool,
    /// Largest per-vertex limit (`+inf`/`-inf` when a sub-linear term
    /// dominates).
    pub worst_limit: f64,
    /// Sampled ratio `f(x, t)/t` at `t = 1e-6`, for the report.
    pub sampled_ratio: f64,
}

pub fn check_f1l(dom: &Domain, lambda_1: f64, f: &Nonlinearity) -> F1lCheck {
    let mut worst = f64::NEG_INFINITY;
    let mut sampled = f64::NEG_INFINITY;
    for &l in dom.interior() {
        let terms = merged_terms(&f.f_side(l, true));
        // Dominant behavior of f(t)/t as t -> 0+: the smallest exponent
        // below 1 diverges; otherwise the exponent-1 coefficient is the
        // limit.
        let sub = terms
            .iter()
            .filter(|&&(_, e)| e < 1.0 - 1e-9)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let limit = match sub {
            Some(&(c, _)) => {
                if c > 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
            None => terms
                .iter()
                .filter(|&&(_, e)| (e - 1.0).abs() <= 1e-9)
                .map(|&(c, _)| c)
                .sum(),
        };
        worst = worst.max(limit);
        let t = 1e-6;
        sampled = sampled.max(f.eval(l, t) / t);
    }
    F1lCheck {
        pass: worst < lambda_1,
        worst_limit: worst,
        sampled_ratio: sampled,
    }
}

/// Doubles `t` from 1 until `J(t u0) < threshold`, confirming the energy is
/// unbounded below along the ray; `None` if `t_cap` is reached first.
pub fn unbounded_below_escape(
    spec: &ProblemSpec,
    u0: &VertexFn,
    threshold: f64,
    t_cap: f64,
) -> Option<(f64, f64)> {
    let mut t = 1.0;
    while t <= t_cap {
        let j = energy(spec, &u0.scaled(t));
        if j < threshold {
            return Some((t, j));
        }
        t *= 2.0;
    }
    None
}

/// Aggregated hypothesis record, as reported by the solvers and the `verify`
/// command.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub regime: AlphaRegime,
    pub f_vanishes_at_zero: bool,
    pub ar: Option<ArCheck>,
    pub f1l: F1lCheck,
    pub lambda: f64,
    /// `None` when the regime blocks the computation; `+inf` encodes the
    /// sentinel.
    pub lambda_star: Option<f64>,
    /// `lambda < lambda_star`.
    pub lambda_admissible: Option<bool>,
    pub kappa: Option<f64>,
    pub norm_bounds: Option<(f64, f64)>,
}

/// Runs every hypothesis check for the problem.
pub fn verify_hypotheses(spec: &ProblemSpec, tol: &Tolerances) -> HypothesisReport {
    let dom = &spec.domain;
    let ar = spec.f.ar.map(|p| {
        check_ar(
            dom,
            &spec.f,
            p.beta,
            p.r0,
            if spec.f.is_truncated() {
                ArVariant::PositiveSide
            } else {
                ArVariant::TwoSided
            },
            ArGrid::standard(p.r0),
        )
    });
    let ls = lambda_star(spec, tol).ok();
    HypothesisReport {
        regime: spec.alpha.regime,
        f_vanishes_at_zero: spec.f.vanishes_at_zero(dom.interior()),
        ar,
        f1l: check_f1l(dom, spec.lambda_1, &spec.f),
        lambda: spec.lambda,
        lambda_star: ls,
        lambda_admissible: ls.map(|v| spec.lambda < v),
        kappa: kappa(spec),
        norm_bounds: norm_equivalence_bounds(spec),
    }
}
