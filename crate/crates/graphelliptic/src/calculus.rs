//! The `mu`-Laplacian and its first-order calculus on a domain.
//!
//! All neighbor sums are restricted to the domain `D`. For Dirichlet-class
//! functions (zero on the vertex boundary) this agrees with computing on the
//! ambient graph with the function extended by zero, and it makes the
//! summation-by-parts identity
//! `-integral (Delta_mu u) v dmu = integral Gamma(u, v) dmu`
//! an exact algebraic identity for *every* pair of functions on `D`.

use crate::graph::{integrate, Domain, DomainError, VertexFn};
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalculusError {
    #[error("vertex index {index} is outside the domain (size {size})")]
    VertexOutsideDomain { index: usize, size: usize },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

fn check_len(dom: &Domain, u: &VertexFn) -> Result<(), CalculusError> {
    if u.len() != dom.len() {
        return Err(CalculusError::Domain(DomainError::DomainMismatch {
            expected: dom.len(),
            got: u.len(),
        }));
    }
    Ok(())
}

fn check_vertex(dom: &Domain, x: usize) -> Result<(), CalculusError> {
    if x >= dom.len() {
        return Err(CalculusError::VertexOutsideDomain {
            index: x,
            size: dom.len(),
        });
    }
    Ok(())
}

/// `Delta_mu u(x) = (1/mu(x)) sum_{y ~ x, y in D} w(x, y) (u(y) - u(x))`.
pub fn laplacian(dom: &Domain, u: &VertexFn, x: usize) -> Result<f64, CalculusError> {
    check_len(dom, u)?;
    check_vertex(dom, x)?;
    let ux = u.value(x);
    let sum: f64 = dom
        .neighbors_in(x)
        .iter()
        .map(|&(y, w)| w * (u.value(y) - ux))
        .sum();
    Ok(sum / dom.mu(x))
}

/// The Laplacian applied at every domain vertex.
pub fn laplacian_fn(dom: &Domain, u: &VertexFn) -> Result<VertexFn, CalculusError> {
    check_len(dom, u)?;
    let values = (0..dom.len())
        .map(|x| laplacian(dom, u, x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexFn::from_values(dom, values).expect("length preserved"))
}

/// Gradient form
/// `Gamma(u, v)(x) = (1/(2 mu(x))) sum_{y ~ x, y in D} w(x, y) (u(y)-u(x)) (v(y)-v(x))`.
pub fn gradient_form(
    dom: &Domain,
    u: &VertexFn,
    v: &VertexFn,
    x: usize,
) -> Result<f64, CalculusError> {
    check_len(dom, u)?;
    check_len(dom, v)?;
    check_vertex(dom, x)?;
    let (ux, vx) = (u.value(x), v.value(x));
    let sum: f64 = dom
        .neighbors_in(x)
        .iter()
        .map(|&(y, w)| w * (u.value(y) - ux) * (v.value(y) - vx))
        .sum();
    Ok(sum / (2.0 * dom.mu(x)))
}

/// Local slope `|grad u|(x) = sqrt(Gamma(u, u)(x))`.
pub fn slope(dom: &Domain, u: &VertexFn, x: usize) -> Result<f64, CalculusError> {
    Ok(gradient_form(dom, u, u, x)?.max(0.0).sqrt())
}

/// Dirichlet energy `integral |grad u|^2 dmu = sum_x mu(x) Gamma(u, u)(x)`.
///
/// Computed as the equivalent sum over edges inside `D`,
/// `sum_{xy in E(D)} w(x, y) (u(y) - u(x))^2`, which is exact and
/// cancellation-free.
pub fn dirichlet_energy(dom: &Domain, u: &VertexFn) -> Result<f64, CalculusError> {
    energy_inner_product(dom, u, u)
}

/// Energy inner product `<u, v> = integral Gamma(u, v) dmu`.
///
/// This is the solver-facing inner product on the Dirichlet class; see
/// [`full_inner_product`] for the variant with the mass term.
pub fn energy_inner_product(
    dom: &Domain,
    u: &VertexFn,
    v: &VertexFn,
) -> Result<f64, CalculusError> {
    check_len(dom, u)?;
    check_len(dom, v)?;
    let mut acc = 0.0;
    for x in 0..dom.len() {
        for &(y, w) in dom.neighbors_in(x) {
            if y > x {
                acc += w * (u.value(y) - u.value(x)) * (v.value(y) - v.value(x));
            }
        }
    }
    Ok(acc)
}

/// Full inner product `integral Gamma(u, v) dmu + integral u v dmu`.
pub fn full_inner_product(
    dom: &Domain,
    u: &VertexFn,
    v: &VertexFn,
) -> Result<f64, CalculusError> {
    let mass: f64 = (0..dom.len())
        .map(|x| dom.mu(x) * u.value(x) * v.value(x))
        .sum();
    Ok(energy_inner_product(dom, u, v)? + mass)
}

/// Assembled operator of the Dirichlet problem.
///
/// For `u` on `D` split into interior and boundary blocks,
/// `(-mu * Delta_mu u)|interior = interior * u_int + boundary_coupling * u_bd`.
/// `interior` is symmetric positive definite whenever the domain is connected
/// with non-empty boundary; `mass` is the interior measure vector.
#[derive(Debug, Clone)]
pub struct Stiffness {
    pub interior: DMatrix<f64>,
    pub boundary_coupling: DMatrix<f64>,
    pub mass: Vec<f64>,
}

/// Builds the stiffness blocks `(L u)(x) = -mu(x) Delta_mu u(x)` over the
/// interior, for functions vanishing outside `D`.
pub fn assemble_stiffness(dom: &Domain) -> Stiffness {
    let interior = dom.interior();
    let boundary = dom.boundary();
    let n = interior.len();
    let m = boundary.len();
    let int_pos: std::collections::HashMap<usize, usize> =
        interior.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let bd_pos: std::collections::HashMap<usize, usize> =
        boundary.iter().enumerate().map(|(i, &l)| (l, i)).collect();

    let mut l = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, m);
    for (i, &x) in interior.iter().enumerate() {
        l[(i, i)] = dom.degree_in(x);
        for &(y, w) in dom.neighbors_in(x) {
            if let Some(&j) = int_pos.get(&y) {
                l[(i, j)] -= w;
            } else {
                b[(i, bd_pos[&y])] -= w;
            }
        }
    }
    Stiffness {
        interior: l,
        boundary_coupling: b,
        mass: interior.iter().map(|&x| dom.mu(x)).collect(),
    }
}

/// Residual of the summation-by-parts identity,
/// `| integral Gamma(u, v) dmu + integral (Delta_mu u) v dmu |`.
///
/// Zero up to rounding for every `u` and every Dirichlet-class `v`.
pub fn check_parts_identity(
    dom: &Domain,
    u: &VertexFn,
    v: &VertexFn,
) -> Result<f64, CalculusError> {
    let gamma = energy_inner_product(dom, u, v)?;
    let lap_v = {
        let lap = laplacian_fn(dom, u)?;
        let prod = VertexFn::from_values(
            dom,
            (0..dom.len()).map(|x| lap.value(x) * v.value(x)).collect(),
        )
        .expect("length preserved");
        integrate(dom, &prod).map_err(CalculusError::Domain)?
    };
    Ok((gamma + lap_v).abs())
}
