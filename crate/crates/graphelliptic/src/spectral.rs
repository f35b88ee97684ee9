//! Dirichlet spectrum: the first eigenvalue `lambda_1` with certificate, the
//! Rayleigh quotient, and the `(m, p)` constraint-class eigenvalues.
//!
//! `lambda_1` is the minimum of `integral |grad u|^2 dmu / integral u^2 dmu`
//! over nonzero Dirichlet-class functions, realized as the smallest eigenvalue
//! of the generalized symmetric problem `L u = lambda M u` on the interior
//! (`L` the stiffness blocks, `M = diag(mu)`). Small problems are solved
//! densely; above [`crate::Tolerances::dense_max`] interior vertices a shifted
//! inverse power iteration takes over.

use crate::calculus::{assemble_stiffness, dirichlet_energy};
use crate::graph::{Domain, VertexFn};
use crate::higher_order::{
    constraint_class_basis, full_stiffness_matrix, higher_slope, mp_dual_vector,
    mu_laplacian_matrix,
};
use crate::Tolerances;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("Rayleigh quotient of the zero function is undefined")]
    ZeroFunction,
    #[error("constraint class contains only the zero function")]
    TrivialConstraintClass,
    #[error(transparent)]
    Calculus(#[from] crate::calculus::CalculusError),
}

/// First Dirichlet eigenvalue with its certificate.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda1: f64,
    /// Eigenfunction, zero on the boundary, normalized to
    /// `integral u^2 dmu = 1`, sign fixed so its largest-magnitude entry is
    /// positive.
    pub eigenfunction: VertexFn,
    /// `|| L u - lambda M u ||_inf` in the assembled interior variables.
    pub residual: f64,
}

/// Computes `lambda_1(D)` and its eigenfunction.
pub fn lambda1(dom: &Domain) -> EigenResult {
    lambda1_with(dom, &Tolerances::default())
}

pub fn lambda1_with(dom: &Domain, tol: &Tolerances) -> EigenResult {
    let s = assemble_stiffness(dom);
    let n = s.interior.nrows();
    let inv_sqrt: Vec<f64> = s.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    // Symmetric reduction A = M^(-1/2) L M^(-1/2); its eigenvalues are the
    // generalized eigenvalues, and unit eigenvectors y give L^2-normalized
    // eigenfunctions u = M^(-1/2) y.
    let a = DMatrix::from_fn(n, n, |i, j| s.interior[(i, j)] * inv_sqrt[i] * inv_sqrt[j]);
    let (lambda, y) = if n == 1 {
        (a[(0, 0)], DVector::from_element(1, 1.0))
    } else if n <= tol.dense_max {
        smallest_eig_dense(&a)
    } else {
        smallest_eig_inverse_power(&a, tol)
    };

    let mut y = y;
    y /= y.norm();
    // Sign normalization: largest-magnitude entry positive.
    let mut arg = 0;
    for i in 0..n {
        if y[i].abs() > y[arg].abs() {
            arg = i;
        }
    }
    if y[arg] < 0.0 {
        y = -y;
    }

    let interior_vals: Vec<f64> = y.iter().zip(&inv_sqrt).map(|(yi, s)| yi * s).collect();
    let u = VertexFn::from_interior(dom, &interior_vals);

    let ui = DVector::from_vec(interior_vals);
    let lu = &s.interior * &ui;
    let residual = (0..n).fold(0.0_f64, |m, i| {
        m.max((lu[i] - lambda * s.mass[i] * ui[i]).abs())
    });

    EigenResult {
        lambda1: lambda,
        eigenfunction: u,
        residual,
    }
}

fn smallest_eig_dense(a: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = a.clone().symmetric_eigen();
    let mut arg = 0;
    for i in 0..eig.eigenvalues.len() {
        if eig.eigenvalues[i] < eig.eigenvalues[arg] {
            arg = i;
        }
    }
    (
        eig.eigenvalues[arg],
        eig.eigenvectors.column(arg).into_owned(),
    )
}

/// Inverse power iteration on a positive definite matrix; converges to the
/// smallest eigenpair. Used beyond the dense cutoff.
fn smallest_eig_inverse_power(a: &DMatrix<f64>, tol: &Tolerances) -> (f64, DVector<f64>) {
    let n = a.nrows();
    let lu = a.clone().lu();
    let mut y = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let z = lu.solve(&y).expect("stiffness reduction is positive definite");
        let z = z.normalize();
        let az = a * &z;
        lambda = z.dot(&az);
        let res = (0..n).fold(0.0_f64, |m, i| m.max((az[i] - lambda * z[i]).abs()));
        y = z;
        if res <= 0.1 * tol.eigen_residual * (1.0 + lambda.abs()) {
            break;
        }
    }
    (lambda, y)
}

/// The `(m, p)` constraint-class eigenvalue
/// `lambda_{m,p} = inf integral |grad^m u|^p dmu / integral |u|^p dmu`
/// over nonzero members of `C_0^m(D)`.
#[derive(Debug, Clone)]
pub struct LambdaMp {
    pub lambda: f64,
    /// A minimizing function, normalized to `integral |u|^p dmu = 1` with
    /// its largest-magnitude entry positive.
    pub minimizer: VertexFn,
    /// Dimension of the constraint class.
    pub class_dim: usize,
    /// `true` for the `p = 2` spectral path; `false` for the descent
    /// heuristic used when `p != 2`, whose value is an upper bound on the
    /// infimum that is exact only up to the quality of the search.
    pub exact: bool,
    /// `p = 2`: sup norm of the reduced eigen-equation defect. Otherwise the
    /// sup norm of the final sphere-projected quotient gradient.
    pub residual: f64,
}

/// Computes `lambda_{m,p}(D)` over the constraint class `C_0^m(D)`.
///
/// For `p = 2` the quotient is a generalized Rayleigh quotient of the
/// quadratic form `integral |grad^m u|^2 dmu` against the `L^2(mu)` mass, and
/// is solved exactly as a reduced symmetric eigenproblem on the class. For
/// `p != 2` no finite eigendecomposition exists; the infimum is approached by
/// projected gradient descent on the class sphere from several deterministic
/// starts, and the result is flagged as inexact. (When the class is
/// one-dimensional the quotient is constant, so the heuristic value is exact
/// there too.)
pub fn lambda_mp(dom: &Domain, m: u32, p: f64) -> Result<LambdaMp, SpectralError> {
    lambda_mp_with(dom, m, p, &Tolerances::default())
}

pub fn lambda_mp_with(
    dom: &Domain,
    m: u32,
    p: f64,
    tol: &Tolerances,
) -> Result<LambdaMp, SpectralError> {
    let basis = constraint_class_basis(dom, m, tol).ok_or(SpectralError::TrivialConstraintClass)?;
    let n = dom.len();
    let dim = basis.ncols();
    let mass = DVector::from_iterator(n, (0..n).map(|l| dom.mu(l)));

    if p == 2.0 {
        // Quadratic form matrix on full coordinates: for even m,
        // u^T A v = integral (Delta^(m/2) u)(Delta^(m/2) v) dmu; for odd m the
        // inner slope survives and A = (T^k)^T K (T^k) with k = (m-1)/2.
        let t = mu_laplacian_matrix(dom);
        let half = if m % 2 == 0 { m / 2 } else { (m - 1) / 2 };
        let mut pw = DMatrix::identity(n, n);
        for _ in 0..half {
            pw = &t * &pw;
        }
        let a_full = if m % 2 == 0 {
            let mut weighted = pw.clone();
            for r in 0..n {
                let mu = mass[r];
                for c in 0..n {
                    weighted[(r, c)] *= mu;
                }
            }
            pw.transpose() * weighted
        } else {
            pw.transpose() * full_stiffness_matrix(dom) * &pw
        };
        let ar = basis.transpose() * &a_full * &basis;
        let mr = basis.transpose() * DMatrix::from_diagonal(&mass) * &basis;
        let chol = mr
            .clone()
            .cholesky()
            .expect("class mass matrix is positive definite");
        let l = chol.l();
        let l_inv = l.clone().try_inverse().expect("triangular, nonsingular");
        let mut w = &l_inv * &ar * l_inv.transpose();
        w = (&w + &w.transpose()) * 0.5;
        let (lambda, y) = if dim == 1 {
            (w[(0, 0)], DVector::from_element(1, 1.0))
        } else {
            smallest_eig_dense(&w)
        };
        let c = l
            .transpose()
            .solve_upper_triangular(&y)
            .expect("triangular, nonsingular");
        let defect = &ar * &c - (&mr * &c) * lambda;
        let residual = defect.iter().fold(0.0_f64, |mx, v| mx.max(v.abs()));
        Ok(LambdaMp {
            lambda,
            minimizer: class_function(dom, &basis, &c),
            class_dim: dim,
            exact: true,
            residual,
        })
    } else {
        let t = mu_laplacian_matrix(dom);
        let quotient = |c: &DVector<f64>| -> (f64, f64) {
            let u = class_function(dom, &basis, c);
            let s = higher_slope(dom, &u, m);
            let numer: f64 = (0..n).map(|l| mass[l] * s.value(l).powf(p)).sum();
            let denom: f64 = (0..n).map(|l| mass[l] * u.value(l).abs().powf(p)).sum();
            (numer, denom)
        };
        // Full-coordinate gradient of N/D; both N and D are p-homogeneous, so
        // the quotient lives on the class sphere.
        let grad_full = |c: &DVector<f64>, numer: f64, denom: f64| -> DVector<f64> {
            let uc = &basis * c;
            let a_vec = mp_dual_vector(dom, &t, &uc, m, p, tol);
            let mut g = DVector::zeros(n);
            for l in 0..n {
                let ul = uc[l];
                let d_vec = mass[l] * ul.abs().powf(p - 1.0) * ul.signum();
                g[l] = p * (a_vec[l] * denom - numer * d_vec) / (denom * denom);
            }
            g
        };

        let mut best: Option<(f64, DVector<f64>, f64)> = None;
        for k in 0..16u64 {
            let mut c = if k == 0 {
                DVector::from_element(dim, 1.0)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    0x517E_C7A1 ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15),
                );
                DVector::from_iterator(dim, (0..dim).map(|_| rng.gen_range(-1.0..1.0_f64)))
            };
            if c.norm() == 0.0 {
                continue;
            }
            c /= c.norm();
            let (mut numer, mut denom) = quotient(&c);
            let mut q = numer / denom;
            let mut res = f64::INFINITY;
            for _ in 0..2_000 {
                let g = basis.transpose() * grad_full(&c, numer, denom);
                let gt = &g - &c * c.dot(&g);
                res = gt.iter().fold(0.0_f64, |mx, v| mx.max(v.abs()));
                if res <= 1e-12 * (1.0 + q.abs()) {
                    break;
                }
                let mut eta = 1.0;
                let mut moved = false;
                for _ in 0..60 {
                    let mut cand = &c - &gt * eta;
                    let nrm = cand.norm();
                    if nrm > 0.0 {
                        cand /= nrm;
                        let (cn, cd) = quotient(&cand);
                        if cn / cd < q {
                            c = cand;
                            numer = cn;
                            denom = cd;
                            q = cn / cd;
                            moved = true;
                            break;
                        }
                    }
                    eta *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            if best.as_ref().is_none_or(|(bq, _, _)| q < *bq) {
                best = Some((q, c, res));
            }
        }
        let (lambda, c, residual) = best.expect("at least one start");
        let (_, denom) = quotient(&c);
        let scaled = &c / denom.powf(1.0 / p);
        Ok(LambdaMp {
            lambda,
            minimizer: class_function(dom, &basis, &scaled),
            class_dim: dim,
            exact: false,
            residual,
        })
    }
}

/// Sup-norm embedding constant of the class:
/// `||u||_inf <= kappa_mp ||u||_{W^{m,p}_0}` with
/// `kappa_mp = 1 / (mu_min lambda_{m,p}^(1/p))`.
pub fn kappa_mp(dom: &Domain, lambda_mp: f64, p: f64) -> f64 {
    1.0 / (dom.mu_min() * lambda_mp.powf(1.0 / p))
}

/// Realizes class coordinates as a vertex function, sign-normalized so the
/// largest-magnitude value is positive.
fn class_function(dom: &Domain, basis: &DMatrix<f64>, c: &DVector<f64>) -> VertexFn {
    let mut u = basis * c;
    let mut arg = 0;
    for i in 0..u.len() {
        if u[i].abs() > u[arg].abs() {
            arg = i;
        }
    }
    if u[arg] < 0.0 {
        u = -u;
    }
    VertexFn::from_values(dom, u.as_slice().to_vec()).expect("matching length")
}

/// Rayleigh quotient `integral |grad u|^2 dmu / integral u^2 dmu` of a
/// Dirichlet-class function; at least `lambda_1` for every nonzero `u`.
pub fn rayleigh_quotient(dom: &Domain, u: &VertexFn) -> Result<f64, SpectralError> {
    let energy = dirichlet_energy(dom, u)?;
    let mass: f64 = (0..dom.len())
        .map(|x| dom.mu(x) * u.value(x) * u.value(x))
        .sum();
    if mass == 0.0 {
        return Err(SpectralError::ZeroFunction);
    }
    Ok(energy / mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{Domain, VertexFn, WeightedGraph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn three_path_eigenvalue_is_exactly_two() {
        let dom = fixtures::p3();
        let e = lambda1(&dom);
        assert_eq!(e.lambda1, 2.0);
        assert!(e.residual <= 1e-10);
        assert!(e.eigenfunction.is_dirichlet(&dom));
        // L^2-normalized and sign-normalized: the single interior value is 1.
        let x2 = dom.local_of_id("x2").unwrap();
        assert_eq!(e.eigenfunction.value(x2), 1.0);
    }

    #[test]
    fn star_eigenvalue_is_exactly_three() {
        let dom = fixtures::s4();
        assert_eq!(lambda1(&dom).lambda1, 3.0);
    }

    #[test]
    fn five_path_eigenvalue_matches_closed_form() {
        let dom = fixtures::p5();
        let e = lambda1(&dom);
        let expect = 2.0 - 2.0_f64.sqrt();
        assert!((e.lambda1 - expect).abs() < 1e-12);
        assert!(e.residual <= 1e-10);
        // Normalization contract.
        let mass: f64 = (0..dom.len())
            .map(|x| dom.mu(x) * e.eigenfunction.value(x).powi(2))
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
        // Ground state of the path is positive in the interior.
        for &l in dom.interior() {
            assert!(e.eigenfunction.value(l) > 0.0);
        }
    }

    #[test]
    fn window_of_larger_path_gives_identical_spectrum() {
        let p5 = lambda1(&fixtures::p5());
        let window = lambda1(&fixtures::p7_window());
        assert_eq!(p5.lambda1, window.lambda1);
    }

    #[test]
    fn eigenfunction_attains_its_eigenvalue_as_quotient() {
        for dom in [fixtures::p3(), fixtures::p5(), fixtures::s4()] {
            let e = lambda1(&dom);
            let rq = rayleigh_quotient(&dom, &e.eigenfunction).unwrap();
            assert!((rq - e.lambda1).abs() <= 1e-12 * (1.0 + e.lambda1));
        }
    }

    #[test]
    fn rayleigh_quotient_closed_forms() {
        let p3 = fixtures::p3();
        let bump = fixtures::p3_fn(&p3, 1.0);
        assert_eq!(rayleigh_quotient(&p3, &bump).unwrap(), 2.0);

        let p5 = fixtures::p5();
        let plateau = VertexFn::from_values(&p5, vec![0.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((rayleigh_quotient(&p5, &plateau).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rayleigh_quotient_rejects_zero_function() {
        let dom = fixtures::p3();
        assert!(matches!(
            rayleigh_quotient(&dom, &VertexFn::zeros(&dom)),
            Err(SpectralError::ZeroFunction)
        ));
    }

    #[test]
    fn rayleigh_quotient_bounds_eigenvalue_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dom in [fixtures::p3(), fixtures::p5(), fixtures::s4()] {
            let lam = lambda1(&dom).lambda1;
            for _ in 0..500 {
                let vals: Vec<f64> = (0..dom.interior_count())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                if vals.iter().all(|v| *v == 0.0) {
                    continue;
                }
                let u = VertexFn::from_interior(&dom, &vals);
                let rq = rayleigh_quotient(&dom, &u).unwrap();
                assert!(rq >= lam - 1e-12, "quotient {rq} below {lam}");
            }
        }
    }

    #[test]
    fn non_uniform_measure_changes_the_eigenvalue_consistently() {
        // Two interior vertices with different measures; compare against the
        // 2x2 generalized problem solved by hand:
        // L = [[2,-1],[-1,2]], M = diag(1, 4).
        // det(L - lambda M) = (2-l)(2-4l) - 1 = 4l^2 - 10l + 3.
        let g = Arc::new(
            WeightedGraph::from_parts(
                &[("a", 1.0), ("b", 1.0), ("c", 4.0), ("d", 1.0)],
                &[("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0)],
            )
            .unwrap(),
        );
        let dom = Domain::decompose(&g, &["a", "b", "c", "d"], Some(&["a", "d"])).unwrap();
        let expect = (10.0 - (100.0_f64 - 48.0).sqrt()) / 8.0;
        let e = lambda1(&dom);
        assert!((e.lambda1 - expect).abs() < 1e-12);
        assert!(e.residual <= 1e-10);
    }

    #[test]
    fn constraint_class_eigenvalue_reduces_to_lambda1() {
        for dom in [fixtures::p3(), fixtures::p5(), fixtures::s4()] {
            let first = lambda1(&dom);
            let mp = lambda_mp(&dom, 1, 2.0).unwrap();
            assert!(mp.exact);
            assert_eq!(mp.class_dim, dom.interior_count());
            assert!((mp.lambda - first.lambda1).abs() <= 1e-12 * (1.0 + first.lambda1));
            assert!(mp.residual <= 1e-10);
            assert!(mp.minimizer.is_dirichlet(&dom));
            let rq = rayleigh_quotient(&dom, &mp.minimizer).unwrap();
            assert!((rq - mp.lambda).abs() <= 1e-12 * (1.0 + mp.lambda));
        }
    }

    #[test]
    fn biharmonic_eigenvalue_of_the_five_path_is_six() {
        // The m = 2 class on the 5-path is spanned by the middle bump e3,
        // whose iterated Laplacian is (0, 1, -2, 1, 0): the quotient is
        // (1 + 4 + 1) / 1 = 6 for every class member.
        let dom = fixtures::p5();
        let mp = lambda_mp(&dom, 2, 2.0).unwrap();
        assert_eq!(mp.class_dim, 1);
        assert!(mp.exact);
        assert!((mp.lambda - 6.0).abs() <= 1e-12);
        assert!(mp.residual <= 1e-10);
        let x3 = dom.local_of_id("x3").unwrap();
        assert!((mp.minimizer.value(x3) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn non_quadratic_eigenvalues_on_the_three_path_match_closed_forms() {
        // One interior vertex: the quotient is constant on the class, so the
        // descent value is exact. For u = e2 the slopes are (1/sqrt(2), 1,
        // 1/sqrt(2)), giving lambda_{1,p} = 1 + 2 (1/2)^(p/2).
        let dom = fixtures::p3();
        let cubic = lambda_mp(&dom, 1, 3.0).unwrap();
        assert!(!cubic.exact);
        assert_eq!(cubic.class_dim, 1);
        assert!((cubic.lambda - (1.0 + 1.0 / 2.0_f64.sqrt())).abs() <= 1e-9);
        let quartic = lambda_mp(&dom, 1, 4.0).unwrap();
        assert!((quartic.lambda - 1.5).abs() <= 1e-9);
        // Minimizer is reported with unit p-mass.
        let p = 3.0;
        let mass: f64 = (0..dom.len())
            .map(|l| dom.mu(l) * cubic.minimizer.value(l).abs().powf(p))
            .sum();
        assert!((mass - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn descent_value_is_an_upper_bound_on_every_trial_quotient() {
        let dom = fixtures::p5();
        let mp = lambda_mp(&dom, 1, 3.0).unwrap();
        assert!(mp.lambda > 0.0);
        let p = 3.0;
        let trials: [Vec<f64>; 4] = [
            vec![0.0, 1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 1.0, 1.0, 1.0, 0.0],
            vec![0.0, 1.0, 2.0_f64.sqrt(), 1.0, 0.0],
        ];
        for vals in trials {
            let u = VertexFn::from_values(&dom, vals).unwrap();
            let s = crate::higher_order::higher_slope(&dom, &u, 1);
            let numer: f64 = (0..dom.len())
                .map(|l| dom.mu(l) * s.value(l).powf(p))
                .sum();
            let denom: f64 = (0..dom.len())
                .map(|l| dom.mu(l) * u.value(l).abs().powf(p))
                .sum();
            assert!(mp.lambda <= numer / denom + 1e-9);
        }
        // Deterministic: a second run reproduces the value bit for bit.
        let again = lambda_mp(&dom, 1, 3.0).unwrap();
        assert_eq!(mp.lambda.to_bits(), again.lambda.to_bits());
    }

    #[test]
    fn collapsed_constraint_class_is_reported() {
        let dom = fixtures::p3();
        assert!(matches!(
            lambda_mp(&dom, 2, 2.0),
            Err(SpectralError::TrivialConstraintClass)
        ));
    }

    #[test]
    fn embedding_constant_reduces_to_the_first_order_one() {
        let spec = fixtures::cubic_problem();
        let dom = &spec.domain;
        let first = crate::variational::kappa(&spec).unwrap();
        let higher = kappa_mp(dom, lambda1(dom).lambda1, 2.0);
        assert!((first - higher).abs() <= 1e-14 * (1.0 + first));
    }

    #[test]
    fn inverse_iteration_path_matches_closed_form_above_dense_cutoff() {
        // Path with 600 vertices, endpoints as boundary: interior size 598
        // exceeds the dense cutoff; lambda_1 = 2 (1 - cos(pi / 599)).
        let n = 600;
        let vertices: Vec<(String, f64)> = (0..n).map(|i| (format!("v{i}"), 1.0)).collect();
        let edges: Vec<(String, String, f64)> = (1..n)
            .map(|i| (format!("v{}", i - 1), format!("v{i}"), 1.0))
            .collect();
        let g = Arc::new(WeightedGraph::from_parts(&vertices, &edges).unwrap());
        let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let boundary = vec!["v0".to_string(), format!("v{}", n - 1)];
        let dom = Domain::decompose(&g, &ids, Some(&boundary)).unwrap();
        let e = lambda1(&dom);
        let expect = 2.0 * (1.0 - (std::f64::consts::PI / (n as f64 - 1.0)).cos());
        assert!(
            (e.lambda1 - expect).abs() < 1e-10,
            "{} vs {}",
            e.lambda1,
            expect
        );
        assert!(e.residual <= 1e-10 * (1.0 + e.lambda1));
    }
}
