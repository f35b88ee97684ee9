//! Shared numeric helpers: polynomial real roots via the companion matrix,
//! half-line power sums for the nonlinearity term families, and golden-section
//! extremization on intervals.

use nalgebra::DMatrix;

/// Evaluates `sum c_i x^i` (coefficients in ascending order) by Horner's rule.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Ascending-coefficient derivative of a polynomial.
pub fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

/// All real roots of `sum c_i x^i`, in ascending order.
///
/// Degrees 1 and 2 are solved in closed form; higher degrees go through the
/// companion-matrix eigenvalues, keeping eigenvalues whose imaginary part is
/// negligible and polishing each with a few Newton steps. Leading coefficients
/// that are tiny relative to the largest one are trimmed first so the
/// companion matrix stays well scaled.
pub fn poly_real_roots(coeffs: &[f64]) -> Vec<f64> {
    let max_abs = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if max_abs == 0.0 {
        return Vec::new();
    }
    let cut = 1e-13 * max_abs;
    let mut cs: Vec<f64> = coeffs.to_vec();
    while cs.last().is_some_and(|c| c.abs() <= cut) {
        cs.pop();
    }
    let deg = cs.len().saturating_sub(1);
    let mut roots = match deg {
        0 => Vec::new(),
        1 => vec![-cs[0] / cs[1]],
        2 => {
            let (a, b, c) = (cs[2], cs[1], cs[0]);
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                Vec::new()
            } else if disc == 0.0 {
                vec![-b / (2.0 * a)]
            } else {
                // Stable quadratic: avoid cancellation in the small root.
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                let q = if q == 0.0 { -0.5 * b } else { q };
                vec![q / a, c / q]
            }
        }
        _ => companion_real_roots(&cs),
    };
    // Polish on the untrimmed polynomial and drop non-roots.
    let dcs = poly_derivative(coeffs);
    roots.retain_mut(|r| {
        for _ in 0..6 {
            let p = horner(coeffs, *r);
            let dp = horner(&dcs, *r);
            if dp != 0.0 {
                let step = p / dp;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs() * r.abs().powi(i as i32))
            .sum();
        horner(coeffs, *r).abs() <= 1e-8 * (scale + 1.0)
    });
    roots.sort_by(|a, b| a.total_cmp(b));
    roots
}

fn companion_real_roots(cs: &[f64]) -> Vec<f64> {
    let n = cs.len() - 1;
    let lead = cs[n];
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -cs[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-8 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect()
}

/// A finite sum `sigma |-> sum c_j sigma^(e_j)` on the half-line `sigma >= 0`,
/// with real exponents `e_j >= 0`.
///
/// Restricting the nonlinearity term families to one sign of the argument
/// always produces such a sum, which is what makes closed-form interval
/// extremization possible when the exponents are integers.
#[derive(Debug, Clone, Default)]
pub struct HalfLineFn {
    pub terms: Vec<(f64, f64)>, // (coefficient, exponent)
}

impl HalfLineFn {
    pub fn new(terms: Vec<(f64, f64)>) -> Self {
        HalfLineFn { terms }
    }

    pub fn eval(&self, sigma: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, e)| if e == 0.0 { c } else { c * sigma.powf(e) })
            .sum()
    }

    pub fn derivative(&self) -> HalfLineFn {
        HalfLineFn {
            terms: self
                .terms
                .iter()
                .filter(|&&(_, e)| e != 0.0)
                .map(|&(c, e)| (c * e, e - 1.0))
                .collect(),
        }
    }

    fn integer_degree(&self) -> Option<usize> {
        let mut deg = 0usize;
        for &(c, e) in &self.terms {
            if c == 0.0 {
                continue;
            }
            if e < 0.0 || e > 60.0 || (e - e.round()).abs() > 1e-9 {
                return None;
            }
            deg = deg.max(e.round() as usize);
        }
        Some(deg)
    }

    /// Ascending polynomial coefficients, if every exponent is a small
    /// non-negative integer.
    pub fn as_poly(&self) -> Option<Vec<f64>> {
        let deg = self.integer_degree()?;
        let mut cs = vec![0.0; deg + 1];
        for &(c, e) in &self.terms {
            if c != 0.0 {
                cs[e.round() as usize] += c;
            }
        }
        Some(cs)
    }

    /// Stationary abscissas of the sum on `(0, cap)`, ascending.
    ///
    /// Polynomial sums take the derivative's real roots from the companion
    /// matrix; general exponent sets get a logarithmic sign-change scan of the
    /// derivative with bisection per bracket. Computing these once lets a
    /// caller extremize `|self|` over many nested intervals `[0, z]` without
    /// re-running the root finder: interior maxima of `|self|` can only sit at
    /// stationary points, because the kinks of the absolute value are minima.
    pub fn stationary_points(&self, cap: f64, tol: f64) -> Vec<f64> {
        let d = self.derivative();
        if let Some(dcs) = d.as_poly() {
            return poly_real_roots(&dcs)
                .into_iter()
                .filter(|&r| r > 0.0 && r < cap)
                .collect();
        }
        let lo_exp = -12.0;
        let hi_exp = cap.max(1.0).log10().min(30.0);
        let per_decade = 64.0;
        let n = (((hi_exp - lo_exp) * per_decade).ceil() as usize).max(1);
        let grid = |i: usize| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / n as f64);
        let mut out = Vec::new();
        let mut a = grid(0);
        let mut fa = d.eval(a);
        for i in 1..=n {
            let b = grid(i);
            let fb = d.eval(b);
            if fa == 0.0 {
                out.push(a);
            } else if fa.signum() != fb.signum() && fb != 0.0 {
                let (mut x0, mut x1) = (a, b);
                let mut f0 = fa;
                for _ in 0..200 {
                    if (x1 - x0).abs() <= tol * (1.0 + x0.abs() + x1.abs()) {
                        break;
                    }
                    let m = 0.5 * (x0 + x1);
                    let fm = d.eval(m);
                    if fm == 0.0 || fm.signum() == f0.signum() {
                        x0 = m;
                        f0 = fm;
                    } else {
                        x1 = m;
                    }
                }
                out.push(0.5 * (x0 + x1));
            }
            a = b;
            fa = fb;
        }
        out.retain(|&r| r > 0.0 && r < cap);
        out
    }

    /// Maximum of `|self|` over `[0, z]` together with the smallest maximizing
    /// abscissa.
    ///
    /// Candidates are the endpoints and the interior critical points (roots of
    /// the derivative). When the sum is a genuine polynomial the critical
    /// points come from the companion matrix; otherwise a dense scan with
    /// golden-section refinement reaches the requested tolerance.
    pub fn max_abs_on(&self, z: f64, tol: f64) -> (f64, f64) {
        assert!(z >= 0.0);
        let mut candidates = vec![0.0, z];
        if let Some(dcs) = self.derivative().as_poly() {
            for r in poly_real_roots(&dcs) {
                if r > 0.0 && r < z {
                    candidates.push(r);
                }
            }
        } else {
            // Dense scan plus local refinement around every local maximum of
            // |f| detected on the grid.
            let n = 1024;
            let g = |s: f64| self.eval(s).abs();
            let mut prev = g(0.0);
            let mut cur = g(z / n as f64);
            for i in 1..n {
                let next = g(z * (i + 1) as f64 / n as f64);
                if cur >= prev && cur >= next {
                    let lo = z * (i - 1) as f64 / n as f64;
                    let hi = z * (i + 1) as f64 / n as f64;
                    let (s, _) = golden_max(&g, lo, hi, tol);
                    candidates.push(s);
                }
                prev = cur;
                cur = next;
            }
        }
        // Ascending scan keeps the smallest maximizing abscissa on ties.
        candidates.sort_by(|a, b| a.total_cmp(b));
        let mut best_v = f64::NEG_INFINITY;
        let mut best_s = 0.0;
        for s in candidates {
            let v = self.eval(s).abs();
            if v > best_v * (1.0 + 1e-14) + f64::MIN_POSITIVE {
                best_v = v;
                best_s = s;
            }
        }
        (best_v.max(0.0), best_s)
    }
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// Returns `(argmax, max)`; exact for unimodal `f`, and used here only after
/// bracketing a local maximum on a grid.
pub fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Scans `[a, b]` on `n` points and golden-refines around the best bracket.
pub fn scan_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize, tol: f64) -> (f64, f64) {
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = a + (b - a) * best_i.saturating_sub(1) as f64 / n as f64;
    let hi = a + (b - a) * (best_i + 1).min(n) as f64 / n as f64;
    let (x, v) = golden_max(f, lo, hi, tol);
    if v >= best_v {
        (x, v)
    } else {
        (a + (b - a) * best_i as f64 / n as f64, best_v)
    }
}
