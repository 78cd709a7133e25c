//! Quadrature rules used throughout the crate: Gauss-Legendre nodes and
//! weights (Newton iteration on the Legendre recurrence) plus a small
//! adaptive Simpson integrator for one-off integrals.

use crate::{Error, Result};

/// A positive quadrature rule on an interval `[a, b]`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl QuadratureRule {
    /// Applies the rule to `f`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term
/// recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n-point Gauss-Legendre rule on `[a, b]`.
///
/// Exact for polynomials of degree `2n - 1`; the weights sum to `b - a`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Domain("gauss_legendre needs n >= 1".into()));
    }
    if !(a < b) {
        return Err(Error::Domain(format!(
            "gauss_legendre needs a < b, got [{a}, {b}]"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev initial guess, then Newton.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // Newton from cos(pi/2) = 0 stays at the exact middle root.
        let (_, dp) = legendre_pair(n, 0.0);
        nodes[m - 1] = 0.0;
        weights[m - 1] = 2.0 / (dp * dp);
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        a,
        b,
    })
}

/// Composite Gauss-Legendre integration: `panels` equal panels with
/// `nodes_per_panel` nodes each.
pub fn composite_gauss(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    nodes_per_panel: usize,
) -> f64 {
    let base = gauss_legendre(nodes_per_panel, -1.0, 1.0).expect("valid base rule");
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (&x, &w) in base.nodes.iter().zip(&base.weights) {
            total += 0.5 * h * w * f(mid + 0.5 * h * x);
        }
    }
    total
}

/// Adaptive Simpson integration to absolute tolerance `tol`.
///
/// Recursion depth is capped; jump discontinuities are localized rather than
/// resolved, contributing at most `jump * width(depth)` to the error.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_legendre(1, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert_eq!(r.weights, vec![2.0]);
    }

    #[test]
    fn two_point_rule_is_classical() {
        let r = gauss_legendre(2, -1.0, 1.0).unwrap();
        let s = 1.0 / 3.0_f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15);
        assert!((r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        assert!((r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_length_and_nodes_increase() {
        for n in [1, 2, 5, 16, 64, 200] {
            let r = gauss_legendre(n, 0.0, 3.5).unwrap();
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - 3.5).abs() < 1e-12, "n={n}: weight sum {sum}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn exactness_on_low_degree_monomials() {
        // 16 points are exact to degree 31; check degrees <= 9 on [0, 1].
        let r = gauss_legendre(16, 0.0, 1.0).unwrap();
        for k in 0..=9 {
            let got = r.integrate(|x| x.powi(k));
            let want = 1.0 / (k as f64 + 1.0);
            assert!(
                (got - want).abs() < 1e-12,
                "degree {k}: got {got}, want {want}"
            );
        }
        let x5 = r.integrate(|x| x.powi(5));
        assert!((x5 - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_rule_integrates_oscillation() {
        let got = composite_gauss(|x| (10.0 * x).sin(), 0.0, 2.0, 8, 16);
        let want = (1.0 - (20.0_f64).cos()) / 10.0;
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn adaptive_simpson_handles_jump() {
        // Indicator of [0.3, 1]: exact integral 0.7.
        let f = |x: f64| if x >= 0.3 { 1.0 } else { 0.0 };
        let got = adaptive_simpson(&f, 0.0, 1.0, 1e-10, 50);
        assert!((got - 0.7).abs() < 1e-8, "got {got}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
    }
}
