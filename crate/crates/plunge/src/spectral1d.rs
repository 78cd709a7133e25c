//! One-dimensional spectra: Nystrom discretization of the sinc kernel on an
//! interval (the prolate spectrum), and singular values of the separated
//! one-dimensional operators that control the Whitney-decomposition
//! estimates.
//!
//! The frequency window is always taken symmetric (`[-1/2, 1/2]` after
//! rescaling) so every kernel is real; translations and modulations do not
//! change eigenvalues or singular values.

use crate::quad::{gauss_legendre, QuadratureRule};
use crate::specfun::{cosine_integral, sine_integral};
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Numerical cutoff below which localization eigenvalues are untrusted.
pub const EIGENVALUE_FLOOR: f64 = 1e-13;

/// `sin(pi t) / (pi t)`, continuous at zero.
pub fn sinc_pi(t: f64) -> f64 {
    let x = PI * t;
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Operator identity attached to a computed spectrum.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorKind {
    Localization1d { c: f64 },
    ProductD { c: f64, d: usize },
    Jr { r: f64, r_outer: f64 },
    Ir { r: f64 },
}

/// A descending sequence of eigenvalues or singular values together with
/// discretization metadata.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Sorted descending; entries below `floor` are reported but untrusted.
    pub values: Vec<f64>,
    pub kind: OperatorKind,
    pub dim: usize,
    /// Quadrature size used to compute the values.
    pub nodes: usize,
    pub floor: f64,
}

impl Spectrum {
    /// The trusted prefix: values at or above the floor.
    pub fn trusted(&self) -> &[f64] {
        let k = self.values.partition_point(|&v| v >= self.floor);
        &self.values[..k]
    }

    /// The n-th value, 1-based.  Indices beyond the discretization rank
    /// return 0: the discretized operator has finite rank and its remaining
    /// singular values are exactly zero.
    pub fn nth(&self, n: usize) -> f64 {
        if n == 0 || n > self.values.len() {
            0.0
        } else {
            self.values[n - 1]
        }
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// CSV export with a JSON header line carrying the descriptor.
    pub fn to_csv(&self) -> String {
        let header = serde_json::json!({
            "descriptor": self.kind,
            "dim": self.dim,
            "nodes": self.nodes,
            "floor": self.floor,
            "sum": self.sum(),
        });
        let mut out = format!("# {header}\nindex,value,trusted\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{:.17e},{}\n", i + 1, v, *v >= self.floor));
        }
        out
    }
}

/// Minimum node count for the localization spectrum at parameter `c`:
/// resolves the near-1 plateau of about `c` eigenvalues plus the plunge.
pub fn required_nodes(c: f64) -> usize {
    (((4.0 * c).ceil() as usize) + 60).max(64)
}

fn symmetric_eigenvalues_desc(m: DMatrix<f64>) -> Vec<f64> {
    let eig = m.symmetric_eigen();
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    values
}

fn clip_unit_interval(values: &mut [f64], slack: f64) -> Result<()> {
    for v in values.iter_mut() {
        if *v > 1.0 + slack || *v < -slack {
            return Err(Error::Numeric(format!(
                "eigenvalue {v} outside [0, 1] beyond slack {slack}"
            )));
        }
        *v = v.clamp(0.0, 1.0);
    }
    Ok(())
}

/// Eigenvalues of the time-frequency localization operator for
/// `A = [0, c]`, `B` an interval of length 1, by Nystrom discretization of
/// the sinc kernel with an `n_nodes`-point Gauss-Legendre rule.
pub fn localization_spectrum(c: f64, n_nodes: usize) -> Result<Spectrum> {
    localization_spectrum_ab(c, 1.0, n_nodes)
}

/// Two-parameter variant: `A = [0, a]`, `B` an interval of length `b`.
/// The spectrum depends only on the product `a b`.
pub fn localization_spectrum_ab(a: f64, b: f64, n_nodes: usize) -> Result<Spectrum> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::Domain(format!(
            "localization spectrum needs positive side lengths, got a={a}, b={b}"
        )));
    }
    let c = a * b;
    let needed = required_nodes(c);
    if n_nodes < needed {
        return Err(Error::Resolution(format!(
            "n_nodes = {n_nodes} below the required {needed} for c = {c}"
        )));
    }
    let rule = gauss_legendre(n_nodes, 0.0, a)?;
    let m = nystrom_matrix(&rule, |x, y| b * sinc_pi(b * (x - y)));
    let mut values = symmetric_eigenvalues_desc(m);
    clip_unit_interval(&mut values, 1e-10)?;
    Ok(Spectrum {
        values,
        kind: OperatorKind::Localization1d { c },
        dim: 1,
        nodes: n_nodes,
        floor: EIGENVALUE_FLOOR,
    })
}

fn nystrom_matrix(rule: &QuadratureRule, kernel: impl Fn(f64, f64) -> f64) -> DMatrix<f64> {
    let n = rule.len();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    DMatrix::from_fn(n, n, |i, j| {
        sw[i] * kernel(rule.nodes[i], rule.nodes[j]) * sw[j]
    })
}

/// Eigensolver residuals `||M v - lambda v||` for a sample of eigenpairs,
/// relative to `||M||`.  Used by the accuracy-contract tests.
pub fn eigen_residuals(c: f64, n_nodes: usize, indices: &[usize]) -> Result<Vec<f64>> {
    let rule = gauss_legendre(n_nodes, 0.0, c)?;
    let m = nystrom_matrix(&rule, |x, y| sinc_pi(x - y));
    let eig = m.clone().symmetric_eigen();
    let norm = eig.eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    Ok(indices
        .iter()
        .map(|&k| {
            let v = eig.eigenvectors.column(k);
            let lambda = eig.eigenvalues[k];
            ((&m * v) - v * lambda).norm() / norm
        })
        .collect())
}

/// Coarse per-index bound from the rank-2 expansion of the separated
/// operator: `sigma_{2N+3} <= (sqrt(2)/pi) 2^{-N}`, independent of `r`.
pub fn jr_rank2_tail_bound(big_n: u32) -> f64 {
    (2.0_f64).sqrt() / PI * 2f64.powi(-(big_n as i32))
}

/// The sharper intermediate sum behind the coarse bound:
/// `(sqrt(2)/pi) sum_{n > N} 2^{-n} / (2n + 1)`.
pub fn jr_rank2_intermediate_sum(big_n: u32) -> f64 {
    let mut sum = 0.0;
    for n in (big_n + 1)..(big_n + 80) {
        sum += 2f64.powi(-(n as i32)) / (2.0 * n as f64 + 1.0);
    }
    (2.0_f64).sqrt() / PI * sum
}

/// Hilbert-Schmidt bound on the strip discarded beyond `|x| > R`:
/// `tail(R)^2 <= (2r) (2/pi^2) / (R - r)`.
pub fn jr_truncation_tail(r: f64, r_outer: f64) -> f64 {
    ((2.0 * r) * (2.0 / (PI * PI)) / (r_outer - r)).sqrt()
}

/// Precomputed single-node quantities for the analytic x-integration.
struct NodeVals {
    a: f64,
    b: f64,
    si_a: f64,
    si_b: f64,
    ci_a: f64,
    ci_b: f64,
    cos_a: f64,
    cos_b: f64,
}

fn node_vals(two_r: f64, r_outer: f64, y: f64) -> Result<NodeVals> {
    let a = two_r - y;
    let b = r_outer - y;
    Ok(NodeVals {
        a,
        b,
        si_a: sine_integral(2.0 * PI * a).value,
        si_b: sine_integral(2.0 * PI * b).value,
        ci_a: cosine_integral(2.0 * PI * a)?.value,
        ci_b: cosine_integral(2.0 * PI * b)?.value,
        cos_a: (2.0 * PI * a).cos(),
        cos_b: (2.0 * PI * b).cos(),
    })
}

/// `int_{2r}^{R} sinc(x - y) sinc(x - y') dx` in closed form, with the node
/// data for `y` in `p`, for `y'` in `q`, and `delta = y - y'`.
fn h_entry(two_r: f64, r_outer: f64, p: &NodeVals, q: &NodeVals, delta: f64) -> f64 {
    if delta == 0.0 {
        // Diagonal: int sin^2(pi u)/(pi u)^2 du.
        return (1.0 / (2.0 * PI * PI))
            * (1.0 / p.a - 1.0 / p.b - p.cos_a / p.a + p.cos_b / p.b
                + 2.0 * PI * (p.si_b - p.si_a));
    }
    // log(b/a) - log(b'/a') computed cancellation-free.
    let t_log = ((r_outer - two_r) * delta / (p.a * q.b)).ln_1p();
    let d_ci = p.ci_b - p.ci_a;
    let d_ci_q = q.ci_b - q.ci_a;
    let d_si = p.si_b - p.si_a;
    let d_si_q = q.si_b - q.si_a;
    let (s, c) = (PI * delta).sin_cos();
    (c * (t_log - d_ci + d_ci_q) + s * (d_si + d_si_q)) / (2.0 * PI * PI * delta)
}

/// Singular values of the separated operator with kernel
/// `sinc(x - y)` restricted to `x in [-R, -2r] u [2r, R]`, `y in [-r, r]`.
///
/// The x-side integral of the Gram kernel is evaluated in closed form with
/// Si/Ci, so only the y-side is discretized (`n_nodes`-point Gauss-Legendre
/// Nystrom on the symmetric positive semidefinite Gram operator).  Returns
/// the spectrum and the Hilbert-Schmidt truncation tail for the discarded
/// `|x| > R` strip; each singular value of the untruncated operator lies
/// within that tail of the computed one.
pub fn jr_singular_values(r: f64, r_outer: f64, n_nodes: usize) -> Result<(Spectrum, f64)> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("jr needs r > 0, got {r}")));
    }
    if !(r_outer > 2.0 * r) {
        return Err(Error::Domain(format!(
            "jr needs R > 2r, got R = {r_outer}, r = {r}"
        )));
    }
    if n_nodes < 64 {
        return Err(Error::Resolution(format!(
            "jr needs n_nodes >= 64, got {n_nodes}"
        )));
    }
    let rule = gauss_legendre(n_nodes, -r, r)?;
    let two_r = 2.0 * r;
    let plus: Vec<NodeVals> = rule
        .nodes
        .iter()
        .map(|&y| node_vals(two_r, r_outer, y))
        .collect::<Result<_>>()?;
    let minus: Vec<NodeVals> = rule
        .nodes
        .iter()
        .map(|&y| node_vals(two_r, r_outer, -y))
        .collect::<Result<_>>()?;
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let n = rule.len();
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let delta = rule.nodes[i] - rule.nodes[j];
            // Contributions of the right strip and (mirrored) left strip.
            let g = h_entry(two_r, r_outer, &plus[i], &plus[j], delta)
                + h_entry(two_r, r_outer, &minus[i], &minus[j], -delta);
            let entry = sw[i] * g * sw[j];
            gram[(i, j)] = entry;
            gram[(j, i)] = entry;
        }
    }
    let lambdas = symmetric_eigenvalues_desc(gram);
    let values: Vec<f64> = lambdas.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let spectrum = Spectrum {
        values,
        kind: OperatorKind::Jr { r, r_outer },
        dim: 1,
        nodes: n_nodes,
        floor: EIGENVALUE_FLOOR.sqrt(),
    };
    Ok((spectrum, jr_truncation_tail(r, r_outer)))
}

/// Doubles `R` from `max(4r, 16)` until the truncation tail drops to
/// `tail_tol`, then computes the singular values at that `R`.
pub fn jr_singular_values_auto(r: f64, tail_tol: f64, n_nodes: usize) -> Result<(Spectrum, f64)> {
    if !(tail_tol > 0.0) {
        return Err(Error::Domain("tail tolerance must be positive".into()));
    }
    let mut r_outer = (4.0 * r).max(16.0);
    while jr_truncation_tail(r, r_outer) > tail_tol {
        r_outer *= 2.0;
        if !r_outer.is_finite() {
            return Err(Error::Numeric("R escalation overflowed".into()));
        }
    }
    jr_singular_values(r, r_outer, n_nodes)
}

/// Singular values of `I_r` (frequency window of length 1, space window of
/// length `r`): square roots of the localization eigenvalues at `c = r`.
pub fn ir_singular_values(r: f64, n_nodes: usize) -> Result<Spectrum> {
    let loc = localization_spectrum(r, n_nodes)?;
    Ok(Spectrum {
        values: loc.values.iter().map(|&v| v.sqrt()).collect(),
        kind: OperatorKind::Ir { r },
        dim: 1,
        nodes: n_nodes,
        floor: EIGENVALUE_FLOOR.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn trace_identity_sum_equals_c() {
        for c in [1.0, 5.0, 10.0, 20.0] {
            let s = localization_spectrum(c, required_nodes(c)).unwrap();
            let rel = (s.sum() - c).abs() / c;
            assert!(rel < 1e-8, "c={c}: relative trace error {rel}");
        }
    }

    #[test]
    fn top_eigenvalue_strictly_below_one() {
        for c in [1.0, 5.0] {
            let s = localization_spectrum(c, required_nodes(c)).unwrap();
            assert!(s.values[0] < 1.0, "c={c}: lambda_1 = {}", s.values[0]);
        }
        let s = localization_spectrum(10.0, required_nodes(10.0)).unwrap();
        assert!(s.values[0] <= 1.0);
    }

    #[test]
    fn values_sorted_descending_in_unit_interval() {
        let s = localization_spectrum(7.0, 128).unwrap();
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
        assert!(s.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn resolution_error_below_required_nodes() {
        assert!(matches!(
            localization_spectrum(20.0, 100),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn nystrom_doubling_convergence() {
        for c in [1.0, 5.0, 10.0, 20.0] {
            let n = required_nodes(c);
            let s1 = localization_spectrum(c, n).unwrap();
            let s2 = localization_spectrum(c, 2 * n).unwrap();
            for (i, &v) in s1.values.iter().enumerate() {
                if v > 1e-10 {
                    let diff = (v - s2.values[i]).abs();
                    assert!(diff < 1e-8, "c={c}, index {i}: drift {diff}");
                }
            }
        }
    }

    #[test]
    fn eigenvalue_monotone_in_c() {
        let small = localization_spectrum(10.0, 256).unwrap();
        let large = localization_spectrum(12.0, 256).unwrap();
        for (i, &v) in small.trusted().iter().enumerate() {
            assert!(
                large.values[i] >= v - 1e-10,
                "index {i}: {} < {v}",
                large.values[i]
            );
        }
    }

    #[test]
    fn spectrum_depends_only_on_side_product() {
        let via_product = localization_spectrum(10.0, 256).unwrap();
        let two_param = localization_spectrum_ab(2.0, 5.0, 256).unwrap();
        for (a, b) in via_product.values.iter().zip(&two_param.values) {
            if *a > 1e-10 {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn eigen_residual_contract() {
        let res = eigen_residuals(10.0, 128, &[0, 3, 17, 60, 127]).unwrap();
        for r in res {
            assert!(r <= 1e-10, "residual {r}");
        }
    }

    #[test]
    fn jr_gram_route_matches_direct_svd_at_small_r_outer() {
        // Independent discretization: two-sided x grid, dense SVD.
        let (r, r_outer) = (1.0, 8.0);
        let (gram_spec, _) = jr_singular_values(r, r_outer, 96).unwrap();
        let y_rule = gauss_legendre(96, -r, r).unwrap();
        let mut x_nodes = Vec::new();
        let mut x_weights = Vec::new();
        let panels = 48;
        for side in [-1.0, 1.0] {
            for p in 0..panels {
                let lo = 2.0 * r + (r_outer - 2.0 * r) * p as f64 / panels as f64;
                let hi = 2.0 * r + (r_outer - 2.0 * r) * (p + 1) as f64 / panels as f64;
                let rule = gauss_legendre(12, lo, hi).unwrap();
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    x_nodes.push(side * x);
                    x_weights.push(w);
                }
            }
        }
        let m = DMatrix::from_fn(x_nodes.len(), y_rule.len(), |i, j| {
            x_weights[i].sqrt() * sinc_pi(x_nodes[i] - y_rule.nodes[j]) * y_rule.weights[j].sqrt()
        });
        let mut direct: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
        direct.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for k in 0..10 {
            let a = gram_spec.values[k];
            let b = direct[k];
            assert!((a - b).abs() < 1e-8, "sigma_{}: gram {a} vs direct {b}", k + 1);
        }
    }

    #[test]
    fn jr_third_singular_value_under_rank2_bound() {
        for r in [1.0, 2.0, 5.0, 50.0] {
            let (s, tail) = jr_singular_values_auto(r, 1e-6, 128).unwrap();
            assert!(
                s.nth(3) + tail <= jr_rank2_tail_bound(0),
                "r={r}: sigma_3 = {}",
                s.nth(3)
            );
        }
    }

    #[test]
    fn jr_bound_with_escalated_truncation() {
        // sigma_23 + tail <= (sqrt 2 / pi) 2^{-10} (1 + 10%).
        let (s, tail) = jr_singular_values_auto(2.0, 1e-6, 128).unwrap();
        assert!(tail <= 1e-6);
        let bound = jr_rank2_tail_bound(10);
        assert!(s.nth(23) + tail <= 1.1 * bound, "{} vs {bound}", s.nth(23));
    }

    #[test]
    fn jr_bound_is_r_independent() {
        let b = jr_rank2_tail_bound(1);
        let (s5, t5) = jr_singular_values_auto(5.0, 1e-6, 128).unwrap();
        let (s50, t50) = jr_singular_values_auto(50.0, 1e-6, 512).unwrap();
        assert!(s5.nth(5) + t5 <= b);
        assert!(s50.nth(5) + t50 <= b);
    }

    #[test]
    fn jr_intermediate_sum_dominated_by_coarse_bound() {
        for n in [0u32, 3, 10] {
            let coarse = jr_rank2_tail_bound(n);
            let mid = jr_rank2_intermediate_sum(n);
            assert!(mid <= coarse);
            assert!(mid > 0.0);
        }
        // N = 0 coarse value is sqrt(2)/pi itself.
        assert!((jr_rank2_tail_bound(0) - 2f64.sqrt() / PI).abs() < 1e-15);
        assert!((jr_rank2_tail_bound(10) - 2f64.sqrt() / PI / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn jr_domain_errors() {
        assert!(jr_singular_values(-1.0, 8.0, 64).is_err());
        assert!(jr_singular_values(2.0, 3.0, 64).is_err());
        assert!(jr_singular_values(1.0, 8.0, 32).is_err());
    }

    #[test]
    fn ir_values_bounded_by_one_and_square_sum_to_r() {
        let r = 5.0;
        let s = ir_singular_values(r, required_nodes(r)).unwrap();
        assert!(s.values.iter().all(|&v| v <= 1.0));
        assert!((s.sum_sq() - r).abs() / r < 1e-8);
    }

    #[test]
    fn spectrum_csv_round_trip_essentials() {
        let s = localization_spectrum(2.0, 70).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("# {"));
        assert!(csv.contains("index,value,trusted"));
        assert_eq!(csv.lines().count(), 2 + s.values.len());
    }

    #[test]
    fn nth_is_one_based_with_rank_semantics() {
        let s = localization_spectrum(1.0, 64).unwrap();
        assert_eq!(s.nth(1), s.values[0]);
        assert_eq!(s.nth(s.values.len() + 5), 0.0);
        assert_eq!(s.nth(0), 0.0);
    }
}
