//! `Tr S^2` for finite unions of axis-parallel boxes.
//!
//! The Hilbert-Schmidt norm of the localization operator reduces, per box
//! 4-tuple and per coordinate, to the double oscillatory integral
//! `int int e^{2 pi i z w} |I1 n (I2 - z)| |J1 n (J2 - w)| dz dw` over two
//! trapezoid overlap profiles.  The inner integral is evaluated in closed
//! form per linear piece; the outer one by composite panels tied to the
//! oscillation frequency.  The single-interval case has a closed form in
//! Si/Ci which doubles as a cross-oracle.

use crate::geometry::{BoxUnion, Interval};
use crate::quad::gauss_legendre;
use crate::specfun::{cosine_integral, sine_integral, EULER_GAMMA};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// The sliding-window overlap `z -> |I1 n (I2 - z)|`: zero outside
/// `[p1, p4]`, linear up to `p2`, constant `plateau` up to `p3`, linear
/// down to `p4`.
#[derive(Debug, Clone, Copy)]
pub struct OverlapProfile {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub plateau: f64,
}

/// Exact breakpoints of the overlap profile.  The support is `I2 - I1`:
/// a point `x` lies in both `I1` and `I2 - z` iff `z` is in `I2 - I1`.
pub fn overlap_profile(i1: &Interval, i2: &Interval) -> OverlapProfile {
    let p1 = i2.lo - i1.hi;
    let p4 = i2.hi - i1.lo;
    let plateau = i1.length().min(i2.length());
    let p2 = p1 + plateau;
    let p3 = p4 - plateau;
    OverlapProfile {
        p1,
        p2,
        p3,
        p4,
        plateau,
    }
}

impl OverlapProfile {
    pub fn evaluate(&self, z: f64) -> f64 {
        if z <= self.p1 || z >= self.p4 {
            0.0
        } else if z < self.p2 {
            z - self.p1
        } else if z <= self.p3 {
            self.plateau
        } else {
            self.p4 - z
        }
    }

    pub fn integral(&self) -> f64 {
        0.5 * self.plateau * ((self.p4 - self.p1) + (self.p3 - self.p2))
    }

    /// Half-width of the support around zero, the oscillation scale of the
    /// conjugate integral.
    pub fn radius(&self) -> f64 {
        self.p1.abs().max(self.p4.abs())
    }

    /// Linear pieces `(lo, hi, slope, intercept)` with `value = slope z +
    /// intercept` on each; zero-width pieces are dropped.
    fn pieces(&self) -> Vec<(f64, f64, f64, f64)> {
        let mut out = Vec::with_capacity(3);
        if self.p2 > self.p1 {
            out.push((self.p1, self.p2, 1.0, -self.p1));
        }
        if self.p3 > self.p2 {
            out.push((self.p2, self.p3, 0.0, self.plateau));
        }
        if self.p4 > self.p3 {
            out.push((self.p3, self.p4, -1.0, self.p4));
        }
        out
    }
}

/// A complex integral value with an absolute error bound.
#[derive(Debug, Clone, Copy)]
pub struct WValue {
    pub value: Complex64,
    pub abs_error_bound: f64,
}

/// `G(z) = int (slope w + intercept) e^{2 pi i z w} dw` summed over the
/// linear pieces of a trapezoid profile; closed form away from `z = 0`,
/// Taylor expansion inside the small-`z` window where the closed form
/// cancels.
struct InnerTransform {
    pieces: Vec<(f64, f64, f64, f64)>,
    radius: f64,
    taylor_cutoff: f64,
}

impl InnerTransform {
    fn new(profile: &OverlapProfile) -> Self {
        let radius = profile.radius();
        Self {
            pieces: profile.pieces(),
            radius,
            taylor_cutoff: 1e-3 / (1.0 + radius),
        }
    }

    fn eval(&self, z: f64) -> Complex64 {
        if z.abs() < self.taylor_cutoff {
            return self.eval_taylor(z);
        }
        let k = 2.0 * PI * z;
        let ik = Complex64::new(0.0, k);
        let mut total = Complex64::new(0.0, 0.0);
        for &(c, d, slope, intercept) in &self.pieces {
            let ec = Complex64::new(0.0, k * c).exp();
            let ed = Complex64::new(0.0, k * d).exp();
            let vc = slope * c + intercept;
            let vd = slope * d + intercept;
            total += (vd * ed - vc * ec) / ik + slope * (ed - ec) / (k * k);
        }
        total
    }

    fn eval_taylor(&self, z: f64) -> Complex64 {
        // sum_m (2 pi i z)^m / m! * int g(w) w^m dw
        let mut total = Complex64::new(0.0, 0.0);
        let mut factor = Complex64::new(1.0, 0.0);
        let ikz = Complex64::new(0.0, 2.0 * PI * z);
        for m in 0..=10u32 {
            let mut moment = 0.0;
            for &(c, d, slope, intercept) in &self.pieces {
                let m1 = m as i32 + 1;
                let m2 = m as i32 + 2;
                moment += slope * (d.powi(m2) - c.powi(m2)) / m2 as f64
                    + intercept * (d.powi(m1) - c.powi(m1)) / m1 as f64;
            }
            total += factor * moment;
            factor *= ikz / (m as f64 + 1.0);
        }
        total
    }
}

/// The double oscillatory integral
/// `int int e^{2 pi i z w} |I1 n (I2 - z)| |J1 n (J2 - w)| dz dw`.
pub fn w_integral(i1: &Interval, i2: &Interval, j1: &Interval, j2: &Interval) -> WValue {
    let outer = overlap_profile(i1, i2);
    let inner_profile = overlap_profile(j1, j2);
    if inner_profile.plateau <= 0.0 || outer.plateau <= 0.0 {
        return WValue {
            value: Complex64::new(0.0, 0.0),
            abs_error_bound: 0.0,
        };
    }
    let inner = InnerTransform::new(&inner_profile);
    // At least 8 panels per oscillation of e^{2 pi i z w} over the w-support.
    let panel_width = 0.25 / (1.0 + inner.radius);
    let coarse = outer_integral(&outer, &inner, panel_width);
    let fine = outer_integral(&outer, &inner, 0.5 * panel_width);
    WValue {
        value: fine,
        abs_error_bound: (fine - coarse).norm() + 1e-14 * fine.norm().max(1.0),
    }
}

fn outer_integral(outer: &OverlapProfile, inner: &InnerTransform, panel_width: f64) -> Complex64 {
    let base = gauss_legendre(16, -1.0, 1.0).expect("base rule");
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi, slope, intercept) in outer.pieces() {
        let panels = ((hi - lo) / panel_width).ceil().max(1.0) as usize;
        let h = (hi - lo) / panels as f64;
        for p in 0..panels {
            let a = lo + p as f64 * h;
            let mid = a + 0.5 * h;
            for (&x, &w) in base.nodes.iter().zip(&base.weights) {
                let z = mid + 0.5 * h * x;
                total += 0.5 * h * w * (slope * z + intercept) * inner.eval(z);
            }
        }
    }
    total
}

fn coordinate_intervals(u: &BoxUnion) -> Vec<Vec<Interval>> {
    u.boxes().iter().map(|b| b.sides().to_vec()).collect()
}

/// `Tr S^2` for box unions `A`, `B` of the same dimension: the sum over box
/// 4-tuples of per-coordinate products of `w_integral` values.  The result
/// is real; an imaginary residue above 1e-8 is a consistency error.
pub fn trs2_box_union(a: &BoxUnion, b: &BoxUnion) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let d = a.dim();
    let ab = coordinate_intervals(a);
    let bb = coordinate_intervals(b);
    let (n, m) = (ab.len(), bb.len());
    // Flattened tuple index in sorted order keeps the reduction
    // deterministic under parallel evaluation.
    let tuples: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|k1| {
            (0..n).flat_map(move |k2| {
                (0..m).flat_map(move |l1| (0..m).map(move |l2| (k1, k2, l1, l2)))
            })
        })
        .collect();
    let terms: Vec<Complex64> = tuples
        .par_iter()
        .map(|&(k1, k2, l1, l2)| {
            let mut prod = Complex64::new(1.0, 0.0);
            for i in 0..d {
                let w = w_integral(&ab[k1][i], &ab[k2][i], &bb[l1][i], &bb[l2][i]);
                prod *= w.value;
            }
            prod
        })
        .collect();
    let total: Complex64 = terms.iter().sum();
    if total.im.abs() > 1e-8 {
        return Err(Error::Consistency(format!(
            "imaginary residue {} above tolerance in Tr S^2",
            total.im
        )));
    }
    Ok(total.re)
}

/// Closed form for `Tr S^2` with `A = [0, c]`, `B` an interval of length 1:
/// `c - log(c)/pi^2 - (1 + gamma + log(2 pi))/pi^2
///  + (2/pi) c (Si(2 pi c) - pi/2) + cos(2 pi c)/pi^2 + Ci(2 pi c)/pi^2`.
pub fn trs2_interval_explicit(c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("trs2 needs c > 0, got {c}")));
    }
    let pi2 = PI * PI;
    let t = 2.0 * PI * c;
    let si = sine_integral(t).value;
    let ci = cosine_integral(t)?.value;
    Ok(c - c.ln() / pi2 - (1.0 + EULER_GAMMA + (2.0 * PI).ln()) / pi2
        + (2.0 / PI) * c * (si - PI / 2.0)
        + t.cos() / pi2
        + ci / pi2)
}

/// Asymptotic series for the same quantity: the smooth part plus the two
/// oscillating sums truncated after `terms` terms.
pub fn trs2_asymptotic(c: f64, terms: usize) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("trs2 needs c > 0, got {c}")));
    }
    let pi2 = PI * PI;
    let t = 2.0 * PI * c;
    let smooth = c - c.ln() / pi2 - (1.0 + EULER_GAMMA + (2.0 * PI).ln()) / pi2;
    let mut cos_sum = 0.0;
    let mut sin_sum = 0.0;
    let mut fact2n = 1.0; // (2n)!
    for n in 1..=terms {
        fact2n *= ((2 * n - 1) * (2 * n)) as f64;
        let fact2n1 = fact2n / (2 * n) as f64; // (2n-1)!
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        cos_sum += sign * (fact2n - fact2n1) / t.powi(2 * n as i32);
        // (2n+1)! - (2n)! over t^{2n+1}
        sin_sum += sign * (fact2n * (2 * n + 1) as f64 - fact2n) / t.powi(2 * n as i32 + 1);
    }
    Ok(smooth - t.cos() / pi2 * cos_sum - t.sin() / pi2 * sin_sum)
}

/// First omitted term of the asymptotic series after `terms` terms, the
/// natural scale of its error.
pub fn trs2_asymptotic_next_term(c: f64, terms: usize) -> f64 {
    let n = terms + 1;
    let t = 2.0 * PI * c;
    let mut fact2n = 1.0;
    for k in 1..=n {
        fact2n *= ((2 * k - 1) * (2 * k)) as f64;
    }
    let fact2n1 = fact2n / (2 * n) as f64;
    (fact2n - fact2n1) / t.powi(2 * n as i32) / (PI * PI)
}

/// One row of the separated-union demonstration: `A` is `n_intervals` far
/// apart intervals with total measure `2^{-k}`, so the trace stays constant
/// while `Tr S^2` (and with it the top-eigenvalue bound) decays as the
/// pieces spread.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SeparatedUnionReport {
    pub n_intervals: usize,
    pub k: u32,
    pub trace: f64,
    pub trace_sq: f64,
    pub lambda1_bound: f64,
}

pub fn separated_union_demo(
    n_intervals: usize,
    k: u32,
    b: &Interval,
) -> Result<SeparatedUnionReport> {
    if n_intervals < 2 {
        return Err(Error::Domain("demo needs at least 2 intervals".into()));
    }
    let n = n_intervals as f64;
    let piece = 1.0 / (n * 2f64.powi(k as i32));
    let boxes: Vec<crate::geometry::AxisBox> = (1..=n_intervals)
        .map(|m| {
            let lo = n * m as f64;
            crate::geometry::AxisBox::from_bounds(&[(lo, lo + piece)])
        })
        .collect::<Result<_>>()?;
    let a = BoxUnion::new(boxes)?;
    let b_union = BoxUnion::new(vec![crate::geometry::AxisBox::new(vec![*b])?])?;
    let trace_sq = trs2_box_union(&a, &b_union)?;
    Ok(SeparatedUnionReport {
        n_intervals,
        k,
        trace: a.volume() * b.length(),
        trace_sq,
        lambda1_bound: trace_sq.max(0.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AxisBox;
    use crate::oracle::trs2_brute_quadrature;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn overlap_profile_equal_intervals_is_triangle() {
        let c = 3.0;
        let p = overlap_profile(&iv(0.0, c), &iv(0.0, c));
        assert_eq!((p.p1, p.p2, p.p3, p.p4), (-c, 0.0, 0.0, c));
        assert_eq!(p.plateau, c);
        assert!((p.evaluate(1.0) - (c - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn overlap_profile_unequal_lengths() {
        let p = overlap_profile(&iv(0.0, 1.0), &iv(0.0, 3.0));
        assert_eq!(p.plateau, 1.0);
        assert!((p.p3 - p.p2 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn overlap_profile_matches_direct_measure() {
        let cases = [
            (iv(0.0, 2.0), iv(0.0, 2.0)),
            (iv(-1.0, 1.5), iv(0.3, 4.0)),
            (iv(5.0, 6.0), iv(0.0, 0.5)),
        ];
        for (i1, i2) in cases {
            let p = overlap_profile(&i1, &i2);
            for s in 0..100 {
                let z = p.p1 - 0.5 + (p.p4 - p.p1 + 1.0) * s as f64 / 99.0;
                let direct = (i1.hi.min(i2.hi - z) - i1.lo.max(i2.lo - z)).max(0.0);
                assert!(
                    (p.evaluate(z) - direct).abs() < 1e-12,
                    "profile mismatch at z={z}"
                );
            }
            assert!((p.integral() - i1.length() * i2.length()).abs() < 1e-12);
        }
    }

    #[test]
    fn w_integral_degenerate_j_is_zero() {
        let w = w_integral(&iv(0.0, 1.0), &iv(0.0, 1.0), &iv(0.5, 0.5), &iv(0.0, 1.0));
        assert_eq!(w.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn w_integral_conjugation_symmetry() {
        let (i1, i2) = (iv(0.0, 2.0), iv(0.5, 1.7));
        let (j1, j2) = (iv(-0.3, 0.9), iv(0.1, 1.4));
        let w12 = w_integral(&i1, &i2, &j1, &j2);
        let w21 = w_integral(&i2, &i1, &j1, &j2);
        assert!((w21.value - w12.value.conj()).norm() < 1e-10);
    }

    #[test]
    fn w_integral_single_interval_matches_explicit_and_brute() {
        let c = 2.0;
        let w = w_integral(&iv(0.0, c), &iv(0.0, c), &iv(0.0, 1.0), &iv(0.0, 1.0));
        let explicit = trs2_interval_explicit(c).unwrap();
        assert!(
            (w.value.re - explicit).abs() < 1e-8,
            "w {} vs explicit {explicit}",
            w.value.re
        );
        assert!(w.value.im.abs() < 1e-10);
        let brute = trs2_brute_quadrature(c);
        assert!((w.value.re - brute).abs() < 1e-7);
    }

    #[test]
    fn box_union_matches_explicit_single_interval() {
        for c in [1.0, 2.0, 5.0, 10.0] {
            let a = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, c)]).unwrap()]).unwrap();
            let b = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, 1.0)]).unwrap()]).unwrap();
            let got = trs2_box_union(&a, &b).unwrap();
            let want = trs2_interval_explicit(c).unwrap();
            assert!((got - want).abs() < 1e-8, "c={c}: {got} vs {want}");
        }
    }

    #[test]
    fn box_union_tensor_power_identity() {
        let c = 3.0;
        let a2 =
            BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, c), (0.0, c)]).unwrap()]).unwrap();
        let b2 = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap()])
            .unwrap();
        let got = trs2_box_union(&a2, &b2).unwrap();
        let one_d = trs2_interval_explicit(c).unwrap();
        assert!(
            (got - one_d * one_d).abs() < 1e-7,
            "{got} vs {}",
            one_d * one_d
        );
    }

    #[test]
    fn trace_squared_below_trace() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let c: f64 = rng.gen_range(0.5..4.0);
            let a = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, c)]).unwrap()]).unwrap();
            let b = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, 1.0)]).unwrap()]).unwrap();
            let t2 = trs2_box_union(&a, &b).unwrap();
            assert!(t2 >= 0.0);
            assert!(t2 <= a.volume() * b.volume() + 1e-9);
        }
    }

    #[test]
    fn randomized_unions_have_real_trace_squared() {
        // The imaginary residue is asserted inside trs2_box_union.
        let mut rng = StdRng::seed_from_u64(17);
        for case in 0..50 {
            let d = if case % 2 == 0 { 1 } else { 2 };
            let n_a = rng.gen_range(1..=3);
            let n_b = rng.gen_range(1..=2);
            let make_union = |rng: &mut StdRng, n: usize| {
                let boxes: Vec<AxisBox> = (0..n)
                    .map(|_| {
                        let sides: Vec<(f64, f64)> = (0..d)
                            .map(|_| {
                                let lo: f64 = rng.gen_range(-3.0..3.0);
                                (lo, lo + rng.gen_range(0.2..2.0))
                            })
                            .collect();
                        AxisBox::from_bounds(&sides).unwrap()
                    })
                    .collect();
                crate::geometry::normalize_box_union(&boxes).unwrap()
            };
            let a = make_union(&mut rng, n_a);
            let b = make_union(&mut rng, n_b);
            let t2 = trs2_box_union(&a, &b).unwrap();
            assert!(t2 >= -1e-9, "case {case}: negative Tr S^2 = {t2}");
            assert!(t2 <= a.volume() * b.volume() + 1e-8);
        }
    }

    #[test]
    fn explicit_vanishes_as_c_to_zero() {
        let c = 1e-3;
        let explicit = trs2_interval_explicit(c).unwrap();
        let brute = trs2_brute_quadrature(c);
        assert!((explicit - brute).abs() < 1e-12, "{explicit} vs {brute}");
        assert!(explicit.abs() < 2e-6);
    }

    #[test]
    fn asymptotic_zero_terms_is_smooth_part() {
        let c: f64 = 7.0;
        let pi2 = PI * PI;
        let smooth = c - c.ln() / pi2 - (1.0 + EULER_GAMMA + (2.0 * PI).ln()) / pi2;
        assert!((trs2_asymptotic(c, 0).unwrap() - smooth).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_successive_terms_scale_like_next_term() {
        let c = 10.0;
        let d23 = (trs2_asymptotic(c, 2).unwrap() - trs2_asymptotic(c, 3).unwrap()).abs();
        let scale = trs2_asymptotic_next_term(c, 2);
        // The difference is the full n = 3 term: the cos part (sized by the
        // next-term scale) plus a sin part smaller by about 1/t.
        assert!(d23 <= 1.5 * scale, "difference {d23} vs scale {scale}");
        assert!(d23 >= 1e-3 * scale, "difference {d23} vs scale {scale}");
    }

    #[test]
    fn asymptotic_error_bounded_by_next_term() {
        // Only (c, N) pairs whose remainder is resolvable at double
        // precision participate; beyond that the difference is rounding
        // noise in the ~c-sized explicit value.
        for c in [5.0, 10.0, 20.0, 40.0] {
            let explicit = trs2_interval_explicit(c).unwrap();
            for n in 1..=4usize {
                let omitted = trs2_asymptotic_next_term(c, n);
                if omitted < 64.0 * f64::EPSILON * explicit.abs() {
                    continue;
                }
                let err = (explicit - trs2_asymptotic(c, n).unwrap()).abs();
                assert!(
                    err <= 2.0 * omitted + 64.0 * f64::EPSILON * explicit.abs(),
                    "c={c}, N={n}: err {err}, omitted {omitted}"
                );
            }
        }
    }

    #[test]
    fn separated_union_trace_constant_and_trs2_decreasing() {
        let b = iv(0.0, 1.0);
        let r2 = separated_union_demo(2, 2, &b).unwrap();
        let r4 = separated_union_demo(4, 2, &b).unwrap();
        assert!((r2.trace - 0.25).abs() < 1e-12);
        assert!((r4.trace - 0.25).abs() < 1e-12);
        assert!(r4.trace_sq < r2.trace_sq);
        assert!((r2.lambda1_bound - r2.trace_sq.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, 1.0)]).unwrap()]).unwrap();
        let b = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap()])
            .unwrap();
        assert!(trs2_box_union(&a, &b).is_err());
    }
}
