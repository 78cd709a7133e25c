//! Trace functionals of computed spectra: `Tr f(S)`, Schatten quasi-norms,
//! the plunge integral behind the two-term expansion, the two-term
//! prediction itself, and the admissibility integrals that classify which
//! spectral functions have trace-class / area-law behaviour.

use crate::counting::slepian_prediction;
use crate::geometry::{surface_coefficient, BoxUnion};
use crate::quad::{adaptive_simpson, gauss_legendre};
use crate::spectral1d::Spectrum;
use crate::{Error, Result};
use std::f64::consts::{E, LN_2};
use std::sync::Arc;

type Oracle = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A spectral function `f : [0, 1] -> R` with `f(0) = 0`, its envelope
/// oracles `M0 f(t) = sup_{0<=x<=t} |f(x)|` and
/// `M1 f(t) = sup_{1-t<=x<=1} |f(1) - f(x)|`, and optionally the low-end
/// envelope in log coordinates (`m0_log(u) = M0 f(e^{-u})`), which lets the
/// admissibility integrals reach scales where `e^{-u}` underflows.
#[derive(Clone)]
pub struct SpectralFunction {
    name: String,
    eval: Oracle,
    f1: f64,
    m0: Oracle,
    m1: Oracle,
    m0_log: Option<Oracle>,
}

impl std::fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SpectralFunction({})", self.name)
    }
}

impl SpectralFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, theta: f64) -> f64 {
        (self.eval)(theta)
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn m0(&self, t: f64) -> f64 {
        (self.m0)(t)
    }

    pub fn m1(&self, t: f64) -> f64 {
        (self.m1)(t)
    }

    /// `M0 f(e^{-u})`, valid for arbitrarily large `u`.
    pub fn m0_log(&self, u: f64) -> f64 {
        match &self.m0_log {
            Some(g) => g(u),
            None => (self.m0)((-u).exp()),
        }
    }

    /// `f(theta) = theta`: the identity, whose trace is the operator trace.
    pub fn linear() -> Self {
        Self {
            name: "linear".into(),
            eval: Arc::new(|t| t),
            f1: 1.0,
            m0: Arc::new(|t| t.clamp(0.0, 1.0)),
            m1: Arc::new(|t| t.clamp(0.0, 1.0)),
            m0_log: Some(Arc::new(|u| (-u).exp())),
        }
    }

    /// `f(theta) = theta^2`.
    pub fn square() -> Self {
        Self {
            name: "square".into(),
            eval: Arc::new(|t| t * t),
            f1: 1.0,
            m0: Arc::new(|t| (t * t).clamp(0.0, 1.0)),
            m1: Arc::new(|t| {
                let t = t.clamp(0.0, 1.0);
                1.0 - (1.0 - t) * (1.0 - t)
            }),
            m0_log: Some(Arc::new(|u| (-2.0 * u).exp())),
        }
    }

    /// Step function `1_{(a, 1]}` whose trace is the counting function.
    pub fn indicator(a: f64) -> Result<Self> {
        if !(0.0 < a && a < 1.0) {
            return Err(Error::Domain(format!("indicator needs 0 < a < 1, got {a}")));
        }
        Ok(Self {
            name: format!("indicator({a})"),
            eval: Arc::new(move |t| if t > a { 1.0 } else { 0.0 }),
            f1: 1.0,
            m0: Arc::new(move |t| if t > a { 1.0 } else { 0.0 }),
            m1: Arc::new(move |t| if t >= 1.0 - a { 1.0 } else { 0.0 }),
            m0_log: Some(Arc::new(move |u| if (-u).exp() > a { 1.0 } else { 0.0 })),
        })
    }

    /// Binary entropy `h(theta) = -theta log(theta) - (1-theta) log(1-theta)`.
    pub fn entropy() -> Self {
        fn h(t: f64) -> f64 {
            let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
            -xlogx(t) - xlogx(1.0 - t)
        }
        let m = |t: f64| {
            // h increases on [0, 1/2]; by symmetry the same envelope serves
            // both ends.
            if t >= 0.5 {
                LN_2
            } else {
                h(t)
            }
        };
        Self {
            name: "entropy".into(),
            eval: Arc::new(h),
            f1: 0.0,
            m0: Arc::new(m),
            m1: Arc::new(m),
            m0_log: Some(Arc::new(|u| {
                if u <= LN_2 {
                    LN_2
                } else {
                    // h(e^{-u}) = u e^{-u} - (1 - e^{-u}) ln(1 - e^{-u})
                    let e = (-u).exp();
                    u * e - (1.0 - e) * (-e).ln_1p()
                }
            })),
        }
    }

    /// `f(theta) = log(2/theta)^{-3/2}`: monotone increasing, area-law
    /// admissible, but not trace-class admissible in dimension >= 2.
    pub fn inverse_log_power() -> Self {
        let f = |t: f64| {
            if t <= 0.0 {
                0.0
            } else {
                (2.0 / t).ln().powf(-1.5)
            }
        };
        Self {
            name: "inverse_log_power".into(),
            eval: Arc::new(f),
            f1: LN_2.powf(-1.5),
            m0: Arc::new(f),
            m1: Arc::new(move |t| f(1.0) - f((1.0 - t).max(0.0))),
            m0_log: Some(Arc::new(|u| (LN_2 + u).powf(-1.5))),
        }
    }

    /// Builds the envelopes by dense dyadic sampling with refinement near 0
    /// and 1.  For analytic envelopes prefer the dedicated constructors.
    pub fn from_fn(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let f = Arc::new(f);
        let mut xs: Vec<f64> = Vec::new();
        for j in 1..=60 {
            xs.push(2f64.powi(-j));
            xs.push(1.0 - 2f64.powi(-j));
        }
        for k in 0..=4096 {
            xs.push(k as f64 / 4096.0);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        let f1 = f(1.0);
        let samples: Vec<(f64, f64)> = xs.iter().map(|&x| (x, f(x).abs())).collect();
        let mut m0_prefix = samples.clone();
        for i in 1..m0_prefix.len() {
            m0_prefix[i].1 = m0_prefix[i].1.max(m0_prefix[i - 1].1);
        }
        let mut m1_suffix: Vec<(f64, f64)> =
            xs.iter().map(|&x| (x, (f1 - f(x)).abs())).collect();
        for i in (0..m1_suffix.len() - 1).rev() {
            m1_suffix[i].1 = m1_suffix[i].1.max(m1_suffix[i + 1].1);
        }
        let m0 = move |t: f64| {
            let k = m0_prefix.partition_point(|&(x, _)| x <= t);
            if k == 0 {
                0.0
            } else {
                m0_prefix[k - 1].1
            }
        };
        let m1 = move |t: f64| {
            let k = m1_suffix.partition_point(|&(x, _)| x < 1.0 - t);
            if k == m1_suffix.len() {
                0.0
            } else {
                m1_suffix[k].1
            }
        };
        let eval = f.clone();
        Self {
            name: name.into(),
            eval: Arc::new(move |t| eval(t)),
            f1,
            m0: Arc::new(m0),
            m1: Arc::new(m1),
            m0_log: None,
        }
    }

    /// The function scaled by `s`; every envelope scales linearly.
    pub fn scaled(&self, s: f64) -> Self {
        let eval = self.eval.clone();
        let m0 = self.m0.clone();
        let m1 = self.m1.clone();
        let m0_log = self.m0_log.clone();
        Self {
            name: format!("{} * {s}", self.name),
            eval: Arc::new(move |t| s * eval(t)),
            f1: s * self.f1,
            m0: Arc::new(move |t| s.abs() * m0(t)),
            m1: Arc::new(move |t| s.abs() * m1(t)),
            m0_log: m0_log.map(|g| -> Oracle { Arc::new(move |u| s.abs() * g(u)) }),
        }
    }

    /// Envelope validity: on a dyadic grid of `n` points the envelopes
    /// dominate the sampled suprema.
    pub fn validate_envelopes(&self, n: usize) -> bool {
        let mut sup0: f64 = 0.0;
        let mut ok = true;
        for k in 1..=n {
            let x = k as f64 / n as f64;
            sup0 = sup0.max(self.evaluate(x).abs());
            if self.m0(x) < sup0 - 1e-12 {
                ok = false;
            }
        }
        let mut sup1: f64 = 0.0;
        for k in 0..n {
            let x = 1.0 - k as f64 / n as f64;
            sup1 = sup1.max((self.f1 - self.evaluate(x)).abs());
            if self.m1(k as f64 / n as f64 + 1e-15) < sup1 - 1e-12 {
                ok = false;
            }
        }
        ok && self.evaluate(0.0) == 0.0
    }
}

/// `Tr f(S)` over the trusted part of a spectrum, with the below-floor tail
/// reported as a bound rather than silently added.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TraceValue {
    pub value: f64,
    pub tail_bound: f64,
}

pub fn trace_function(s: &Spectrum, f: &SpectralFunction) -> Result<TraceValue> {
    let mut value = 0.0;
    for &v in s.trusted() {
        let fv = f.evaluate(v);
        if !fv.is_finite() {
            return Err(Error::Evaluation(format!(
                "f({v}) is not finite for {}",
                f.name()
            )));
        }
        value += fv;
    }
    let untrusted = s.values.len() - s.trusted().len();
    Ok(TraceValue {
        value,
        tail_bound: f.m0(s.floor) * untrusted as f64,
    })
}

/// Schatten quasi-norm to the `p`: `sum sigma_k^p` over trusted values.
pub fn schatten_quasinorm(s: &Spectrum, p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!("schatten needs 0 < p < inf, got {p}")));
    }
    Ok(s.trusted().iter().map(|&v| v.powf(p)).sum())
}

/// Result of the plunge integral `int_0^1 (f(t) - f(1) t) / (t (1-t)) dt`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PlungeIntegral {
    pub value: f64,
    pub error_estimate: f64,
    pub divergent: bool,
}

/// Adaptive evaluation on `[delta, 1 - delta]` with the endpoint limit
/// `delta -> 0` taken along a dyadic ladder; failure of the increments to
/// shrink raises the divergence flag.
pub fn plunge_integral(f: &SpectralFunction) -> Result<PlungeIntegral> {
    let f1 = f.f1();
    let g = {
        let f = f.clone();
        move |t: f64| (f.evaluate(t) - f1 * t) / (t * (1.0 - t))
    };
    let tol = 1e-12;
    let mut delta = 0.25;
    let mut total = adaptive_simpson(&g, 0.25, 0.75, tol, 52);
    let mut last_inc = f64::INFINITY;
    let mut stalls = 0u32;
    let mut small_in_a_row = 0u32;
    let mut final_inc = 0.0;
    for _ in 2..52 {
        let next = 0.5 * delta;
        let inc_lo = adaptive_simpson(&g, next, delta, tol, 52);
        let inc_hi = adaptive_simpson(&g, 1.0 - delta, 1.0 - next, tol, 52);
        let inc = inc_lo + inc_hi;
        total += inc;
        final_inc = inc.abs();
        if inc.abs() >= 0.99 * last_inc && inc.abs() > 1e-9 {
            stalls += 1;
            if stalls >= 8 {
                return Ok(PlungeIntegral {
                    value: total,
                    error_estimate: inc.abs(),
                    divergent: true,
                });
            }
        } else {
            stalls = 0;
        }
        if inc.abs() < 1e-10 {
            small_in_a_row += 1;
            if small_in_a_row >= 2 {
                break;
            }
        } else {
            small_in_a_row = 0;
        }
        last_inc = inc.abs();
        delta = next;
    }
    Ok(PlungeIntegral {
        value: total,
        error_estimate: final_inc + 1e-10,
        divergent: false,
    })
}

/// Convergence/divergence report for the two admissibility integrals.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct AdmissibilityReport {
    /// Partial value of the trace-class integral (meaningful when convergent).
    pub trace_class_value: f64,
    pub trace_class_divergent: bool,
    /// Partial value of the area-law integral.
    pub area_law_value: f64,
    pub area_law_divergent: bool,
}

/// Dyadic-block evaluation of the admissibility integrals on the
/// `eps = 2^{-2^k}` grid, carried out in the substituted variable
/// `u = log(1/eps)` so the blocks reach far below the underflow threshold
/// whenever the function provides a log-space envelope.
///
/// Trace class: `int_0^delta M0 f(eps) log(1/eps)^{d-1} /
/// (eps (log log(1/eps))^d) deps`, requiring `delta <= e^{-e}` so the
/// iterated logarithm stays positive.
/// Area law: `int_0^1 (M0 f + M1 f)(eps) / eps deps`.
pub fn admissibility(f: &SpectralFunction, d: usize, delta: f64) -> Result<AdmissibilityReport> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if !(delta > 0.0 && delta <= (-E as f64).exp()) {
        return Err(Error::Domain(format!(
            "trace-class integral needs 0 < delta <= e^-e, got {delta}"
        )));
    }
    let n_blocks = if f.m0_log.is_some() { 20 } else { 9 };

    // Trace-class integrand in u = log(1/eps).
    let tc_integrand = |u: f64| f.m0_log(u) * u.powi(d as i32 - 1) / u.ln().powi(d as i32);
    let u0 = (1.0 / delta).ln();
    let k_start = (0..64)
        .find(|&k| 2f64.powi(k) * LN_2 >= u0)
        .unwrap_or(63);
    let mut tc_blocks = Vec::new();
    let head = if 2f64.powi(k_start) * LN_2 > u0 {
        block_integral(&tc_integrand, u0, 2f64.powi(k_start) * LN_2)
    } else {
        0.0
    };
    for k in k_start..k_start + n_blocks {
        let lo = 2f64.powi(k) * LN_2;
        tc_blocks.push(block_integral(&tc_integrand, lo, 2.0 * lo));
    }
    let (tc_value, tc_divergent) = summarize_blocks(head, &tc_blocks);

    // Area-law integrand in u-space: (M0 f + M1 f)(e^{-u}).
    let al_integrand = |u: f64| {
        let eps = (-u).exp();
        f.m0_log(u) + f.m1(eps)
    };
    let mut al_blocks = Vec::new();
    let head = block_integral(&al_integrand, 0.0, LN_2);
    for k in 0..n_blocks as i32 {
        let lo = 2f64.powi(k) * LN_2;
        al_blocks.push(block_integral(&al_integrand, lo, 2.0 * lo));
    }
    let (al_value, al_divergent) = summarize_blocks(head, &al_blocks);

    Ok(AdmissibilityReport {
        trace_class_value: tc_value,
        trace_class_divergent: tc_divergent,
        area_law_value: al_value,
        area_law_divergent: al_divergent,
    })
}

fn block_integral(g: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let rule = gauss_legendre(32, lo, hi).expect("block rule");
    rule.integrate(g)
}

/// Divergence when some run of 10 consecutive block ratios stays >= 0.99
/// (fewer when the block budget is smaller); otherwise the partial sum plus
/// a geometric tail estimate.
fn summarize_blocks(head: f64, blocks: &[f64]) -> (f64, bool) {
    let run_needed = 10.min(blocks.len().saturating_sub(1));
    let mut run = 0usize;
    let mut divergent = false;
    for w in blocks.windows(2) {
        let ratio = if w[0] > 0.0 { w[1] / w[0] } else { 0.0 };
        if ratio >= 0.99 {
            run += 1;
            if run >= run_needed && run_needed > 0 {
                divergent = true;
            }
        } else {
            run = 0;
        }
    }
    let mut value = head + blocks.iter().sum::<f64>();
    if !divergent {
        if let [.., prev, last] = blocks {
            if *prev > 0.0 {
                let ratio = last / prev;
                if ratio < 0.95 {
                    value += last * ratio / (1.0 - ratio);
                }
            }
        }
    }
    (value, divergent)
}

/// The two-term prediction for `Tr f(S_{cA,B})` over axis-box unions, with
/// the residual filled in when a computed trace is supplied.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TraceReport {
    pub trace: Option<f64>,
    /// `c^d |A| |B| f(1)`.
    pub leading: f64,
    /// `c^{d-1} log(c) I(A,B) * plunge integral`.
    pub second: f64,
    pub residual: Option<f64>,
    pub admissibility: AdmissibilityReport,
}

impl TraceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    pub fn csv_header() -> &'static str {
        "trace,leading,second,residual,trace_class_value,trace_class_divergent,area_law_value,area_law_divergent"
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.12e}"));
        format!(
            "{},{:.12e},{:.12e},{},{:.12e},{},{:.12e},{}",
            opt(self.trace),
            self.leading,
            self.second,
            opt(self.residual),
            self.admissibility.trace_class_value,
            self.admissibility.trace_class_divergent,
            self.admissibility.area_law_value,
            self.admissibility.area_law_divergent
        )
    }
}

pub fn two_term_prediction(
    f: &SpectralFunction,
    a: &BoxUnion,
    b: &BoxUnion,
    c: f64,
    measured_trace: Option<f64>,
) -> Result<TraceReport> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("two_term_prediction needs c > 0, got {c}")));
    }
    let d = a.dim() as i32;
    let coeff = surface_coefficient(a, b)?;
    let plunge = plunge_integral(f)?;
    let leading = c.powi(d) * a.volume() * b.volume() * f.f1();
    let second = c.powi(d - 1) * c.ln() * coeff * plunge.value;
    Ok(TraceReport {
        trace: measured_trace,
        leading,
        second,
        residual: measured_trace.map(|t| t - leading - second),
        admissibility: admissibility(f, a.dim(), (-E as f64).exp())?,
    })
}

/// Convenience: the two-term count prediction reproduces the explicit
/// Slepian formula for step functions over unit boxes.
pub fn indicator_prediction_matches_slepian(c: f64, a: f64) -> Result<f64> {
    let unit = BoxUnion::new(vec![crate::geometry::AxisBox::from_bounds(&[(0.0, 1.0)])?])?;
    let f = SpectralFunction::indicator(a)?;
    let report = two_term_prediction(&f, &unit, &unit, c, None)?;
    let predicted = report.leading + report.second;
    Ok(predicted - slepian_prediction(c, a))
}
