//! Counting functions on computed spectra: tensor-product spectra for boxes
//! in dimension `d`, the plunge counts, and the explicit predictions
//! (Slepian two-term count, Karnik plunge bound, scaling envelopes).

use crate::spectral1d::{OperatorKind, Spectrum};
use crate::{Error, Result};

/// All counts for one `(c, d, eps)` triple, plus the closed-form predictions.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CountingReport {
    pub c: f64,
    pub d: usize,
    pub eps: f64,
    pub n_eps: usize,
    pub n_half: usize,
    pub n_one_minus_eps: usize,
    pub lambda_plus: usize,
    pub lambda_minus: usize,
    pub lambda: usize,
    pub karnik_bound: f64,
    pub slepian_half: f64,
}

impl CountingReport {
    pub fn csv_header() -> &'static str {
        "c,d,eps,n_eps,n_half,n_one_minus_eps,lambda_plus,lambda_minus,lambda,karnik_bound,slepian_half,karnik_ok"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{:e},{},{},{},{},{},{},{:.12e},{:.12e},{}",
            self.c,
            self.d,
            self.eps,
            self.n_eps,
            self.n_half,
            self.n_one_minus_eps,
            self.lambda_plus,
            self.lambda_minus,
            self.lambda,
            self.karnik_bound,
            self.slepian_half,
            (self.lambda as f64) <= self.karnik_bound
        )
    }
}

/// Enumerates all products of `d` base values above `floor`, with
/// multiplicity, by branch-and-prune over the sorted base.  Only trusted
/// base values participate.
pub fn product_spectrum(base: &Spectrum, d: usize, floor: f64) -> Result<Spectrum> {
    if !(floor > 0.0) {
        return Err(Error::Domain(
            "product enumeration needs floor > 0; the full product multiset is infinite".into(),
        ));
    }
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let base_c = match base.kind {
        OperatorKind::Localization1d { c } => c,
        _ => {
            return Err(Error::Domain(
                "product_spectrum expects a 1-D localization base spectrum".into(),
            ))
        }
    };
    let vals = base.trusted();
    if d == 1 {
        let values: Vec<f64> = vals.iter().copied().filter(|&v| v > floor).collect();
        return Ok(Spectrum {
            values,
            kind: OperatorKind::Localization1d { c: base_c },
            dim: 1,
            nodes: base.nodes,
            floor: floor.max(base.floor),
        });
    }
    let top = vals.first().copied().unwrap_or(0.0);
    let mut out = Vec::new();
    // Depth-first over ordered index tuples; base is sorted descending, so
    // once a prefix cannot reach the floor even with the largest remaining
    // factors, the whole sibling range is pruned.
    fn descend(
        vals: &[f64],
        top: f64,
        floor: f64,
        prefix: f64,
        remaining: usize,
        out: &mut Vec<f64>,
    ) {
        if remaining == 0 {
            if prefix > floor {
                out.push(prefix);
            }
            return;
        }
        for &v in vals {
            let p = prefix * v;
            if p * top.powi(remaining as i32 - 1) <= floor {
                break;
            }
            descend(vals, top, floor, p, remaining - 1, out);
        }
    }
    descend(vals, top, floor, 1.0, d, &mut out);
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(Spectrum {
        values: out,
        kind: OperatorKind::ProductD { c: base_c, d },
        dim: d,
        nodes: base.nodes,
        floor,
    })
}

/// `N_eps = |{n : lambda_n > eps}|` by binary search on the sorted sequence.
pub fn count_above(s: &Spectrum, eps: f64) -> Result<usize> {
    if eps <= s.floor {
        return Err(Error::UntrustedThreshold {
            threshold: eps,
            floor: s.floor,
        });
    }
    Ok(s.values.partition_point(|&v| v > eps))
}

/// Plunge counts with the strict/non-strict convention that makes the
/// counting identities exact: the upper count uses `1 - eps > lambda > 1/2`,
/// the lower uses `1/2 >= lambda > eps`.
pub fn plunge_counts(s: &Spectrum, eps: f64) -> Result<CountingReport> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!(
            "plunge_counts needs 0 < eps < 1/2, got {eps}"
        )));
    }
    let n_eps = count_above(s, eps)?;
    let n_half = s.values.partition_point(|&v| v > 0.5);
    let n_one_minus_eps = s.values.partition_point(|&v| v > 1.0 - eps);
    let lambda_plus = s
        .values
        .iter()
        .filter(|&&v| v < 1.0 - eps && v > 0.5)
        .count();
    let lambda_minus = s
        .values
        .iter()
        .filter(|&&v| v <= 0.5 && v > eps)
        .count();
    let (c, d) = match s.kind {
        OperatorKind::Localization1d { c } => (c, 1),
        OperatorKind::ProductD { c, d } => (c, d),
        _ => (f64::NAN, s.dim),
    };
    Ok(CountingReport {
        c,
        d,
        eps,
        n_eps,
        n_half,
        n_one_minus_eps,
        lambda_plus,
        lambda_minus,
        lambda: lambda_plus + lambda_minus,
        karnik_bound: karnik_bound(c.powi(d as i32), eps),
        slepian_half: c.powi(d as i32),
    })
}

/// Explicit uniform plunge bound
/// `(2/pi^2) log(50 |A||B| + 25) log(5 / (eps (1 - eps))) + 7`
/// with `|A||B| = c`.
pub fn karnik_bound(c: f64, eps: f64) -> f64 {
    2.0 / (std::f64::consts::PI * std::f64::consts::PI)
        * (50.0 * c + 25.0).ln()
        * (5.0 / (eps * (1.0 - eps))).ln()
        + 7.0
}

/// Two-term counting prediction `c + (1/pi^2) log((1-a)/a) log(c)`.
pub fn slepian_prediction(c: f64, a: f64) -> f64 {
    c + ((1.0 - a) / a).ln() * c.ln() / (std::f64::consts::PI * std::f64::consts::PI)
}

/// Checks the tensor sandwich
/// `N_{a^{1/d}}(base)^d <= N_a(product) <= N_a(base)^d`
/// on the enumerated product multiset.
pub fn sandwich_check(base: &Spectrum, d: usize, a: f64) -> Result<(bool, bool)> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("sandwich needs 0 < a < 1, got {a}")));
    }
    let root = a.powf(1.0 / d as f64);
    // Enumerate with a floor safely below `a` so the middle count is exact.
    let floor = (a * 1e-3).max(1e-12);
    let product = product_spectrum(base, d, floor)?;
    let n_root = count_above(base, root)?;
    let n_base = count_above(base, a)?;
    let n_mid = count_above(&product, a)?;
    let lower_ok = n_root.pow(d as u32) <= n_mid;
    let upper_ok = n_mid <= n_base.pow(d as u32);
    Ok((lower_ok, upper_ok))
}

/// Scaling-envelope ratios for one `(c, eps, d)` cell.  The constants in the
/// two-cube envelopes are existential, so these are reported for inspection,
/// never asserted against fixed values.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EnvelopeReport {
    pub c: f64,
    pub d: usize,
    pub eps: f64,
    pub lambda_plus: usize,
    pub lambda_minus: usize,
    /// `c^{d-1} log(1/eps) log(alpha c / log(1/eps))` with `alpha = 4`.
    pub upper_envelope: f64,
    pub ratio_plus: f64,
    pub ratio_minus: f64,
    /// `(log(1/eps) / log(log(1/eps)/c))^d`, defined when `log(1/eps) > e c`.
    pub tiny_envelope: Option<f64>,
    pub ratio_tiny: Option<f64>,
}

pub fn envelope_report(c: f64, eps: f64, d: usize, s: &Spectrum) -> Result<EnvelopeReport> {
    const ALPHA: f64 = 4.0;
    let report = plunge_counts(s, eps)?;
    let l = (1.0 / eps).ln();
    let upper_envelope = c.powi(d as i32 - 1) * l * (ALPHA * c / l).ln();
    let tiny_envelope = if l / c > std::f64::consts::E {
        Some((l / (l / c).ln()).powi(d as i32))
    } else {
        None
    };
    Ok(EnvelopeReport {
        c,
        d,
        eps,
        lambda_plus: report.lambda_plus,
        lambda_minus: report.lambda_minus,
        upper_envelope,
        ratio_plus: report.lambda_plus as f64 / upper_envelope,
        ratio_minus: report.lambda_minus as f64 / upper_envelope,
        tiny_envelope,
        ratio_tiny: tiny_envelope.map(|t| report.lambda_minus as f64 / t),
    })
}

/// The Schatten-to-count inequality at threshold `delta`: with
/// `p = 1 / (2 log(1/delta))` one has
/// `|{k : sigma_k >= delta}| <= sqrt(e) sum sigma_k^p`.
pub fn schatten_count_check(s: &Spectrum, delta: f64) -> bool {
    let p = 1.0 / (2.0 * (1.0 / delta).ln());
    let count = s.values.iter().filter(|&&v| v >= delta).count();
    let quasi: f64 = s.trusted().iter().map(|&v| v.powf(p)).sum();
    (count as f64) <= std::f64::consts::E.sqrt() * quasi
}
