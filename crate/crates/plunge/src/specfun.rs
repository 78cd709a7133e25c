//! Special functions for the closed-form trace formulas: the sine integral
//! Si, the cosine integral Ci, the exponential integral E1, and the
//! Euler-Mascheroni constant.
//!
//! Branch layout: power series on a small disk, Gauss-Legendre quadrature of
//! the defining integral on the middle range, optimally truncated asymptotic
//! series beyond `t = 40`.  The middle quadrature branch exists because at
//! double precision neither the power series (cancellation) nor the
//! asymptotic series (divergence) reaches 1e-12 between roughly 14 and 30.

use crate::quad::composite_gauss;
use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_RADIUS: f64 = 6.0;
const ASYMPTOTIC_RADIUS: f64 = 40.0;

/// A computed special-function value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub abs_error_bound: f64,
}

impl SpecialValue {
    fn new(value: f64, abs_error_bound: f64) -> Self {
        Self {
            value,
            abs_error_bound,
        }
    }
}

/// Sine integral `Si(t) = int_0^t sin(x)/x dx`.  Odd in `t`.
pub fn sine_integral(t: f64) -> SpecialValue {
    if !t.is_finite() {
        return SpecialValue::new(f64::NAN, f64::INFINITY);
    }
    let x = t.abs();
    let v = if x <= SERIES_RADIUS {
        SpecialValue::new(si_series(x), 1e-14)
    } else if x <= ASYMPTOTIC_RADIUS {
        SpecialValue::new(si_quadrature(x), 1e-13)
    } else {
        si_asymptotic(x)
    };
    SpecialValue::new(v.value * t.signum(), v.abs_error_bound)
}

/// Cosine integral `Ci(t) = -int_t^inf cos(x)/x dx` for `t > 0`.
pub fn cosine_integral(t: f64) -> Result<SpecialValue> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("cosine_integral needs t > 0, got {t}")));
    }
    Ok(if t <= SERIES_RADIUS {
        SpecialValue::new(EULER_GAMMA + t.ln() + cin_series(t), 1e-14)
    } else if t <= ASYMPTOTIC_RADIUS {
        SpecialValue::new(EULER_GAMMA + t.ln() + cin_quadrature(t), 1e-13)
    } else {
        ci_asymptotic(t)
    })
}

/// Exponential integral `E1(t) = int_t^inf e^{-x}/x dx` for `t > 0`.
pub fn exp_integral_e1(t: f64) -> Result<SpecialValue> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("exp_integral_e1 needs t > 0, got {t}")));
    }
    Ok(if t <= 1.0 {
        // E1(t) = -gamma - ln t + sum_{k>=1} (-1)^{k+1} t^k / (k k!)
        let mut sum = 0.0;
        let mut term = 1.0; // t^k / k!
        for k in 1..=30 {
            term *= t / k as f64;
            let contrib = if k % 2 == 1 { term } else { -term } / k as f64;
            sum += contrib;
            if term < 1e-18 {
                break;
            }
        }
        SpecialValue::new(-EULER_GAMMA - t.ln() + sum, 1e-15)
    } else {
        // Continued fraction e^{-t} / (t + 1 - 1^2/(t + 3 - 2^2/(t + 5 - ...)))
        // by the modified Lentz algorithm.
        let tiny = 1e-300;
        let mut b = t + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for k in 1..200 {
            let a = -((k * k) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let v = (-t).exp() * h;
        SpecialValue::new(v, 1e-15 * v.abs() + 1e-300)
    })
}

fn si_series(x: f64) -> f64 {
    // sum_k (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    let mut sum = x;
    let mut term = x; // x^{2k+1} / (2k+1)!
    for k in 1..60 {
        let n = 2 * k + 1;
        term *= -x * x / ((n - 1) as f64 * n as f64);
        sum += term / n as f64;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// Series for `Cin(t) = int_0^t (1 - cos x)/x dx`; `Ci = gamma + ln t - Cin`.
fn cin_series(x: f64) -> f64 {
    // -Cin(t) = sum_{k>=1} (-1)^k x^{2k} / (2k (2k)!)
    let mut sum = 0.0;
    let mut term = 1.0; // x^{2k} / (2k)!
    for k in 1..60 {
        let n = 2 * k;
        term *= -x * x / (((n - 1) * n) as f64);
        sum += term / n as f64;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn si_quadrature(x: f64) -> f64 {
    let panels = (x / 2.0).ceil() as usize + 1;
    composite_gauss(
        |u| if u.abs() < 1e-12 { 1.0 } else { u.sin() / u },
        0.0,
        x,
        panels,
        24,
    )
}

fn cin_quadrature(x: f64) -> f64 {
    let panels = (x / 2.0).ceil() as usize + 1;
    composite_gauss(
        |u| {
            if u.abs() < 1e-6 {
                -u / 2.0 + u * u * u / 24.0
            } else {
                (u.cos() - 1.0) / u
            }
        },
        0.0,
        x,
        panels,
        24,
    )
}

/// Auxiliary asymptotic sums, both truncated at the smallest term:
/// `p(t) = sum_n (-1)^n (2n)!/t^{2n+1}` and
/// `q(t) = sum_{n>=1} (-1)^n (2n-1)!/t^{2n}`.
fn asymptotic_pq(t: f64) -> (f64, f64, f64) {
    let mut p = 0.0;
    let mut q = 0.0;
    let mut fact = 1.0; // (2n)!
    let mut tp = 1.0 / t; // t^{-(2n+1)}
    let mut sign = 1.0;
    let mut last = f64::INFINITY;
    let mut bound = 0.0;
    for n in 0..60 {
        let term_p = fact * tp;
        if term_p > last {
            bound = term_p;
            break;
        }
        p += sign * term_p;
        // (2n+1)! / t^{2n+2} feeds q at index n+1
        let term_q = fact * (2 * n + 1) as f64 * tp / t;
        q += -sign * term_q;
        last = term_p;
        bound = term_p;
        fact *= ((2 * n + 1) * (2 * n + 2)) as f64;
        tp /= t * t;
        sign = -sign;
    }
    (p, q, bound)
}

fn si_asymptotic(t: f64) -> SpecialValue {
    let (p, q, bound) = asymptotic_pq(t);
    SpecialValue::new(FRAC_PI_2 - t.cos() * p + t.sin() * q, bound + 1e-16)
}

fn ci_asymptotic(t: f64) -> SpecialValue {
    let (p, q, bound) = asymptotic_pq(t);
    SpecialValue::new(t.sin() * p + t.cos() * q, bound + 1e-16)
}
