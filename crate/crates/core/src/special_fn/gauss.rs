//! Gauss hypergeometric function F(a, b; c; z) for real z < 1.

use super::engine::{sum_single, CompensatedSum, Seq};
use super::gamma::{digamma, gamma_ratio};
use super::{EvalConfig, GaussParams, SeriesValue};
use crate::error::{check_lower, is_nonpositive_integer, Error, Result};

/// Term budget floor for a single Gauss series.
const GAUSS_MIN_TERMS: usize = 20_000;
/// Above this value of max(|a|,|b|,|c|)(1-z) the 1-z transformation cancels badly.
const LARGE_PARAM: f64 = 3.0;
/// Distance from an integer below which c-a-b is treated as an integer.
const LOG_CASE_EPS: f64 = 1e-12;
/// Distance from an integer where the connection formula loses too many digits.
const NEAR_INT_EPS: f64 = 1e-4;

/// Gauss hypergeometric series F(a,b;c;sigma).
pub fn gauss_f(p: &GaussParams, sigma: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    check_lower("c", p.c)?;
    hyp2f1(p.a, p.b, p.c, sigma, cfg)
}

pub(crate) fn hyp2f1(a: f64, b: f64, c: f64, z: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    check_lower("c", c)?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("F argument {z}")));
    }
    if z == 0.0 {
        return Ok(SeriesValue::exact(1.0, 1));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return direct(a, b, c, z, cfg);
    }
    if z >= 1.0 {
        return Err(Error::Domain(format!("F argument {z} >= 1")));
    }
    if z < 0.0 {
        // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
        let w = z / (z - 1.0);
        let r = unit(a, c - b, c, w, cfg)?;
        return Ok(r.scaled((1.0 - z).powf(-a)));
    }
    unit(a, b, c, z, cfg)
}

fn budget(cfg: &EvalConfig) -> EvalConfig {
    EvalConfig { max_terms: cfg.max_terms.max(GAUSS_MIN_TERMS), ..*cfg }
}

/// Plain power series.
fn direct(a: f64, b: f64, c: f64, z: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    let mut u = Seq::new(1.0, move |m| {
        let m = m as f64;
        (a + m) * (b + m) / ((c + m) * (m + 1.0)) * z
    });
    sum_single(&mut u, &budget(cfg), z.abs().min(1.0))
}

/// 0 <= z < 1.
fn unit(a: f64, b: f64, c: f64, z: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if z == 0.0 {
        return Ok(SeriesValue::exact(1.0, 1));
    }
    if z < 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return direct(a, b, c, z, cfg);
    }
    let big = a.abs().max(b.abs()).max(c.abs()) * (1.0 - z);
    if big > LARGE_PARAM {
        return direct(a, b, c, z, cfg);
    }
    let delta = c - a - b;
    let n = delta.round();
    let dist = (delta - n).abs();
    if dist < LOG_CASE_EPS {
        if n >= 0.0 {
            return log_case(a, b, n as usize, z, cfg);
        }
        // Euler: F = (1-z)^{c-a-b} F(c-a, c-b; c; z), which has c-a-b -> -n
        let r = unit(c - a, c - b, c, z, cfg)?;
        return Ok(r.scaled((1.0 - z).powf(delta)));
    }
    if dist < NEAR_INT_EPS && z <= 0.9 {
        return direct(a, b, c, z, cfg);
    }
    one_minus_z(a, b, c, z, cfg)
}

/// Linear transformation to 1-z for non-integer c-a-b.
fn one_minus_z(a: f64, b: f64, c: f64, z: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    let delta = c - a - b;
    let y = 1.0 - z;
    let ca = gamma_ratio(&[c, delta], &[c - a, c - b])?;
    let cb = gamma_ratio(&[c, -delta], &[a, b])?;
    let mut out = SeriesValue::exact(0.0, 0);
    let mut acc = CompensatedSum::new();
    if ca != 0.0 {
        let f1 = direct(a, b, 1.0 - delta, y, cfg)?;
        acc.add(ca * f1.value);
        out = out.merge(&f1.scaled(ca));
    }
    if cb != 0.0 {
        let pre = cb * y.powf(delta);
        let f2 = direct(c - a, c - b, 1.0 + delta, y, cfg)?;
        acc.add(pre * f2.value);
        out = out.merge(&f2.scaled(pre));
    }
    out.value = acc.value();
    Ok(out)
}

/// c = a + b + n with integer n >= 0 (logarithmic case).
fn log_case(a: f64, b: f64, n: usize, z: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    let c = a + b + n as f64;
    let y = 1.0 - z;
    let nf = n as f64;
    let mut acc = CompensatedSum::new();
    let mut terms = 0;
    if n > 0 {
        let pre = gamma_ratio(&[nf, c], &[a + nf, b + nf])?;
        let mut t = 1.0;
        for k in 0..n {
            let kf = k as f64;
            acc.add(pre * t);
            terms += 1;
            t *= (a + kf) * (b + kf) / ((kf + 1.0) * (1.0 - nf + kf)) * y;
        }
    }
    let pre = -(-y).powi(n as i32) * gamma_ratio(&[c], &[a, b])?;
    // running digammas: psi(k+1), psi(k+n+1), psi(a+k+n), psi(b+k+n)
    let mut p1 = digamma(1.0);
    let mut p2 = digamma(nf + 1.0);
    let mut p3 = digamma(a + nf);
    let mut p4 = digamma(b + nf);
    let ln_y = y.ln();
    let mut coef = 1.0 / (1..=n).map(|k| k as f64).product::<f64>();
    let mut series = CompensatedSum::new();
    let mut small = 0;
    let mut converged = false;
    let mut last = 0.0;
    let cap = cfg.max_terms.max(GAUSS_MIN_TERMS);
    for k in 0..cap {
        let kf = k as f64;
        let t = coef * (ln_y - p1 - p2 + p3 + p4);
        series.add(t);
        terms += 1;
        last = t.abs();
        let scale = series.value().abs().max(1.0);
        if last <= cfg.rel_tol * scale * 1e-2 {
            small += 1;
            if small >= 2 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
        coef *= (a + nf + kf) * (b + nf + kf) / ((kf + 1.0) * (kf + nf + 1.0)) * y;
        p1 += 1.0 / (kf + 1.0);
        p2 += 1.0 / (kf + nf + 1.0);
        p3 += 1.0 / (a + nf + kf);
        p4 += 1.0 / (b + nf + kf);
    }
    acc.add(pre * series.value());
    let tail = (pre * last).abs() * y / (1.0 - y);
    Ok(SeriesValue { value: acc.value(), tail_estimate: tail, terms_used: terms, converged })
}
