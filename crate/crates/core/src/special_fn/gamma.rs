//! Gamma, log-gamma, digamma and Pochhammer symbols.

use crate::error::{is_nonpositive_integer, Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// sin(pi x) with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// Gamma function without the pole check. Returns +-inf at poles.
pub(crate) fn gamma_raw(x: f64) -> f64 {
    if x == x.round() && x > 0.0 && x <= 171.0 {
        let mut p = 1.0;
        let mut k = 2.0;
        while k < x {
            p *= k;
            k += 1.0;
        }
        return p;
    }
    if x < 0.5 {
        let s = sin_pi(x);
        if s == 0.0 {
            return f64::INFINITY;
        }
        return PI / (s * gamma_raw(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    let a = lanczos_sum(xm);
    // split the power to delay overflow near the top of the range
    let p = t.powf(0.5 * (xm + 0.5));
    (2.0 * PI).sqrt() * p * (p * (-t).exp()) * a
}

/// Euler gamma function.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { what: "gamma argument", value: x });
    }
    Ok(gamma_raw(x))
}

/// ln|Gamma(x)| together with the sign of Gamma(x).
pub fn ln_gamma(x: f64) -> (f64, f64) {
    if x < 0.5 {
        let s = sin_pi(x);
        if s == 0.0 {
            return (f64::INFINITY, 1.0);
        }
        let (lg, _) = ln_gamma(1.0 - x);
        return ((PI / s.abs()).ln() - lg, s.signum());
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    let v = 0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln();
    (v, 1.0)
}

/// Digamma psi(x) = Gamma'(x)/Gamma(x).
pub fn digamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x < 0.0 {
        // reflection
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let y2 = 1.0 / (y * y);
    let series = y2
        * (1.0 / 12.0
            - y2 * (1.0 / 120.0
                - y2 * (1.0 / 252.0
                    - y2 * (1.0 / 240.0 - y2 * (1.0 / 132.0 - y2 * (691.0 / 32760.0 - y2 / 12.0))))));
    acc + y.ln() - 0.5 / y - series
}

/// Rising factorial (alpha)_l.
pub fn pochhammer(alpha: f64, l: usize) -> f64 {
    if l == 0 {
        return 1.0;
    }
    if is_nonpositive_integer(alpha) && (l as f64) > -alpha {
        return 0.0;
    }
    if l <= 64 {
        let mut p = 1.0;
        for i in 0..l {
            p *= alpha + i as f64;
        }
        if p.is_finite() {
            return p;
        }
    }
    let (a, sa) = ln_gamma(alpha + l as f64);
    let (b, sb) = ln_gamma(alpha);
    sa * sb * (a - b).exp()
}

/// prod Gamma(num) / prod Gamma(den); a pole in the denominator gives 0.
pub(crate) fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    for &x in num {
        if is_nonpositive_integer(x) {
            return Err(Error::Pole { what: "gamma argument", value: x });
        }
    }
    if den.iter().any(|&x| is_nonpositive_integer(x)) {
        return Ok(0.0);
    }
    let small = num.iter().chain(den).all(|&x| x.abs() < 150.0);
    if small {
        let mut r = 1.0;
        for &x in num {
            r *= gamma_raw(x);
        }
        for &x in den {
            r /= gamma_raw(x);
        }
        if r.is_finite() && r != 0.0 {
            return Ok(r);
        }
    }
    let mut lg = 0.0;
    let mut sign = 1.0;
    for &x in num {
        let (l, s) = ln_gamma(x);
        lg += l;
        sign *= s;
    }
    for &x in den {
        let (l, s) = ln_gamma(x);
        lg -= l;
        sign *= s;
    }
    Ok(sign * lg.exp())
}
