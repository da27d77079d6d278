//! Recurrence, differentiation, limit, continuation and transformation
//! relations of the series families, checked numerically at points.

use crate::error::{is_nonpositive_integer, Error, Result};
use crate::special_fn::{
    gamma_fn, phi, psi_pq, xi2, xi_pq, EvalConfig, PhiParams, PsiPQParams, SeriesArgs, Xi2Params, XiPQParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationId {
    R10,
    R11,
    R12,
    R13,
    R14,
    R15,
    R16,
    D17,
    D18a,
    D18b,
    D19,
    L20,
    C21,
    L22,
    A23,
}

impl RelationId {
    pub const ALL: [RelationId; 15] = [
        RelationId::R10,
        RelationId::R11,
        RelationId::R12,
        RelationId::R13,
        RelationId::R14,
        RelationId::R15,
        RelationId::R16,
        RelationId::D17,
        RelationId::D18a,
        RelationId::D18b,
        RelationId::D19,
        RelationId::L20,
        RelationId::C21,
        RelationId::L22,
        RelationId::A23,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|r| *r == self).unwrap()
    }

    pub fn class(self) -> RelationClass {
        use RelationId::*;
        match self {
            R10 | R11 | R12 | R13 | R14 | R15 | R16 => RelationClass::Series,
            D17 | D18a | D18b | D19 => RelationClass::Difference,
            L20 | L22 => RelationClass::Limit,
            C21 | A23 => RelationClass::Exact,
        }
    }

    /// (p, q) combinations swept for this relation.
    pub fn sweeps(self) -> &'static [(u8, u8)] {
        use RelationId::*;
        match self {
            R12 | R13 | R14 | R15 => &[(0, 1), (1, 1)],
            R16 => &[(1, 1)],
            D19 | L20 | A23 => &[(0, 0), (0, 1), (1, 0), (1, 1)],
            _ => &[(0, 0)],
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for RelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RelationId::ALL
            .iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("unknown relation '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationClass {
    Series,
    Difference,
    Limit,
    Exact,
}

impl RelationClass {
    pub fn threshold(self) -> f64 {
        match self {
            RelationClass::Series => 1e-9,
            RelationClass::Difference | RelationClass::Limit => 1e-6,
            RelationClass::Exact => 1e-10,
        }
    }
}

/// Parameters shared by all relations; each relation reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct IdentityParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub a_prime: f64,
    pub b_prime: f64,
    pub c_prime: f64,
    pub d_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub id: RelationId,
    pub draw: usize,
    pub p: u8,
    pub q: u8,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub params: IdentityParams,
    pub args: SeriesArgs,
}

impl RelationReport {
    fn new(id: RelationId, p: u8, q: u8, lhs: f64, rhs: f64, params: &IdentityParams, args: &SeriesArgs) -> Self {
        let abs = (lhs - rhs).abs();
        RelationReport {
            id,
            draw: 0,
            p,
            q,
            lhs,
            rhs,
            abs_residual: abs,
            rel_residual: abs / lhs.abs().max(rhs.abs()).max(1.0),
            params: *params,
            args: *args,
        }
    }

    pub fn passes(&self) -> bool {
        self.rel_residual <= self.id.class().threshold()
    }
}

fn side<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::InvalidParameter(format!("{what} side: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn psi(pq: (u8, u8), a: f64, b: f64, c: f64, d: f64, ap: f64, bp: f64, e: f64, cp: f64, dp: f64, args: &SeriesArgs, cfg: &EvalConfig) -> Result<f64> {
    let pp = PsiPQParams { a, b, c, d, e, a_prime: ap, b_prime: bp, c_prime: cp, d_prime: dp, p: pq.0, q: pq.1 };
    psi_pq(&pp, args.sigma, args.theta, args.rho, cfg)?.require()
}

fn xi10(a: f64, b: f64, ap: f64, c: f64, cp: f64, args: &SeriesArgs, cfg: &EvalConfig) -> Result<f64> {
    xi_pq(&XiPQParams::xi10(a, b, ap, c, cp), args.sigma, args.rho, cfg)?.require()
}

fn xi2v(a: f64, b: f64, c: f64, args: &SeriesArgs, cfg: &EvalConfig) -> Result<f64> {
    xi2(&Xi2Params { a, b, c }, args.sigma, args.rho, cfg)?.require()
}

fn poch1(x: f64, p: u8) -> f64 {
    if p == 1 {
        x
    } else {
        1.0
    }
}

/// Evaluate both sides of a recurrence, continuation or transformation relation.
pub fn check_relation(id: RelationId, pq: (u8, u8), q: &IdentityParams, args: &SeriesArgs, cfg: &EvalConfig) -> Result<RelationReport> {
    use RelationId::*;
    let IdentityParams { a, b, c, d, e, a_prime: ap, b_prime: bp, c_prime: cp, .. } = *q;
    let (s, th, r) = (args.sigma, args.theta, args.rho);
    let p = pq.0;
    let ps = |a_, b_, c_, d_, ap_, bp_, e_, cp_, dp_, pq_: (u8, u8)| psi(pq_, a_, b_, c_, d_, ap_, bp_, e_, cp_, dp_, args, cfg);
    let p0 = (p, 0u8);
    let p1 = (p, 1u8);
    let (lhs, rhs) = match id {
        R10 => {
            // here c is the lower parameter of Xi2
            let l = side("left", (|| Ok(xi2v(a, b, c, args, cfg)? - xi10(a, b, e, c, e + 1.0, args, cfg)?))())?;
            let rr = side("right", xi10(a, b, e + 1.0, c + 1.0, e + 2.0, args, cfg))?;
            (l, r / ((e + 1.0) * c) * rr)
        }
        R11 => {
            let l = side(
                "left",
                (|| {
                    Ok(xi10(a, b, ap, c, ap + 1.0, args, cfg)?
                        - a * b / (c * (c + 1.0)) * s * xi10(a + 1.0, b + 1.0, ap, c + 2.0, ap + 1.0, args, cfg)?
                        - (ap - c) / (c * (c + 1.0) * (ap + 1.0)) * r * xi10(a, b, ap + 1.0, c + 2.0, ap + 2.0, args, cfg)?)
                })(),
            )?;
            (l, side("right", xi2v(a, b, c + 1.0, args, cfg))?)
        }
        R12 => {
            let l = side("left", ps(a, b, c, d, ap, e - b, e, cp, e - b - 1.0, p1))?;
            let rr = side(
                "right",
                (|| Ok((e - 1.0) * ps(a, b, c, d - 1.0, ap, 1.0, e - 1.0, cp, 1.0, p0)? - b * ps(a, b + 1.0, c, d, ap, 1.0, e, cp, 1.0, p0)?))(),
            )?;
            ((e - b - 1.0) * l, rr)
        }
        R13 => {
            let l = side(
                "left",
                (|| {
                    Ok(2.0 * (e - b - 1.0) * ps(a, b, c, d, ap, e - b, e, cp, e - b - 1.0, p1)?
                        + b * (1.0 - th) * ps(a, b + 1.0, c, d, ap, 1.0, e, cp, 1.0, p0)?)
                })(),
            )?;
            let rr = side(
                "right",
                (|| {
                    Ok((2.0 * e - b - d - 2.0) * ps(a, b, c, d, ap, 1.0, e, cp, 1.0, p0)?
                        + d * ps(a, b, c, d + 1.0, ap, 1.0, e, cp, 1.0, p0)?
                        + 2.0 * a * c / e * s * ps(a + 1.0, b, c + 1.0, d, ap, 1.0, e + 1.0, cp, 1.0, p0)?
                        + 2.0 * poch1(ap, p) / (e * poch1(cp, p)) * r * ps(a, b, c, d, ap + 1.0, 1.0, e + 1.0, cp + 1.0, 1.0, p0)?)
                })(),
            )?;
            (l, rr)
        }
        R14 => {
            let l = side(
                "left",
                (|| {
                    Ok((b - e - 1.0) * (d + 1.0) / (e * (e + 1.0)) * th * ps(a, b, c, d + 2.0, ap, e - b + 2.0, e + 2.0, cp, e - b + 1.0, p1)?
                        + (1.0 - th) * ps(a, b, c, d, ap, 1.0, e, cp, 1.0, p0)?)
                })(),
            )?;
            let rr = side(
                "right",
                (|| {
                    Ok((b - d - 1.0) / e * th * ps(a, b, c, d + 1.0, ap, 1.0, e + 1.0, cp, 1.0, p0)?
                        + (1.0 - th) * ps(a, b, c, d + 1.0, ap, e + 1.0, e + 1.0, cp, e, p1)?)
                })(),
            )?;
            (l, rr)
        }
        R15 => {
            let l = side(
                "left",
                (|| {
                    let base = ps(a, b, c, d, ap, 1.0, e, cp, 1.0, p0)?;
                    Ok((e - 1.0) * (1.0 - th) * ps(a, b, c, d - 1.0, ap, 1.0, e - 1.0, cp, 1.0, p0)? - (d - 1.0) * (1.0 - th) * base
                        + (d - b) * base)
                })(),
            )?;
            let rr = side("right", ps(a, b - 1.0, c, d, ap, e - b + 1.0, e, cp, e - b, p1))?;
            (l, (e - b) * rr)
        }
        R16 => {
            let l = side("left", ps(a, b, c, d, ap, bp + 1.0, e, ap + 1.0, bp, (1, 1)))?;
            let rr = side(
                "right",
                (|| {
                    Ok(a * c / (e * bp) * s * ps(a + 1.0, b, c + 1.0, d, ap, 1.0, e + 1.0, ap + 1.0, 1.0, (1, 0))?
                        + (ap - bp) / (e * (ap + 1.0) * bp) * r * ps(a, b, c, d, ap + 1.0, 1.0, e + 1.0, ap + 2.0, 1.0, (1, 0))?
                        + ps(a, b, c, d, 1.0, 1.0, e, 1.0, 1.0, (0, 0))?)
                })(),
            )?;
            (l, rr)
        }
        C21 => return check_continuation_21(&phi_params(q), args.sigma, args.omega, args.rho, cfg),
        A23 => return check_auto_23(&psi_params(q, pq), args, cfg),
        D17 | D18a | D18b | D19 => return check_diff_formulas(id, pq, q, args, DIFF_STEP, cfg),
        L20 => return check_limit_20(&psi_params(q, pq), args.sigma, args.rho, &limit_sequence(), cfg),
        L22 => return check_limit_22(&phi_params(q), args.sigma, args.rho, &limit_sequence(), L22Form::Corrected, cfg),
    };
    Ok(RelationReport::new(id, pq.0, pq.1, lhs, rhs, q, args))
}

fn phi_params(q: &IdentityParams) -> PhiParams {
    PhiParams { a: q.a, b: q.b, c: q.c, d: q.d, e: q.e }
}

fn psi_params(q: &IdentityParams, pq: (u8, u8)) -> PsiPQParams {
    PsiPQParams {
        a: q.a,
        b: q.b,
        c: q.c,
        d: q.d,
        e: q.e,
        a_prime: q.a_prime,
        b_prime: q.b_prime,
        c_prime: q.c_prime,
        d_prime: q.d_prime,
        p: pq.0,
        q: pq.1,
    }
}

fn ident_from_psi(p: &PsiPQParams) -> IdentityParams {
    IdentityParams { a: p.a, b: p.b, c: p.c, d: p.d, e: p.e, a_prime: p.a_prime, b_prime: p.b_prime, c_prime: p.c_prime, d_prime: p.d_prime }
}

fn ident_from_phi(p: &PhiParams) -> IdentityParams {
    IdentityParams { a: p.a, b: p.b, c: p.c, d: p.d, e: p.e, ..Default::default() }
}

/// Default central-difference step.
pub const DIFF_STEP: f64 = 1e-5;

/// Central difference of the left side against the right side.
pub fn check_diff_formulas(
    which: RelationId,
    pq: (u8, u8),
    q: &IdentityParams,
    args: &SeriesArgs,
    h: f64,
    cfg: &EvalConfig,
) -> Result<RelationReport> {
    use RelationId::*;
    let IdentityParams { a, b, c, d, e, .. } = *q;
    let (s, w, r) = (args.sigma, args.omega, args.rho);
    let f = |pp: &PhiParams, s: f64, w: f64, r: f64| phi(pp, s, w, r, cfg)?.require();
    let base = phi_params(q);
    let shifted = |da: f64, db: f64, dc: f64, dd: f64| PhiParams { a: a + da, b: b + db, c: c + dc, d: d + dd, e: e + 1.0 };
    let (lhs, rhs) = match which {
        D17 => (
            side("left", (|| Ok((f(&base, s + h, w, r)? - f(&base, s - h, w, r)?) / (2.0 * h)))())?,
            side("right", f(&shifted(1.0, 0.0, 1.0, 0.0), s, w, r))? * a * c / e,
        ),
        D18a => (
            side("left", (|| Ok((f(&base, s, w + h, r)? - f(&base, s, w - h, r)?) / (2.0 * h)))())?,
            side("right", f(&shifted(0.0, 1.0, 0.0, 1.0), s, w, r))? * b * d / e,
        ),
        D18b => (
            side("left", (|| Ok((f(&base, s, w, r + h)? - f(&base, s, w, r - h)?) / (2.0 * h)))())?,
            side("right", f(&shifted(0.0, 0.0, 0.0, 0.0), s, w, r))? / e,
        ),
        D19 => {
            let pp = psi_params(q, pq);
            let th = args.theta;
            let g = |t: f64| -> Result<f64> { Ok((1.0 - t).powf(b) * psi_pq(&pp, s, t, r, cfg)?.require()?) };
            let l = side("left", (|| Ok((g(th + h)? - g(th - h)?) / (2.0 * h)))())?;
            let up = PsiPQParams { b: b + 1.0, d: d + 1.0, e: e + 1.0, ..pp };
            let rr = side("right", psi_pq(&up, s, th, r, cfg).and_then(|v| v.require()))?;
            (l, -b * d / e * (1.0 - th).powf(b - 1.0) * rr)
        }
        _ => return Err(Error::InvalidParameter(format!("{which} is not a differentiation formula"))),
    };
    Ok(RelationReport::new(which, pq.0, pq.1, lhs, rhs, q, args))
}

/// Number of samples on the way to theta = 1.
pub const LIMIT_POINTS: i32 = 12;

/// theta_j = 1 - 0.1 * 2^-j, j < LIMIT_POINTS.
pub fn limit_sequence() -> Vec<f64> {
    (0..LIMIT_POINTS).map(|j| 1.0 - 0.1 * 0.5f64.powi(j)).collect()
}

/// Limit at h -> 0 of samples `f(h_j)` with `h_{j+1} = h_j / 2`, assuming
/// `f(h) = L + sum_k c_k h^{e_k}` with the exponents `e_k` in increasing order.
/// Returns the estimate and the change between the last two diagonal entries.
pub fn richardson(values: &[f64], exponents: &[f64]) -> (f64, f64) {
    let mut col = values.to_vec();
    let mut last_change = f64::INFINITY;
    for &ek in exponents.iter().take(values.len().saturating_sub(1)) {
        let f = 2f64.powf(ek);
        let next: Vec<f64> = col.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        last_change = (next[next.len() - 1] - col[col.len() - 1]).abs();
        col = next;
        if col.len() == 1 {
            break;
        }
    }
    (col[col.len() - 1], last_change)
}

/// Exponents {delta, 1, 1+delta, 2, 2+delta, ...} sorted.
pub fn exponent_ladder(delta: f64, count: usize) -> Result<Vec<f64>> {
    let frac = delta - delta.floor();
    if !(0.05..=0.95).contains(&frac) {
        return Err(Error::Extrapolation(format!("exponent {delta} too close to an integer for the ladder")));
    }
    let mut v: Vec<f64> = (0..count).flat_map(|i| [delta + i as f64, (i + 1) as f64]).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.truncate(count);
    Ok(v)
}

fn extrapolate(samples: &[f64], thetas: &[f64], delta: f64) -> Result<f64> {
    if thetas.len() < 2 {
        return Err(Error::Extrapolation("need at least two samples".into()));
    }
    for w in thetas.windows(2) {
        let (h0, h1) = (1.0 - w[0], 1.0 - w[1]);
        if ((h0 / h1) - 2.0).abs() > 1e-9 {
            return Err(Error::Extrapolation("sample points must halve 1 - theta".into()));
        }
    }
    let (v, change) = richardson(samples, &exponent_ladder(delta, samples.len())?);
    if !v.is_finite() || change > 1e-3 * v.abs().max(1.0) {
        return Err(Error::Extrapolation(format!("Richardson table not settling (last change {change:e})")));
    }
    Ok(v)
}

fn gamma_ratio_limit(b: f64, d: f64, e: f64) -> Result<f64> {
    Ok(gamma_fn(e)? * gamma_fn(d - b)? / (gamma_fn(e - b)? * gamma_fn(d)?))
}

/// Extrapolated theta -> 1 limit of Psi_pq against the Gamma-prefactored Xi_pq with lower e - b.
pub fn check_limit_20(p: &PsiPQParams, sigma: f64, rho: f64, thetas: &[f64], cfg: &EvalConfig) -> Result<RelationReport> {
    let delta = p.d - p.b;
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("limit needs d - b > 0, got {delta}")));
    }
    let samples: Vec<f64> = thetas
        .iter()
        .map(|&t| psi_pq(p, sigma, t, rho, cfg).and_then(|v| v.require()))
        .collect::<Result<_>>()?;
    let lhs = side("left", extrapolate(&samples, thetas, delta))?;
    let xp = XiPQParams {
        a: p.a,
        b: p.c,
        a_prime: p.a_prime,
        b_prime: p.b_prime,
        c: p.e - p.b,
        c_prime: p.c_prime,
        d_prime: p.d_prime,
        p: p.p,
        q: p.q,
    };
    let rhs = side("right", (|| Ok(gamma_ratio_limit(p.b, p.d, p.e)? * xi_pq(&xp, sigma, rho, cfg)?.require()?))())?;
    let args = SeriesArgs { sigma, omega: 0.0, rho, theta: 1.0 };
    Ok(RelationReport::new(RelationId::L20, p.p, p.q, lhs, rhs, &ident_from_psi(p), &args))
}

/// Phi for |omega| < 1 directly, beyond that through the theta-continuation.
pub fn phi_continued(p: &PhiParams, sigma: f64, omega: f64, rho: f64, cfg: &EvalConfig) -> Result<f64> {
    if omega.abs() <= 0.5 {
        return phi(p, sigma, omega, rho, cfg)?.require();
    }
    if !(omega < 1.0) {
        return Err(Error::Domain(format!("omega = {omega} must be < 1")));
    }
    let theta = omega / (omega - 1.0);
    let pp = PsiPQParams::psi00(p.a, p.b, p.c, p.d, p.e);
    Ok((1.0 - omega).powf(-p.b) * psi_pq(&pp, sigma, theta, rho, cfg)?.require()?)
}

/// Right side used for the omega -> 1 limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum L22Form {
    /// Xi2(a, c; e - b).
    #[default]
    Corrected,
    /// Xi2(a, c; e).
    Unshifted,
}

/// Extrapolated omega -> 1 limit of `(1-omega)^-b Phi(sigma, omega/(omega-1), rho)`.
pub fn check_limit_22(p: &PhiParams, sigma: f64, rho: f64, omegas: &[f64], form: L22Form, cfg: &EvalConfig) -> Result<RelationReport> {
    let delta = p.d - p.b;
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("limit needs d - b > 0, got {delta}")));
    }
    let samples: Vec<f64> = omegas
        .iter()
        .map(|&w| Ok((1.0 - w).powf(-p.b) * phi_continued(p, sigma, w / (w - 1.0), rho, cfg)?))
        .collect::<Result<_>>()?;
    let lhs = side("left", extrapolate(&samples, omegas, delta))?;
    let lower = match form {
        L22Form::Corrected => p.e - p.b,
        L22Form::Unshifted => p.e,
    };
    let rhs = side("right", (|| Ok(gamma_ratio_limit(p.b, p.d, p.e)? * xi2v(p.a, p.c, lower, &SeriesArgs { sigma, rho, ..Default::default() }, cfg)?))())?;
    let args = SeriesArgs { sigma, omega: 1.0, rho, theta: 0.0 };
    Ok(RelationReport::new(RelationId::L22, 0, 0, lhs, rhs, &ident_from_phi(p), &args))
}

/// Phi(sigma, omega, rho) against (1-omega)^-b Psi_00 at theta = omega/(omega-1).
pub fn check_continuation_21(p: &PhiParams, sigma: f64, omega: f64, rho: f64, cfg: &EvalConfig) -> Result<RelationReport> {
    if !(omega.abs() < 1.0) {
        return Err(Error::Domain(format!("|omega| = {} must be < 1", omega.abs())));
    }
    let theta = omega / (omega - 1.0);
    let lhs = side("left", phi(p, sigma, omega, rho, cfg).and_then(|v| v.require()))?;
    let pp = PsiPQParams::psi00(p.a, p.b, p.c, p.d, p.e);
    let rhs = side("right", psi_pq(&pp, sigma, theta, rho, cfg).and_then(|v| v.require()))? * (1.0 - omega).powf(-p.b);
    let args = SeriesArgs { sigma, omega, rho, theta };
    Ok(RelationReport::new(RelationId::C21, 0, 0, lhs, rhs, &ident_from_phi(p), &args))
}

/// Psi_pq(..b..d..) against (1-theta)^(d-b) Psi_pq with b and d swapped.
pub fn check_auto_23(p: &PsiPQParams, args: &SeriesArgs, cfg: &EvalConfig) -> Result<RelationReport> {
    if !(args.theta < 1.0) {
        return Err(Error::Domain(format!("theta = {} must be < 1", args.theta)));
    }
    let lhs = side("left", psi_pq(p, args.sigma, args.theta, args.rho, cfg).and_then(|v| v.require()))?;
    let sw = PsiPQParams { b: p.d, d: p.b, ..*p };
    let rhs = side("right", psi_pq(&sw, args.sigma, args.theta, args.rho, cfg).and_then(|v| v.require()))?
        * (1.0 - args.theta).powf(p.d - p.b);
    Ok(RelationReport::new(RelationId::A23, p.p, p.q, lhs, rhs, &ident_from_psi(p), args))
}

/// Lower parameters (including shifted ones) that a relation evaluates.
pub fn lower_parameters(id: RelationId, pq: (u8, u8), q: &IdentityParams) -> Vec<f64> {
    use RelationId::*;
    let IdentityParams { b, c, d, e, a_prime: ap, b_prime: bp, c_prime: cp, d_prime: dp, .. } = *q;
    let mut v = match id {
        R10 => vec![c, c + 1.0, e + 1.0, e + 2.0],
        R11 => vec![c, c + 1.0, c + 2.0, ap + 1.0, ap + 2.0],
        R12 => vec![e, e - 1.0, e - b - 1.0],
        R13 => vec![e, e + 1.0, e - b - 1.0],
        R14 => vec![e, e + 1.0, e + 2.0, e - b + 1.0],
        R15 => vec![e, e - 1.0, e - b],
        R16 => vec![e, e + 1.0, ap + 1.0, ap + 2.0, bp],
        D17 | D18a | D18b => vec![e, e + 1.0],
        D19 => vec![e, e + 1.0],
        L20 => vec![e, e - b, d],
        L22 => vec![e, e - b, d],
        C21 => vec![e],
        A23 => vec![e],
    };
    if matches!(id, R12 | R13 | R14 | R15 | D19 | L20 | A23) && pq.0 == 1 {
        v.push(cp);
        if id == R13 {
            v.push(cp + 1.0);
        }
    }
    if matches!(id, D19 | L20 | A23) && pq.1 == 1 {
        v.push(dp);
    }
    v
}

/// Minimum distance of lower parameters from the non-positive integers.
pub const LOWER_MARGIN: f64 = 0.1;

fn admissible(xs: &[f64]) -> bool {
    xs.iter().all(|&x| {
        let r = x.round();
        !(r <= 0.0 && (x - r).abs() < LOWER_MARGIN) && !is_nonpositive_integer(x)
    })
}

/// Random admissible parameters and arguments for one (relation, draw).
pub fn random_draw(id: RelationId, pq: (u8, u8), seed: u64, draw: usize) -> (IdentityParams, SeriesArgs) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((id.index() as u64) << 40) | ((pq.0 as u64) << 36) | ((pq.1 as u64) << 32) | draw as u64);
    for _ in 0..100_000 {
        let mut u = || rng.random_range(-0.9..2.0);
        let mut q = IdentityParams { a: u(), b: u(), c: u(), d: u(), e: u(), a_prime: u(), b_prime: u(), c_prime: u(), d_prime: u() };
        if matches!(id, RelationId::L20 | RelationId::L22) {
            q.d = q.b + rng.random_range(0.15..0.85);
        }
        if !admissible(&lower_parameters(id, pq, &q)) {
            continue;
        }
        let args = SeriesArgs {
            sigma: rng.random_range(0.0..0.4),
            omega: rng.random_range(-0.5..0.5),
            rho: rng.random_range(-1.0..1.0),
            theta: rng.random_range(0.0..0.6),
        };
        let args = if id == RelationId::C21 { SeriesArgs { theta: args.omega / (args.omega - 1.0), ..args } } else { args };
        return (q, args);
    }
    unreachable!("rejection sampling exhausted")
}

/// Outcome of one (relation, sweep, draw).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DrawOutcome {
    Report(RelationReport),
    Failed { id: RelationId, draw: usize, p: u8, q: u8, error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationSummary {
    pub id: RelationId,
    pub evaluations: usize,
    pub failures: usize,
    pub max_rel_residual: f64,
    pub mean_rel_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub outcomes: Vec<DrawOutcome>,
    pub summaries: Vec<RelationSummary>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.summaries.iter().all(|s| s.pass)
    }
}

/// Seeded random suite over the given relations.
pub fn run_suite(ids: &[RelationId], draws: usize, seed: u64, cfg: &EvalConfig) -> SuiteResult {
    let jobs: Vec<(RelationId, (u8, u8), usize)> = ids
        .iter()
        .flat_map(|&id| id.sweeps().iter().flat_map(move |&pq| (0..draws).map(move |k| (id, pq, k))))
        .collect();
    let outcomes: Vec<DrawOutcome> = jobs
        .par_iter()
        .map(|&(id, pq, k)| {
            let (q, args) = random_draw(id, pq, seed, k);
            match check_relation(id, pq, &q, &args, cfg) {
                Ok(mut r) => {
                    r.draw = k;
                    DrawOutcome::Report(r)
                }
                Err(e) => DrawOutcome::Failed { id, draw: k, p: pq.0, q: pq.1, error: e.to_string() },
            }
        })
        .collect();
    let summaries = ids
        .iter()
        .map(|&id| {
            let mut n = 0;
            let mut fails = 0;
            let mut max = 0.0f64;
            let mut sum = 0.0;
            for o in &outcomes {
                match o {
                    DrawOutcome::Report(r) if r.id == id => {
                        n += 1;
                        max = if r.rel_residual.is_nan() { f64::INFINITY } else { max.max(r.rel_residual) };
                        sum += r.rel_residual;
                    }
                    DrawOutcome::Failed { id: i, .. } if *i == id => fails += 1,
                    _ => {}
                }
            }
            let threshold = id.class().threshold();
            RelationSummary {
                id,
                evaluations: n,
                failures: fails,
                max_rel_residual: max,
                mean_rel_residual: if n > 0 { sum / n as f64 } else { 0.0 },
                threshold,
                pass: fails == 0 && n > 0 && max <= threshold,
            }
        })
        .collect();
    SuiteResult { outcomes, summaries }
}

pub const REPORT_CSV_HEADER: &str =
    "relation,draw,p,q,lhs,rhs,abs_residual,rel_residual,a,b,c,d,e,a_prime,b_prime,c_prime,d_prime,sigma,omega,rho,theta,error";

pub fn report_csv(res: &SuiteResult) -> String {
    let mut s = String::from(REPORT_CSV_HEADER);
    s.push('\n');
    for o in &res.outcomes {
        match o {
            DrawOutcome::Report(r) => {
                let q = &r.params;
                let a = &r.args;
                s.push_str(&format!(
                    "{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},\n",
                    r.id, r.draw, r.p, r.q, r.lhs, r.rhs, r.abs_residual, r.rel_residual, q.a, q.b, q.c, q.d, q.e,
                    q.a_prime, q.b_prime, q.c_prime, q.d_prime, a.sigma, a.omega, a.rho, a.theta
                ));
            }
            DrawOutcome::Failed { id, draw, p, q, error } => {
                s.push_str(&format!("{id},{draw},{p},{q},,,,,,,,,,,,,,,,,,\"{}\"\n", error.replace('"', "'")));
            }
        }
    }
    s
}

pub const SUMMARY_CSV_HEADER: &str = "relation,evaluations,failures,max_rel_residual,mean_rel_residual,threshold,pass";

pub fn summary_csv(res: &SuiteResult) -> String {
    let mut s = String::from(SUMMARY_CSV_HEADER);
    s.push('\n');
    for r in &res.summaries {
        s.push_str(&format!(
            "{},{},{},{:e},{:e},{:e},{}\n",
            r.id, r.evaluations, r.failures, r.max_rel_residual, r.mean_rel_residual, r.threshold, r.pass
        ));
    }
    s
}
