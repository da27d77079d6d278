//! Gauss-Jacobi rules and integrals with algebraic endpoint weights.

use crate::error::{Error, Result};
use crate::special_fn::ln_gamma;
use serde::{Deserialize, Serialize};

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL).
/// `e[i]` couples rows i and i+1; the last entry is ignored.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Quadrature { target: 0.0, change: f64::NAN });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// P_n and P_{n-1} of the Jacobi family (a, b) at x.
fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn jacobi_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let (pn, pm) = jacobi_pair(n, a, b, x);
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    let d = (nf * ((a - b) - s * x) * pn + 2.0 * (nf + a) * (nf + b) * pm) / (s * (1.0 - x * x));
    (pn, d)
}

/// n-point rule for the weight (1-t)^a (1+t)^b.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    if n == 0 || !(a > -1.0) || !(b > -1.0) {
        return Err(Error::InvalidParameter(format!("gauss_jacobi(n={n}, a={a}, b={b})")));
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let ab = a + b;
    for (k, dk) in d.iter_mut().enumerate() {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        *dk = if k == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
    }
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let b2 = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        e[k - 1] = b2.sqrt();
    }
    tridiagonal_eigenvalues(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let nf = n as f64;
    let (lg1, _) = ln_gamma(nf + a + 1.0);
    let (lg2, _) = ln_gamma(nf + b + 1.0);
    let (lg3, _) = ln_gamma(nf + ab + 1.0);
    let (lg4, _) = ln_gamma(nf + 1.0);
    let cst = (lg1 + lg2 - lg3 - lg4 + (ab + 1.0) * 2f64.ln()).exp();
    let mut weights = Vec::with_capacity(n);
    for x in d.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = jacobi_derivative(n, a, b, *x);
            let step = p / dp;
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = jacobi_derivative(n, a, b, *x);
        weights.push(cst / ((1.0 - *x * *x) * dp * dp));
    }
    Ok(GaussRule { nodes: d, weights })
}

pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Node count, panel count and tolerance for the weighted integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub jacobi_order: usize,
    pub subdivisions: usize,
    pub target_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { jacobi_order: 20, subdivisions: 1, target_tol: 1e-12 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.jacobi_order < 4 {
            return Err(Error::InvalidParameter(format!("jacobi_order = {} must be >= 4", self.jacobi_order)));
        }
        if self.subdivisions < 1 {
            return Err(Error::InvalidParameter("subdivisions must be >= 1".into()));
        }
        if !(self.target_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("target_tol = {}", self.target_tol)));
        }
        Ok(())
    }
}

/// Maximum number of panel doublings before giving up.
pub const MAX_DOUBLINGS: usize = 5;

/// Rules for `int_lo^hi (hi-t)^g (t-lo)^g f(t) dt` with a fixed exponent g.
#[derive(Debug, Clone)]
pub struct EndpointWeightedRule {
    gamma: f64,
    order: usize,
    jacobi: GaussRule,
    legendre: GaussRule,
}

/// Result of an adaptive weighted integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Difference between the last two panel levels.
    pub change: f64,
    pub panels: usize,
    pub converged: bool,
}

impl EndpointWeightedRule {
    pub fn new(order: usize, gamma: f64) -> Result<Self> {
        Ok(EndpointWeightedRule {
            gamma,
            order,
            jacobi: gauss_jacobi(order, 0.0, gamma)?,
            legendre: gauss_legendre(order)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Effective nodes and weights (weight function folded in) for `sub` panels per half.
    pub fn points(&self, lo: f64, hi: f64, sub: usize) -> (Vec<f64>, Vec<f64>) {
        let g = self.gamma;
        let half = (hi - lo) / 2.0;
        let h = half / sub as f64;
        let mut ts = Vec::with_capacity(2 * sub * self.order);
        let mut ws = Vec::with_capacity(2 * sub * self.order);
        let jac = (h / 2.0) * (h / 2.0).powf(g);
        for (x, w) in self.jacobi.nodes.iter().zip(&self.jacobi.weights) {
            // left end: t - lo = h(1+x)/2
            let d = h * (1.0 + x) / 2.0;
            ts.push(lo + d);
            ws.push(jac * w * (hi - lo - d).powf(g));
            // right end, mirrored
            ts.push(hi - d);
            ws.push(jac * w * (hi - lo - d).powf(g));
        }
        for j in 1..sub {
            for side in [0, 1] {
                let a = if side == 0 { lo + j as f64 * h } else { hi - (j as f64 + 1.0) * h };
                for (x, w) in self.legendre.nodes.iter().zip(&self.legendre.weights) {
                    let t = a + h * (1.0 + x) / 2.0;
                    ts.push(t);
                    ws.push(h / 2.0 * w * ((hi - t) * (t - lo)).powf(g));
                }
            }
        }
        (ts, ws)
    }

    /// Integrate with panel doubling until two levels agree to `target_tol`.
    pub fn integrate<F>(&self, mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadResult>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut sub = spec.subdivisions.max(1);
        let mut prev = self.sum(&mut f, lo, hi, sub)?;
        let mut change = f64::INFINITY;
        for _ in 0..MAX_DOUBLINGS {
            sub *= 2;
            let next = self.sum(&mut f, lo, hi, sub)?;
            change = (next - prev).abs();
            prev = next;
            if change <= spec.target_tol * next.abs().max(1.0) {
                return Ok(QuadResult { value: next, change, panels: sub, converged: true });
            }
        }
        Ok(QuadResult { value: prev, change, panels: sub, converged: false })
    }

    fn sum<F>(&self, f: &mut F, lo: f64, hi: f64, sub: usize) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let (ts, ws) = self.points(lo, hi, sub);
        let mut acc = crate::special_fn::CompensatedSum::new();
        for (t, w) in ts.iter().zip(&ws) {
            acc.add(w * f(*t)?);
        }
        Ok(acc.value())
    }
}

/// Beta function B(p, q) = Gamma(p)Gamma(q)/Gamma(p+q).
pub fn beta_fn(p: f64, q: f64) -> f64 {
    let (a, sa) = ln_gamma(p);
    let (b, sb) = ln_gamma(q);
    let (c, sc) = ln_gamma(p + q);
    sa * sb * sc * (a + b - c).exp()
}
