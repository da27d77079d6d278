//! Physical and characteristic coordinates, parameter maps and the Riemann
//! function of the characteristic-form equation
//!
//! `u_xieta + alpha/(eta+xi) (u_eta + u_xi) - beta/(eta-xi) (u_eta - u_xi) - lambda^2 u = 0`.

use crate::error::{Error, Result};
use crate::special_fn::{phi, psi_pq, EvalConfig, PhiParams, PsiPQParams};
use serde::{Deserialize, Serialize};

/// Exponents of the degenerate equation and the spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub m: f64,
    pub n: f64,
    pub mu: f64,
}

impl ProblemParams {
    pub fn new(m: f64, n: f64, mu: f64) -> Result<Self> {
        let pp = ProblemParams { m, n, mu };
        pp.validate()?;
        Ok(pp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m < 1.0) {
            return Err(Error::InvalidParameter(format!("m = {} must lie in (0, 1)", self.m)));
        }
        if !(self.n >= 0.0 && self.n < 1.0) {
            return Err(Error::InvalidParameter(format!("n = {} must lie in [0, 1)", self.n)));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu = {}", self.mu)));
        }
        Ok(())
    }

    /// x0 = 2/(2-n) x^((2-n)/2).
    pub fn x0(&self, x: f64) -> f64 {
        2.0 / (2.0 - self.n) * x.powf((2.0 - self.n) / 2.0)
    }

    /// y0 = 2/(2-m) (-y)^((2-m)/2).
    pub fn y0(&self, y: f64) -> f64 {
        2.0 / (2.0 - self.m) * (-y).powf((2.0 - self.m) / 2.0)
    }

    /// Inverse of `x0`: x = ((2-n) t / 2)^(2/(2-n)).
    pub fn x_of(&self, t: f64) -> f64 {
        ((2.0 - self.n) * t / 2.0).powf(2.0 / (2.0 - self.n))
    }

    /// Inverse of `y0` (returns y <= 0).
    pub fn y_of(&self, t: f64) -> f64 {
        -((2.0 - self.m) * t / 2.0).powf(2.0 / (2.0 - self.m))
    }
}

/// Parameters of the characteristic form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda2: f64,
}

pub fn char_params(pp: &ProblemParams) -> CharParams {
    CharParams {
        alpha: pp.n / (2.0 * (pp.n - 2.0)),
        beta: pp.m / (2.0 * (pp.m - 2.0)),
        lambda2: -pp.mu / 4.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharPoint {
    pub xi: f64,
    pub eta: f64,
}

const EDGE_TOL: f64 = 1e-12;

pub fn to_characteristic(p: &PhysicalPoint, pp: &ProblemParams) -> Result<CharPoint> {
    if !(p.x >= 0.0) || !(p.y <= 0.0) {
        return Err(Error::Domain(format!("point ({}, {}) needs x >= 0, y <= 0", p.x, p.y)));
    }
    let (x0, y0) = (pp.x0(p.x), pp.y0(p.y));
    let c = CharPoint { xi: x0 - y0, eta: x0 + y0 };
    if c.xi < -EDGE_TOL || c.eta > 1.0 + EDGE_TOL {
        return Err(Error::Domain(format!("point ({}, {}) maps to xi = {}, eta = {} outside the triangle", p.x, p.y, c.xi, c.eta)));
    }
    Ok(c)
}

pub fn from_characteristic(c: &CharPoint, pp: &ProblemParams) -> Result<PhysicalPoint> {
    if !(c.xi <= c.eta) || !(c.xi + c.eta >= 0.0) {
        return Err(Error::Domain(format!("need xi <= eta and xi + eta >= 0, got ({}, {})", c.xi, c.eta)));
    }
    Ok(PhysicalPoint { x: pp.x_of((c.eta + c.xi) / 2.0), y: pp.y_of((c.eta - c.xi) / 2.0) })
}

/// Arguments of the Riemann function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannArgs {
    pub sigma: f64,
    pub omega: f64,
    pub rho: f64,
    pub theta: f64,
}

/// sigma, omega, rho and theta = omega/(omega-1) for `c` relative to `c0`.
pub fn riemann_args(c: &CharPoint, c0: &CharPoint, cp: &CharParams) -> Result<RiemannArgs> {
    let (xi, eta, xi0, eta0) = (c.xi, c.eta, c0.xi, c0.eta);
    if !(eta + xi > 0.0) || !(eta0 > xi0) {
        return Err(Error::Degenerate(format!("eta + xi = {}, eta0 - xi0 = {}", eta + xi, eta0 - xi0)));
    }
    let slack = EDGE_TOL * eta0.abs().max(1.0);
    if xi < xi0 - slack || eta > eta0 + slack || xi > eta {
        return Err(Error::Domain(format!("need xi0 <= xi <= eta <= eta0, got ({xi}, {eta}) vs ({xi0}, {eta0})")));
    }
    if eta == xi {
        return Err(Error::Degenerate("eta = xi (singular line)".into()));
    }
    let a = (eta0 - eta).max(0.0);
    let b = (xi - xi0).max(0.0);
    let num = a * b;
    let gap = (eta - xi) * (eta0 - xi0);
    Ok(RiemannArgs {
        sigma: num / ((eta + xi) * (eta0 + xi0)),
        omega: -num / gap,
        rho: -cp.lambda2 * num,
        theta: num / (num + gap),
    })
}

/// Which closed form evaluates the Riemann function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RiemannForm {
    /// Triple series in (sigma, omega, rho).
    Phi,
    /// Continued form with an inner Gauss factor in theta.
    Psi,
    /// Psi form once |omega| > 0.9.
    #[default]
    Auto,
}

pub fn riemann_function(c: &CharPoint, c0: &CharPoint, cp: &CharParams, form: RiemannForm, cfg: &EvalConfig) -> Result<f64> {
    let ra = riemann_args(c, c0, cp)?;
    let (xi, eta, xi0, eta0) = (c.xi, c.eta, c0.xi, c0.eta);
    let (al, be) = (cp.alpha, cp.beta);
    let lead = ((eta + xi) / (eta0 + xi0)).powf(al);
    let form = match form {
        RiemannForm::Auto if ra.omega.abs() > 0.9 => RiemannForm::Psi,
        RiemannForm::Auto => RiemannForm::Phi,
        f => f,
    };
    match form {
        RiemannForm::Phi => {
            if !(ra.omega.abs() < 1.0) {
                return Err(Error::Domain(format!("phi form needs |omega| < 1, got {}", ra.omega)));
            }
            let p = PhiParams { a: al, b: be, c: 1.0 - al, d: 1.0 - be, e: 1.0 };
            let v = phi(&p, ra.sigma, ra.omega, ra.rho, cfg)?.require()?;
            Ok(lead * ((eta - xi) / (eta0 - xi0)).powf(be) * v)
        }
        _ => {
            let p = PsiPQParams::psi00(al, be, 1.0 - al, 1.0 - be, 1.0);
            let v = psi_pq(&p, ra.sigma, ra.theta, ra.rho, cfg)?.require()?;
            let pre = (eta0 - xi).powf(-be) * (eta - xi0).powf(-be) * (eta - xi).powf(2.0 * be);
            Ok(lead * pre * v)
        }
    }
}

/// Residual of the characteristic-form operator applied to `u` at (xi, eta),
/// by second-order central differences with step `h`.
pub fn char_operator_residual<F>(u: F, xi: f64, eta: f64, h: f64, cp: &CharParams) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let upp = u(xi + h, eta + h)?;
    let upm = u(xi + h, eta - h)?;
    let ump = u(xi - h, eta + h)?;
    let umm = u(xi - h, eta - h)?;
    let u0 = u(xi, eta)?;
    let u_xieta = (upp - upm - ump + umm) / (4.0 * h * h);
    let u_xi = (u(xi + h, eta)? - u(xi - h, eta)?) / (2.0 * h);
    let u_eta = (u(xi, eta + h)? - u(xi, eta - h)?) / (2.0 * h);
    Ok(u_xieta + cp.alpha / (eta + xi) * (u_eta + u_xi) - cp.beta / (eta - xi) * (u_eta - u_xi) - cp.lambda2 * u0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp() -> ProblemParams {
        ProblemParams::new(0.5, 0.5, -2.0).unwrap()
    }

    #[test]
    fn char_params_examples() {
        let cp = char_params(&ProblemParams::new(0.5, 0.0, 1.0).unwrap());
        assert_eq!(cp.alpha, 0.0);
        let cp = char_params(&ProblemParams::new(2.0 / 3.0, 0.0, -4.0).unwrap());
        assert!((cp.beta + 0.25).abs() < 1e-15);
        assert_eq!(cp.lambda2, 1.0);
    }

    #[test]
    fn coordinate_maps() {
        let pp = pp();
        let c = to_characteristic(&PhysicalPoint { x: 0.3, y: 0.0 }, &pp).unwrap();
        assert_eq!(c.xi, c.eta);
        assert!((c.xi - pp.x0(0.3)).abs() < 1e-16);
        let o = to_characteristic(&PhysicalPoint { x: 0.0, y: 0.0 }, &pp).unwrap();
        assert_eq!((o.xi, o.eta), (0.0, 0.0));
        let p = PhysicalPoint { x: 0.4, y: -0.05 };
        let back = from_characteristic(&to_characteristic(&p, &pp).unwrap(), &pp).unwrap();
        assert!((back.x - p.x).abs() < 1e-13 && (back.y - p.y).abs() < 1e-13);
        let on_line = from_characteristic(&CharPoint { xi: 0.4, eta: 0.4 }, &pp).unwrap();
        assert_eq!(on_line.y, 0.0);
        assert!(to_characteristic(&PhysicalPoint { x: 0.3, y: 0.1 }, &pp).is_err());
        assert!(from_characteristic(&CharPoint { xi: 0.5, eta: 0.4 }, &pp).is_err());
    }

    #[test]
    fn args_on_lines() {
        let cp = char_params(&pp());
        let c0 = CharPoint { xi: 0.3, eta: 0.8 };
        let a = riemann_args(&c0, &c0, &cp).unwrap();
        assert_eq!((a.sigma, a.omega, a.rho, a.theta), (0.0, 0.0, 0.0, 0.0));
        let a = riemann_args(&CharPoint { xi: 0.3, eta: 0.6 }, &c0, &cp).unwrap();
        assert_eq!((a.sigma, a.rho, a.theta), (0.0, 0.0, 0.0));
        assert_eq!(a.omega, 0.0);
        let a = riemann_args(&CharPoint { xi: 0.45, eta: 0.6 }, &c0, &cp).unwrap();
        assert!(a.sigma > 0.0 && a.omega < 0.0 && (0.0..1.0).contains(&a.theta));
        assert!((a.theta - a.omega / (a.omega - 1.0)).abs() < 1e-15);
        assert!(riemann_args(&CharPoint { xi: 0.5, eta: 0.5 }, &c0, &cp).is_err());
    }

    #[test]
    fn unit_at_coincidence_and_line_values() {
        let cp = char_params(&pp());
        let cfg = EvalConfig::default();
        let c0 = CharPoint { xi: 0.3, eta: 0.8 };
        for form in [RiemannForm::Phi, RiemannForm::Psi] {
            let r = riemann_function(&c0, &c0, &cp, form, &cfg).unwrap();
            assert!((r - 1.0).abs() < 1e-14);
        }
        let c = CharPoint { xi: 0.3, eta: 0.55 };
        let r = riemann_function(&c, &c0, &cp, RiemannForm::Phi, &cfg).unwrap();
        let e = ((0.55f64 + 0.3) / 1.1).powf(cp.alpha) * (0.25f64 / 0.5).powf(cp.beta);
        assert!((r - e).abs() < 1e-14);
    }

    #[test]
    fn forms_agree() {
        let cp = char_params(&ProblemParams::new(0.3, 0.2, 4.0).unwrap());
        let cfg = EvalConfig::default();
        let c0 = CharPoint { xi: 0.2, eta: 0.9 };
        let c = CharPoint { xi: 0.4, eta: 0.7 };
        let a = riemann_function(&c, &c0, &cp, RiemannForm::Phi, &cfg).unwrap();
        let b = riemann_function(&c, &c0, &cp, RiemannForm::Psi, &cfg).unwrap();
        assert!((a - b).abs() < 1e-11 * a.abs().max(1.0), "{a} vs {b}");
    }
}
