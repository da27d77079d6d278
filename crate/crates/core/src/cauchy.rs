//! Explicit solution of the Cauchy problem `V(x,0) = tau1`, `V_y(x,0) = nu1`
//! for `x^n V_xx - (-y)^m V_yy + mu V = 0` in the hyperbolic half `y < 0`.

use crate::error::{Error, Result};
use crate::quadrature::{EndpointWeightedRule, QuadratureSpec};
use crate::riemann::{char_params, to_characteristic, CharParams, CharPoint, PhysicalPoint, ProblemParams};
use crate::special_fn::{gamma_fn, xi10_dsigma, xi10_rho_drho, xi2, xi_pq, EvalConfig, SeriesValue, Xi2Params, XiPQParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

/// Largest admissible value of sigma0 over the integration interval.
pub const SIGMA0_LIMIT: f64 = 0.95;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Named initial data with closed-form derivatives and antiderivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DataPreset {
    Constant { value: f64 },
    /// f(x) = x
    Linear,
    /// f(x) = x^2
    Quadratic,
    /// f(x) = sin(pi x)
    Sine,
    /// f(x) = sum coeffs[k] x^k
    Polynomial { coeffs: Vec<f64> },
    Zero,
}

impl DataPreset {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            DataPreset::Constant { value } => *value,
            DataPreset::Linear => x,
            DataPreset::Quadratic => x * x,
            DataPreset::Sine => (std::f64::consts::PI * x).sin(),
            DataPreset::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            DataPreset::Zero => 0.0,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            DataPreset::Constant { .. } | DataPreset::Zero => 0.0,
            DataPreset::Linear => 1.0,
            DataPreset::Quadratic => 2.0 * x,
            DataPreset::Sine => std::f64::consts::PI * (std::f64::consts::PI * x).cos(),
            DataPreset::Polynomial { coeffs } => {
                let d: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
                DataPreset::Polynomial { coeffs: d }.value(x)
            }
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match self {
            DataPreset::Constant { .. } | DataPreset::Zero | DataPreset::Linear => 0.0,
            DataPreset::Quadratic => 2.0,
            DataPreset::Sine => {
                let p = std::f64::consts::PI;
                -p * p * (p * x).sin()
            }
            DataPreset::Polynomial { coeffs } => {
                let d: Vec<f64> =
                    coeffs.iter().enumerate().skip(2).map(|(k, c)| (k * (k - 1)) as f64 * c).collect();
                DataPreset::Polynomial { coeffs: d }.value(x)
            }
        }
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match self {
            DataPreset::Constant { value } => value * x,
            DataPreset::Zero => 0.0,
            DataPreset::Linear => x * x / 2.0,
            DataPreset::Quadratic => x * x * x / 3.0,
            DataPreset::Sine => {
                let p = std::f64::consts::PI;
                (1.0 - (p * x).cos()) / p
            }
            DataPreset::Polynomial { coeffs } => {
                let d: Vec<f64> = std::iter::once(0.0)
                    .chain(coeffs.iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)))
                    .collect();
                DataPreset::Polynomial { coeffs: d }.value(x)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DataPreset::Zero => true,
            DataPreset::Constant { value } => *value == 0.0,
            DataPreset::Polynomial { coeffs } => coeffs.iter().all(|c| *c == 0.0),
            _ => false,
        }
    }
}

/// Cauchy data on the degeneracy line.
#[derive(Clone)]
pub struct CauchyData {
    tau1: RealFn,
    tau1_prime: RealFn,
    nu1: RealFn,
    nu1_antiderivative: Option<RealFn>,
    nu1_zero: bool,
}

impl fmt::Debug for CauchyData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchyData").field("nu1_zero", &self.nu1_zero).finish_non_exhaustive()
    }
}

impl CauchyData {
    pub fn new<T, D, N>(tau1: T, tau1_prime: D, nu1: N) -> Self
    where
        T: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        N: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CauchyData {
            tau1: Arc::new(tau1),
            tau1_prime: Arc::new(tau1_prime),
            nu1: Arc::new(nu1),
            nu1_antiderivative: None,
            nu1_zero: false,
        }
    }

    pub fn with_nu1_antiderivative<F: Fn(f64) -> f64 + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.nu1_antiderivative = Some(Arc::new(f));
        self
    }

    /// Declare `nu1 == 0`, which skips the third integral.
    pub fn with_zero_nu1(mut self) -> Self {
        self.nu1 = Arc::new(|_| 0.0);
        self.nu1_antiderivative = Some(Arc::new(|_| 0.0));
        self.nu1_zero = true;
        self
    }

    pub fn from_presets(tau1: &DataPreset, nu1: &DataPreset) -> Self {
        let (t, d, n, a) = (tau1.clone(), tau1.clone(), nu1.clone(), nu1.clone());
        let mut data = CauchyData::new(move |x| t.value(x), move |x| d.derivative(x), move |x| n.value(x))
            .with_nu1_antiderivative(move |x| a.antiderivative(x));
        data.nu1_zero = nu1.is_zero();
        data
    }

    /// `a * self + b * other`.
    pub fn combine(a: f64, d1: &CauchyData, b: f64, d2: &CauchyData) -> Self {
        let (t1, t2) = (d1.tau1.clone(), d2.tau1.clone());
        let (p1, p2) = (d1.tau1_prime.clone(), d2.tau1_prime.clone());
        let (n1, n2) = (d1.nu1.clone(), d2.nu1.clone());
        let mut out = CauchyData::new(
            move |x| a * t1(x) + b * t2(x),
            move |x| a * p1(x) + b * p2(x),
            move |x| a * n1(x) + b * n2(x),
        );
        if let (Some(i1), Some(i2)) = (d1.nu1_antiderivative.clone(), d2.nu1_antiderivative.clone()) {
            out = out.with_nu1_antiderivative(move |x| a * i1(x) + b * i2(x));
        }
        out.nu1_zero = d1.nu1_zero && d2.nu1_zero;
        out
    }

    pub fn tau1(&self, x: f64) -> f64 {
        (self.tau1)(x)
    }

    pub fn tau1_prime(&self, x: f64) -> f64 {
        (self.tau1_prime)(x)
    }

    pub fn nu1(&self, x: f64) -> f64 {
        (self.nu1)(x)
    }

    pub fn nu1_is_zero(&self) -> bool {
        self.nu1_zero
    }

    /// `int_a^b nu1`, when an antiderivative was supplied.
    pub fn nu1_integral(&self, a: f64, b: f64) -> Option<f64> {
        self.nu1_antiderivative.as_ref().map(|f| f(b) - f(a))
    }

    /// Spot-check `tau1'` against central differences on [0, 1].
    pub fn validate(&self) -> Result<()> {
        let h = 1e-5;
        for i in 1..10 {
            let x = i as f64 / 10.0;
            let vals = [self.tau1(x), self.tau1_prime(x), self.nu1(x)];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("Cauchy data not finite at x = {x}")));
            }
            let fd = (self.tau1(x + h) - self.tau1(x - h)) / (2.0 * h);
            let d = self.tau1_prime(x);
            if (fd - d).abs() > 1e-6 * d.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "tau1' inconsistent with tau1 at x = {x}: supplied {d}, difference quotient {fd}"
                )));
            }
        }
        Ok(())
    }
}

/// Arguments of the kernel series at an integration point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelArgs {
    pub sigma0: f64,
    pub rho0: f64,
}

pub fn kernel_args(c0: &CharPoint, xi: f64, cp: &CharParams) -> KernelArgs {
    let g = (c0.eta - xi) * (xi - c0.xi);
    KernelArgs { sigma0: g / (2.0 * xi * (c0.eta + c0.xi)), rho0: -cp.lambda2 * g }
}

/// Maximum of sigma0 over [xi0, eta0], attained at sqrt(xi0 eta0).
pub fn sigma0_max(c0: &CharPoint) -> f64 {
    let d = c0.eta.sqrt() - c0.xi.max(0.0).sqrt();
    d * d / (2.0 * (c0.eta + c0.xi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConstants {
    pub gamma1: f64,
    pub gamma2: f64,
}

pub fn kernel_constants(cp: &CharParams) -> Result<KernelConstants> {
    let (a, b) = (cp.alpha, cp.beta);
    let g1 = gamma_fn(1.0 + 2.0 * b)? / (2f64.powf(1.0 - a) * gamma_fn(1.0 + b)?.powi(2));
    let g2 = (2.0 * (1.0 - 2.0 * b)).powf(2.0 * b) * 2f64.powf(a - 1.0) * gamma_fn(1.0 - 2.0 * b)?
        / gamma_fn(1.0 - b)?.powi(2);
    Ok(KernelConstants { gamma1: g1, gamma2: g2 })
}

/// Variant of the factor S in the first kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SFactorForm {
    /// sigma-derivative term weighted by (eta0 + xi0 - 2 xi).
    #[default]
    Corrected,
    /// sigma-derivative term without that weight; reproduces constant data only for n = 0.
    Unweighted,
}

fn xi_params(cp: &CharParams) -> XiPQParams {
    XiPQParams::xi10(cp.alpha, 1.0 - cp.alpha, cp.beta, cp.beta, 1.0 + cp.beta)
}

/// `Xi_10[alpha, 1-alpha; beta / beta; 1+beta; sigma0, rho0]`.
pub fn xi_shorthand(cp: &CharParams, ka: &KernelArgs, cfg: &EvalConfig) -> Result<SeriesValue> {
    check_sigma0(ka.sigma0)?;
    xi_pq(&xi_params(cp), ka.sigma0, ka.rho0, cfg)
}

fn check_sigma0(s: f64) -> Result<()> {
    if !(s < 1.0) {
        return Err(Error::Domain(format!("sigma0 = {s} must be < 1")));
    }
    Ok(())
}

fn check_interior(c0: &CharPoint, xi: f64) -> Result<()> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("xi = {xi} must be positive")));
    }
    if !(xi > c0.xi && xi < c0.eta) {
        return Err(Error::Domain(format!("xi = {xi} outside the open interval ({}, {})", c0.xi, c0.eta)));
    }
    Ok(())
}

/// Xi with its sigma-derivative and rho-weighted rho-derivative.
struct XiTriple {
    xi: f64,
    d_sigma: f64,
    rho_d_rho: f64,
}

fn xi_triple(cp: &CharParams, ka: &KernelArgs, cfg: &EvalConfig) -> Result<XiTriple> {
    let p = xi_params(cp);
    Ok(XiTriple {
        xi: xi_pq(&p, ka.sigma0, ka.rho0, cfg)?.require()?,
        d_sigma: xi10_dsigma(&p, ka.sigma0, ka.rho0, cfg)?.require()?,
        rho_d_rho: xi10_rho_drho(&p, ka.sigma0, ka.rho0, cfg)?.require()?,
    })
}

fn s_from_triple(c0: &CharPoint, xi: f64, cp: &CharParams, t: &XiTriple, form: SFactorForm) -> f64 {
    let g = (c0.eta - xi) * (xi - c0.xi);
    let gp = c0.eta + c0.xi - 2.0 * xi;
    let ds0 = (gp * xi - g) / (2.0 * xi * xi * (c0.eta + c0.xi));
    let weight = match form {
        SFactorForm::Corrected => gp,
        SFactorForm::Unweighted => 1.0,
    };
    2.0 * (1.0 + 2.0 * cp.beta) * t.xi - cp.alpha / xi * gp * t.xi - weight * t.d_sigma * ds0 + 4.0 * t.rho_d_rho
}

/// Factor S of the first kernel (corrected form).
pub fn s_factor(c0: &CharPoint, xi: f64, cp: &CharParams, cfg: &EvalConfig) -> Result<f64> {
    s_factor_with(c0, xi, cp, SFactorForm::Corrected, cfg)
}

pub fn s_factor_with(c0: &CharPoint, xi: f64, cp: &CharParams, form: SFactorForm, cfg: &EvalConfig) -> Result<f64> {
    check_interior(c0, xi)?;
    let ka = kernel_args(c0, xi, cp);
    check_sigma0(ka.sigma0)?;
    let t = xi_triple(cp, &ka, cfg)?;
    Ok(s_from_triple(c0, xi, cp, &t, form))
}

pub fn kernel_h1(c0: &CharPoint, xi: f64, cp: &CharParams, cfg: &EvalConfig) -> Result<f64> {
    let k = kernel_constants(cp)?;
    let g = (c0.eta - xi) * (xi - c0.xi);
    Ok(k.gamma1 * g.powf(cp.beta) * xi.powf(cp.alpha) * s_factor(c0, xi, cp, cfg)?)
}

pub fn kernel_h2(c0: &CharPoint, xi: f64, cp: &CharParams, cfg: &EvalConfig) -> Result<f64> {
    check_interior(c0, xi)?;
    let k = kernel_constants(cp)?;
    let g = (c0.eta - xi) * (xi - c0.xi);
    let gp = c0.eta + c0.xi - 2.0 * xi;
    let x = xi_shorthand(cp, &kernel_args(c0, xi, cp), cfg)?.require()?;
    Ok(-k.gamma1 * gp * g.powf(cp.beta) * xi.powf(cp.alpha) * x)
}

pub fn kernel_h3(c0: &CharPoint, xi: f64, cp: &CharParams, cfg: &EvalConfig) -> Result<f64> {
    if !(xi > 0.0) || xi < c0.xi || xi > c0.eta {
        return Err(Error::Domain(format!("xi = {xi} outside [{}, {}]", c0.xi, c0.eta)));
    }
    let k = kernel_constants(cp)?;
    let g = (c0.eta - xi) * (xi - c0.xi);
    let ka = kernel_args(c0, xi, cp);
    check_sigma0(ka.sigma0)?;
    let x2 = xi2(&Xi2Params { a: cp.alpha, b: 1.0 - cp.alpha, c: 1.0 - cp.beta }, ka.sigma0, ka.rho0, cfg)?.require()?;
    Ok(-k.gamma2 * g.powf(-cp.beta) * xi.powf(cp.alpha) * x2)
}

/// Value of the solution at one point with quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSolution {
    pub value: f64,
    /// Largest change between the last two panel levels.
    pub quad_change: f64,
    pub converged: bool,
}

/// Solver for a fixed problem, quadrature and series configuration.
#[derive(Debug, Clone)]
pub struct CauchySolver {
    pp: ProblemParams,
    cp: CharParams,
    consts: KernelConstants,
    quad: QuadratureSpec,
    eval: EvalConfig,
    form: SFactorForm,
    rule_tau: EndpointWeightedRule,
    rule_nu: EndpointWeightedRule,
}

impl CauchySolver {
    pub fn new(pp: ProblemParams, quad: QuadratureSpec, eval: EvalConfig) -> Result<Self> {
        pp.validate()?;
        quad.validate()?;
        eval.validate()?;
        let cp = char_params(&pp);
        Ok(CauchySolver {
            pp,
            cp,
            consts: kernel_constants(&cp)?,
            quad,
            eval,
            form: SFactorForm::Corrected,
            rule_tau: EndpointWeightedRule::new(quad.jacobi_order, cp.beta)?,
            rule_nu: EndpointWeightedRule::new(quad.jacobi_order, -cp.beta)?,
        })
    }

    pub fn with_s_form(mut self, form: SFactorForm) -> Self {
        self.form = form;
        self
    }

    pub fn problem(&self) -> &ProblemParams {
        &self.pp
    }

    pub fn char_params(&self) -> &CharParams {
        &self.cp
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn eval_config(&self) -> &EvalConfig {
        &self.eval
    }

    /// Solution with diagnostics; quadrature non-convergence is flagged, not raised.
    pub fn solve_u_detailed(&self, c0: &CharPoint, data: &CauchyData) -> Result<PointSolution> {
        let (xi0, eta0) = (c0.xi, c0.eta);
        if !(xi0 > 0.0 && xi0 < eta0 && eta0 <= 1.0) {
            return Err(Error::Domain(format!("need 0 < xi0 < eta0 <= 1, got ({xi0}, {eta0})")));
        }
        let smax = sigma0_max(c0);
        if !(smax < SIGMA0_LIMIT) {
            return Err(Error::DomainRestriction { sigma0_max: smax, limit: SIGMA0_LIMIT });
        }
        let (cp, pp) = (&self.cp, &self.pp);
        let half_n = pp.n / 2.0;
        let tau_part = |xi: f64| -> Result<f64> {
            let ka = kernel_args(c0, xi, cp);
            let t = xi_triple(cp, &ka, &self.eval)?;
            let s = s_from_triple(c0, xi, cp, &t, self.form);
            let gp = eta0 + xi0 - 2.0 * xi;
            let x = pp.x_of(xi);
            let xa = xi.powf(cp.alpha);
            let h1 = self.consts.gamma1 * xa * s;
            let h2 = -self.consts.gamma1 * gp * xa * t.xi;
            Ok(h1 * data.tau1(x) + h2 * data.tau1_prime(x) * x.powf(half_n))
        };
        let nu_part = |xi: f64| -> Result<f64> {
            let ka = kernel_args(c0, xi, cp);
            let x2 = xi2(&Xi2Params { a: cp.alpha, b: 1.0 - cp.alpha, c: 1.0 - cp.beta }, ka.sigma0, ka.rho0, &self.eval)?
                .require()?;
            Ok(-self.consts.gamma2 * xi.powf(cp.alpha) * x2 * data.nu1(pp.x_of(xi)))
        };
        let pre = (eta0 + xi0).powf(-cp.alpha);
        let a = pre * (eta0 - xi0).powf(-2.0 * cp.beta - 1.0);
        let i1 = self.rule_tau.integrate(tau_part, xi0, eta0, &self.quad)?;
        let mut value = a * i1.value;
        let mut change = (a * i1.change).abs();
        let mut converged = i1.converged;
        if !data.nu1_is_zero() {
            let i3 = self.rule_nu.integrate(nu_part, xi0, eta0, &self.quad)?;
            value += pre * i3.value;
            change = change.max((pre * i3.change).abs());
            converged &= i3.converged;
        }
        converged &= value.is_finite();
        Ok(PointSolution { value, quad_change: change, converged })
    }

    /// u(xi0, eta0) in characteristic variables.
    pub fn solve_u(&self, c0: &CharPoint, data: &CauchyData) -> Result<f64> {
        let r = self.solve_u_detailed(c0, data)?;
        if !r.converged {
            return Err(Error::Quadrature { target: self.quad.target_tol, change: r.quad_change });
        }
        Ok(r.value)
    }

    /// V(x, y) in physical variables.
    pub fn solve_v(&self, p: &PhysicalPoint, data: &CauchyData) -> Result<f64> {
        self.solve_u(&to_characteristic(p, &self.pp)?, data)
    }

    pub fn solve_v_detailed(&self, p: &PhysicalPoint, data: &CauchyData) -> Result<PointSolution> {
        self.solve_u_detailed(&to_characteristic(p, &self.pp)?, data)
    }

    /// Solve on a rectangular grid; per-point failures are recorded.
    pub fn solve_grid(&self, gs: &GridSpec, data: &CauchyData) -> Result<SolutionField> {
        gs.validate()?;
        let pts = gs.points();
        let samples: Vec<Sample> = pts
            .par_iter()
            .map(|p| match self.solve_v_detailed(p, data) {
                Ok(r) => Sample { x: p.x, y: p.y, v: r.value, converged: r.converged, error: None },
                Err(e) => Sample { x: p.x, y: p.y, v: f64::NAN, converged: false, error: Some(e.to_string()) },
            })
            .collect();
        Ok(SolutionField {
            grid: gs.clone(),
            samples,
            meta: FieldMeta {
                problem: self.pp,
                quadrature: self.quad,
                eval: self.eval,
                s_form: self.form,
            },
        })
    }
}

/// Solve in characteristic variables with default series settings.
pub fn solve_u(c0: &CharPoint, data: &CauchyData, pp: &ProblemParams, q: &QuadratureSpec) -> Result<f64> {
    CauchySolver::new(*pp, *q, EvalConfig::default())?.solve_u(c0, data)
}

/// Solve in physical variables with default series settings.
pub fn solve_v(p: &PhysicalPoint, data: &CauchyData, pp: &ProblemParams, q: &QuadratureSpec) -> Result<f64> {
    CauchySolver::new(*pp, *q, EvalConfig::default())?.solve_v(p, data)
}

/// Uniform rectangular grid in the physical plane (y < 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Grid("nx and ny must be positive".into()));
        }
        let ok = |r: &[f64; 2]| r[0].is_finite() && r[1].is_finite() && r[0] <= r[1];
        if !ok(&self.x_range) || !ok(&self.y_range) {
            return Err(Error::Grid(format!("bad ranges {:?} {:?}", self.x_range, self.y_range)));
        }
        if self.y_range[1] >= 0.0 || self.x_range[0] <= 0.0 {
            return Err(Error::Grid("grid must lie in x > 0, y < 0".into()));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        axis(self.x_range, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        axis(self.y_range, self.ny, j)
    }

    pub fn hx(&self) -> f64 {
        step(self.x_range, self.nx)
    }

    pub fn hy(&self) -> f64 {
        step(self.y_range, self.ny)
    }

    /// Points in row-major order (y outer, x inner).
    pub fn points(&self) -> Vec<PhysicalPoint> {
        (0..self.ny).flat_map(|j| (0..self.nx).map(move |i| (i, j))).map(|(i, j)| PhysicalPoint { x: self.x(i), y: self.y(j) }).collect()
    }
}

fn step(r: [f64; 2], n: usize) -> f64 {
    if n > 1 {
        (r[1] - r[0]) / (n - 1) as f64
    } else {
        0.0
    }
}

fn axis(r: [f64; 2], n: usize, i: usize) -> f64 {
    if n > 1 && i == n - 1 {
        r[1]
    } else {
        r[0] + i as f64 * step(r, n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub problem: ProblemParams,
    pub quadrature: QuadratureSpec,
    pub eval: EvalConfig,
    pub s_form: SFactorForm,
}

/// Grid samples of V with per-point convergence flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub grid: GridSpec,
    pub samples: Vec<Sample>,
    pub meta: FieldMeta,
}

pub const FIELD_CSV_HEADER: &str = "x,y,V,converged";

impl SolutionField {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.samples[j * self.grid.nx + i].v
    }

    pub fn failures(&self) -> usize {
        self.samples.iter().filter(|s| !s.converged).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.samples.len());
        out.push_str(FIELD_CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            out.push_str(&format!("{:e},{:e},{:e},{}\n", s.x, s.y, s.v, s.converged));
        }
        out
    }

    /// Sidecar metadata as JSON (grid, parameters, quadrature, tolerances, per-point errors).
    pub fn metadata_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            grid: &'a GridSpec,
            meta: &'a FieldMeta,
            points: usize,
            failures: usize,
            errors: Vec<(usize, &'a str)>,
        }
        let errors = self.samples.iter().enumerate().filter_map(|(k, s)| s.error.as_deref().map(|e| (k, e))).collect();
        let sc = Sidecar { grid: &self.grid, meta: &self.meta, points: self.samples.len(), failures: self.failures(), errors };
        serde_json::to_string_pretty(&sc).map_err(|e| Error::Io(e.to_string()))
    }

    /// Write `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::File::create(dir.join(format!("{stem}.csv")))?.write_all(self.to_csv().as_bytes())?;
        std::fs::File::create(dir.join(format!("{stem}.json")))?.write_all(self.metadata_json()?.as_bytes())?;
        Ok(())
    }
}
