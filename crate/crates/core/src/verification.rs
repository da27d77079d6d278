//! Independent checks of the formula solution: PDE residuals, a marching
//! finite-difference oracle and the wave-equation limit.

use crate::cauchy::{CauchyData, CauchySolver, GridSpec, SolutionField};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::riemann::{PhysicalPoint, ProblemParams};
use crate::special_fn::EvalConfig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Residual of `x^n V_xx - (-y)^m V_yy + mu V` on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub grid: GridSpec,
    pub residual_l2: f64,
    pub residual_max: f64,
    pub stencil_order: usize,
    pub points: usize,
    /// Observed orders between consecutive grids (only for >= 3 grids).
    pub refinement_rates: Vec<f64>,
}

fn d2(f: [f64; 5], h: f64) -> f64 {
    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
}

/// Fourth-order central residual at the interior points of a field.
pub fn pde_residual(field: &SolutionField, pp: &ProblemParams) -> Result<ResidualReport> {
    let g = &field.grid;
    if g.nx < 5 || g.ny < 5 {
        return Err(Error::Grid(format!("need >= 5 points per axis, got {}x{}", g.nx, g.ny)));
    }
    let (hx, hy) = (g.hx(), g.hy());
    if !(hx > 0.0 && hy > 0.0) {
        return Err(Error::Grid("degenerate grid spacing".into()));
    }
    let v = |i: usize, j: usize| field.value(i, j);
    let mut sum2 = 0.0;
    let mut max = 0.0f64;
    let mut count = 0;
    for j in 2..g.ny - 2 {
        for i in 2..g.nx - 2 {
            let vxx = d2([v(i - 2, j), v(i - 1, j), v(i, j), v(i + 1, j), v(i + 2, j)], hx);
            let vyy = d2([v(i, j - 2), v(i, j - 1), v(i, j), v(i, j + 1), v(i, j + 2)], hy);
            let (x, y) = (g.x(i), g.y(j));
            let r = x.powf(pp.n) * vxx - (-y).powf(pp.m) * vyy + pp.mu * v(i, j);
            if !r.is_finite() {
                continue;
            }
            sum2 += r * r;
            max = max.max(r.abs());
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Grid("no interior point with finite values".into()));
    }
    Ok(ResidualReport {
        grid: g.clone(),
        residual_l2: (sum2 / count as f64).sqrt(),
        residual_max: max,
        stencil_order: 4,
        points: count,
        refinement_rates: Vec::new(),
    })
}

/// Observed order between consecutive levels, `log(r_k / r_{k+1}) / log(h_k / h_{k+1})`.
pub fn observed_orders(errors: &[f64], steps: &[f64]) -> Vec<f64> {
    errors
        .windows(2)
        .zip(steps.windows(2))
        .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

/// Residual reports over a refinement sequence; rates use `residual_max`.
pub fn residual_refinement(fields: &[SolutionField], pp: &ProblemParams) -> Result<Vec<ResidualReport>> {
    let mut reps: Vec<ResidualReport> = fields.iter().map(|f| pde_residual(f, pp)).collect::<Result<_>>()?;
    if reps.len() >= 3 {
        let errs: Vec<f64> = reps.iter().map(|r| r.residual_max).collect();
        let hs: Vec<f64> = reps.iter().map(|r| r.grid.hx()).collect();
        let rates = observed_orders(&errs, &hs);
        for r in reps.iter_mut() {
            r.refinement_rates = rates.clone();
        }
    }
    Ok(reps)
}

pub const RESIDUAL_CSV_HEADER: &str = "nx,ny,hx,hy,residual_l2,residual_max,rate";

pub fn residual_csv(reps: &[ResidualReport]) -> String {
    let mut s = String::from(RESIDUAL_CSV_HEADER);
    s.push('\n');
    for (k, r) in reps.iter().enumerate() {
        let rate = if k > 0 { r.refinement_rates.get(k - 1).map(|x| format!("{x:e}")).unwrap_or_default() } else { String::new() };
        s.push_str(&format!(
            "{},{},{:e},{:e},{:e},{:e},{}\n",
            r.grid.nx,
            r.grid.ny,
            r.grid.hx(),
            r.grid.hy(),
            r.residual_l2,
            r.residual_max,
            rate
        ));
    }
    s
}

/// Marching oracle settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub dx: f64,
    pub cfl_safety: f64,
    /// Start offset in s = -y; defaults to dx^(2/(2-m)).
    #[serde(default)]
    pub boot_depth: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { dx: 1.0 / 512.0, cfl_safety: 0.8, boot_depth: None }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dx > 0.0 && self.dx < 0.1) {
            return Err(Error::InvalidParameter(format!("oracle dx = {}", self.dx)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return Err(Error::InvalidParameter(format!("cfl_safety = {} must lie in (0, 1)", self.cfl_safety)));
        }
        if let Some(s) = self.boot_depth {
            if !(s > 0.0) {
                return Err(Error::InvalidParameter(format!("boot_depth = {s}")));
            }
        }
        Ok(())
    }
}

/// Largest m the oracle accepts.
pub const ORACLE_M_MAX: f64 = 0.9;
/// Step for difference quotients of the data.
const DATA_H: f64 = 1e-2;

fn fd2(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    d2([f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h)], h)
}

/// Near-line expansion `V = tau1 - nu1 s + A s^(2-m) + C s^(3-m)` with
/// `A = (x^n tau1'' + mu tau1)/((2-m)(1-m))`, `C = -(x^n nu1'' + mu nu1)/((3-m)(2-m))`.
struct Expansion<'a> {
    data: &'a CauchyData,
    pp: ProblemParams,
}

impl Expansion<'_> {
    fn a(&self, x: f64) -> f64 {
        let (m, n, mu) = (self.pp.m, self.pp.n, self.pp.mu);
        let t = |z: f64| self.data.tau1(z);
        (x.powf(n) * fd2(&t, x, DATA_H / 8.0) + mu * t(x)) / ((2.0 - m) * (1.0 - m))
    }

    fn c(&self, x: f64) -> f64 {
        let (m, n, mu) = (self.pp.m, self.pp.n, self.pp.mu);
        let v = |z: f64| self.data.nu1(z);
        -(x.powf(n) * fd2(&v, x, DATA_H / 8.0) + mu * v(x)) / ((3.0 - m) * (2.0 - m))
    }

    fn value(&self, x: f64, s: f64) -> f64 {
        let m = self.pp.m;
        self.data.tau1(x) - self.data.nu1(x) * s + self.a(x) * s.powf(2.0 - m) + self.c(x) * s.powf(3.0 - m)
    }

    /// Coefficients of the source `g1 s^(2-2m) + g2 s^(3-2m)` left after subtraction.
    fn source(&self, x: f64) -> (f64, f64) {
        let (n, mu) = (self.pp.n, self.pp.mu);
        let xn = x.powf(n);
        let a = |z: f64| self.a(z);
        let c = |z: f64| self.c(z);
        (xn * fd2(&a, x, DATA_H) + mu * self.a(x), xn * fd2(&c, x, DATA_H) + mu * self.c(x))
    }
}

/// Near-line expansion of V at depth s = -y.
pub fn frobenius_boot(data: &CauchyData, pp: &ProblemParams, x: f64, s: f64) -> f64 {
    Expansion { data, pp: *pp }.value(x, s)
}

/// Oracle values at the targets with run statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRun {
    pub values: Vec<f64>,
    pub steps: usize,
    pub cells: usize,
    pub boot_depth: f64,
}

fn lagrange_weights(nodes: &[f64; 4], t: f64) -> [f64; 4] {
    let mut w = [1.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                w[i] *= (t - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
    }
    w
}

/// Explicit second-order march in s = -y from a near-line boot.
///
/// The known singular part of the expansion is subtracted; the smooth
/// remainder is marched with a nonuniform leapfrog under the CFL bound
/// `ds <= safety dx s^(m/2) x_max^(-n/2)`, and targets are read off by
/// 4x4 Lagrange interpolation.
pub fn oracle_march(data: &CauchyData, pp: &ProblemParams, oc: &OracleConfig, targets: &[PhysicalPoint]) -> Result<OracleRun> {
    pp.validate()?;
    oc.validate()?;
    if pp.m > ORACLE_M_MAX {
        return Err(Error::Oracle(format!("m = {} exceeds {ORACLE_M_MAX}", pp.m)));
    }
    if targets.is_empty() {
        return Ok(OracleRun { values: vec![], steps: 0, cells: 0, boot_depth: 0.0 });
    }
    let (m, n, mu) = (pp.m, pp.n, pp.mu);
    let dx = oc.dx;
    let s0 = oc.boot_depth.unwrap_or_else(|| dx.powf(2.0 / (2.0 - m)));
    let tx_lo = targets.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let tx_hi = targets.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let s_max = targets.iter().map(|p| -p.y).fold(0.0, f64::max);
    if targets.iter().any(|p| !(p.y < 0.0) || !(p.x > 0.0)) {
        return Err(Error::Oracle("targets must satisfy x > 0, y < 0".into()));
    }
    if s_max <= s0 {
        return Err(Error::Oracle(format!("targets lie inside the boot strip s < {s0}")));
    }
    // level sequence; the extent depends on x_max, so iterate
    let mut ext = 0.3;
    let mut levels;
    loop {
        let x_max = tx_hi + ext;
        let speed = x_max.powf(-n / 2.0);
        levels = vec![s0];
        let mut s = s0;
        let mut beyond = 0;
        while beyond < 3 {
            s += oc.cfl_safety * dx * s.powf(m / 2.0) * speed;
            levels.push(s);
            if s > s_max {
                beyond += 1;
            }
            if levels.len() > 10_000_000 {
                return Err(Error::Oracle("too many levels".into()));
            }
        }
        let need = (levels.len() as f64 + 4.0) * dx;
        if need <= ext {
            break;
        }
        ext = need * 1.05;
    }
    let x_start = tx_lo - ext;
    let min_x = if n > 0.0 { 2.0 * DATA_H } else { f64::NEG_INFINITY };
    if x_start <= min_x {
        return Err(Error::Oracle(format!(
            "target outside computed cone: grid would need x down to {x_start:.4}; move targets right or toward y = 0"
        )));
    }
    let cells = ((tx_hi + ext - x_start) / dx).ceil() as usize + 1;
    let xs: Vec<f64> = (0..cells).map(|j| x_start + j as f64 * dx).collect();
    let ex = Expansion { data, pp: *pp };
    let src: Vec<(f64, f64)> = xs.par_iter().map(|&x| ex.source(x)).collect();
    let xn: Vec<f64> = xs.iter().map(|x| x.powf(n)).collect();
    let boot = |s: f64| -> Vec<f64> {
        let c1 = 1.0 / ((4.0 - 2.0 * m) * (3.0 - 2.0 * m));
        let c2 = 1.0 / ((5.0 - 2.0 * m) * (4.0 - 2.0 * m));
        src.iter().map(|(g1, g2)| g1 * c1 * s.powf(4.0 - 2.0 * m) + g2 * c2 * s.powf(5.0 - 2.0 * m)).collect()
    };
    // store the window of columns the targets need
    let j_lo = ((tx_lo - x_start) / dx).floor() as usize - 2;
    let j_hi = ((tx_hi - x_start) / dx).ceil() as usize + 2;
    let mut stored: Vec<Vec<f64>> = Vec::with_capacity(levels.len());
    let mut prev = boot(levels[0]);
    let mut cur = boot(levels[1]);
    stored.push(prev[j_lo..=j_hi].to_vec());
    stored.push(cur[j_lo..=j_hi].to_vec());
    let inv_dx2 = 1.0 / (dx * dx);
    let mut next = vec![f64::NAN; cells];
    for k in 1..levels.len() - 1 {
        let (sk, dsp, dsk) = (levels[k], levels[k] - levels[k - 1], levels[k + 1] - levels[k]);
        let (g1s, g2s) = (sk.powf(2.0 - 2.0 * m), sk.powf(3.0 - 2.0 * m));
        let sm = sk.powf(-m);
        let fac = dsk * (dsk + dsp) / 2.0;
        let r = dsk / dsp;
        // columns lo..hi are valid after step k
        let (lo, hi) = (k, cells - 1 - k);
        if lo > j_lo || hi < j_hi {
            return Err(Error::Oracle("valid region shrank below the target window".into()));
        }
        next[lo..=hi].par_iter_mut().enumerate().for_each(|(o, nv)| {
            let j = lo + o;
            let wxx = (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]) * inv_dx2;
            let f = sm * (xn[j] * wxx + mu * cur[j]) + src[j].0 * g1s + src[j].1 * g2s;
            *nv = cur[j] + r * (cur[j] - prev[j]) + fac * f;
        });
        next[lo - 1] = f64::NAN;
        next[hi + 1] = f64::NAN;
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        stored.push(cur[j_lo..=j_hi].to_vec());
    }
    let values = targets
        .iter()
        .map(|p| {
            let s = -p.y;
            let k = levels.partition_point(|&l| l <= s).clamp(2, levels.len() - 2) - 2;
            let sn = [levels[k], levels[k + 1], levels[k + 2], levels[k + 3]];
            let ws = lagrange_weights(&sn, s);
            let jf = (p.x - x_start) / dx;
            let j = (jf.floor() as usize).clamp(j_lo + 1, j_hi - 2) - 1;
            let xn4 = [xs[j], xs[j + 1], xs[j + 2], xs[j + 3]];
            let wx = lagrange_weights(&xn4, p.x);
            let mut w = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    w += ws[a] * wx[b] * stored[k + a][j + b - j_lo];
                }
            }
            w + ex.value(p.x, s)
        })
        .collect();
    Ok(OracleRun { values, steps: levels.len() - 2, cells, boot_depth: s0 })
}

/// Oracle at `dx` and `dx/2`; self-error is the difference of the two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub values: Vec<f64>,
    pub self_error: Vec<f64>,
}

pub fn oracle_with_error(data: &CauchyData, pp: &ProblemParams, oc: &OracleConfig, targets: &[PhysicalPoint]) -> Result<OracleEstimate> {
    let coarse = oracle_march(data, pp, oc, targets)?;
    let fine_cfg = OracleConfig { dx: oc.dx / 2.0, boot_depth: oc.boot_depth.map(|s| s * 0.5f64.powf(2.0 / (2.0 - pp.m))), ..*oc };
    let fine = oracle_march(data, pp, &fine_cfg, targets)?;
    let self_error = coarse.values.iter().zip(&fine.values).map(|(a, b)| (a - b).abs()).collect();
    Ok(OracleEstimate { values: fine.values, self_error })
}

/// One row of a formula-vs-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub x: f64,
    pub y: f64,
    pub formula: f64,
    pub oracle: f64,
    pub self_error: f64,
    pub deviation: f64,
    pub pass: bool,
}

pub const COMPARISON_CSV_HEADER: &str = "x,y,formula,oracle,self_error,deviation,pass";

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut s = String::from(COMPARISON_CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{}\n",
            r.x, r.y, r.formula, r.oracle, r.self_error, r.deviation, r.pass
        ));
    }
    s
}

/// Compare the formula solution with the oracle; `floor` is the absolute tolerance floor.
pub fn compare_with_oracle(
    solver: &CauchySolver,
    data: &CauchyData,
    oc: &OracleConfig,
    targets: &[PhysicalPoint],
    floor: f64,
) -> Result<Vec<ComparisonRow>> {
    let est = oracle_with_error(data, solver.problem(), oc, targets)?;
    let formula: Vec<f64> = targets.par_iter().map(|p| solver.solve_v(p, data)).collect::<Result<_>>()?;
    Ok(targets
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let dev = (formula[k] - est.values[k]).abs();
            ComparisonRow {
                x: p.x,
                y: p.y,
                formula: formula[k],
                oracle: est.values[k],
                self_error: est.self_error[k],
                deviation: dev,
                pass: dev <= floor.max(est.self_error[k]),
            }
        })
        .collect())
}

/// `(tau1(x+y) + tau1(x-y))/2 + (1/2) int_{x-y}^{x+y} nu1` for y <= 0.
pub fn dalembert(data: &CauchyData, p: &PhysicalPoint) -> Result<f64> {
    let (x, y) = (p.x, p.y);
    let i = data
        .nu1_integral(x - y, x + y)
        .ok_or_else(|| Error::InvalidParameter("d'Alembert comparison needs an antiderivative of nu1".into()))?;
    Ok(0.5 * (data.tau1(x + y) + data.tau1(x - y)) + 0.5 * i)
}

/// Max |solve_V - d'Alembert| for n = 0, mu = 0 and a small m.
pub fn dalembert_compare(
    data: &CauchyData,
    m_small: f64,
    points: &[PhysicalPoint],
    q: &QuadratureSpec,
    cfg: &EvalConfig,
) -> Result<f64> {
    if !(m_small > 0.0 && m_small <= 0.05) {
        return Err(Error::InvalidParameter(format!("m_small = {m_small} must lie in (0, 0.05]")));
    }
    let solver = CauchySolver::new(ProblemParams::new(m_small, 0.0, 0.0)?, *q, *cfg)?;
    let devs: Vec<f64> = points
        .par_iter()
        .map(|p| Ok((solver.solve_v(p, data)? - dalembert(data, p)?).abs()))
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, |a, d| if d.is_nan() { f64::INFINITY } else { a.max(d) }))
}

/// Deviation over a sequence of m values with observed orders in m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DalembertStudy {
    pub ms: Vec<f64>,
    pub deviations: Vec<f64>,
    pub rates: Vec<f64>,
}

pub fn dalembert_study(
    data: &CauchyData,
    ms: &[f64],
    points: &[PhysicalPoint],
    q: &QuadratureSpec,
    cfg: &EvalConfig,
) -> Result<DalembertStudy> {
    let deviations: Vec<f64> = ms.iter().map(|&m| dalembert_compare(data, m, points, q, cfg)).collect::<Result<_>>()?;
    let rates = observed_orders(&deviations, ms);
    Ok(DalembertStudy { ms: ms.to_vec(), deviations, rates })
}

pub const DALEMBERT_CSV_HEADER: &str = "m,deviation,rate";

pub fn dalembert_csv(st: &DalembertStudy) -> String {
    let mut s = String::from(DALEMBERT_CSV_HEADER);
    s.push('\n');
    for (k, (m, d)) in st.ms.iter().zip(&st.deviations).enumerate() {
        let rate = if k > 0 { format!("{:e}", st.rates[k - 1]) } else { String::new() };
        s.push_str(&format!("{m:e},{d:e},{rate}\n"));
    }
    s
}
