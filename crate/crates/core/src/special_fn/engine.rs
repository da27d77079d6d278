//! Shell summation of separable double and triple series.
//!
//! A term is `u[m] * v[k] * w[m+k]` (or `u[m] v[n] r[k] w[m+n+k]`), where each
//! factor already carries its power of the argument.

use super::{EvalConfig, SeriesValue, ShellStrategy};
use crate::error::Result;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

type Ratio<'a> = Box<dyn Fn(usize) -> f64 + 'a>;
type Extra<'a> = Box<dyn FnMut(usize) -> Result<f64> + 'a>;

/// Lazily extended sequence `x[i+1] = x[i] * ratio(i)`, optionally multiplied
/// by a per-index factor that is evaluated only where the base is nonzero.
pub(crate) struct Seq<'a> {
    ratio: Ratio<'a>,
    extra: Option<Extra<'a>>,
    base: Vec<f64>,
    vals: Vec<f64>,
    end: Option<usize>,
}

impl<'a> Seq<'a> {
    pub fn new(first: f64, ratio: impl Fn(usize) -> f64 + 'a) -> Self {
        let end = if first == 0.0 { Some(0) } else { None };
        Seq { ratio: Box::new(ratio), extra: None, base: vec![first], vals: Vec::new(), end }
    }

    pub fn with_extra(mut self, extra: impl FnMut(usize) -> Result<f64> + 'a) -> Self {
        self.extra = Some(Box::new(extra));
        self
    }

    /// First index from which every entry is exactly zero, once discovered.
    pub fn end(&self) -> Option<usize> {
        self.end
    }

    pub fn get(&mut self, i: usize) -> Result<f64> {
        if let Some(e) = self.end {
            if i >= e {
                return Ok(0.0);
            }
        }
        while self.vals.len() <= i {
            let j = self.vals.len();
            while self.base.len() <= j {
                let l = self.base.len();
                let next = self.base[l - 1] * (self.ratio)(l - 1);
                self.base.push(next);
                if next == 0.0 {
                    self.end = Some(l);
                    break;
                }
            }
            if let Some(e) = self.end {
                if j >= e {
                    return Ok(0.0);
                }
            }
            let b = self.base[j];
            let v = match self.extra.as_mut() {
                Some(f) => b * f(j)?,
                None => b,
            };
            self.vals.push(v);
        }
        Ok(self.vals[i])
    }
}

/// Coefficient source for the double engine: value and absolute weight.
pub(crate) trait Coefs {
    fn at(&mut self, i: usize) -> Result<(f64, f64)>;
    fn end(&self) -> Option<usize>;
}

impl Coefs for Seq<'_> {
    fn at(&mut self, i: usize) -> Result<(f64, f64)> {
        let v = self.get(i)?;
        Ok((v, v.abs()))
    }
    fn end(&self) -> Option<usize> {
        Seq::end(self)
    }
}

/// Cauchy product of two sequences, used to fold two indices into one.
pub(crate) struct Conv<'a> {
    u: Seq<'a>,
    v: Seq<'a>,
    cache: Vec<(f64, f64)>,
}

impl<'a> Conv<'a> {
    pub fn new(u: Seq<'a>, v: Seq<'a>) -> Self {
        Conv { u, v, cache: Vec::new() }
    }
}

impl Coefs for Conv<'_> {
    fn at(&mut self, i: usize) -> Result<(f64, f64)> {
        while self.cache.len() <= i {
            let j = self.cache.len();
            let mut s = CompensatedSum::new();
            let mut a = 0.0;
            for m in 0..=j {
                let um = self.u.get(m)?;
                if um == 0.0 {
                    if self.u.end().is_some_and(|e| m >= e) {
                        break;
                    }
                    continue;
                }
                let vn = self.v.get(j - m)?;
                let t = um * vn;
                s.add(t);
                a += t.abs();
            }
            self.cache.push((s.value(), a));
        }
        Ok(self.cache[i])
    }
    fn end(&self) -> Option<usize> {
        match (self.u.end(), self.v.end()) {
            (Some(a), Some(b)) if a > 0 && b > 0 => Some(a + b - 1),
            (Some(0), _) | (_, Some(0)) => Some(0),
            _ => None,
        }
    }
}

/// Blocks must fall this far below the requested tolerance before stopping.
const STOP_SAFETY: f64 = 0.1;

/// Stop-rule state shared by the strategies.
struct Monitor {
    tol: f64,
    acc: CompensatedSum,
    small_run: usize,
    prev_abs: Option<f64>,
    tail: f64,
    max_term: f64,
    terms: usize,
    asym: f64,
}

impl Monitor {
    fn new(cfg: &EvalConfig, asym: f64) -> Self {
        Monitor {
            tol: cfg.rel_tol,
            acc: CompensatedSum::new(),
            small_run: 0,
            prev_abs: None,
            tail: f64::INFINITY,
            max_term: 0.0,
            terms: 0,
            asym: asym.abs(),
        }
    }

    /// Feed one block (shell or row); returns true once converged.
    fn push(&mut self, val: f64, abs: f64) -> bool {
        self.acc.add(val);
        self.max_term = self.max_term.max(abs);
        let scale = STOP_SAFETY * self.acc.value().abs().max(1.0);
        let r_obs = match self.prev_abs {
            Some(p) if p > 0.0 => abs / p,
            Some(_) => 0.0,
            None => 1.0,
        };
        self.prev_abs = Some(abs);
        let r = r_obs.max(self.asym);
        self.tail = if abs == 0.0 {
            0.0
        } else if r < 1.0 {
            abs * r / (1.0 - r)
        } else {
            f64::INFINITY
        };
        if abs <= self.tol * scale {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 2 && self.tail <= self.tol * scale
    }

    fn finish(self, converged: bool, exact: bool) -> SeriesValue {
        let value = self.acc.value();
        let tail = if exact { 0.0 } else { self.tail };
        let cancel_ok = self.max_term <= value.abs().max(1.0) / self.tol;
        SeriesValue { value, tail_estimate: tail, terms_used: self.terms, converged: converged && cancel_ok }
    }
}

/// Sum a single series `sum_i u[i]`.
pub(crate) fn sum_single(u: &mut Seq<'_>, cfg: &EvalConfig, asym: f64) -> Result<SeriesValue> {
    let mut mon = Monitor::new(cfg, asym);
    for i in 0..cfg.max_terms.max(1) {
        let t = u.get(i)?;
        mon.terms += 1;
        let done = mon.push(t, t.abs());
        u.get(i + 1)?;
        if u.end().is_some_and(|e| e <= i + 1) {
            return Ok(mon.finish(true, true));
        }
        if done {
            return Ok(mon.finish(true, false));
        }
    }
    Ok(mon.finish(false, false))
}

/// Sum `sum_{m,k} u[m] v[k] w[m+k]`.
pub(crate) fn sum_double(
    u: &mut dyn Coefs,
    v: &mut dyn Coefs,
    w: &mut Seq<'_>,
    cfg: &EvalConfig,
    asym: f64,
) -> Result<SeriesValue> {
    match cfg.shell_strategy {
        ShellStrategy::Diagonal => diagonal(u, v, w, cfg, asym),
        ShellStrategy::Nested => nested(u, v, w, cfg, asym),
    }
}

fn exhausted(u: &dyn Coefs, v: &dyn Coefs, w: &Seq<'_>, s: usize) -> bool {
    if w.end().is_some_and(|e| s + 1 >= e) {
        return true;
    }
    match (u.end(), v.end()) {
        (Some(0), _) | (_, Some(0)) => true,
        (Some(a), Some(b)) => s + 2 >= a + b,
        _ => false,
    }
}

fn diagonal(
    u: &mut dyn Coefs,
    v: &mut dyn Coefs,
    w: &mut Seq<'_>,
    cfg: &EvalConfig,
    asym: f64,
) -> Result<SeriesValue> {
    let mut mon = Monitor::new(cfg, asym);
    for s in 0..cfg.max_terms.max(1) {
        let ws = w.get(s)?;
        let mut shell = CompensatedSum::new();
        let mut shell_abs = 0.0;
        if ws != 0.0 {
            for m in 0..=s {
                if u.end().is_some_and(|e| m >= e) {
                    break;
                }
                let k = s - m;
                if v.end().is_some_and(|e| k >= e) {
                    continue;
                }
                let (um, ua) = u.at(m)?;
                if ua == 0.0 {
                    continue;
                }
                let (vk, va) = v.at(k)?;
                shell.add(um * vk);
                shell_abs += ua * va;
                mon.terms += 1;
            }
        }
        let done = mon.push(shell.value() * ws, shell_abs * ws.abs());
        // make sure termination of u and v is discovered
        u.at(s + 1)?;
        v.at(s + 1)?;
        if exhausted(u, v, w, s) {
            return Ok(mon.finish(true, true));
        }
        if done {
            return Ok(mon.finish(true, false));
        }
    }
    Ok(mon.finish(false, false))
}

fn nested(
    u: &mut dyn Coefs,
    v: &mut dyn Coefs,
    w: &mut Seq<'_>,
    cfg: &EvalConfig,
    asym: f64,
) -> Result<SeriesValue> {
    let mut mon = Monitor::new(cfg, asym);
    let budget = cfg.max_terms.max(1);
    for m in 0..budget {
        let (um, ua) = u.at(m)?;
        if u.end().is_some_and(|e| m >= e) {
            return Ok(mon.finish(true, true));
        }
        let mut row = CompensatedSum::new();
        let mut row_abs = 0.0;
        let mut row_mon = Monitor::new(cfg, 0.0);
        let mut row_done = false;
        for k in 0..budget {
            if v.end().is_some_and(|e| k >= e) || w.end().is_some_and(|e| m + k >= e) {
                row_done = true;
                break;
            }
            let (vk, va) = v.at(k)?;
            let wk = w.get(m + k)?;
            let t = um * vk * wk;
            row.add(t);
            row_abs += ua * va * wk.abs();
            mon.terms += 1;
            if row_mon.push(t, (ua * va * wk).abs()) {
                row_done = true;
                break;
            }
        }
        if !row_done {
            return Ok(mon.finish(false, false));
        }
        if mon.push(row.value(), row_abs) {
            return Ok(mon.finish(true, false));
        }
    }
    Ok(mon.finish(false, false))
}

/// Sum `sum_{m,n,k} u[m] v[n] r[k] w[m+n+k]` by folding (m, n) into one index.
pub(crate) fn sum_triple(
    u: Seq<'_>,
    v: Seq<'_>,
    r: &mut Seq<'_>,
    w: &mut Seq<'_>,
    cfg: &EvalConfig,
    asym: f64,
) -> Result<SeriesValue> {
    match cfg.shell_strategy {
        ShellStrategy::Diagonal => {
            let mut c = Conv::new(u, v);
            diagonal(&mut c, r, w, cfg, asym)
        }
        ShellStrategy::Nested => nested_triple(u, v, r, w, cfg, asym),
    }
}

fn nested_triple(
    mut u: Seq<'_>,
    mut v: Seq<'_>,
    r: &mut Seq<'_>,
    w: &mut Seq<'_>,
    cfg: &EvalConfig,
    asym: f64,
) -> Result<SeriesValue> {
    let mut mon = Monitor::new(cfg, asym);
    let budget = cfg.max_terms.max(1);
    for m in 0..budget {
        let um = u.get(m)?;
        if u.end().is_some_and(|e| m >= e) {
            return Ok(mon.finish(true, true));
        }
        let mut plane = CompensatedSum::new();
        let mut plane_abs = 0.0;
        let mut pmon = Monitor::new(cfg, asym);
        let mut plane_done = false;
        for n in 0..budget {
            let vn = v.get(n)?;
            if v.end().is_some_and(|e| n >= e) {
                plane_done = true;
                break;
            }
            let mut row = CompensatedSum::new();
            let mut row_abs = 0.0;
            let mut rmon = Monitor::new(cfg, 0.0);
            let mut row_done = false;
            for k in 0..budget {
                if r.end().is_some_and(|e| k >= e) || w.end().is_some_and(|e| m + n + k >= e) {
                    row_done = true;
                    break;
                }
                let t = um * vn * r.get(k)? * w.get(m + n + k)?;
                row.add(t);
                row_abs += t.abs();
                mon.terms += 1;
                if rmon.push(t, t.abs()) {
                    row_done = true;
                    break;
                }
            }
            if !row_done {
                return Ok(mon.finish(false, false));
            }
            plane.add(row.value());
            plane_abs += row_abs;
            if pmon.push(row.value(), row_abs) {
                plane_done = true;
                break;
            }
        }
        if !plane_done {
            return Ok(mon.finish(false, false));
        }
        if mon.push(plane.value(), plane_abs) {
            return Ok(mon.finish(true, false));
        }
    }
    Ok(mon.finish(false, false))
}
