//! Xi2, Phi, Xi_pq, Psi_pq and the Xi_pq derivatives.

use super::engine::{sum_double, sum_triple, Seq};
use super::gauss::hyp2f1;
use super::{EvalConfig, PhiParams, PsiPQParams, SeriesValue, Xi2Params, XiPQParams};
use crate::error::{check_lower, Error, Result};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("|{name}| = {} must be < 1", x.abs())));
    }
    Ok(())
}

fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("non-finite parameter or argument".into()))
    }
}

fn check_pq(p: u8, q: u8) -> Result<()> {
    if p > 1 || q > 1 {
        return Err(Error::InvalidParameter(format!("p = {p}, q = {q} must be 0 or 1")));
    }
    Ok(())
}

fn check_xipq(p: &XiPQParams) -> Result<()> {
    check_pq(p.p, p.q)?;
    check_finite(&[p.a, p.b, p.a_prime, p.b_prime, p.c, p.c_prime, p.d_prime])?;
    check_lower("c", p.c)?;
    if p.p == 1 {
        check_lower("c'", p.c_prime)?;
    }
    if p.q == 1 {
        check_lower("d'", p.d_prime)?;
    }
    Ok(())
}

/// `(a)_m (b)_m sigma^m / m!` with the first `shift` factors pre-applied.
fn sigma_seq<'a>(a: f64, b: f64, sigma: f64, shift: usize) -> Seq<'a> {
    let s = shift as f64;
    let first = if shift == 0 { 1.0 } else { a * b };
    Seq::new(first, move |m| {
        let m = m as f64;
        (a + m + s) * (b + m + s) / (m + 1.0) * sigma
    })
}

/// `(a')_{pk} rho^k / (k! (c')_{pk})`, shifted by `shift` in k (times (k+shift)!/k!).
fn rho_seq<'a>(p: u8, a1: f64, c1: f64, rho: f64, shift: usize) -> Seq<'a> {
    let pa = move |k: f64| if p == 1 { (a1 + k) / (c1 + k) } else { 1.0 };
    let s = shift as f64;
    let first = if shift == 0 { 1.0 } else { rho * pa(0.0) };
    Seq::new(first, move |k| {
        let k = k as f64;
        pa(k + s) * rho / (k + 1.0)
    })
}

/// `(b')_{qs} / ((c)_s (d')_{qs})` starting at index `shift`.
fn shell_seq<'a>(q: u8, c: f64, b1: f64, d1: f64, shift: usize) -> Seq<'a> {
    let r = move |s: f64| {
        let base = 1.0 / (c + s);
        if q == 1 {
            base * (b1 + s) / (d1 + s)
        } else {
            base
        }
    };
    let first = if shift == 0 { 1.0 } else { r(0.0) };
    let sh = shift as f64;
    Seq::new(first, move |s| r(s as f64 + sh))
}

/// `Xi2(a, b; c; sigma, rho)`.
pub fn xi2(p: &Xi2Params, sigma: f64, rho: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    xi_pq(&XiPQParams::xi00(p.a, p.b, p.c), sigma, rho, cfg)
}

/// `Xi_pq[a, b; a', b' / c; c', d'; sigma, rho]`.
pub fn xi_pq(p: &XiPQParams, sigma: f64, rho: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    xi_pq_shifted(p, sigma, rho, cfg, 0, 0)
}

/// Term-wise d/dsigma of `Xi_pq`.
pub fn xi10_dsigma(p: &XiPQParams, sigma: f64, rho: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    xi_pq_shifted(p, sigma, rho, cfg, 1, 0)
}

/// Term-wise rho d/drho of `Xi_pq`.
pub fn xi10_rho_drho(p: &XiPQParams, sigma: f64, rho: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    if rho == 0.0 {
        check_xipq(p)?;
        check_unit("sigma", sigma)?;
        return Ok(SeriesValue::exact(0.0, 0));
    }
    xi_pq_shifted(p, sigma, rho, cfg, 0, 1)
}

fn xi_pq_shifted(
    p: &XiPQParams,
    sigma: f64,
    rho: f64,
    cfg: &EvalConfig,
    ds: usize,
    dr: usize,
) -> Result<SeriesValue> {
    cfg.validate()?;
    check_xipq(p)?;
    check_finite(&[sigma, rho])?;
    check_unit("sigma", sigma)?;
    let mut u = sigma_seq(p.a, p.b, sigma, ds);
    let mut v = rho_seq(p.p, p.a_prime, p.c_prime, rho, dr);
    let mut w = shell_seq(p.q, p.c, p.b_prime, p.d_prime, ds + dr);
    sum_double(&mut u, &mut v, &mut w, cfg, sigma.abs())
}

/// Triple series `Phi(a, b, c, d; e; sigma, omega, rho)`.
pub fn phi(p: &PhiParams, sigma: f64, omega: f64, rho: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    check_finite(&[p.a, p.b, p.c, p.d, p.e, sigma, omega, rho])?;
    check_lower("e", p.e)?;
    check_unit("sigma", sigma)?;
    check_unit("omega", omega)?;
    let u = sigma_seq(p.a, p.c, sigma, 0);
    let v = sigma_seq(p.b, p.d, omega, 0);
    let mut r = Seq::new(1.0, move |k| rho / (k as f64 + 1.0));
    let e = p.e;
    let mut w = Seq::new(1.0, move |s| 1.0 / (e + s as f64));
    sum_triple(u, v, &mut r, &mut w, cfg, sigma.abs().max(omega.abs()))
}

/// `Psi_pq[a, b, c, d; a', b' / e; c', d'; sigma, theta, rho]` with inner
/// factor `F(b, e-d+m+k; e+m+k; theta)`.
pub fn psi_pq(p: &PsiPQParams, sigma: f64, theta: f64, rho: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    check_pq(p.p, p.q)?;
    check_finite(&[p.a, p.b, p.c, p.d, p.e, p.a_prime, p.b_prime, p.c_prime, p.d_prime, sigma, theta, rho])?;
    check_lower("e", p.e)?;
    if p.p == 1 {
        check_lower("c'", p.c_prime)?;
    }
    if p.q == 1 {
        check_lower("d'", p.d_prime)?;
    }
    check_unit("sigma", sigma)?;
    if !(theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} must be < 1")));
    }
    let (b, d, e) = (p.b, p.d, p.e);
    let inner_cfg = *cfg;
    let inner = move |s: usize| -> Result<f64> {
        let sf = s as f64;
        let f = hyp2f1(b, e - d + sf, e + sf, theta, &inner_cfg)?;
        f.require()
    };
    let mut u = sigma_seq(p.a, p.c, sigma, 0);
    let mut v = rho_seq(p.p, p.a_prime, p.c_prime, rho, 0);
    let mut w = shell_seq(p.q, e, p.b_prime, p.d_prime, 0).with_extra(inner);
    sum_double(&mut u, &mut v, &mut w, cfg, sigma.abs())
}

#[cfg(test)]
mod tests {
    use super::super::{pochhammer, GaussParams, ShellStrategy};
    use super::*;

    fn fact(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    fn naive_xipq(p: &XiPQParams, s: f64, r: f64, n: usize) -> f64 {
        let mut tot = 0.0;
        for m in 0..n {
            for k in 0..n {
                let pk = p.p as usize * k;
                let qs = p.q as usize * (m + k);
                tot += pochhammer(p.a, m) / fact(m) * (pochhammer(p.b, m) / pochhammer(p.c, m + k))
                    * (pochhammer(p.a_prime, pk) / (fact(k) * pochhammer(p.c_prime, pk)))
                    * (pochhammer(p.b_prime, qs) / pochhammer(p.d_prime, qs))
                    * s.powi(m as i32)
                    * r.powi(k as i32);
            }
        }
        tot
    }

    #[test]
    fn xi2_reductions() {
        let cfg = EvalConfig::default();
        let (a, b, c, s) = (0.3, -0.7, 1.4, 0.35);
        let x = xi2(&Xi2Params { a, b, c }, s, 0.0, &cfg).unwrap();
        let f = super::super::gauss_f(&GaussParams { a, b, c }, s, &cfg).unwrap();
        assert!((x.value - f.value).abs() < 1e-14);
        // sigma = 0: sum rho^k / (k! (c)_k)
        let rho = -2.3;
        let x = xi2(&Xi2Params { a, b, c }, 0.0, rho, &cfg).unwrap();
        let mut e = 0.0;
        for k in 0..60 {
            e += rho.powi(k) / (fact(k as usize) * pochhammer(c, k as usize));
        }
        assert!((x.value - e).abs() < 1e-14);
    }

    #[test]
    fn xi10_annihilation_and_oracle() {
        let cfg = EvalConfig::default();
        let p = XiPQParams::xi10(0.0, 0.7, -0.2, -0.2 + 1e-3, 0.8);
        let r = xi_pq(&p, 0.4, 0.5, &cfg).unwrap();
        let mut e = 0.0;
        for k in 0..60 {
            e += pochhammer(-0.2, k) * 0.5f64.powi(k as i32) / (fact(k) * pochhammer(p.c, k) * pochhammer(0.8, k));
        }
        assert!((r.value - e).abs() < 1e-12 * e.abs().max(1.0));
        let p = XiPQParams::xi10(0.3, 0.7, -0.2, -0.2, 0.8);
        let r = xi_pq(&p, 0.15, 0.2, &cfg).unwrap();
        let e = naive_xipq(&p, 0.15, 0.2, 40);
        assert!((r.value - e).abs() < 1e-12, "{} vs {}", r.value, e);
    }

    #[test]
    fn strategies_agree() {
        let p = XiPQParams { a: 0.4, b: 1.3, a_prime: 0.6, b_prime: 1.7, c: 0.9, c_prime: 1.4, d_prime: 0.8, p: 1, q: 1 };
        let tight = EvalConfig::with_tol(1e-14);
        let d = xi_pq(&p, 0.45, -3.0, &tight).unwrap();
        let n = xi_pq(&p, 0.45, -3.0, &EvalConfig { shell_strategy: ShellStrategy::Nested, ..tight }).unwrap();
        assert!(d.converged && n.converged);
        assert!((d.value - n.value).abs() < 1e-11 * d.value.abs().max(1.0));
        let e = naive_xipq(&p, 0.45, -3.0, 60);
        assert!((d.value - e).abs() < 1e-11 * e.abs().max(1.0), "{} vs {}", d.value, e);
        let pp = PhiParams { a: 0.25, b: -0.25, c: 0.75, d: 1.25, e: 1.0 };
        let d = phi(&pp, 0.1, -0.3, 0.05, &EvalConfig::default()).unwrap();
        let n = phi(&pp, 0.1, -0.3, 0.05, &EvalConfig { shell_strategy: ShellStrategy::Nested, ..Default::default() }).unwrap();
        assert!((d.value - n.value).abs() < 1e-13);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cfg = EvalConfig::with_tol(1e-15);
        let p = XiPQParams::xi10(-0.2, 1.2, -0.25, -0.25, 0.75);
        let (s, r, h) = (0.3, -0.8, 1e-5);
        let ds = xi10_dsigma(&p, s, r, &cfg).unwrap().value;
        let fd = (xi_pq(&p, s + h, r, &cfg).unwrap().value - xi_pq(&p, s - h, r, &cfg).unwrap().value) / (2.0 * h);
        assert!((ds - fd).abs() < 1e-8 * ds.abs().max(1.0), "{ds} vs {fd}");
        let dr = xi10_rho_drho(&p, s, r, &cfg).unwrap().value;
        let fd = r * (xi_pq(&p, s, r + h, &cfg).unwrap().value - xi_pq(&p, s, r - h, &cfg).unwrap().value) / (2.0 * h);
        assert!((dr - fd).abs() < 1e-8 * dr.abs().max(1.0), "{dr} vs {fd}");
        // at sigma = 0 the derivative is the sigma^1 coefficient
        let p2 = XiPQParams::xi00(0.3, 0.4, 1.2);
        let d0 = xi10_dsigma(&p2, 0.0, 0.0, &cfg).unwrap().value;
        assert!((d0 - 0.3 * 0.4 / 1.2).abs() < 1e-15);
        assert_eq!(xi10_rho_drho(&p2, 0.2, 0.0, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn psi_reductions() {
        let cfg = EvalConfig::default();
        let p = PsiPQParams { a: 0.3, b: 0.6, c: -0.4, d: 1.1, e: 1.3, a_prime: 0.5, b_prime: 0.9, c_prime: 1.2, d_prime: 0.7, p: 1, q: 1 };
        let at0 = psi_pq(&p, 0.3, 0.0, 0.4, &cfg).unwrap().value;
        let xi = xi_pq(
            &XiPQParams { a: p.a, b: p.c, a_prime: p.a_prime, b_prime: p.b_prime, c: p.e, c_prime: p.c_prime, d_prime: p.d_prime, p: 1, q: 1 },
            0.3,
            0.4,
            &cfg,
        )
        .unwrap()
        .value;
        assert!((at0 - xi).abs() < 1e-14);
        let origin = psi_pq(&p, 0.0, 0.55, 0.0, &cfg).unwrap().value;
        let f = super::super::gauss_f(&GaussParams { a: p.b, b: p.e - p.d, c: p.e }, 0.55, &cfg).unwrap().value;
        assert!((origin - f).abs() < 1e-15);
    }

    #[test]
    fn termination_uses_finitely_many_terms() {
        let cfg = EvalConfig::default();
        let r = xi2(&Xi2Params { a: -3.0, b: 0.5, c: 1.5 }, 0.5, 0.0, &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.tail_estimate, 0.0);
        assert_eq!(r.terms_used, 4);
    }

    #[test]
    fn domain_errors() {
        let cfg = EvalConfig::default();
        assert!(xi2(&Xi2Params { a: 1.0, b: 1.0, c: 1.0 }, 1.0, 0.0, &cfg).is_err());
        assert!(xi2(&Xi2Params { a: 1.0, b: 1.0, c: -2.0 }, 0.1, 0.0, &cfg).is_err());
        let p = XiPQParams { p: 2, ..XiPQParams::xi00(1.0, 1.0, 1.0) };
        assert!(xi_pq(&p, 0.1, 0.1, &cfg).is_err());
        // unused c' may sit on a pole
        let p = XiPQParams { c_prime: -1.0, ..XiPQParams::xi00(1.0, 1.0, 1.0) };
        assert!(xi_pq(&p, 0.1, 0.1, &cfg).is_ok());
    }

    #[test]
    fn large_negative_rho_flags_cancellation() {
        let cfg = EvalConfig::default();
        let r = xi2(&Xi2Params { a: 0.5, b: 0.5, c: 0.6 }, 0.1, -400.0, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.require().is_err());
    }
}
