//! Evaluate each series family and show the reductions between them.

use degcauchy::special_fn::{
    gauss_f, phi, psi_pq, xi2, xi_pq, EvalConfig, GaussParams, PhiParams, PsiPQParams, Xi2Params, XiPQParams,
};

fn main() -> degcauchy::Result<()> {
    let cfg = EvalConfig::with_tol(1e-14);
    let (a, b, c) = (0.3, 0.7, 1.4);
    let (s, r, w) = (0.4, -0.6, -0.3);

    let f = gauss_f(&GaussParams { a, b, c }, s, &cfg)?;
    let x2 = xi2(&Xi2Params { a, b, c }, s, 0.0, &cfg)?;
    println!("F(a,b;c;s)         = {:.16} ({} terms)", f.value, f.terms_used);
    println!("Xi2(a,b;c;s,0)     = {:.16}", x2.value);

    let x2r = xi2(&Xi2Params { a, b, c }, s, r, &cfg)?;
    let x00 = xi_pq(&XiPQParams::xi00(a, b, c), s, r, &cfg)?;
    println!("Xi2(a,b;c;s,r)     = {:.16}", x2r.value);
    println!("Xi_00[a,b/c](s,r)  = {:.16}", x00.value);

    let x10 = xi_pq(&XiPQParams::xi10(a, b, 0.9, c, 1.1), s, r, &cfg)?;
    println!("Xi_10(s,r)         = {:.16} (tail {:.1e})", x10.value, x10.tail_estimate);

    let pp = PhiParams { a, b, c: 0.5, d: 0.6, e: c };
    let ph = phi(&pp, s, w, r, &cfg)?;
    let ps = psi_pq(&PsiPQParams::psi00(a, b, 0.5, 0.6, c), s, w / (w - 1.0), r, &cfg)?;
    println!("Phi(s,w,r)         = {:.16} ({} terms)", ph.value, ph.terms_used);
    println!("(1-w)^-b Psi_00    = {:.16}", (1.0 - w).powf(-b) * ps.value);
    Ok(())
}
