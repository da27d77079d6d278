//! The Riemann function in its two closed forms, and the characteristic
//! operator residual under step refinement.

use degcauchy::riemann::{
    char_operator_residual, char_params, riemann_function, CharPoint, ProblemParams, RiemannForm,
};
use degcauchy::special_fn::EvalConfig;

fn main() -> degcauchy::Result<()> {
    let pp = ProblemParams::new(0.5, 0.5, -2.0)?;
    let cp = char_params(&pp);
    let cfg = EvalConfig::with_tol(1e-14);
    let c0 = CharPoint { xi: 0.2, eta: 0.8 };

    println!("R(c0; c0) = {}", riemann_function(&c0, &c0, &cp, RiemannForm::Auto, &cfg)?);
    for (xi, eta) in [(0.25, 0.7), (0.3, 0.6), (0.35, 0.75)] {
        let c = CharPoint { xi, eta };
        let a = riemann_function(&c, &c0, &cp, RiemannForm::Phi, &cfg)?;
        let b = riemann_function(&c, &c0, &cp, RiemannForm::Psi, &cfg)?;
        println!("({xi}, {eta}): phi form {a:.15}, psi form {b:.15}, diff {:.1e}", (a - b).abs());
    }

    // as a function of the second point
    let c = CharPoint { xi: 0.3, eta: 0.6 };
    let u = |xi: f64, eta: f64| riemann_function(&c, &CharPoint { xi, eta }, &cp, RiemannForm::Auto, &cfg);
    let mut prev: Option<f64> = None;
    for h in [1e-2, 5e-3, 2.5e-3] {
        let r = char_operator_residual(u, 0.2, 0.8, h, &cp)?.abs();
        match prev {
            Some(p) => println!("h = {h:e}: residual {r:.3e}, order {:.2}", (p / r).log2()),
            None => println!("h = {h:e}: residual {r:.3e}"),
        }
        prev = Some(r);
    }
    Ok(())
}
