//! Gauss-Jacobi rules and the endpoint-weighted integrator.

use degcauchy::quadrature::{beta_fn, gauss_jacobi, EndpointWeightedRule, QuadratureSpec};

fn main() -> degcauchy::Result<()> {
    let r = gauss_jacobi(6, 0.0, -0.4)?;
    println!("6-point Jacobi(0, -0.4) nodes: {:?}", r.nodes);

    let spec = QuadratureSpec { jacobi_order: 20, subdivisions: 1, target_tol: 1e-14 };
    for g in [-0.75, -0.4, 0.0, 0.3] {
        let rule = EndpointWeightedRule::new(spec.jacobi_order, g)?;
        let q = rule.integrate(|_| Ok(1.0), 0.0, 1.0, &spec)?;
        let exact = beta_fn(g + 1.0, g + 1.0);
        println!("g = {g:5}: {:.16} vs B = {exact:.16}, err {:.1e}, panels {}", q.value, (q.value - exact).abs(), q.panels);
    }
    Ok(())
}
