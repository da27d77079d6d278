//! Residual of the formula solution under grid refinement.

use degcauchy::cauchy::{CauchyData, CauchySolver, DataPreset, GridSpec};
use degcauchy::quadrature::QuadratureSpec;
use degcauchy::riemann::ProblemParams;
use degcauchy::special_fn::EvalConfig;
use degcauchy::verification::{residual_csv, residual_refinement};

fn main() -> degcauchy::Result<()> {
    let pp = ProblemParams::new(0.5, 0.5, -2.0)?;
    let data = CauchyData::from_presets(&DataPreset::Sine, &DataPreset::Quadratic);
    let q = QuadratureSpec { jacobi_order: 24, subdivisions: 1, target_tol: 1e-14 };
    let solver = CauchySolver::new(pp, q, EvalConfig::with_tol(1e-15))?;
    let sizes: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sizes = if sizes.is_empty() { vec![33, 65, 129] } else { sizes };
    let mut fields = Vec::new();
    for n in sizes {
        let t = std::time::Instant::now();
        let gs = GridSpec { x_range: [0.3, 0.45], y_range: [-0.1, -0.02], nx: n, ny: n };
        let f = solver.solve_grid(&gs, &data)?;
        eprintln!("{n}x{n}: {:.1}s, {} failures", t.elapsed().as_secs_f64(), f.failures());
        fields.push(f);
    }
    print!("{}", residual_csv(&residual_refinement(&fields, &pp)?));
    Ok(())
}
