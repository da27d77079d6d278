//! Solve on a grid and write the CSV plus JSON sidecar.

use degcauchy::cauchy::{CauchyData, CauchySolver, DataPreset, GridSpec};
use degcauchy::quadrature::QuadratureSpec;
use degcauchy::riemann::ProblemParams;
use degcauchy::special_fn::EvalConfig;

fn main() -> degcauchy::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "out".into());
    let gs = GridSpec { x_range: [0.3, 0.45], y_range: [-0.1, -0.02], nx: 9, ny: 9 };

    // constant data with mu = 0 is reproduced exactly
    let solver = CauchySolver::new(ProblemParams::new(0.5, 0.5, 0.0)?, QuadratureSpec::default(), EvalConfig::default())?;
    let one = CauchyData::from_presets(&DataPreset::Constant { value: 1.0 }, &DataPreset::Zero);
    let f = solver.solve_grid(&gs, &one)?;
    let err = f.samples.iter().map(|s| (s.v - 1.0).abs()).fold(0.0, f64::max);
    println!("constant data: max |V - 1| = {err:.2e}");

    let solver = CauchySolver::new(ProblemParams::new(0.5, 0.5, -2.0)?, QuadratureSpec::default(), EvalConfig::default())?;
    let data = CauchyData::from_presets(&DataPreset::Sine, &DataPreset::Quadratic);
    let f = solver.solve_grid(&gs, &data)?;
    f.write(std::path::Path::new(&dir), "sine")?;
    println!("sine data: {} points, {} failures, V(0.3, -0.1) = {:.12}", f.samples.len(), f.failures(), f.value(0, 0));
    println!("wrote {dir}/sine.csv and {dir}/sine.json");
    Ok(())
}
