//! Formula solution against the finite-difference marching oracle.

use degcauchy::cauchy::{CauchyData, CauchySolver, DataPreset};
use degcauchy::config::TargetSet;
use degcauchy::quadrature::QuadratureSpec;
use degcauchy::riemann::ProblemParams;
use degcauchy::special_fn::EvalConfig;
use degcauchy::verification::{compare_with_oracle, OracleConfig};

fn main() -> degcauchy::Result<()> {
    let data = CauchyData::from_presets(&DataPreset::Sine, &DataPreset::Quadratic);
    let targets = TargetSet { x_range: [0.35, 0.5], y_range: [-0.08, -0.02], n: 5 }.points();
    let oc = OracleConfig { dx: 1.0 / 1024.0, ..Default::default() };
    for (m, n, mu) in [(0.5, 0.0, 0.0), (0.5, 0.5, -2.0), (0.3, 0.2, 4.0)] {
        let t = std::time::Instant::now();
        let solver = CauchySolver::new(ProblemParams::new(m, n, mu)?, QuadratureSpec::default(), EvalConfig::default())?;
        let rows = compare_with_oracle(&solver, &data, &oc, &targets, 1e-3)?;
        let dev = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
        let se = rows.iter().map(|r| r.self_error).fold(0.0, f64::max);
        let pass = rows.iter().all(|r| r.pass);
        println!("(m, n, mu) = ({m}, {n}, {mu}): max deviation {dev:.3e}, max oracle self-error {se:.3e}, pass {pass} [{:.1}s]", t.elapsed().as_secs_f64());
    }
    Ok(())
}
