//! Approach to the wave-equation solution as m -> 0 with n = 0, mu = 0.

use degcauchy::cauchy::{CauchyData, DataPreset};
use degcauchy::config::TargetSet;
use degcauchy::quadrature::QuadratureSpec;
use degcauchy::special_fn::EvalConfig;
use degcauchy::verification::{dalembert_csv, dalembert_study};

fn main() -> degcauchy::Result<()> {
    let data = CauchyData::from_presets(&DataPreset::Quadratic, &DataPreset::Constant { value: 1.0 });
    let points = TargetSet { x_range: [0.35, 0.5], y_range: [-0.08, -0.02], n: 5 }.points();
    let st = dalembert_study(&data, &[0.04, 0.02, 0.01], &points, &QuadratureSpec::default(), &EvalConfig::default())?;
    print!("{}", dalembert_csv(&st));
    Ok(())
}
