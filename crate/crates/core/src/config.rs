//! Run configuration read from TOML.

use crate::cauchy::{CauchyData, DataPreset, GridSpec, SFactorForm};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::riemann::{PhysicalPoint, ProblemParams};
use crate::special_fn::{EvalConfig, ShellStrategy};
use crate::verification::OracleConfig;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataConfig {
    pub tau1: DataPreset,
    pub nu1: DataPreset,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig { tau1: DataPreset::Quadratic, nu1: DataPreset::Zero }
    }
}

impl DataConfig {
    pub fn cauchy_data(&self) -> CauchyData {
        CauchyData::from_presets(&self.tau1, &self.nu1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub series_rel_tol: f64,
    pub max_terms: usize,
    pub shell_strategy: ShellStrategy,
    /// Minimum observed order of the residual under refinement.
    pub residual_min_order: f64,
    /// Absolute floor of the formula-vs-oracle comparison.
    pub oracle_floor: f64,
    /// Minimum observed order in m of the wave-equation limit.
    pub dalembert_min_rate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            series_rel_tol: 1e-13,
            max_terms: 500,
            shell_strategy: ShellStrategy::Diagonal,
            residual_min_order: 2.0,
            oracle_floor: 1e-3,
            dalembert_min_rate: 1.0,
        }
    }
}

/// Targets on a small rectangular set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSet {
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub n: usize,
}

impl TargetSet {
    pub fn points(&self) -> Vec<PhysicalPoint> {
        GridSpec { x_range: self.x_range, y_range: self.y_range, nx: self.n, ny: self.n }.points()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    /// Points per axis of the residual refinement grids.
    pub refinement: Vec<usize>,
    pub dalembert_ms: Vec<f64>,
    pub targets: TargetSet,
    pub oracle: OracleConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            refinement: vec![33, 65, 129],
            dalembert_ms: vec![0.04, 0.02, 0.01],
            targets: TargetSet { x_range: [0.35, 0.5], y_range: [-0.08, -0.02], n: 5 },
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub dir: String,
    pub stem: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: "out".into(), stem: "solution".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemParams,
    #[serde(default)]
    pub data: DataConfig,
    pub grid: GridSpec,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub s_form: SFactorForm,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn field<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Config(format!("{name}: {e}")))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            rel_tol: self.tolerances.series_rel_tol,
            max_terms: self.tolerances.max_terms,
            shell_strategy: self.tolerances.shell_strategy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        field("problem", self.problem.validate())?;
        field("grid", self.grid.validate())?;
        field("quadrature", self.quadrature.validate())?;
        field("tolerances", self.eval_config().validate())?;
        field("data", self.data.cauchy_data().validate())?;
        field("verify.oracle", self.verify.oracle.validate())?;
        let t = &self.tolerances;
        if !(t.oracle_floor >= 0.0) || !t.residual_min_order.is_finite() || !t.dalembert_min_rate.is_finite() {
            return Err(Error::Config("tolerances: thresholds must be finite and non-negative".into()));
        }
        if self.verify.refinement.iter().any(|&n| n < 5) {
            return Err(Error::Config("verify.refinement: grids need >= 5 points per axis".into()));
        }
        if self.verify.dalembert_ms.iter().any(|&m| !(m > 0.0 && m <= 0.05)) {
            return Err(Error::Config("verify.dalembert_ms: values must lie in (0, 0.05]".into()));
        }
        let ts = &self.verify.targets;
        field(
            "verify.targets",
            GridSpec { x_range: ts.x_range, y_range: ts.y_range, nx: ts.n.max(1), ny: ts.n.max(1) }.validate(),
        )?;
        if ts.n == 0 {
            return Err(Error::Config("verify.targets: n must be positive".into()));
        }
        if self.output.stem.is_empty() || self.output.stem.contains(['/', '\\']) {
            return Err(Error::Config("output.stem must be a plain file stem".into()));
        }
        Ok(())
    }
}
