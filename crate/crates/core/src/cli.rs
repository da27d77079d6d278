//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 failure (non-convergence, failed check, runtime
//! error), 2 usage or configuration error.

use crate::cauchy::{CauchySolver, GridSpec};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::identities::{report_csv, run_suite, summary_csv, RelationId};
use crate::special_fn::{
    gauss_f, phi, psi_pq, xi2, xi_pq, EvalConfig, GaussParams, PhiParams, PsiPQParams, SeriesValue, Xi2Params,
    XiPQParams,
};
use crate::verification::{
    compare_with_oracle, comparison_csv, dalembert_csv, dalembert_study, residual_csv, residual_refinement,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

/// Environment variable that overrides the default output directory.
pub const OUT_DIR_ENV: &str = "DEGCAUCHY_OUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Residuals at or below this are treated as exact (no refinement rate needed).
pub const RESIDUAL_ROUNDOFF: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "degcauchy", version, about = "Hypergeometric series, Riemann function and Cauchy solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one series family at a point.
    FnEval(FnEvalArgs),
    /// Randomised check of the series relations.
    Identities(IdentitiesArgs),
    /// Solve the Cauchy problem on the configured grid.
    Solve(SolveArgs),
    /// Run a verification study from a config file.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lower")]
enum Family {
    F,
    Xi2,
    Phi,
    Xipq,
    Psipq,
}

impl Family {
    fn arity(self) -> usize {
        match self {
            Family::F | Family::Xi2 => 3,
            Family::Phi => 5,
            Family::Xipq => 9,
            Family::Psipq => 11,
        }
    }

    fn signature(self) -> &'static str {
        match self {
            Family::F => "a b c",
            Family::Xi2 => "a b c",
            Family::Phi => "a b c d e",
            Family::Xipq => "p q a b a' b' c c' d'",
            Family::Psipq => "p q a b c d e a' b' c' d'",
        }
    }
}

#[derive(Debug, Args)]
struct FnEvalArgs {
    #[arg(value_enum, ignore_case = true)]
    family: Family,
    /// F, Xi2: a b c. Phi: a b c d e. XiPQ: p q a b a' b' c c' d'. PsiPQ: p q a b c d e a' b' c' d'.
    #[arg(allow_negative_numbers = true)]
    params: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    omega: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
}

#[derive(Debug, Args)]
struct IdentitiesArgs {
    /// Comma-separated relation ids, e.g. R10,D17,L20.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    relations: Vec<String>,
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 200)]
    draws: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides tolerances.series_rel_tol.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Residual,
    Oracle,
    Dalembert,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    mode: Mode,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
}

/// Parse `args` (program name first) and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let r = match cli.cmd {
        Command::FnEval(a) => fn_eval(&a),
        Command::Identities(a) => identities(&a),
        Command::Solve(a) => solve(&a),
        Command::Verify(a) => verify(&a),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidParameter(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            }
        }
    }
}

/// `--out`, then the environment variable, then the config (or "out").
pub fn resolve_out_dir(flag: Option<&Path>, config_dir: Option<&str>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(config_dir.unwrap_or("out")),
    }
}

fn code(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

fn eval_config(tol: f64) -> Result<EvalConfig> {
    let c = EvalConfig::with_tol(tol);
    c.validate()?;
    Ok(c)
}

fn evaluate(a: &FnEvalArgs) -> Result<SeriesValue> {
    let fam = a.family;
    if a.params.len() != fam.arity() {
        return Err(Error::InvalidParameter(format!(
            "{fam:?} takes {} parameters ({}), got {}",
            fam.arity(),
            fam.signature(),
            a.params.len()
        )));
    }
    let cfg = eval_config(a.tol)?;
    let p = &a.params;
    let flag = |v: f64, name: &str| -> Result<u8> {
        if v == 0.0 || v == 1.0 {
            Ok(v as u8)
        } else {
            Err(Error::InvalidParameter(format!("{name} must be 0 or 1, got {v}")))
        }
    };
    match fam {
        Family::F => gauss_f(&GaussParams { a: p[0], b: p[1], c: p[2] }, a.sigma, &cfg),
        Family::Xi2 => xi2(&Xi2Params { a: p[0], b: p[1], c: p[2] }, a.sigma, a.rho, &cfg),
        Family::Phi => phi(&PhiParams { a: p[0], b: p[1], c: p[2], d: p[3], e: p[4] }, a.sigma, a.omega, a.rho, &cfg),
        Family::Xipq => {
            let xp = XiPQParams {
                p: flag(p[0], "p")?,
                q: flag(p[1], "q")?,
                a: p[2],
                b: p[3],
                a_prime: p[4],
                b_prime: p[5],
                c: p[6],
                c_prime: p[7],
                d_prime: p[8],
            };
            xi_pq(&xp, a.sigma, a.rho, &cfg)
        }
        Family::Psipq => {
            let pp = PsiPQParams {
                p: flag(p[0], "p")?,
                q: flag(p[1], "q")?,
                a: p[2],
                b: p[3],
                c: p[4],
                d: p[5],
                e: p[6],
                a_prime: p[7],
                b_prime: p[8],
                c_prime: p[9],
                d_prime: p[10],
            };
            psi_pq(&pp, a.sigma, a.theta, a.rho, &cfg)
        }
    }
}

fn fn_eval(a: &FnEvalArgs) -> Result<i32> {
    match evaluate(a) {
        Ok(v) => {
            println!("value = {:.17e}", v.value);
            println!("tail = {:e}", v.tail_estimate);
            println!("terms = {}", v.terms_used);
            println!("converged = {}", v.converged);
            Ok(code(v.converged))
        }
        Err(Error::NonConvergence { terms, partial, tail }) => {
            println!("value = {partial:.17e}");
            println!("tail = {tail:e}");
            println!("terms = {terms}");
            println!("converged = false");
            Ok(EXIT_FAIL)
        }
        Err(e) => Err(e),
    }
}

fn identities(a: &IdentitiesArgs) -> Result<i32> {
    if a.draws == 0 {
        return Err(Error::InvalidParameter("--draws must be >= 1".into()));
    }
    let ids: Vec<RelationId> = if a.all || a.relations.is_empty() {
        RelationId::ALL.to_vec()
    } else {
        a.relations.iter().map(|s| s.trim().parse()).collect::<Result<_>>()?
    };
    let cfg = eval_config(a.tol)?;
    let res = run_suite(&ids, a.draws, a.seed, &cfg);
    let dir = resolve_out_dir(a.out.as_deref(), None);
    write_file(&dir, "identities_report.csv", &report_csv(&res))?;
    let summary = summary_csv(&res);
    write_file(&dir, "identities_summary.csv", &summary)?;
    print!("{summary}");
    println!("wrote {}", dir.display());
    Ok(code(res.pass()))
}

fn load(path: &Path, tol: Option<f64>) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(t) = tol {
        cfg.tolerances.series_rel_tol = t;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn solver(cfg: &RunConfig) -> Result<CauchySolver> {
    Ok(CauchySolver::new(cfg.problem, cfg.quadrature, cfg.eval_config())?.with_s_form(cfg.s_form))
}

fn solve(a: &SolveArgs) -> Result<i32> {
    let cfg = load(&a.config, a.tol)?;
    let field = solver(&cfg)?.solve_grid(&cfg.grid, &cfg.data.cauchy_data())?;
    let dir = resolve_out_dir(a.out.as_deref(), Some(&cfg.output.dir));
    field.write(&dir, &cfg.output.stem)?;
    let ok: Vec<f64> = field.samples.iter().filter(|s| s.converged).map(|s| s.v).collect();
    let min = ok.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ok.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("points = {}", field.samples.len());
    println!("failures = {}", field.failures());
    println!("min V = {min:e}");
    println!("max V = {max:e}");
    println!("wrote {}", dir.join(format!("{}.csv", cfg.output.stem)).display());
    Ok(code(field.failures() == 0))
}

fn verify(a: &VerifyArgs) -> Result<i32> {
    let cfg = load(&a.config, a.tol)?;
    let dir = resolve_out_dir(a.out.as_deref(), Some(&cfg.output.dir));
    let data = cfg.data.cauchy_data();
    let tols = &cfg.tolerances;
    let (name, csv, pass) = match a.mode {
        Mode::Residual => {
            let s = solver(&cfg)?;
            let fields = cfg
                .verify
                .refinement
                .iter()
                .map(|&n| s.solve_grid(&GridSpec { nx: n, ny: n, ..cfg.grid.clone() }, &data))
                .collect::<Result<Vec<_>>>()?;
            let failures: usize = fields.iter().map(|f| f.failures()).sum();
            let reps = residual_refinement(&fields, &cfg.problem)?;
            let exact = reps.iter().all(|r| r.residual_max <= RESIDUAL_ROUNDOFF);
            let rates = reps.first().map(|r| r.refinement_rates.clone()).unwrap_or_default();
            let ordered = !rates.is_empty() && rates.iter().all(|&r| r >= tols.residual_min_order);
            for r in &reps {
                println!("{}x{}: residual_max = {:e}", r.grid.nx, r.grid.ny, r.residual_max);
            }
            println!("rates = {rates:?} (min {})", tols.residual_min_order);
            ("verify_residual.csv", residual_csv(&reps), failures == 0 && (exact || ordered))
        }
        Mode::Oracle => {
            let rows = compare_with_oracle(&solver(&cfg)?, &data, &cfg.verify.oracle, &cfg.verify.targets.points(), tols.oracle_floor)?;
            let dev = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
            println!("max deviation = {dev:e} over {} targets", rows.len());
            ("verify_oracle.csv", comparison_csv(&rows), rows.iter().all(|r| r.pass))
        }
        Mode::Dalembert => {
            let st = dalembert_study(
                &data,
                &cfg.verify.dalembert_ms,
                &cfg.verify.targets.points(),
                &cfg.quadrature,
                &cfg.eval_config(),
            )?;
            println!("deviations = {:?}", st.deviations);
            println!("rates = {:?} (min {})", st.rates, tols.dalembert_min_rate);
            let pass = !st.rates.is_empty() && st.rates.iter().all(|&r| r >= tols.dalembert_min_rate);
            ("verify_dalembert.csv", dalembert_csv(&st), pass)
        }
    };
    let path = write_file(&dir, name, &csv)?;
    println!("{} -> {}", if pass { "PASS" } else { "FAIL" }, path.display());
    Ok(code(pass))
}
