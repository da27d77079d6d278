//! Acceptance run: eight criteria, one PASS/FAIL line each. Exits nonzero if any fails.

#![allow(clippy::needless_range_loop)]

use degcauchy::cauchy::{CauchyData, CauchySolver, DataPreset, GridSpec};
use degcauchy::config::{Tolerances, VerifyConfig};
use degcauchy::identities::{run_suite, RelationId};
use degcauchy::quadrature::{beta_fn, EndpointWeightedRule, QuadratureSpec};
use degcauchy::riemann::{
    char_operator_residual, char_params, riemann_args, riemann_function, CharPoint, PhysicalPoint, ProblemParams,
    RiemannForm,
};
use degcauchy::special_fn::{
    gauss_f, phi, psi_pq, xi2, xi_pq, EvalConfig, GaussParams, PhiParams, PsiPQParams, Xi2Params, XiPQParams,
};
use degcauchy::verification::{compare_with_oracle, dalembert_study, residual_refinement, OracleConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// max that treats NaN as infinitely bad.
fn worse(acc: f64, x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        acc.max(x)
    }
}

fn lib<T>(r: degcauchy::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- 1

fn identity_suite() -> Outcome {
    let t = Instant::now();
    let res = run_suite(&RelationId::ALL, 200, 42, &EvalConfig::with_tol(1e-14));
    let secs = t.elapsed().as_secs_f64();
    let worst: Vec<String> = res
        .summaries
        .iter()
        .filter(|s| !s.pass)
        .map(|s| format!("{} max {:.2e} (> {:.0e}, {} failed draws)", s.id, s.max_rel_residual, s.threshold, s.failures))
        .collect();
    let evals: usize = res.summaries.iter().map(|s| s.evaluations).sum();
    check(
        res.pass() && secs <= 120.0,
        if worst.is_empty() {
            format!("{} relations, {evals} evaluations, {secs:.1}s", res.summaries.len())
        } else {
            format!("{}; {secs:.1}s", worst.join(", "))
        },
    )
}

// ---------------------------------------------------------------- 2

fn away_from_poles(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v: f64 = rng.random_range(-0.9..2.0);
        if v > 0.0 || (v - v.round()).abs() >= 0.1 {
            return v;
        }
    }
}

fn upper(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-0.9..2.0)
}

/// Ratio table r_l = (x)_l / (y)_l, l < n.
fn ratio_table(x: f64, y: f64, n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n);
    let mut r = 1.0;
    for l in 0..n {
        t.push(r);
        r *= (x + l as f64) / (y + l as f64);
    }
    t
}

struct Naive {
    value: f64,
    /// Largest |term| on the outer boundary of the summation box.
    edge: f64,
}

fn naive_f(a: f64, b: f64, c: f64, z: f64, n: usize) -> Naive {
    let mut t = 1.0f64;
    let mut value = 0.0;
    for m in 0..n {
        value += t;
        if m + 1 < n {
            let mf = m as f64;
            t *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * z;
        }
    }
    Naive { value, edge: t.abs() }
}

/// Xi_pq by rows: (c)_{m+k} = (c)_m (c+m)_k.
fn naive_xipq(p: &XiPQParams, s: f64, r: f64, n: usize) -> Naive {
    let pk = ratio_table(p.a_prime, p.c_prime, n);
    let qs = ratio_table(p.b_prime, p.d_prime, 2 * n);
    let (mut value, mut edge) = (0.0, 0.0f64);
    let mut row = 1.0; // (a)_m (b)_m s^m / (m! (c)_m)
    for m in 0..n {
        let mf = m as f64;
        let mut col = 1.0; // r^k / (k! (c+m)_k)
        for k in 0..n {
            let kf = k as f64;
            let pf = if p.p == 1 { pk[k] } else { 1.0 };
            let qf = if p.q == 1 { qs[m + k] } else { 1.0 };
            let t = row * col * pf * qf;
            value += t;
            if m == n - 1 || k == n - 1 {
                edge = edge.max(t.abs());
            }
            col *= r / ((kf + 1.0) * (p.c + mf + kf));
        }
        row *= (p.a + mf) * (p.b + mf) / ((p.c + mf) * (mf + 1.0)) * s;
    }
    Naive { value, edge }
}

fn naive_phi(p: &PhiParams, s: f64, w: f64, r: f64, n: usize) -> Naive {
    let (mut value, mut edge) = (0.0, 0.0f64);
    let mut t_m = 1.0f64; // (a)_m (c)_m s^m / (m! (e)_m)
    for m in 0..n {
        let mf = m as f64;
        let mut t_j = t_m; // times (b)_j (d)_j w^j / (j! (e+m)_j)
        for j in 0..n {
            let jf = j as f64;
            let mut t: f64 = t_j; // times r^k / (k! (e+m+j)_k)
            for k in 0..n {
                let kf = k as f64;
                value += t;
                if m == n - 1 || j == n - 1 || k == n - 1 {
                    edge = edge.max(t.abs());
                }
                t *= r / ((kf + 1.0) * (p.e + mf + jf + kf));
            }
            t_j *= (p.b + jf) * (p.d + jf) / ((jf + 1.0) * (p.e + mf + jf)) * w;
        }
        t_m *= (p.a + mf) * (p.c + mf) / ((mf + 1.0) * (p.e + mf)) * s;
    }
    Naive { value, edge }
}

fn naive_psipq(p: &PsiPQParams, s: f64, th: f64, r: f64, n: usize, n_inner: usize) -> Naive {
    let pk = ratio_table(p.a_prime, p.c_prime, n);
    let qs = ratio_table(p.b_prime, p.d_prime, 2 * n);
    let inner: Vec<Naive> =
        (0..2 * n).map(|l| naive_f(p.b, p.e - p.d + l as f64, p.e + l as f64, th, n_inner)).collect();
    let (mut value, mut edge) = (0.0, 0.0f64);
    let mut row = 1.0; // (a)_m (c)_m s^m / (m! (e)_m)
    for m in 0..n {
        let mf = m as f64;
        let mut col = 1.0; // r^k / (k! (e+m)_k)
        for k in 0..n {
            let kf = k as f64;
            let l = m + k;
            let pf = if p.p == 1 { pk[k] } else { 1.0 };
            let qf = if p.q == 1 { qs[l] } else { 1.0 };
            let outer = row * col * pf * qf;
            let t = outer * inner[l].value;
            value += t;
            edge = edge.max((outer * inner[l].edge).abs());
            if m == n - 1 || k == n - 1 {
                edge = edge.max(t.abs());
            }
            col *= r / ((kf + 1.0) * (p.e + mf + kf));
        }
        row *= (p.a + mf) * (p.c + mf) / ((mf + 1.0) * (p.e + mf)) * s;
    }
    Naive { value, edge }
}

fn brute_force_oracle() -> Outcome {
    let cfg = EvalConfig::with_tol(1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [0.0f64; 5];
    let mut edge = 0.0f64;
    let mut record = |fam: usize, lib_v: f64, nv: Naive| {
        let d = (lib_v - nv.value).abs() / nv.value.abs().max(1.0);
        // NaN must not slip through f64::max
        worst[fam] = if d.is_finite() { worst[fam].max(d) } else { f64::INFINITY };
        let e = nv.edge / nv.value.abs().max(1.0);
        edge = if e.is_finite() { edge.max(e) } else { f64::INFINITY };
    };
    for _ in 0..50 {
        let (a, b, c) = (upper(&mut rng), upper(&mut rng), away_from_poles(&mut rng));
        let s: f64 = rng.random_range(-0.5..0.5);
        let r: f64 = rng.random_range(-1.0..1.0);
        record(0, lib(gauss_f(&GaussParams { a, b, c }, s, &cfg))?.value, naive_f(a, b, c, s, 200));
        record(1, lib(xi2(&Xi2Params { a, b, c }, s, r, &cfg))?.value, naive_xipq(&XiPQParams::xi00(a, b, c), s, r, 90));
    }
    for _ in 0..50 {
        let pp = PhiParams { a: upper(&mut rng), b: upper(&mut rng), c: upper(&mut rng), d: upper(&mut rng), e: away_from_poles(&mut rng) };
        let (s, w, r) = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-1.0..1.0));
        record(2, lib(phi(&pp, s, w, r, &cfg))?.value, naive_phi(&pp, s, w, r, 70));
    }
    for draw in 0..50 {
        let (p, q) = ((draw % 2) as u8, ((draw / 2) % 2) as u8);
        let xp = XiPQParams {
            a: upper(&mut rng),
            b: upper(&mut rng),
            a_prime: upper(&mut rng),
            b_prime: upper(&mut rng),
            c: away_from_poles(&mut rng),
            c_prime: away_from_poles(&mut rng),
            d_prime: away_from_poles(&mut rng),
            p,
            q,
        };
        let (s, r) = (rng.random_range(-0.5..0.5), rng.random_range(-1.0..1.0));
        record(3, lib(xi_pq(&xp, s, r, &cfg))?.value, naive_xipq(&xp, s, r, 90));
    }
    for draw in 0..50 {
        let (p, q) = ((draw % 2) as u8, ((draw / 2) % 2) as u8);
        let pp = PsiPQParams {
            a: upper(&mut rng),
            b: upper(&mut rng),
            c: upper(&mut rng),
            d: upper(&mut rng),
            e: away_from_poles(&mut rng),
            a_prime: upper(&mut rng),
            b_prime: upper(&mut rng),
            c_prime: away_from_poles(&mut rng),
            d_prime: away_from_poles(&mut rng),
            p,
            q,
        };
        let (s, th, r) = (rng.random_range(-0.5..0.5), rng.random_range(-0.45..0.45), rng.random_range(-1.0..1.0));
        record(4, lib(psi_pq(&pp, s, th, r, &cfg))?.value, naive_psipq(&pp, s, th, r, 90, 200));
    }
    let names = ["F", "Xi2", "Phi", "XiPQ", "PsiPQ"];
    let detail = names.iter().zip(&worst).map(|(n, w)| format!("{n} {w:.1e}")).collect::<Vec<_>>().join(", ");
    check(
        worst.iter().all(|&w| w <= 1e-11) && edge < 1e-14,
        format!("max rel deviation: {detail}; naive truncation edge {edge:.1e}"),
    )
}

// ---------------------------------------------------------------- 3

fn riemann_checks() -> Outcome {
    let cfg = EvalConfig::with_tol(1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let triples = [(0.5, 0.5, -2.0), (0.3, 0.2, 4.0), (0.7, 0.0, 1.0), (0.5, 0.8, 0.0)];

    let mut unit = 0.0f64;
    for &(m, n, mu) in &triples {
        let cp = char_params(&lib(ProblemParams::new(m, n, mu))?);
        for _ in 0..10 {
            let xi0 = rng.random_range(0.0..0.9);
            let c0 = CharPoint { xi: xi0, eta: rng.random_range(xi0 + 0.05..1.0) };
            unit = worse(unit, (lib(riemann_function(&c0, &c0, &cp, RiemannForm::Auto, &cfg))? - 1.0).abs());
        }
    }

    let mut forms = 0.0f64;
    let mut pairs = 0;
    while pairs < 100 {
        let (m, n, mu) = triples[pairs % triples.len()];
        let cp = char_params(&lib(ProblemParams::new(m, n, mu))?);
        let xi0 = rng.random_range(0.0..0.8);
        let eta0 = rng.random_range(xi0 + 0.1..1.0);
        let xi = rng.random_range(xi0..eta0);
        let eta = rng.random_range(xi..eta0);
        let (c, c0) = (CharPoint { xi, eta }, CharPoint { xi: xi0, eta: eta0 });
        match riemann_args(&c, &c0, &cp) {
            Ok(ra) if ra.omega.abs() < 0.9 => {}
            _ => continue,
        }
        let a = lib(riemann_function(&c, &c0, &cp, RiemannForm::Phi, &cfg))?;
        let b = lib(riemann_function(&c, &c0, &cp, RiemannForm::Psi, &cfg))?;
        forms = worse(forms, (a - b).abs() / a.abs().max(1.0));
        pairs += 1;
    }

    let mut min_order = f64::INFINITY;
    for &(m, n, mu) in &triples {
        let cp = char_params(&lib(ProblemParams::new(m, n, mu))?);
        let c = CharPoint { xi: 0.3, eta: 0.6 };
        let u = |xi: f64, eta: f64| riemann_function(&c, &CharPoint { xi, eta }, &cp, RiemannForm::Auto, &cfg);
        let r: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|&h| lib(char_operator_residual(u, 0.2, 0.8, h, &cp)).map(f64::abs))
            .collect::<Result<_, _>>()?;
        for w in r.windows(2) {
            let o = (w[0] / w[1]).log2();
            min_order = if o.is_nan() { f64::NEG_INFINITY } else { min_order.min(o) };
        }
    }
    check(
        unit <= 1e-14 && forms <= 1e-10 && min_order >= 1.8,
        format!("|R(c0;c0) - 1| {unit:.1e}; form gap {forms:.1e} over 100 pairs; min residual order {min_order:.2}"),
    )
}

// ---------------------------------------------------------------- 4

fn exactness_anchors() -> Outcome {
    let q = QuadratureSpec::default();
    let cfg = EvalConfig::default();
    let gs = GridSpec { x_range: [0.3, 0.45], y_range: [-0.1, -0.02], nx: 9, ny: 9 };

    let mut constant = 0.0f64;
    for (m, n) in [(0.5, 0.5), (0.3, 0.2), (0.6, 0.3)] {
        let solver = lib(CauchySolver::new(lib(ProblemParams::new(m, n, 0.0))?, q, cfg))?;
        let data = CauchyData::from_presets(&DataPreset::Constant { value: 1.0 }, &DataPreset::Zero);
        let f = lib(solver.solve_grid(&gs, &data))?;
        for s in &f.samples {
            constant = worse(constant, if s.converged { (s.v - 1.0).abs() } else { f64::INFINITY });
        }
    }

    let solver = lib(CauchySolver::new(lib(ProblemParams::new(0.5, 0.5, -2.0))?, q, cfg))?;
    let d1 = CauchyData::from_presets(&DataPreset::Sine, &DataPreset::Quadratic);
    let d2 = CauchyData::from_presets(&DataPreset::Quadratic, &DataPreset::Linear);
    let (a, b) = (1.7, -0.6);
    let comb = CauchyData::combine(a, &d1, b, &d2);
    let mut linear = 0.0f64;
    for p in (GridSpec { nx: 4, ny: 4, ..gs.clone() }).points() {
        let lhs = lib(solver.solve_v(&p, &comb))?;
        let rhs = a * lib(solver.solve_v(&p, &d1))? + b * lib(solver.solve_v(&p, &d2))?;
        linear = worse(linear, (lhs - rhs).abs() / lhs.abs().max(1.0));
    }

    let spec = QuadratureSpec { jacobi_order: 20, subdivisions: 1, target_tol: 1e-14 };
    let mut beta = 0.0f64;
    for g in [-0.9, -0.75, -0.5, -0.25, 0.0, 0.5, 1.5] {
        let rule = lib(EndpointWeightedRule::new(spec.jacobi_order, g))?;
        for (lo, hi) in [(0.0, 1.0), (0.2, 0.7)] {
            let v = lib(rule.integrate(|_| Ok(1.0), lo, hi, &spec))?.value;
            let exact = (hi - lo).powf(2.0 * g + 1.0) * beta_fn(g + 1.0, g + 1.0);
            beta = worse(beta, (v - exact).abs() / exact.abs().max(1.0));
        }
    }
    check(
        constant <= 1e-8 && linear <= 1e-11 && beta <= 1e-12,
        format!("constant data {constant:.1e}; linearity {linear:.1e}; Beta identity {beta:.1e}"),
    )
}

// ---------------------------------------------------------------- 5

fn initial_data() -> Outcome {
    let q = QuadratureSpec::default();
    let cfg = EvalConfig::default();
    let data = CauchyData::from_presets(&DataPreset::Quadratic, &DataPreset::Zero);
    let mut lines = Vec::new();
    let mut ok = true;
    for (m, n, mu) in [(0.5, 0.5, -2.0), (0.3, 0.2, 4.0), (0.5, 0.0, 0.0)] {
        let pp = lib(ProblemParams::new(m, n, mu))?;
        let solver = lib(CauchySolver::new(pp, q, cfg))?;
        let mut devs = Vec::new();
        for y0 in [1e-2, 3e-3, 1e-3] {
            let mut dev = 0.0f64;
            for x in [0.3, 0.4, 0.5] {
                let v = lib(solver.solve_v(&PhysicalPoint { x, y: pp.y_of(y0) }, &data))?;
                dev = worse(dev, (v - DataPreset::Quadratic.value(x)).abs());
            }
            devs.push(dev);
        }
        ok &= devs.windows(2).all(|w| w[1] < w[0]) && devs[2] <= 1e-4;
        lines.push(format!("({m}, {n}, {mu}): {:.1e} {:.1e} {:.1e}", devs[0], devs[1], devs[2]));
    }
    check(ok, format!("deviation at y0 = 1e-2, 3e-3, 1e-3: {}", lines.join("; ")))
}

// ---------------------------------------------------------------- 6

fn pde_residual_order() -> Outcome {
    let pp = lib(ProblemParams::new(0.5, 0.5, -2.0))?;
    let q = QuadratureSpec { jacobi_order: 24, subdivisions: 1, target_tol: 1e-14 };
    let solver = lib(CauchySolver::new(pp, q, EvalConfig::with_tol(1e-15)))?;
    let data = CauchyData::from_presets(&DataPreset::Sine, &DataPreset::Quadratic);
    let fields = [33, 65, 129]
        .iter()
        .map(|&n| solver.solve_grid(&GridSpec { x_range: [0.3, 0.45], y_range: [-0.1, -0.02], nx: n, ny: n }, &data))
        .collect::<degcauchy::Result<Vec<_>>>();
    let fields = lib(fields)?;
    let failures: usize = fields.iter().map(|f| f.failures()).sum();
    let reps = lib(residual_refinement(&fields, &pp))?;
    let rates = reps[0].refinement_rates.clone();
    let min_order = Tolerances::default().residual_min_order;
    check(
        failures == 0 && rates.len() == 2 && rates.iter().all(|&r| r >= min_order),
        format!(
            "residual_max {:.2e}, {:.2e}, {:.2e}; orders {:.2}, {:.2}; {failures} unconverged points",
            reps[0].residual_max, reps[1].residual_max, reps[2].residual_max, rates[0], rates[1]
        ),
    )
}

// ---------------------------------------------------------------- 7

fn cross_method() -> Outcome {
    let t = Instant::now();
    let vc = VerifyConfig::default();
    let tol = Tolerances::default();
    let targets = vc.targets.points();
    let data = CauchyData::from_presets(&DataPreset::Sine, &DataPreset::Quadratic);
    let oc = OracleConfig { dx: 1.0 / 1024.0, ..Default::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, n, mu) in [(0.5, 0.0, 0.0), (0.5, 0.5, -2.0), (0.3, 0.2, 4.0)] {
        let solver = lib(CauchySolver::new(lib(ProblemParams::new(m, n, mu))?, QuadratureSpec::default(), EvalConfig::default()))?;
        let rows = lib(compare_with_oracle(&solver, &data, &oc, &targets, tol.oracle_floor))?;
        ok &= rows.len() == 25 && rows.iter().all(|r| r.pass);
        let dev = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
        parts.push(format!("({m}, {n}, {mu}) {dev:.1e}"));
    }
    let wave = CauchyData::from_presets(&DataPreset::Quadratic, &DataPreset::Constant { value: 1.0 });
    let st = lib(dalembert_study(&wave, &vc.dalembert_ms, &targets, &QuadratureSpec::default(), &EvalConfig::default()))?;
    let rates_ok = st.rates.iter().all(|&r| r >= tol.dalembert_min_rate);
    let shrinking = st.deviations.windows(2).all(|w| w[1] < w[0]);
    let secs = t.elapsed().as_secs_f64();
    check(
        ok && rates_ok && shrinking && secs <= 300.0,
        format!(
            "oracle max deviation {}; d'Alembert deviations {:.2e} {:.2e} {:.2e}, rates {:.2} {:.2}; {secs:.1}s",
            parts.join(", "),
            st.deviations[0],
            st.deviations[1],
            st.deviations[2],
            st.rates[0],
            st.rates[1]
        ),
    )
}

// ---------------------------------------------------------------- 8

fn run_cli(args: &[&str]) -> i32 {
    degcauchy::cli::run(std::iter::once("degcauchy").chain(args.iter().copied()))
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    let cfg_path = root.join("run.toml");
    std::fs::write(
        &cfg_path,
        "[problem]\nm = 0.3\nn = 0.2\nmu = 4.0\n\n[data]\ntau1 = { kind = \"sine\" }\nnu1 = { kind = \"quadratic\" }\n\n\
         [grid]\nx_range = [0.35, 0.5]\ny_range = [-0.08, -0.02]\nnx = 7\nny = 7\n",
    )
    .map_err(|e| e.to_string())?;
    let cfg = cfg_path.to_str().unwrap();
    let mut same = Vec::new();
    for run in ["a", "b"] {
        let out = root.join(run);
        let out = out.to_str().unwrap();
        let codes = [
            run_cli(&["identities", "--all", "--draws", "5", "--seed", "11", "--out", out]),
            run_cli(&["solve", "--config", cfg, "--out", out]),
            run_cli(&["verify", "oracle", "--config", cfg, "--out", out]),
        ];
        if codes.iter().any(|&c| c != 0) {
            return Err(format!("run {run}: exit codes {codes:?}"));
        }
    }
    for f in ["identities_report.csv", "identities_summary.csv", "solution.csv", "solution.json", "verify_oracle.csv"] {
        let a = std::fs::read(root.join("a").join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(root.join("b").join(f)).map_err(|e| e.to_string())?;
        same.push((f, a == b && !a.is_empty()));
    }
    check(
        same.iter().all(|s| s.1),
        same.iter().map(|(f, s)| format!("{f} {}", if *s { "identical" } else { "DIFFERS" })).collect::<Vec<_>>().join(", "),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("identity suite", identity_suite),
        ("brute-force series oracle", brute_force_oracle),
        ("Riemann function", riemann_checks),
        ("exactness anchors", exactness_anchors),
        ("initial-data reproduction", initial_data),
        ("PDE residual order", pde_residual_order),
        ("cross-method comparison", cross_method),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{}] {name}: {detail} ({:.1}s)", k + 1, t.elapsed().as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
