//! Seeded random check of every relation between the series families.

use degcauchy::identities::{run_suite, summary_csv, RelationId};
use degcauchy::special_fn::EvalConfig;

fn main() {
    let draws = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let t = std::time::Instant::now();
    let res = run_suite(&RelationId::ALL, draws, 42, &EvalConfig::with_tol(1e-14));
    print!("{}", summary_csv(&res));
    eprintln!("{:.1}s, pass = {}", t.elapsed().as_secs_f64(), res.pass());
}
