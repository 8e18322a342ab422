//! Prints a Homo sweep as CSV: `cargo run --release --example sweep -- 10,20,40 100`.

use exact_rank::harness::{run_benchmark, Algorithm, TrialSpec};
use exact_rank::instance::Family;

fn main() -> exact_rank::Result<()> {
    let mut args = std::env::args().skip(1);
    let sweep = args
        .next()
        .unwrap_or_else(|| "10,20,40".into())
        .split(',')
        .map(|s| s.trim().parse().expect("sweep entries are integers"))
        .collect();
    let trials = args.next().map_or(100, |s| s.parse().expect("trial count"));
    let spec = TrialSpec {
        family: Family::Homo,
        sweep,
        delta_gap: Some(0.1),
        confidence: 0.01,
        algorithm: Algorithm::Iir,
        trials,
        master_seed: 42,
    };
    let start = std::time::Instant::now();
    let report = run_benchmark(&spec)?;
    print!("{}", report.to_csv()?);
    for p in &report.points {
        let c = p.aggregates.mean_comparisons / (p.n as f64 * (p.n as f64).ln());
        eprintln!("n={} c={c:.1} ratio={:.3}", p.n, p.ratio);
    }
    eprintln!("elapsed {:?}", start.elapsed());
    Ok(())
}
