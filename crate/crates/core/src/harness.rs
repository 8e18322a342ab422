//! Seeded Monte-Carlo benchmark runner.
//!
//! For every `n` in a sweep one instance is drawn and shared by all trials
//! at that `n`; trials differ only in the randomness of the oracle and the
//! algorithm. Every random stream is derived from the master seed by
//! [`stream_rng`], so reports do not depend on scheduling or thread count.

use std::fmt;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{gap_profile, generate_instance, lower_bound_eq2, ComparisonOracle, Family, Instance, InstanceOracle};
use crate::listwise::{listwise_merge_sort, MergeCounter};
use crate::ranking::{iir, RankingOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    Iir,
    /// Listwise merge sort with merge width `m`.
    Lwms { m: usize },
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Iir => f.write_str("iir"),
            Algorithm::Lwms { m } => write!(f, "lwms(m={m})"),
        }
    }
}

/// Stream tags mixed into the per-trial generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Phase {
    Instance = 1,
    Trial = 2,
}

/// ChaCha8 seeded from `master_seed`, on stream
/// `phase << 56 | point << 32 | trial`.
///
/// `point` is the sweep value `n` (must fit in 24 bits) and `trial` the
/// 0-based trial index (32 bits).
pub fn stream_rng(master_seed: u64, point: u64, trial: u64, phase: Phase) -> ChaCha8Rng {
    debug_assert!(point < 1 << 24 && trial < 1 << 32);
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream((phase as u64) << 56 | point << 32 | trial);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSpec {
    pub family: Family,
    pub sweep: Vec<usize>,
    /// Gap parameter for `Homo` and `Random`; ignored for `Mnl`.
    pub delta_gap: Option<f64>,
    /// Confidence `delta` handed to the algorithm.
    pub confidence: f64,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub master_seed: u64,
}

impl TrialSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParam("need at least one trial".into()));
        }
        if self.sweep.is_empty() {
            return Err(Error::InvalidParam("sweep is empty".into()));
        }
        if let Some(&n) = self.sweep.iter().find(|&&n| !(2..1 << 24).contains(&n)) {
            return Err(Error::InvalidParam(format!("sweep value {n} is out of range")));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidParam(format!("confidence must lie in (0, 1), got {}", self.confidence)));
        }
        if let Algorithm::Lwms { m } = self.algorithm {
            if m < 2 {
                return Err(Error::InvalidParam(format!("merge width must be at least 2, got {m}")));
            }
        }
        // surfaces bad gaps before any trial runs
        let mut rng = stream_rng(self.master_seed, 0, 0, Phase::Instance);
        generate_instance(self.family, 2, self.delta_gap, &mut rng)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub success: bool,
    pub comparisons: u64,
    /// Monotonic wall time; informational only.
    pub wall_time_ns: u64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregates {
    pub error_rate: f64,
    pub mean_comparisons: f64,
    pub median_comparisons: f64,
    pub p95_comparisons: f64,
}

/// Error rate, mean, median (midpoint for even counts) and nearest-rank
/// 95th percentile of the comparison counts.
pub fn aggregate(records: &[TrialRecord]) -> Aggregates {
    let count = records.len();
    if count == 0 {
        return Aggregates { error_rate: 0.0, mean_comparisons: 0.0, median_comparisons: 0.0, p95_comparisons: 0.0 };
    }
    let failures = records.iter().filter(|r| !r.success).count();
    let mut costs: Vec<u64> = records.iter().map(|r| r.comparisons).collect();
    costs.sort_unstable();
    let mean = costs.iter().map(|&c| c as f64).sum::<f64>() / count as f64;
    let median = if count % 2 == 1 {
        costs[count / 2] as f64
    } else {
        (costs[count / 2 - 1] as f64 + costs[count / 2] as f64) / 2.0
    };
    let rank = ((0.95 * count as f64).ceil() as usize).clamp(1, count);
    Aggregates {
        error_rate: failures as f64 / count as f64,
        mean_comparisons: mean,
        median_comparisons: median,
        p95_comparisons: costs[rank - 1] as f64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub n: usize,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub bound_eq2: f64,
    /// `mean_comparisons / bound_eq2`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub spec: TrialSpec,
    pub points: Vec<PointReport>,
}

pub const CSV_HEADER: [&str; 13] = [
    "family",
    "n",
    "delta_gap",
    "confidence",
    "algorithm",
    "trials",
    "master_seed",
    "error_rate",
    "mean_comparisons",
    "median_comparisons",
    "p95_comparisons",
    "bound_eq2",
    "ratio",
];

impl BenchmarkReport {
    /// One row per sweep point, floats with 6 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidParam(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        let s = &self.spec;
        for p in &self.points {
            let a = &p.aggregates;
            w.write_record([
                s.family.to_string(),
                p.n.to_string(),
                s.delta_gap.filter(|_| s.family.needs_delta()).map(sig6).unwrap_or_default(),
                sig6(s.confidence),
                s.algorithm.to_string(),
                s.trials.to_string(),
                s.master_seed.to_string(),
                sig6(a.error_rate),
                sig6(a.mean_comparisons),
                sig6(a.median_comparisons),
                sig6(a.p95_comparisons),
                sig6(p.bound_eq2),
                sig6(p.ratio),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidParam(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// `%.6g`-style rendering: 6 significant digits, trailing zeros dropped,
/// exponent form outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// True iff the returned ranking is exactly the hidden one.
pub fn verify_ranking(outcome: &RankingOutcome, instance: &Instance) -> bool {
    outcome.ranking == instance.true_ranking()
}

pub fn run_benchmark(spec: &TrialSpec) -> Result<BenchmarkReport> {
    spec.validate()?;
    let points = spec
        .sweep
        .iter()
        .map(|&n| run_point(spec, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkReport { spec: spec.clone(), points })
}

/// Draws the shared instance for sweep point `n`.
pub fn point_instance(spec: &TrialSpec, n: usize) -> Result<Instance> {
    let mut rng = stream_rng(spec.master_seed, n as u64, 0, Phase::Instance);
    Ok(generate_instance(spec.family, n, spec.delta_gap, &mut rng)?.with_provenance(format!(
        "harness family={} n={n} seed={}",
        spec.family, spec.master_seed
    )))
}

fn run_point(spec: &TrialSpec, n: usize) -> Result<PointReport> {
    let instance = point_instance(spec, n)?;
    let records = run_trials(spec, &instance);
    let aggregates = aggregate(&records);
    let bound_eq2 = lower_bound_eq2(&gap_profile(&instance).delta_tilde_i, n, spec.confidence)?;
    Ok(PointReport { n, records, aggregates, bound_eq2, ratio: aggregates.mean_comparisons / bound_eq2 })
}

#[cfg(feature = "parallel")]
fn run_trials(spec: &TrialSpec, instance: &Instance) -> Vec<TrialRecord> {
    use rayon::prelude::*;
    (0..spec.trials).into_par_iter().map(|t| run_trial(spec, instance, t)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_trials(spec: &TrialSpec, instance: &Instance) -> Vec<TrialRecord> {
    (0..spec.trials).map(|t| run_trial(spec, instance, t)).collect()
}

/// Runs one trial on its own oracle and random stream.
pub fn run_trial(spec: &TrialSpec, instance: &Instance, trial: usize) -> TrialRecord {
    let n = instance.n();
    let mut rng = stream_rng(spec.master_seed, n as u64, trial as u64, Phase::Trial);
    let mut oracle = InstanceOracle::new(instance);
    let start = Instant::now();
    let (result, comparisons) = match spec.algorithm {
        Algorithm::Iir => {
            let r = iir(&mut oracle, n, spec.confidence, &mut rng).map(|o| o.ranking);
            (r, oracle.stats().total())
        }
        Algorithm::Lwms { m } => {
            let items: Vec<usize> = (1..=n).collect();
            let mut counter = MergeCounter::default();
            let r = listwise_merge_sort(&mut oracle, &items, m, &mut counter, &mut rng);
            (r, counter.listwise_comparisons)
        }
    };
    let wall_time_ns = start.elapsed().as_nanos() as u64;
    match result {
        Ok(ranking) => TrialRecord {
            trial,
            success: ranking == instance.true_ranking(),
            comparisons,
            wall_time_ns,
            failure: None,
        },
        Err(e) => TrialRecord { trial, success: false, comparisons, wall_time_ns, failure: Some(e.to_string()) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(success: bool, comparisons: u64) -> TrialRecord {
        TrialRecord { trial: 0, success, comparisons, wall_time_ns: 0, failure: None }
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(0.01), "0.01");
        assert_eq!(sig6(7741.787724), "7741.79");
        assert_eq!(sig6(123456789.0), "1.23457e+08");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(0.000012345678), "1.23457e-05");
        assert_eq!(sig6(999999.7), "1e+06");
        assert_eq!(sig6(-2.5), "-2.5");
        assert_eq!(sig6(100.0), "100");
    }

    #[test]
    fn aggregates_by_hand() {
        let rs: Vec<_> = (1..=20).map(|c| record(c != 7, c * 10)).collect();
        let a = aggregate(&rs);
        assert_eq!(a.error_rate, 0.05);
        assert_eq!(a.mean_comparisons, 105.0);
        assert_eq!(a.median_comparisons, 105.0);
        assert_eq!(a.p95_comparisons, 190.0);
        let a = aggregate(&[record(true, 3)]);
        assert_eq!((a.median_comparisons, a.p95_comparisons), (3.0, 3.0));
    }

    #[test]
    fn streams_are_distinct() {
        use rand::Rng;
        let a: u64 = stream_rng(1, 10, 0, Phase::Trial).gen();
        let b: u64 = stream_rng(1, 10, 1, Phase::Trial).gen();
        let c: u64 = stream_rng(1, 10, 0, Phase::Instance).gen();
        let d: u64 = stream_rng(1, 10, 0, Phase::Trial).gen();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, d);
    }

    #[test]
    fn verify() {
        let inst = Instance::mnl(vec![1.0, 3.0, 2.0], None).unwrap();
        let mk = |r: Vec<usize>| RankingOutcome { ranking: r, comparisons: 0, per_item_cost: vec![], attempts: vec![] };
        assert!(verify_ranking(&mk(vec![2, 3, 1]), &inst));
        assert!(!verify_ranking(&mk(vec![3, 2, 1]), &inst));
        assert!(!verify_ranking(&mk(vec![2, 1, 3]), &inst));
        let one = Instance::mnl(vec![1.0], None).unwrap();
        assert!(verify_ranking(&mk(vec![1]), &one));
    }

    #[test]
    fn spec_validation() {
        let ok = TrialSpec {
            family: Family::Homo,
            sweep: vec![5],
            delta_gap: Some(0.1),
            confidence: 0.1,
            algorithm: Algorithm::Iir,
            trials: 2,
            master_seed: 1,
        };
        assert!(ok.validate().is_ok());
        assert!(TrialSpec { trials: 0, ..ok.clone() }.validate().is_err());
        assert!(TrialSpec { sweep: vec![], ..ok.clone() }.validate().is_err());
        assert!(TrialSpec { delta_gap: None, ..ok.clone() }.validate().is_err());
        assert!(TrialSpec { confidence: 1.0, ..ok.clone() }.validate().is_err());
        assert!(TrialSpec { algorithm: Algorithm::Lwms { m: 1 }, ..ok.clone() }.validate().is_err());
    }

    #[test]
    fn lwms_on_matrix_records_failures() {
        let spec = TrialSpec {
            family: Family::Homo,
            sweep: vec![6],
            delta_gap: Some(0.1),
            confidence: 0.1,
            algorithm: Algorithm::Lwms { m: 3 },
            trials: 3,
            master_seed: 5,
        };
        let report = run_benchmark(&spec).unwrap();
        let p = &report.points[0];
        assert_eq!(p.aggregates.error_rate, 1.0);
        assert!(p.records.iter().all(|r| r.failure.is_some()));
    }
}
