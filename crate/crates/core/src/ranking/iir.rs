use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use super::ati::{ati, AtiVerdict};
use crate::error::{Error, Result};
use crate::instance::ComparisonOracle;

/// Attempts before [`iai`] gives up. `eps_64 = 2^-65` is far below any gap
/// a double-precision instance can express.
pub const DEFAULT_SCHEDULE_CAP: u32 = 64;

/// Gap guesses `eps_t = 2^-(t+1)` and confidences `delta_t = 6 delta / (pi^2 t^2)`
/// for attempts `t = 1, 2, ...`; the confidences sum to `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsertionSchedule {
    pub delta: f64,
    pub cap: u32,
}

impl InsertionSchedule {
    pub fn new(delta: f64, cap: u32) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParam(format!("confidence must lie in (0, 1), got {delta}")));
        }
        if cap == 0 {
            return Err(Error::InvalidParam("schedule cap must be positive".into()));
        }
        Ok(Self { delta, cap })
    }

    pub fn epsilon(&self, attempt: u32) -> f64 {
        0.5f64.powi(attempt as i32 + 1)
    }

    pub fn confidence(&self, attempt: u32) -> f64 {
        let t = attempt as f64;
        6.0 * self.delta / (PI * PI * t * t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IaiOutcome {
    pub list: Vec<usize>,
    /// Index of the successful attempt, starting at 1.
    pub attempts: u32,
    pub comparisons: u64,
}

/// Inserts `i` into `sorted` by running ATI with halving gap guesses until
/// one attempt commits to a position.
pub fn iai<O, R>(
    oracle: &mut O,
    i: usize,
    sorted: &[usize],
    delta: f64,
    cap: u32,
    rng: &mut R,
) -> Result<IaiOutcome>
where
    O: ComparisonOracle + ?Sized,
    R: Rng + ?Sized,
{
    let schedule = InsertionSchedule::new(delta, cap)?;
    let before = oracle.stats().total();
    for attempt in 1..=cap {
        let verdict = ati(oracle, i, sorted, schedule.epsilon(attempt), schedule.confidence(attempt), rng)?;
        if let AtiVerdict::Inserted(list) = verdict {
            return Ok(IaiOutcome { list, attempts: attempt, comparisons: oracle.stats().total() - before });
        }
    }
    Err(Error::ScheduleExhausted { item: i, attempts: cap })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankingOutcome {
    /// Most preferred first.
    pub ranking: Vec<usize>,
    pub comparisons: u64,
    /// Comparisons spent inserting each item, indexed by `item - 1`. The
    /// first item seeds the list and costs nothing.
    pub per_item_cost: Vec<u64>,
    /// Successful attempt index per item, indexed by `item - 1`.
    pub attempts: Vec<u32>,
}

/// Ranks items `1..=n` by inserting `2..=n` one at a time into the growing
/// answer, each with confidence `delta / (n - 1)`.
pub fn iir<O, R>(oracle: &mut O, n: usize, delta: f64, rng: &mut R) -> Result<RankingOutcome>
where
    O: ComparisonOracle + ?Sized,
    R: Rng + ?Sized,
{
    iir_with_cap(oracle, n, delta, DEFAULT_SCHEDULE_CAP, rng)
}

pub fn iir_with_cap<O, R>(oracle: &mut O, n: usize, delta: f64, cap: u32, rng: &mut R) -> Result<RankingOutcome>
where
    O: ComparisonOracle + ?Sized,
    R: Rng + ?Sized,
{
    if n == 0 || n > oracle.num_items() {
        return Err(Error::InvalidParam(format!(
            "cannot rank {n} items with an oracle over {}",
            oracle.num_items()
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParam(format!("confidence must lie in (0, 1), got {delta}")));
    }
    let per_item = if n > 1 { delta / (n - 1) as f64 } else { delta };
    let mut answer = vec![1];
    let mut per_item_cost = vec![0; n];
    let mut attempts = vec![0; n];
    let mut comparisons = 0;
    for item in 2..=n {
        let out = iai(oracle, item, &answer, per_item, cap, rng)?;
        per_item_cost[item - 1] = out.comparisons;
        attempts[item - 1] = out.attempts;
        comparisons += out.comparisons;
        answer = out.list;
    }
    Ok(RankingOutcome { ranking: answer, comparisons, per_item_cost, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Instance, InstanceOracle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schedule_values() {
        let s = InsertionSchedule::new(0.3, 64).unwrap();
        assert_eq!(s.epsilon(1), 0.25);
        assert_eq!(s.epsilon(3), 0.0625);
        assert!((s.confidence(3) - 0.020_264_236_728_467_554).abs() < 1e-15);
        let s = InsertionSchedule::new(0.01, 64).unwrap();
        assert!((s.confidence(1) - 0.06 / (PI * PI)).abs() < 1e-18);
        // partial sums approach delta from below
        let partial: f64 = (1..=100_000).map(|t| s.confidence(t)).sum();
        assert!(partial < 0.01 && partial > 0.01 * (1.0 - 1e-4));
        for t in 1..40 {
            assert_eq!(s.epsilon(t + 1) * 2.0, s.epsilon(t));
        }
    }

    #[test]
    fn single_item() {
        let inst = Instance::mnl(vec![1.0], None).unwrap();
        let mut oracle = InstanceOracle::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = iir(&mut oracle, 1, 0.1, &mut rng).unwrap();
        assert_eq!(out.ranking, vec![1]);
        assert_eq!(out.comparisons, 0);
    }

    #[test]
    fn tiny_cap_exhausts() {
        // gap 0.001 is far below eps_1 = 1/4, so one attempt says unsure
        let inst = Instance::matrix(vec![vec![0.5, 0.501], vec![0.499, 0.5]], None).unwrap();
        let mut oracle = InstanceOracle::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = iir_with_cap(&mut oracle, 2, 0.1, 1, &mut rng);
        assert!(matches!(err, Err(Error::ScheduleExhausted { item: 2, attempts: 1 })), "{err:?}");
    }

    #[test]
    fn comparisons_add_up() {
        let inst = Instance::mnl(vec![1.0, 1.5, 2.25, 3.375], None).unwrap();
        let mut oracle = InstanceOracle::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let out = iir(&mut oracle, 4, 0.1, &mut rng).unwrap();
        assert_eq!(out.comparisons, oracle.stats().total());
        assert_eq!(out.per_item_cost.iter().sum::<u64>(), out.comparisons);
        assert_eq!(out.per_item_cost[0], 0);
        assert_eq!(out.ranking, vec![4, 3, 2, 1]);
    }
}
