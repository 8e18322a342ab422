use rand::Rng;
use rustc_hash::FxHashMap;

use super::Instance;
use crate::error::{Error, Result};

/// Comparison counters for a single trial.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub pairwise_calls: u64,
    pub listwise_calls: u64,
    per_pair: FxHashMap<(usize, usize), u64>,
}

impl OracleStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.pairwise_calls + self.listwise_calls
    }

    /// Number of pairwise comparisons made between `i` and `j`, in either order.
    pub fn pair_calls(&self, i: usize, j: usize) -> u64 {
        self.per_pair.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    pub fn record(&mut self, set: &[usize]) {
        if let [i, j] = *set {
            self.pairwise_calls += 1;
            *self.per_pair.entry((i.min(j), i.max(j))).or_insert(0) += 1;
        } else {
            self.listwise_calls += 1;
        }
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// One comparison over `set` against `instance`, counted in `stats`.
pub fn compare<R: Rng + ?Sized>(
    instance: &Instance,
    stats: &mut OracleStats,
    set: &[usize],
    rng: &mut R,
) -> Result<usize> {
    let winner = instance.sample_winner(set, rng)?;
    stats.record(set);
    Ok(winner)
}

/// The only view of an instance that ranking algorithms get: a noisy
/// "who wins among these items" query with call accounting.
pub trait ComparisonOracle {
    fn num_items(&self) -> usize;

    fn compare<R: Rng + ?Sized>(&mut self, set: &[usize], rng: &mut R) -> Result<usize>;

    fn stats(&self) -> &OracleStats;
}

impl<T: ComparisonOracle + ?Sized> ComparisonOracle for &mut T {
    fn num_items(&self) -> usize {
        (**self).num_items()
    }

    fn compare<R: Rng + ?Sized>(&mut self, set: &[usize], rng: &mut R) -> Result<usize> {
        (**self).compare(set, rng)
    }

    fn stats(&self) -> &OracleStats {
        (**self).stats()
    }
}

/// Samples from an [`Instance`]; does not expose the true ranking.
#[derive(Debug)]
pub struct InstanceOracle<'a> {
    instance: &'a Instance,
    stats: OracleStats,
}

impl<'a> InstanceOracle<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self { instance, stats: OracleStats::new() }
    }

    pub fn into_stats(self) -> OracleStats {
        self.stats
    }
}

impl ComparisonOracle for InstanceOracle<'_> {
    fn num_items(&self) -> usize {
        self.instance.n()
    }

    fn compare<R: Rng + ?Sized>(&mut self, set: &[usize], rng: &mut R) -> Result<usize> {
        compare(self.instance, &mut self.stats, set, rng)
    }

    fn stats(&self) -> &OracleStats {
        &self.stats
    }
}

/// Always returns the truly most preferred item of the queried set.
#[derive(Debug, Clone)]
pub struct NoiselessOracle {
    rank_of: Vec<usize>,
    stats: OracleStats,
}

impl NoiselessOracle {
    pub fn new(true_ranking: &[usize]) -> Self {
        let mut rank_of = vec![0; true_ranking.len()];
        for (pos, &item) in true_ranking.iter().enumerate() {
            rank_of[item - 1] = pos;
        }
        Self { rank_of, stats: OracleStats::new() }
    }
}

impl ComparisonOracle for NoiselessOracle {
    fn num_items(&self) -> usize {
        self.rank_of.len()
    }

    fn compare<R: Rng + ?Sized>(&mut self, set: &[usize], _rng: &mut R) -> Result<usize> {
        if set.len() < 2 {
            return Err(Error::InvalidSet(format!("need at least two items, got {}", set.len())));
        }
        let n = self.rank_of.len();
        for (k, &item) in set.iter().enumerate() {
            if item == 0 || item > n || set[..k].contains(&item) {
                return Err(Error::InvalidSet(format!("bad item {item}")));
            }
        }
        self.stats.record(set);
        Ok(*set.iter().min_by_key(|&&i| self.rank_of[i - 1]).expect("nonempty"))
    }

    fn stats(&self) -> &OracleStats {
        &self.stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stats_count_every_call() {
        let inst = Instance::mnl(vec![3.0, 1.0, 2.0], None).unwrap();
        let mut oracle = InstanceOracle::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            oracle.compare(&[1, 2], &mut rng).unwrap();
            oracle.compare(&[2, 1], &mut rng).unwrap();
            oracle.compare(&[1, 2, 3], &mut rng).unwrap();
        }
        let s = oracle.stats();
        assert_eq!(s.pairwise_calls, 20);
        assert_eq!(s.listwise_calls, 10);
        assert_eq!(s.pair_calls(2, 1), 20);
        assert_eq!(s.pair_calls(1, 3), 0);
        assert_eq!(s.total(), 30);
    }

    #[test]
    fn failed_calls_are_not_counted() {
        let inst = Instance::mnl(vec![3.0, 1.0], None).unwrap();
        let mut oracle = InstanceOracle::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(oracle.compare(&[1, 1], &mut rng).is_err());
        assert_eq!(oracle.stats().total(), 0);
    }

    #[test]
    fn noiseless_picks_true_best() {
        let mut oracle = NoiselessOracle::new(&[3, 1, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(oracle.compare(&[1, 2], &mut rng).unwrap(), 1);
        assert_eq!(oracle.compare(&[2, 3, 1], &mut rng).unwrap(), 3);
    }
}
