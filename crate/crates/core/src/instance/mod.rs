//! Ranking instances: ground truth plus the comparison probabilities an
//! oracle samples from.
//!
//! Items are labelled `1..=n`. A ranking is always stored most-preferred
//! first.

mod bounds;
mod coins;
mod gaps;
mod generate;
mod json;
mod oracle;

pub use bounds::{inner_min_value, inner_minimizer, lower_bound_eq1, lower_bound_eq2};
pub use coins::{coin_reduction_compare, coin_reduction_compare_listwise, CoinDraw};
pub use gaps::{gap_profile, GapProfile};
pub use generate::{generate_instance, Family};
pub use json::InstanceFile;
pub use oracle::{compare, ComparisonOracle, InstanceOracle, NoiselessOracle, OracleStats};

use rand::Rng;

use crate::error::{Error, Result};

/// Entries closer than this to 1/2 are treated as ties and rejected.
pub const TIE_BAND: f64 = 1e-9;

/// Tolerance on `p_ij + p_ji = 1`.
pub const COMPLEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// `probs[i-1][j-1] = p_{i,j}`; the diagonal is unused.
    Matrix(Vec<Vec<f64>>),
    /// Preference scores `theta_i > 0` of the multinomial-logit model.
    Mnl(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    model: Model,
    true_ranking: Vec<usize>,
    /// `rank_of[i-1]` is the 0-based position of item `i` in the true ranking.
    rank_of: Vec<usize>,
    provenance: String,
}

impl Instance {
    /// Builds a matrix instance. When `true_ranking` is `None` it is derived
    /// from the win counts implied by the matrix.
    pub fn matrix(probs: Vec<Vec<f64>>, true_ranking: Option<Vec<usize>>) -> Result<Self> {
        let n = probs.len();
        if n == 0 {
            return Err(Error::InvalidInstance("instance needs at least one item".into()));
        }
        for (i, row) in probs.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let p = probs[i][j];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidInstance(format!(
                        "p[{},{}] = {p} is not a probability",
                        i + 1,
                        j + 1
                    )));
                }
                if (p + probs[j][i] - 1.0).abs() > COMPLEMENT_TOL {
                    return Err(Error::InvalidInstance(format!(
                        "p[{a},{b}] + p[{b},{a}] != 1",
                        a = i + 1,
                        b = j + 1
                    )));
                }
                if (p - 0.5).abs() < TIE_BAND {
                    return Err(Error::InvalidInstance(format!(
                        "p[{},{}] is a tie at 1/2",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }

        let true_ranking = match true_ranking {
            Some(r) => r,
            None => ranking_from_wins(&probs)?,
        };
        let rank_of = positions(&true_ranking, n)?;
        for i in 0..n {
            for j in 0..n {
                if i != j && (probs[i][j] > 0.5) != (rank_of[i] < rank_of[j]) {
                    return Err(Error::InvalidInstance(format!(
                        "p[{},{}] disagrees with the true ranking",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { n, model: Model::Matrix(probs), true_ranking, rank_of, provenance: String::new() })
    }

    /// Builds an MNL instance; the true ranking is the descending order of
    /// the scores. A supplied ranking must agree with it.
    pub fn mnl(scores: Vec<f64>, true_ranking: Option<Vec<usize>>) -> Result<Self> {
        let n = scores.len();
        if n == 0 {
            return Err(Error::InvalidInstance("instance needs at least one item".into()));
        }
        if let Some(bad) = scores.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidInstance(format!(
                "score of item {} must be positive and finite",
                bad + 1
            )));
        }
        let mut order: Vec<usize> = (1..=n).collect();
        order.sort_by(|a, b| scores[b - 1].total_cmp(&scores[a - 1]));
        if order.windows(2).any(|w| scores[w[0] - 1] == scores[w[1] - 1]) {
            return Err(Error::InvalidInstance("scores must be distinct".into()));
        }
        if let Some(given) = true_ranking {
            if given != order {
                return Err(Error::InvalidInstance(
                    "true ranking is not the descending order of the scores".into(),
                ));
            }
        }
        let rank_of = positions(&order, n)?;
        Ok(Self { n, model: Model::Mnl(scores), true_ranking: order, rank_of, provenance: String::new() })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn true_ranking(&self) -> &[usize] {
        &self.true_ranking
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// 0-based position of `item` in the true ranking.
    pub fn rank_of(&self, item: usize) -> usize {
        self.rank_of[item - 1]
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank_of(a) < self.rank_of(b)
    }

    /// `p_{i,j}`, the probability that `i` wins a pairwise comparison with `j`.
    pub fn pairwise_prob(&self, i: usize, j: usize) -> f64 {
        match &self.model {
            Model::Matrix(p) => p[i - 1][j - 1],
            Model::Mnl(theta) => theta[i - 1] / (theta[i - 1] + theta[j - 1]),
        }
    }

    /// `p_{i,S}` for a validated set containing `i`.
    pub fn win_probability(&self, i: usize, set: &[usize]) -> Result<f64> {
        self.check_set(set)?;
        if !set.contains(&i) {
            return Err(Error::InvalidSet(format!("item {i} is not in the set")));
        }
        match &self.model {
            Model::Matrix(p) => {
                let other = if set[0] == i { set[1] } else { set[0] };
                Ok(p[i - 1][other - 1])
            }
            Model::Mnl(theta) => {
                let total: f64 = set.iter().map(|&k| theta[k - 1]).sum();
                Ok(theta[i - 1] / total)
            }
        }
    }

    /// Draws the winner of one comparison over `set`.
    pub fn sample_winner<R: Rng + ?Sized>(&self, set: &[usize], rng: &mut R) -> Result<usize> {
        self.check_set(set)?;
        let u: f64 = rng.gen();
        match &self.model {
            Model::Matrix(p) => {
                let (i, j) = (set[0], set[1]);
                Ok(if u < p[i - 1][j - 1] { i } else { j })
            }
            Model::Mnl(theta) => {
                if let [i, j] = *set {
                    let (a, b) = (theta[i - 1], theta[j - 1]);
                    return Ok(if u < a / (a + b) { i } else { j });
                }
                let total: f64 = set.iter().map(|&k| theta[k - 1]).sum();
                let target = u * total;
                let mut acc = 0.0;
                for &k in set {
                    acc += theta[k - 1];
                    if target < acc {
                        return Ok(k);
                    }
                }
                Ok(*set.last().expect("set has at least two items"))
            }
        }
    }

    fn check_set(&self, set: &[usize]) -> Result<()> {
        if set.len() < 2 {
            return Err(Error::InvalidSet(format!("need at least two items, got {}", set.len())));
        }
        for (k, &item) in set.iter().enumerate() {
            if item == 0 || item > self.n {
                return Err(Error::InvalidSet(format!("item {item} is outside 1..={}", self.n)));
            }
            if set[..k].contains(&item) {
                return Err(Error::InvalidSet(format!("item {item} appears twice")));
            }
        }
        if matches!(self.model, Model::Matrix(_)) && set.len() > 2 {
            return Err(Error::ListwiseUnsupported { size: set.len() });
        }
        Ok(())
    }
}

fn positions(ranking: &[usize], n: usize) -> Result<Vec<usize>> {
    if ranking.len() != n {
        return Err(Error::InvalidInstance(format!(
            "true ranking has {} items, expected {n}",
            ranking.len()
        )));
    }
    let mut rank_of = vec![usize::MAX; n];
    for (pos, &item) in ranking.iter().enumerate() {
        if item == 0 || item > n || rank_of[item - 1] != usize::MAX {
            return Err(Error::InvalidInstance("true ranking is not a permutation of 1..=n".into()));
        }
        rank_of[item - 1] = pos;
    }
    Ok(rank_of)
}

/// Under A2/A3 the number of pairwise wins above 1/2 is distinct per item.
fn ranking_from_wins(probs: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = probs.len();
    let mut by_wins: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let wins = (0..n).filter(|&j| j != i && probs[i][j] > 0.5).count();
        let slot = &mut by_wins[n - 1 - wins];
        if slot.is_some() {
            return Err(Error::InvalidInstance(
                "matrix does not induce a unique ranking".into(),
            ));
        }
        *slot = Some(i + 1);
    }
    Ok(by_wins.into_iter().map(|s| s.expect("every slot filled")).collect())
}
