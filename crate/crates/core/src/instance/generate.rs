use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Instance;
use crate::error::{Error, Result};

/// The three synthetic instance families used in the benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Every pair has the same gap: `p_{r_i,r_j} = 1/2 + delta` for `i < j`.
    Homo,
    /// MNL scores `theta_{r_i} ~ U[0.9 * 1.5^(n-i), 1.1 * 1.5^(n-i)]`.
    Mnl,
    /// Independent `p_{r_i,r_j} ~ U[1/2 + 0.8 delta, 1/2 + 1.5 delta]` for `i < j`.
    Random,
}

impl Family {
    pub fn needs_delta(self) -> bool {
        !matches!(self, Family::Mnl)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Homo => "homo",
            Family::Mnl => "mnl",
            Family::Random => "random",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "homo" => Ok(Family::Homo),
            "mnl" => Ok(Family::Mnl),
            "random" => Ok(Family::Random),
            other => Err(Error::InvalidParam(format!("unknown family `{other}`"))),
        }
    }
}

/// Draws an instance of `family` with a uniformly random hidden ranking.
///
/// `delta` is the gap parameter for `Homo` and `Random` and is ignored for
/// `Mnl`. `Random` additionally needs `1/2 + 1.5 delta <= 1`.
pub fn generate_instance<R: Rng + ?Sized>(
    family: Family,
    n: usize,
    delta: Option<f64>,
    rng: &mut R,
) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParam(format!("n must be at least 2, got {n}")));
    }
    let delta = if family.needs_delta() {
        let d = delta.ok_or_else(|| Error::InvalidParam(format!("family {family} needs a gap")))?;
        if !(d > 0.0 && d < 0.5) {
            return Err(Error::InvalidParam(format!("gap must lie in (0, 1/2), got {d}")));
        }
        if family == Family::Random && 0.5 + 1.5 * d > 1.0 {
            return Err(Error::InvalidParam(format!(
                "random family needs 1/2 + 1.5 * gap <= 1, got gap {d}"
            )));
        }
        d
    } else {
        0.0
    };

    let mut ranking: Vec<usize> = (1..=n).collect();
    ranking.shuffle(rng);

    let instance = match family {
        Family::Homo => {
            let probs = upper_triangle_matrix(&ranking, |_| 0.5 + delta);
            Instance::matrix(probs, Some(ranking))?
        }
        Family::Random => {
            let (lo, hi) = (0.5 + 0.8 * delta, 0.5 + 1.5 * delta);
            let probs = upper_triangle_matrix(&ranking, |_| rng.gen_range(lo..=hi));
            Instance::matrix(probs, Some(ranking))?
        }
        Family::Mnl => {
            let mut scores = vec![0.0; n];
            for (pos, &item) in ranking.iter().enumerate() {
                let base = 1.5f64.powi((n - 1 - pos) as i32);
                scores[item - 1] = rng.gen_range(0.9 * base..=1.1 * base);
            }
            Instance::mnl(scores, Some(ranking))?
        }
    };
    Ok(instance)
}

/// Fills `p[r_i][r_j]` for `i < j` (row-major over the true ranking) and
/// stores complements below the diagonal.
fn upper_triangle_matrix(ranking: &[usize], mut draw: impl FnMut((usize, usize)) -> f64) -> Vec<Vec<f64>> {
    let n = ranking.len();
    let mut probs = vec![vec![0.5; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (ranking[i] - 1, ranking[j] - 1);
            let p = draw((i, j));
            probs[a][b] = p;
            probs[b][a] = 1.0 - p;
        }
    }
    probs
}
