use serde::Serialize;

use super::Instance;

/// Per-pair and per-item gaps `|p_ij - 1/2|`, indexed by `item - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapProfile {
    /// Symmetric; the diagonal is unused and holds 0.
    pub delta_pair: Vec<Vec<f64>>,
    /// Minimum gap to any other item. Infinite for a single-item instance.
    pub delta_i: Vec<f64>,
    /// Minimum gap to the items adjacent in the true ranking (one neighbour
    /// for the top and bottom items).
    pub delta_tilde_i: Vec<f64>,
    /// Strong stochastic transitivity: `p_ik >= max(p_ij, p_jk)` for `i > j > k`.
    pub sst_holds: bool,
    /// Stochastic triangle inequality: `D_ik <= D_ij + D_jk` for `i > j > k`.
    pub sti_holds: bool,
}

const TRANSITIVITY_TOL: f64 = 1e-12;

pub fn gap_profile(instance: &Instance) -> GapProfile {
    let n = instance.n();
    let mut delta_pair = vec![vec![0.0; n]; n];
    for i in 1..=n {
        for j in (i + 1)..=n {
            let d = (instance.pairwise_prob(i, j) - 0.5).abs();
            delta_pair[i - 1][j - 1] = d;
            delta_pair[j - 1][i - 1] = d;
        }
    }

    let delta_i = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| delta_pair[i][j])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();

    let ranking = instance.true_ranking();
    let mut delta_tilde_i = vec![f64::INFINITY; n];
    for w in ranking.windows(2) {
        let (a, b) = (w[0] - 1, w[1] - 1);
        let d = delta_pair[a][b];
        delta_tilde_i[a] = delta_tilde_i[a].min(d);
        delta_tilde_i[b] = delta_tilde_i[b].min(d);
    }

    let mut sst_holds = true;
    let mut sti_holds = true;
    for x in 0..n {
        for y in (x + 1)..n {
            for z in (y + 1)..n {
                let (i, j, k) = (ranking[x], ranking[y], ranking[z]);
                let p_ik = instance.pairwise_prob(i, k);
                let p_ij = instance.pairwise_prob(i, j);
                let p_jk = instance.pairwise_prob(j, k);
                if p_ik + TRANSITIVITY_TOL < p_ij.max(p_jk) {
                    sst_holds = false;
                }
                let (d_ik, d_ij, d_jk) = (p_ik - 0.5, p_ij - 0.5, p_jk - 0.5);
                if d_ik > d_ij + d_jk + TRANSITIVITY_TOL {
                    sti_holds = false;
                }
            }
        }
    }

    GapProfile { delta_pair, delta_i, delta_tilde_i, sst_holds, sti_holds }
}
