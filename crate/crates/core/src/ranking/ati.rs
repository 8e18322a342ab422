use std::f64::consts::PI;

use rand::Rng;

use super::atc::{atc, AtcParams};
use crate::error::{Error, Result};
use crate::instance::ComparisonOracle;
use crate::pit::{build_pit, Boundary, NodeId, Pit};

/// Target probability that one round of the walk is correct.
pub const ROUND_SUCCESS: f64 = 15.0 / 16.0;

/// ATC confidence at the root, where a round makes one comparison.
pub fn root_confidence() -> f64 {
    1.0 - ROUND_SUCCESS
}

/// ATC confidence at a leaf, where a round makes up to two comparisons.
pub fn leaf_confidence() -> f64 {
    1.0 - ROUND_SUCCESS.sqrt()
}

/// ATC confidence at an internal node, where a round makes up to three.
pub fn internal_confidence() -> f64 {
    1.0 - ROUND_SUCCESS.cbrt()
}

/// `ceil(max(4h, (512/25) ln(2/delta)))`.
pub fn round_limit(depth: usize, delta: f64) -> u64 {
    (4.0 * depth as f64).max(512.0 / 25.0 * (2.0 / delta).ln()).ceil() as u64
}

/// Counter value a leaf must exceed in round `t` to insert early:
/// `t/2 + sqrt((t/2) ln(pi^2 t^2 / (3 delta))) + 1`.
pub fn early_threshold(t: u64, delta: f64) -> f64 {
    let t = t as f64;
    t / 2.0 + (t / 2.0 * (PI * PI * t * t / (3.0 * delta)).ln()).sqrt() + 1.0
}

/// Counter value a leaf needs after the last round: `1 + (5/16) t_max`.
pub fn final_threshold(t_max: u64) -> f64 {
    1.0 + 5.0 / 16.0 * t_max as f64
}

/// Upper bound on the oracle calls one ATI run can make: three ATC calls per
/// round, each at most the internal-node budget (the largest of the three).
pub fn call_bound(sorted_len: usize, epsilon: f64, delta: f64) -> Result<u64> {
    let depth = crate::pit::expected_depth(sorted_len);
    let per_call = AtcParams::new(epsilon, internal_confidence())?.max_calls();
    Ok(3 * round_limit(depth, delta) * per_call)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtiVerdict {
    /// The sorted list with the item placed.
    Inserted(Vec<usize>),
    Unsure,
}

/// One insertion attempt of `i` into `sorted` (most preferred first) under
/// gap guess `epsilon` and confidence `delta`.
///
/// A wrong guess should surface as `Unsure` rather than a misplaced item.
pub fn ati<O, R>(
    oracle: &mut O,
    i: usize,
    sorted: &[usize],
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> Result<AtiVerdict>
where
    O: ComparisonOracle + ?Sized,
    R: Rng + ?Sized,
{
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParam(format!("confidence must lie in (0, 1), got {delta}")));
    }
    if sorted.contains(&i) {
        return Err(Error::InvalidParam(format!("item {i} is already in the list")));
    }
    let at_root = AtcParams::new(epsilon, root_confidence())?;
    let at_leaf = AtcParams::new(epsilon, leaf_confidence())?;
    let at_internal = AtcParams::new(epsilon, internal_confidence())?;
    if sorted.is_empty() {
        return Ok(AtiVerdict::Inserted(vec![i]));
    }

    let tree = build_pit(sorted)?;
    let t_max = round_limit(tree.depth(), delta);
    let mut counters = vec![0u64; tree.leaves().len()];
    let mut x = tree.root();
    let probe = Boundary::Item(i);

    for t in 1..=t_max {
        let node = tree.node(x);
        if x == tree.root() {
            let mid = node.mid.expect("root of a nonempty list is internal");
            x = if atc(oracle, i, mid, &at_root, rng)? == probe {
                node.rchild.expect("internal")
            } else {
                node.lchild.expect("internal")
            };
        } else if node.is_leaf() {
            let slot = node.slot.expect("leaf has a slot");
            let inside = atc(oracle, i, node.left, &at_leaf, rng)? == probe
                && atc(oracle, i, node.right, &at_leaf, rng)? == node.right;
            if inside {
                counters[slot] += 1;
                if counters[slot] as f64 > early_threshold(t, delta) {
                    return Ok(AtiVerdict::Inserted(insert_at(&tree, sorted, x, i)));
                }
            } else if counters[slot] > 0 {
                counters[slot] -= 1;
            } else {
                x = node.parent.expect("leaf below root");
            }
        } else {
            let outside = atc(oracle, i, node.left, &at_internal, rng)? == node.left
                || atc(oracle, i, node.right, &at_internal, rng)? == probe;
            x = if outside {
                node.parent.expect("non-root node")
            } else if atc(oracle, i, node.mid.expect("internal"), &at_internal, rng)? == probe {
                node.rchild.expect("internal")
            } else {
                node.lchild.expect("internal")
            };
        }
    }

    // The largest counter wins if several leaves clear the bar; the first
    // such leaf from the left on a tie.
    let need = final_threshold(t_max);
    let best = counters
        .iter()
        .enumerate()
        .filter(|(_, &c)| c as f64 >= need)
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)));
    Ok(match best {
        Some((slot, _)) => AtiVerdict::Inserted(insert_at(&tree, sorted, tree.leaves()[slot], i)),
        None => AtiVerdict::Unsure,
    })
}

fn insert_at(tree: &Pit, sorted: &[usize], leaf: NodeId, i: usize) -> Vec<usize> {
    let pos = tree.insertion_position(leaf);
    let mut out = Vec::with_capacity(sorted.len() + 1);
    out.extend_from_slice(&sorted[..pos]);
    out.push(i);
    out.extend_from_slice(&sorted[pos..]);
    out
}
