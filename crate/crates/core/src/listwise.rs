//! m-wise merge sort driven by listwise comparisons.
//!
//! Every merge iteration counts as one comparison, including iterations
//! where only one list still has items (the oracle is not queried then).
//! With that accounting, sorting `m^t` items costs exactly `t * m^t`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::ComparisonOracle;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeCounter {
    pub listwise_comparisons: u64,
}

/// Merges sorted lists (most preferred first) by repeatedly comparing the
/// current heads and emitting the winner.
pub fn listwise_merge<O, R>(
    oracle: &mut O,
    lists: &[Vec<usize>],
    counter: &mut MergeCounter,
    rng: &mut R,
) -> Result<Vec<usize>>
where
    O: ComparisonOracle + ?Sized,
    R: Rng + ?Sized,
{
    if lists.len() < 2 {
        return Err(Error::InvalidParam(format!("merge needs at least two lists, got {}", lists.len())));
    }
    let total = lists.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(total);
    let mut cursor = vec![0usize; lists.len()];
    let mut heads = Vec::with_capacity(lists.len());
    let mut owners = Vec::with_capacity(lists.len());
    while out.len() < total {
        heads.clear();
        owners.clear();
        for (k, list) in lists.iter().enumerate() {
            if let Some(&item) = list.get(cursor[k]) {
                heads.push(item);
                owners.push(k);
            }
        }
        let winner = if heads.len() == 1 { heads[0] } else { oracle.compare(&heads, rng)? };
        counter.listwise_comparisons += 1;
        let k = owners[heads.iter().position(|&h| h == winner).expect("winner is a head")];
        cursor[k] += 1;
        out.push(winner);
    }
    Ok(out)
}

/// Sorts `items` by splitting into `m` contiguous chunks of at most
/// `ceil(len/m)` items, sorting each recursively, and merging.
pub fn listwise_merge_sort<O, R>(
    oracle: &mut O,
    items: &[usize],
    m: usize,
    counter: &mut MergeCounter,
    rng: &mut R,
) -> Result<Vec<usize>>
where
    O: ComparisonOracle + ?Sized,
    R: Rng + ?Sized,
{
    if m < 2 {
        return Err(Error::InvalidParam(format!("merge width must be at least 2, got {m}")));
    }
    if items.len() <= 1 {
        return Ok(items.to_vec());
    }
    let chunk = items.len().div_ceil(m);
    let mut parts = Vec::with_capacity(m);
    for part in items.chunks(chunk) {
        parts.push(listwise_merge_sort(oracle, part, m, counter, rng)?);
    }
    listwise_merge(oracle, &parts, counter, rng)
}
