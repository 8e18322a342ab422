//! Coin-to-comparison reductions: turn Bernoulli coins into an MNL-style
//! comparison whose winner probability is proportional to the head
//! probability.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoinDraw {
    /// Index of the returned coin.
    pub winner: usize,
    /// Tosses spent before the first head.
    pub tosses: u64,
}

/// Pick one of the two coins uniformly and toss it; repeat until a head.
pub fn coin_reduction_compare<R: Rng + ?Sized>(mu: (f64, f64), rng: &mut R) -> Result<CoinDraw> {
    coin_reduction_compare_listwise(&[mu.0, mu.1], rng)
}

/// The same procedure over any number `m >= 2` of coins.
pub fn coin_reduction_compare_listwise<R: Rng + ?Sized>(mu: &[f64], rng: &mut R) -> Result<CoinDraw> {
    if mu.len() < 2 {
        return Err(Error::InvalidParam(format!("need at least two coins, got {}", mu.len())));
    }
    if let Some(bad) = mu.iter().find(|m| !(**m > 0.0 && **m <= 1.0)) {
        return Err(Error::InvalidParam(format!("head probability {bad} is outside (0, 1]")));
    }
    let mut tosses = 0;
    loop {
        let w = rng.gen_range(0..mu.len());
        tosses += 1;
        if rng.gen::<f64>() < mu[w] {
            return Ok(CoinDraw { winner: w, tosses });
        }
    }
}
