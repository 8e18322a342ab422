//! Instance-dependent lower bounds on the number of pairwise comparisons,
//! reported as raw sums without the unspecified leading constant.

use crate::error::{Error, Result};

/// `max(ln ln (1/gap), 0)`; the iterated log goes negative for gaps above 1/e.
fn loglog_term(gap: f64) -> f64 {
    (1.0 / gap).ln().ln().max(0.0)
}

fn check(gaps: &[f64], delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParam(format!("confidence must lie in (0, 1), got {delta}")));
    }
    if let Some(g) = gaps.iter().find(|g| !(**g > 0.0)) {
        return Err(Error::InvalidParam(format!("gaps must be positive, got {g}")));
    }
    Ok(())
}

/// Finite gaps only; an infinite gap (single-item instance) contributes nothing.
fn weights(gaps: &[f64]) -> impl Iterator<Item = (f64, f64)> + '_ {
    gaps.iter().filter(|g| g.is_finite()).map(|&g| (g, g.powi(-2)))
}

/// `sum_i g_i^-2 (ln ln g_i^-1 + ln(n / delta))`.
pub fn lower_bound_eq2(gaps: &[f64], n: usize, delta: f64) -> Result<f64> {
    check(gaps, delta)?;
    let log_term = (n as f64 / delta).ln();
    Ok(weights(gaps).map(|(g, w)| w * (loglog_term(g) + log_term)).sum())
}

/// `sum_i g_i^-2 (ln ln g_i^-1 + ln(1/delta)) + min { sum_i g_i^-2 ln(1/x_i) : sum_i x_i <= 1 }`,
/// with the inner minimum taken in closed form.
pub fn lower_bound_eq1(gaps: &[f64], delta: f64) -> Result<f64> {
    check(gaps, delta)?;
    let log_term = (1.0 / delta).ln();
    let head: f64 = weights(gaps).map(|(g, w)| w * (loglog_term(g) + log_term)).sum();
    Ok(head + inner_min_value(gaps))
}

/// Minimiser of `sum_i w_i ln(1/x_i)` over the simplex, `x_i = w_i / sum_j w_j`
/// with `w_i = g_i^-2`. Infinite gaps get `x_i = 0`.
pub fn inner_minimizer(gaps: &[f64]) -> Vec<f64> {
    let total: f64 = weights(gaps).map(|(_, w)| w).sum();
    gaps.iter()
        .map(|&g| if g.is_finite() { g.powi(-2) / total } else { 0.0 })
        .collect()
}

/// Value of the inner minimisation: `sum_i w_i ln(W / w_i)`.
pub fn inner_min_value(gaps: &[f64]) -> f64 {
    let total: f64 = weights(gaps).map(|(_, w)| w).sum();
    weights(gaps).map(|(_, w)| w * (total / w).ln()).sum()
}
