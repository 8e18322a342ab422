use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::ComparisonOracle;
use crate::pit::Boundary;

/// Gap guess and confidence for one attempting comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtcParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl AtcParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::InvalidParam(format!("gap guess must lie in (0, 1/2], got {epsilon}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParam(format!("confidence must lie in (0, 1), got {delta}")));
        }
        Ok(Self { epsilon, delta })
    }

    /// `ceil(ln(2/delta) / (2 eps^2))`, the comparison budget.
    pub fn max_calls(&self) -> u64 {
        ((2.0 / self.delta).ln() / (2.0 * self.epsilon * self.epsilon)).ceil().max(1.0) as u64
    }

    /// Anytime confidence radius `sqrt(ln(pi^2 t^2 / (3 delta)) / (2t))`.
    pub fn radius(&self, t: u64) -> f64 {
        let t = t as f64;
        ((PI * PI * t * t / (3.0 * self.delta)).ln() / (2.0 * t)).sqrt()
    }
}

/// Compares `i` against `j` repeatedly until the empirical win rate of `i`
/// leaves the confidence band around 1/2, or the budget runs out.
///
/// Returns the winner. Sentinels are resolved without touching the oracle:
/// every item beats `NegInf` and loses to `PosInf`.
pub fn atc<O, R>(oracle: &mut O, i: usize, j: Boundary, params: &AtcParams, rng: &mut R) -> Result<Boundary>
where
    O: ComparisonOracle + ?Sized,
    R: Rng + ?Sized,
{
    let other = match j {
        Boundary::NegInf => return Ok(Boundary::Item(i)),
        Boundary::PosInf => return Ok(Boundary::PosInf),
        Boundary::Item(k) if k == i => {
            return Err(Error::InvalidParam(format!("cannot compare item {i} with itself")))
        }
        Boundary::Item(k) => k,
    };

    let b_max = params.max_calls();
    let pair = [i, other];
    let mut wins = 0u64;
    for t in 1..=b_max {
        if oracle.compare(&pair, rng)? == i {
            wins += 1;
        }
        let p_hat = wins as f64 / t as f64;
        let b = params.radius(t);
        if p_hat > 0.5 + b {
            return Ok(Boundary::Item(i));
        }
        if p_hat < 0.5 - b {
            return Ok(j);
        }
    }
    Ok(match (2 * wins).cmp(&b_max) {
        std::cmp::Ordering::Greater => Boundary::Item(i),
        std::cmp::Ordering::Less => j,
        std::cmp::Ordering::Equal => {
            if rng.gen::<bool>() {
                Boundary::Item(i)
            } else {
                j
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Instance, InstanceOracle, OracleStats};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn budget_formula() {
        assert_eq!(AtcParams::new(0.1, 0.01).unwrap().max_calls(), 265);
        assert_eq!(AtcParams::new(0.2, 0.05).unwrap().max_calls(), 47);
    }

    #[test]
    fn first_radius_exceeds_half() {
        let b1 = AtcParams::new(0.1, 0.1).unwrap().radius(1);
        assert!((b1 - 1.321_633_946_299_946).abs() < 1e-12, "{b1}");
        assert!(b1 > 0.5);
    }

    #[test]
    fn param_validation() {
        assert!(AtcParams::new(0.0, 0.1).is_err());
        assert!(AtcParams::new(0.6, 0.1).is_err());
        assert!(AtcParams::new(0.5, 0.1).is_ok());
        assert!(AtcParams::new(0.1, 1.0).is_err());
    }

    #[test]
    fn sentinels_cost_nothing() {
        let inst = Instance::mnl(vec![2.0, 1.0], None).unwrap();
        let mut oracle = InstanceOracle::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = AtcParams::new(0.1, 0.1).unwrap();
        assert_eq!(atc(&mut oracle, 1, Boundary::NegInf, &p, &mut rng).unwrap(), Boundary::Item(1));
        assert_eq!(atc(&mut oracle, 1, Boundary::PosInf, &p, &mut rng).unwrap(), Boundary::PosInf);
        assert_eq!(oracle.stats().total(), 0);
        assert!(atc(&mut oracle, 1, Boundary::Item(1), &p, &mut rng).is_err());
    }

    /// Replays a fixed answer sequence: `true` means the probe wins.
    struct Scripted {
        answers: Vec<bool>,
        next: usize,
        stats: OracleStats,
    }

    impl ComparisonOracle for Scripted {
        fn num_items(&self) -> usize {
            2
        }

        fn compare<R: Rng + ?Sized>(&mut self, set: &[usize], _rng: &mut R) -> Result<usize> {
            let a = self.answers[self.next];
            self.next += 1;
            self.stats.record(set);
            Ok(if a { set[0] } else { set[1] })
        }

        fn stats(&self) -> &OracleStats {
            &self.stats
        }
    }

    #[test]
    fn budget_holds_for_every_answer_sequence() {
        // eps = 0.5, delta = 0.5 gives b_max = ceil(2 ln 4) = 3; enumerate all 2^3 scripts
        let p = AtcParams::new(0.5, 0.5).unwrap();
        let b_max = p.max_calls() as usize;
        assert_eq!(b_max, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for mask in 0..(1u32 << b_max) {
            let answers = (0..b_max).map(|k| mask >> k & 1 == 1).collect();
            let mut o = Scripted { answers, next: 0, stats: OracleStats::new() };
            atc(&mut o, 1, Boundary::Item(2), &p, &mut rng).unwrap();
            assert!(o.stats.total() <= b_max as u64);
        }
        // a larger budget, enumerated exhaustively
        let p = AtcParams::new(0.35, 0.2).unwrap();
        let b_max = p.max_calls() as usize;
        assert!((9..=14).contains(&b_max), "{b_max}");
        for mask in 0..(1u32 << b_max) {
            let answers = (0..b_max).map(|k| mask >> k & 1 == 1).collect();
            let mut o = Scripted { answers, next: 0, stats: OracleStats::new() };
            atc(&mut o, 1, Boundary::Item(2), &p, &mut rng).unwrap();
            assert!(o.stats.total() <= b_max as u64);
        }
    }

    #[test]
    fn certain_winner_exits_early() {
        let inst = Instance::matrix(vec![vec![0.5, 1.0], vec![0.0, 0.5]], None).unwrap();
        let mut oracle = InstanceOracle::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = AtcParams::new(0.01, 0.1).unwrap();
        assert_eq!(atc(&mut oracle, 2, Boundary::Item(1), &p, &mut rng).unwrap(), Boundary::Item(1));
        assert!(oracle.stats().total() < p.max_calls());
    }
}
