//! The pairwise ranking stack, from single comparisons up to full ranking.

mod atc;
mod ati;
mod iir;

pub use atc::{atc, AtcParams};
pub use ati::{
    ati, call_bound as ati_call_bound, early_threshold, final_threshold, internal_confidence,
    leaf_confidence, root_confidence, round_limit, AtiVerdict, ROUND_SUCCESS,
};
pub use iir::{iai, iir, iir_with_cap, IaiOutcome, InsertionSchedule, RankingOutcome, DEFAULT_SCHEDULE_CAP};
