//! The three experiment drivers. Each validates its configuration before
//! running anything, schedules independent cells with rayon and assembles
//! reports in cell order.

pub mod claims;
pub mod lower;
pub mod upper;

pub use claims::{run_claims_suite, ClaimsReport};
pub use lower::{run_lower_bound_sweep, LowerBoundOutcome};
pub use upper::{run_upper_bound_sweep, UpperBoundOutcome};

/// `2^-k` as an exact float.
pub(crate) fn eps_of_k(k: u32) -> f64 {
    (2f64).powi(-(k as i32))
}
