//! Power-of-choice processes on monotone Boolean functions.
//!
//! A monotone function `f : {0,1}^n -> {0,1}` starts at the all-zeros
//! input and 0-bits flip to 1 until `f` activates. The crate implements
//! three flip processes — the solo walk (one uniform flip per step), the
//! r-choice walk (an agent policy picks one of r uniformly proposed bits),
//! and the r-complete walk (all r proposals flip) — plus the machinery to
//! compare them: seeded parallel Monte Carlo estimators with rigorous
//! confidence intervals, and exact oracles (enumeration and dynamic
//! programming over subsets) at small arity.
//!
//! The headline statistic is `rho = r * T_r / T_1`, the r-choice threshold
//! normalized by the solo threshold: `rho -> 1` means choice buys the full
//! factor of `r` ("fast" families), while `rho` bounded away from 1 means
//! no agent can keep up ("slow" families).
//!
//! ```
//! use choicewalk::{build_function, estimate_threshold, policy_by_name, Process};
//!
//! # fn main() -> choicewalk::Result<()> {
//! let f = build_function("prefix_threshold:n=200,m=20,k=4")?;
//! let solo = estimate_threshold(f.as_ref(), &Process::Solo, 400, 7)?;
//! let two = Process::rchoice(2, policy_by_name("greedy_useful")?);
//! let choice = estimate_threshold(f.as_ref(), &two, 400, 7)?;
//! assert!(choice.point < solo.point);
//! # Ok(())
//! # }
//! ```
//!
//! The accompanying guide in `book/` walks through the model and every
//! public layer; its code samples run as this crate's doc-tests.

#[cfg(doctest)]
mod book_doctests;

pub mod error;
pub mod estimator;
pub mod families;
pub mod function;
pub mod oracle;
pub mod policies;
pub mod process;
pub mod seeds;
pub mod state;
pub mod stats;
pub mod views;

pub use error::{Error, ErrorKind, Result};
pub use estimator::{
    estimate_curve, estimate_threshold, predict_threshold_tight, ratio_table,
    ratio_table_with_progress, restriction_diagnostics, sample_hitting, CurveEstimate, CurvePoint,
    RatioRow, RestrictionRow, ThresholdEstimate, TightPrediction,
};
pub use families::{build_function, FamilySpec};
pub use function::{evaluate, Function, Status, Tracker};
pub use oracle::{
    exact_policy_curve, exact_solo_curve, level_probability, monotonicity_check,
    optimal_rchoice_curve, relevant_set_bruteforce, weight_census, ExactCurve, MonotonicityReport,
    WeightCensus,
};
pub use policies::{builtin_policies, policy_by_name, PhaseSwitch, Policy};
pub use process::{
    collision_census, expected_never_fraction, run_process, run_rchoice, run_rcomplete, run_solo,
    CensusCounts, HittingSample, Process, TrialView,
};
pub use seeds::{derive_seed, trial_rng};
pub use state::BitState;
pub use views::{contract, restrict, ContractionView, RestrictionView};
