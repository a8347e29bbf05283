//! Monte Carlo estimation: activation-probability curves, thresholds
//! (lower medians of the hitting time), ratio tables for the fast/slow
//! dichotomy, the tight-threshold predictor, and restriction diagnostics.
//!
//! Estimation leans on one exact identity: on an increasing walk with a
//! monotone function, the event "active after t steps" equals "hitting
//! time ≤ t", so activation curves are empirical CDFs of the hitting time
//! and thresholds are medians.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::function::Function;
use crate::oracle::{relevant_set_bruteforce, MAX_SCAN_ARITY};
use crate::process::{run_process, HittingSample, Process};
use crate::seeds::{derive_seed, trial_rng};
use crate::state::BitState;
use crate::stats::{clopper_pearson, lower_median_index, median_ci_ranks};
use crate::views::{contract, restrict};

/// Confidence level used for every interval in this module.
pub const CONFIDENCE: f64 = 0.99;

/// Run `trials` independent walks, one RNG stream per trial index.
///
/// The result is deterministic given `seed` and independent of how the
/// trials are scheduled across threads.
pub fn sample_hitting(
    f: &dyn Function,
    process: &Process,
    trials: usize,
    seed: u64,
) -> Result<Vec<HittingSample>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    process.validate(f)?;
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let mut sample = run_process(f, process, &mut rng)?;
            sample.trial = trial as u64;
            Ok(sample)
        })
        .collect()
}

/// One grid point of an estimated activation curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Step count.
    pub t: usize,
    /// Trials with hitting time ≤ t.
    pub hits: u64,
    /// Empirical activation probability.
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Estimated activation curve over a step grid.
#[derive(Debug, Clone)]
pub struct CurveEstimate {
    pub process: String,
    pub trials: usize,
    pub points: Vec<CurvePoint>,
}

/// Estimate `Pr[active after t steps]` at each grid point with a
/// two-sided 99% Clopper–Pearson interval.
pub fn estimate_curve(
    f: &dyn Function,
    process: &Process,
    trials: usize,
    grid: &[usize],
    seed: u64,
) -> Result<CurveEstimate> {
    let n = f.arity();
    if grid.is_empty() {
        return Err(Error::InvalidParameter("grid must be nonempty".into()));
    }
    if let Some(&t) = grid.iter().find(|&&t| t > n) {
        return Err(Error::InvalidParameter(format!(
            "grid point {t} exceeds arity {n}"
        )));
    }
    let samples = sample_hitting(f, process, trials, seed)?;
    let mut times: Vec<usize> = samples.iter().map(|s| s.hitting_time).collect();
    times.sort_unstable();
    let points = grid
        .iter()
        .map(|&t| {
            let hits = times.partition_point(|&h| h <= t) as u64;
            let (ci_low, ci_high) = clopper_pearson(hits, trials as u64, CONFIDENCE);
            CurvePoint {
                t,
                hits,
                estimate: hits as f64 / trials as f64,
                ci_low,
                ci_high,
            }
        })
        .collect();
    Ok(CurveEstimate {
        process: process.to_string(),
        trials,
        points,
    })
}

/// Estimated threshold: lower median of the hitting time with a
/// distribution-free 99% confidence interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdEstimate {
    pub process: String,
    pub trials: usize,
    /// Lower empirical median: the smallest t with empirical CDF ≥ 1/2.
    pub point: usize,
    pub ci_low: usize,
    pub ci_high: usize,
}

/// Estimate the threshold of `process` on `f` from `trials` walks.
pub fn estimate_threshold(
    f: &dyn Function,
    process: &Process,
    trials: usize,
    seed: u64,
) -> Result<ThresholdEstimate> {
    if trials < 100 {
        return Err(Error::InvalidParameter(
            "threshold estimation needs at least 100 trials".into(),
        ));
    }
    let samples = sample_hitting(f, process, trials, seed)?;
    let mut times: Vec<usize> = samples.iter().map(|s| s.hitting_time).collect();
    times.sort_unstable();
    let (lo, hi) = median_ci_ranks(trials, CONFIDENCE);
    Ok(ThresholdEstimate {
        process: process.to_string(),
        trials,
        point: times[lower_median_index(trials)],
        ci_low: times[lo],
        ci_high: times[hi],
    })
}

/// One family instance in a ratio experiment: thresholds for the solo and
/// r-choice walks and the acceleration ratio ρ = r·T_r/T_1.
#[derive(Debug, Clone)]
pub struct RatioRow {
    /// Canonical instance spec, e.g. `connectivity:v=200`.
    pub family: String,
    /// The family's scale parameter (n, v, or k^depth).
    pub scale: usize,
    pub arity: usize,
    pub r: usize,
    pub solo: ThresholdEstimate,
    pub choice: ThresholdEstimate,
    pub rho: f64,
    pub rho_ci_low: f64,
    pub rho_ci_high: f64,
}

fn ratio_row(
    spec: &FamilySpec,
    r: usize,
    process: &Process,
    trials: usize,
    seed: u64,
) -> Result<RatioRow> {
    let f = spec.build()?;
    let solo = estimate_threshold(f.as_ref(), &Process::Solo, trials, derive_seed(seed, 1))?;
    let choice = estimate_threshold(f.as_ref(), process, trials, derive_seed(seed, 2))?;
    let rho = r as f64 * choice.point as f64 / solo.point as f64;
    // Conservative interval arithmetic: extremes of the two CI boxes.
    let rho_ci_low = r as f64 * choice.ci_low as f64 / solo.ci_high as f64;
    let rho_ci_high = r as f64 * choice.ci_high as f64 / solo.ci_low.max(1) as f64;
    Ok(RatioRow {
        family: spec.to_string(),
        scale: spec.scale(),
        arity: f.arity(),
        r,
        solo,
        choice,
        rho,
        rho_ci_low,
        rho_ci_high,
    })
}

/// Ratio experiment across family instances, reporting each row through
/// `on_row` as it completes (instances run in order; each row's trials
/// run in parallel).
pub fn ratio_table_with_progress(
    specs: &[FamilySpec],
    process: &Process,
    trials: usize,
    seed: u64,
    mut on_row: impl FnMut(&RatioRow),
) -> Result<Vec<RatioRow>> {
    let r = process.r();
    let mut rows = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let row_seed = derive_seed(seed, 0x726f_7730 + i as u64);
        let row = ratio_row(spec, r, process, trials, row_seed)?;
        on_row(&row);
        rows.push(row);
    }
    Ok(rows)
}

/// [`ratio_table_with_progress`] without the callback.
pub fn ratio_table(
    specs: &[FamilySpec],
    process: &Process,
    trials: usize,
    seed: u64,
) -> Result<Vec<RatioRow>> {
    ratio_table_with_progress(specs, process, trials, seed, |_| {})
}

/// Center of the tight-threshold bracketing for functions with a small
/// relevant set: `T_1(contraction) · n / (r · |R|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightPrediction {
    pub value: f64,
    /// Set when the inputs sit on the boundary of the prediction's
    /// hypothesis chain 1 ≪ T_1(contraction) ≪ |R| ≪ n, where the
    /// asymptotic reading degenerates.
    pub degenerate: bool,
}

/// Predict the r-choice threshold from the contraction's solo threshold,
/// the relevant-set size, and the ambient arity.
pub fn predict_threshold_tight(
    t1_contraction: usize,
    relevant_size: usize,
    n: usize,
    r: usize,
) -> Result<TightPrediction> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if t1_contraction < 1 || t1_contraction > relevant_size || relevant_size > n {
        return Err(Error::OrderingViolated {
            what: "tight-threshold prediction inputs",
            constraint: "1 <= T1(contraction) <= |R| <= n",
        });
    }
    Ok(TightPrediction {
        value: t1_contraction as f64 * n as f64 / (r as f64 * relevant_size as f64),
        degenerate: t1_contraction == relevant_size || relevant_size == n,
    })
}

/// One row of the restriction trace: the state of the function after the
/// first `prefix` activations of a sampled trajectory.
#[derive(Debug, Clone)]
pub struct RestrictionRow {
    /// Activation prefix size s.
    pub prefix: usize,
    /// Whether the prefix alone already activates the function.
    pub active: bool,
    /// Estimated |R(restriction)|: exact brute force when the free arity
    /// allows, otherwise the family's structural useful-bit count.
    pub relevant: Option<usize>,
    pub relevant_exact: bool,
    /// Solo threshold of the contraction onto the estimated relevant set.
    pub contraction_t1: Option<ThresholdEstimate>,
}

/// Trace how restriction shrinks a function along one sampled trajectory:
/// activate a uniformly random prefix of each requested size, restrict,
/// and measure the relevant set and the contraction's solo threshold.
pub fn restriction_diagnostics(
    f: &dyn Function,
    prefix_sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<RestrictionRow>> {
    let n = f.arity();
    if let Some(&s) = prefix_sizes.iter().find(|&&s| s > n) {
        return Err(Error::InvalidParameter(format!(
            "prefix size {s} exceeds arity {n}"
        )));
    }
    // One trajectory: a uniform activation order, shared by all prefixes.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut trial_rng(derive_seed(seed, 0x7472_6163), 0));
    let mut rows = Vec::with_capacity(prefix_sizes.len());
    for (i, &s) in prefix_sizes.iter().enumerate() {
        let mut prefix: Vec<usize> = order[..s].to_vec();
        prefix.sort_unstable();
        let view = restrict(f, &prefix)?;
        let origin = BitState::new(view.arity());
        if view.evaluate(&origin) {
            rows.push(RestrictionRow {
                prefix: s,
                active: true,
                relevant: Some(0),
                relevant_exact: true,
                contraction_t1: None,
            });
            continue;
        }
        let (relevant, relevant_exact) = if view.arity() <= MAX_SCAN_ARITY {
            (Some(relevant_set_bruteforce(&view)?), true)
        } else {
            (view.useful_bits(&origin)?, false)
        };
        let contraction_t1 = match &relevant {
            Some(rel) if !rel.is_empty() => {
                let tilde = contract(&view, rel)?;
                Some(estimate_threshold(
                    &tilde,
                    &Process::Solo,
                    trials,
                    derive_seed(seed, 0x7431_0000 + i as u64),
                )?)
            }
            _ => None,
        };
        rows.push(RestrictionRow {
            prefix: s,
            active: false,
            relevant: relevant.map(|r| r.len()),
            relevant_exact,
            contraction_t1,
        });
    }
    Ok(rows)
}
