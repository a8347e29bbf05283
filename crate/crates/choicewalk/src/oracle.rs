//! Exact small-arity computations used to cross-check the Monte Carlo
//! machinery: activation curves by full enumeration, forward dynamic
//! programs for policy-driven walks, the backward dynamic program for the
//! best achievable r-choice agent, brute-force relevant sets, and
//! monotonicity checks.
//!
//! Everything here is deterministic and exact within its stated arity
//! limit; requests beyond a limit fail with a capacity error rather than
//! silently degrading.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::function::Function;
use crate::policies::Policy;
use crate::process::TrialView;
use crate::state::BitState;

/// Largest arity for full 2^n enumeration (solo curve, weight census,
/// level probabilities).
pub const MAX_ENUM_ARITY: usize = 24;
/// Largest arity for the per-coordinate brute-force scans (relevant set,
/// exact monotonicity check).
pub const MAX_SCAN_ARITY: usize = 20;
/// Largest arity for the forward/backward dynamic programs.
pub const MAX_DP_ARITY: usize = 14;
/// Up to this arity the dynamic programs run in exact rational arithmetic;
/// above it they use 64-bit floats with a stated error bound.
pub const MAX_RATIONAL_DP_ARITY: usize = 10;

/// C(n, k) as a u128; exact for every n ≤ 64.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Visit every k-subset of {0, .., m-1} in lexicographic order.
fn for_each_combination(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    debug_assert!(k <= m);
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k - 1;
        while idx[i] == m - k + i {
            if i == 0 {
                return;
            }
            i -= 1;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Scalar the dynamic programs run in: exact rationals at small arity,
/// floats above.
trait Weight: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn div_u64(&self, d: u64) -> Self;
    fn max_with(self, other: Self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += *other;
    }
    fn div_u64(&self, d: u64) -> Self {
        self / d as f64
    }
    fn max_with(self, other: Self) -> Self {
        self.max(other)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Weight for BigRational {
    fn zero() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn div_u64(&self, d: u64) -> Self {
        self / BigRational::from_integer(BigInt::from(d))
    }
    fn max_with(self, other: Self) -> Self {
        self.max(other)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn one_half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Activation probability per step count, exactly or with a stated bound.
///
/// `value(t)` is the probability that the walk in question is active after
/// `t` steps, for `t` in `0..=arity`. Values are non-decreasing in `t` and
/// reach 1 at `t = arity` whenever `f(all-ones) = 1`.
#[derive(Debug, Clone)]
pub struct ExactCurve {
    arity: usize,
    values: CurveValues,
}

#[derive(Debug, Clone)]
enum CurveValues {
    Exact(Vec<BigRational>),
    Float { values: Vec<f64>, error_bound: f64 },
}

impl ExactCurve {
    fn exact(arity: usize, values: Vec<BigRational>) -> Self {
        debug_assert_eq!(values.len(), arity + 1);
        ExactCurve {
            arity,
            values: CurveValues::Exact(values),
        }
    }

    fn float(arity: usize, values: Vec<f64>, error_bound: f64) -> Self {
        debug_assert_eq!(values.len(), arity + 1);
        ExactCurve {
            arity,
            values: CurveValues::Float {
                values,
                error_bound,
            },
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Activation probability after `t` steps.
    pub fn value(&self, t: usize) -> f64 {
        match &self.values {
            CurveValues::Exact(v) => Weight::to_f64(&v[t]),
            CurveValues::Float { values, .. } => values[t],
        }
    }

    /// The exact rational value, when the curve was computed exactly.
    pub fn rational(&self, t: usize) -> Option<&BigRational> {
        match &self.values {
            CurveValues::Exact(v) => Some(&v[t]),
            CurveValues::Float { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, CurveValues::Exact(_))
    }

    /// Worst-case absolute error per value: 0 for exact curves, the
    /// a-priori floating-point bound otherwise.
    pub fn error_bound(&self) -> f64 {
        match &self.values {
            CurveValues::Exact(_) => 0.0,
            CurveValues::Float { error_bound, .. } => *error_bound,
        }
    }

    /// Smallest `t` with activation probability at least 1/2. Exact curves
    /// compare rationals; float curves compare against 0.5 directly (the
    /// error bound says how much to trust a borderline answer).
    pub fn threshold(&self) -> Option<usize> {
        match &self.values {
            CurveValues::Exact(v) => {
                let half = one_half();
                v.iter().position(|p| *p >= half)
            }
            CurveValues::Float { values, .. } => values.iter().position(|&p| p >= 0.5),
        }
    }

    /// All values as floats, index = step count.
    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..=self.arity).map(|t| self.value(t)).collect()
    }
}

/// Accepted-input counts grouped by Hamming weight: `accepted[w]` of the
/// C(arity, w) inputs of weight `w` evaluate to 1.
#[derive(Debug, Clone)]
pub struct WeightCensus {
    pub arity: usize,
    pub accepted: Vec<u64>,
}

/// Count accepted inputs per weight by full enumeration.
pub fn weight_census(f: &dyn Function) -> Result<WeightCensus> {
    let n = f.arity();
    if n > MAX_ENUM_ARITY {
        return Err(Error::Capacity {
            arity: n,
            limit: MAX_ENUM_ARITY,
            what: "full enumeration",
        });
    }
    let mut accepted = vec![0u64; n + 1];
    for mask in 0..(1u64 << n) {
        if f.evaluate_mask(mask) {
            accepted[mask.count_ones() as usize] += 1;
        }
    }
    Ok(WeightCensus { arity: n, accepted })
}

/// Exact activation curve of the solo walk: after `t` steps its state is
/// uniform on weight-`t` inputs, so the curve value at `t` is
/// `accepted[t] / C(n, t)`.
pub fn exact_solo_curve(f: &dyn Function) -> Result<ExactCurve> {
    let census = weight_census(f)?;
    let n = census.arity;
    let values = (0..=n)
        .map(|t| {
            BigRational::new(
                BigInt::from(census.accepted[t]),
                BigInt::from(binomial(n, t)),
            )
        })
        .collect();
    Ok(ExactCurve::exact(n, values))
}

/// Exact probability that `f` accepts a uniform input of weight `s`.
pub fn level_probability(f: &dyn Function, s: usize) -> Result<BigRational> {
    let n = f.arity();
    if n > MAX_ENUM_ARITY {
        return Err(Error::Capacity {
            arity: n,
            limit: MAX_ENUM_ARITY,
            what: "exact level probability",
        });
    }
    if s > n {
        return Err(Error::InvalidParameter(format!(
            "weight {s} exceeds arity {n}"
        )));
    }
    let mut accepted: u64 = 0;
    for_each_combination(n, s, |idx| {
        let mut mask = 0u64;
        for &i in idx {
            mask |= 1 << i;
        }
        if f.evaluate_mask(mask) {
            accepted += 1;
        }
    });
    Ok(BigRational::new(
        BigInt::from(accepted),
        BigInt::from(binomial(n, s)),
    ))
}

/// Monte Carlo fallback for [`level_probability`] at arities beyond the
/// enumeration limit: the fraction of `trials` uniform weight-`s` inputs
/// accepted.
pub fn level_probability_sampled(
    f: &dyn Function,
    s: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let n = f.arity();
    if s > n {
        return Err(Error::InvalidParameter(format!(
            "weight {s} exceeds arity {n}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mut hits = 0usize;
    let mut state = BitState::new(n);
    for _ in 0..trials {
        state.reset();
        for _ in 0..s {
            let pick = state.sample_zero(rng);
            state.flip_to_one(pick)?;
        }
        if f.evaluate(&state) {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// The coordinates `f` actually depends on, by definition: `i` is relevant
/// iff some pair of inputs differing only at `i` evaluates differently.
pub fn relevant_set_bruteforce(f: &dyn Function) -> Result<Vec<usize>> {
    let n = f.arity();
    if n > MAX_SCAN_ARITY {
        return Err(Error::Capacity {
            arity: n,
            limit: MAX_SCAN_ARITY,
            what: "brute-force relevant set",
        });
    }
    let mut relevant = Vec::new();
    for i in 0..n {
        let bit = 1u64 << i;
        for mask in 0..(1u64 << n) {
            if mask & bit != 0 {
                continue;
            }
            if f.evaluate_mask(mask) != f.evaluate_mask(mask | bit) {
                relevant.push(i);
                break;
            }
        }
    }
    Ok(relevant)
}

/// Outcome of a monotonicity check. A violation exhibits `lower ⊆ upper`
/// (as sorted 1-bit lists) with `f(lower) = 1` and `f(upper) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonotonicityReport {
    Monotone,
    Violation {
        lower: Vec<usize>,
        upper: Vec<usize>,
    },
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        matches!(self, MonotonicityReport::Monotone)
    }
}

fn mask_to_ones(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Exhaustive monotonicity check over all single-bit edges of the cube.
pub fn monotonicity_check(f: &dyn Function) -> Result<MonotonicityReport> {
    let n = f.arity();
    if n > MAX_SCAN_ARITY {
        return Err(Error::Capacity {
            arity: n,
            limit: MAX_SCAN_ARITY,
            what: "exact monotonicity check",
        });
    }
    for mask in 0..(1u64 << n) {
        if !f.evaluate_mask(mask) {
            continue;
        }
        // f(mask) = 1: every superset one bit up must also accept.
        for i in 0..n {
            let bit = 1u64 << i;
            if mask & bit == 0 && !f.evaluate_mask(mask | bit) {
                return Ok(MonotonicityReport::Violation {
                    lower: mask_to_ones(mask),
                    upper: mask_to_ones(mask | bit),
                });
            }
        }
    }
    Ok(MonotonicityReport::Monotone)
}

/// Sampled monotonicity check for large arities: random nested pairs
/// `a ⊆ b`, each bit in `b` with probability 1/2 and kept in `a` with
/// probability 1/2.
pub fn monotonicity_check_sampled(
    f: &dyn Function,
    pairs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MonotonicityReport> {
    let n = f.arity();
    if pairs == 0 {
        return Err(Error::InvalidParameter("pairs must be positive".into()));
    }
    let mut lower = BitState::new(n);
    let mut upper = BitState::new(n);
    for _ in 0..pairs {
        lower.reset();
        upper.reset();
        for i in 0..n {
            if rng.gen::<bool>() {
                upper.flip_to_one(i)?;
                if rng.gen::<bool>() {
                    lower.flip_to_one(i)?;
                }
            }
        }
        if f.evaluate(&lower) && !f.evaluate(&upper) {
            return Ok(MonotonicityReport::Violation {
                lower: lower.ones().collect(),
                upper: upper.ones().collect(),
            });
        }
    }
    Ok(MonotonicityReport::Monotone)
}

fn check_dp_arity(n: usize, what: &'static str) -> Result<()> {
    if n > MAX_DP_ARITY {
        return Err(Error::Capacity {
            arity: n,
            limit: MAX_DP_ARITY,
            what,
        });
    }
    Ok(())
}

fn active_table(f: &dyn Function) -> Vec<bool> {
    let n = f.arity();
    (0..(1u64 << n)).map(|m| f.evaluate_mask(m)).collect()
}

/// A-priori absolute error bound for the float dynamic programs:
/// n · C(n, r) · 2^n unit round-offs.
fn dp_error_bound(n: usize, r: usize) -> f64 {
    n as f64 * binomial(n, r) as f64 * (1u64 << n) as f64 * f64::EPSILON
}

/// Forward dynamic program: evolve the exact distribution of the r-choice
/// walk under `policy`, one weight slice at a time, and record the
/// cumulative activation probability after each step.
fn policy_dp<P: Weight>(
    f: &dyn Function,
    policy: &dyn Policy,
    r: usize,
    active: &[bool],
) -> Result<Vec<P>> {
    let n = f.arity();
    let mut curve = Vec::with_capacity(n + 1);
    let mut activated = if active[0] { P::one() } else { P::zero() };
    curve.push(activated.clone());
    // Mass over inactive states of the current weight.
    let mut slice: BTreeMap<u64, P> = BTreeMap::new();
    if !active[0] {
        slice.insert(0, P::one());
    }
    let mut zeros = Vec::with_capacity(n);
    let mut proposal = Vec::with_capacity(r);
    let mut class = Vec::with_capacity(r);
    for t in 0..n {
        let mut next: BTreeMap<u64, P> = BTreeMap::new();
        for (&mask, mass) in &slice {
            zeros.clear();
            zeros.extend((0..n).filter(|&i| mask & (1 << i) == 0));
            let z = zeros.len();
            let k = r.min(z);
            let proposals = binomial(z, k) as u64;
            let state = BitState::from_mask(n, mask);
            let view = TrialView::new(f, &state, None, t);
            let mut integrity: Option<Error> = None;
            for_each_combination(z, k, |idx| {
                if integrity.is_some() {
                    return;
                }
                proposal.clear();
                proposal.extend(idx.iter().map(|&j| zeros[j]));
                policy.preferred(&view, &proposal, &mut class);
                if class.is_empty() {
                    integrity = Some(Error::EmptyPreference);
                    return;
                }
                let share = mass.div_u64(proposals).div_u64(class.len() as u64);
                for &c in &class {
                    if proposal.binary_search(&c).is_err() {
                        integrity = Some(Error::ChoiceOutsideProposal(c));
                        return;
                    }
                    let new_mask = mask | (1 << c);
                    if active[new_mask as usize] {
                        activated.add_assign_ref(&share);
                    } else {
                        next.entry(new_mask)
                            .or_insert_with(P::zero)
                            .add_assign_ref(&share);
                    }
                }
            });
            if let Some(e) = integrity {
                return Err(e);
            }
        }
        slice = next;
        curve.push(activated.clone());
    }
    Ok(curve)
}

/// Exact activation curve of the r-choice walk under a shipped policy.
///
/// Runs in exact rational arithmetic up to arity 10 and 64-bit floats up
/// to arity 14 (with the error bound recorded on the curve).
pub fn exact_policy_curve(f: &dyn Function, policy: &dyn Policy, r: usize) -> Result<ExactCurve> {
    let n = f.arity();
    check_dp_arity(n, "exact policy curve")?;
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if policy.requires_graph() && f.graph_vertices().is_none() {
        return Err(Error::PolicyIncompatible {
            policy: policy.name().to_string(),
            function: f.name(),
        });
    }
    let active = active_table(f);
    if n <= MAX_RATIONAL_DP_ARITY {
        let curve = policy_dp::<BigRational>(f, policy, r, &active)?;
        Ok(ExactCurve::exact(n, curve))
    } else {
        let curve = policy_dp::<f64>(f, policy, r, &active)?;
        Ok(ExactCurve::float(n, curve, dp_error_bound(n, r)))
    }
}

/// Backward dynamic program: the best activation probability any adaptive
/// agent can reach. `W_0(S) = f(1_S)`; for k ≥ 1,
/// `W_k(S) = avg over proposals C of max over c ∈ C of W_{k-1}(S ∪ {c})`
/// (1 immediately if `f(1_S) = 1`).
fn optimal_dp<P: Weight>(f: &dyn Function, r: usize, active: &[bool]) -> Vec<P> {
    let n = f.arity();
    let size = 1usize << n;
    let mut prev: Vec<P> = (0..size)
        .map(|m| if active[m] { P::one() } else { P::zero() })
        .collect();
    let mut curve = Vec::with_capacity(n + 1);
    curve.push(prev[0].clone());
    let mut zeros = Vec::with_capacity(n);
    for _k in 1..=n {
        let mut next: Vec<P> = Vec::with_capacity(size);
        for mask in 0..size {
            if active[mask] {
                next.push(P::one());
                continue;
            }
            zeros.clear();
            zeros.extend((0..n).filter(|&i| mask & (1 << i) == 0));
            let z = zeros.len();
            if z == 0 {
                next.push(P::zero());
                continue;
            }
            let k = r.min(z);
            let proposals = binomial(z, k) as u64;
            let mut total = P::zero();
            for_each_combination(z, k, |idx| {
                let mut best: Option<P> = None;
                for &j in idx {
                    let w = prev[mask | (1 << zeros[j])].clone();
                    best = Some(match best.take() {
                        Some(b) => b.max_with(w),
                        None => w,
                    });
                }
                if let Some(b) = best {
                    total.add_assign_ref(&b);
                }
            });
            next.push(total.div_u64(proposals));
        }
        prev = next;
        curve.push(prev[0].clone());
    }
    curve
}

/// Exact activation curve of the best adaptive r-choice agent: the
/// pointwise optimum over all policies.
pub fn optimal_rchoice_curve(f: &dyn Function, r: usize) -> Result<ExactCurve> {
    let n = f.arity();
    check_dp_arity(n, "optimal agent curve")?;
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let active = active_table(f);
    if n <= MAX_RATIONAL_DP_ARITY {
        Ok(ExactCurve::exact(
            n,
            optimal_dp::<BigRational>(f, r, &active),
        ))
    } else {
        Ok(ExactCurve::float(
            n,
            optimal_dp::<f64>(f, r, &active),
            dp_error_bound(n, r),
        ))
    }
}
