//! The walks themselves: the solo walk, the r-choice walk with a pluggable
//! agent policy, and the r-complete walk that flips r bits per step.
//!
//! All three start from all-zeros and flip 0-bits until the function
//! activates. Each step of the r-choice walk proposes min(r, #zeros)
//! distinct uniform 0-bits (so near the end every remaining 0-bit is
//! proposed) and lets the policy pick one of them.

use std::cell::OnceCell;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::families::graph::GraphState;
use crate::function::{Function, Tracker};
use crate::policies::Policy;
use crate::state::BitState;

/// Process descriptor: which walk to run.
#[derive(Clone)]
pub enum Process {
    Solo,
    RChoice { r: usize, policy: Arc<dyn Policy> },
    RComplete { r: usize },
}

impl Process {
    pub fn rchoice(r: usize, policy: Arc<dyn Policy>) -> Self {
        Process::RChoice { r, policy }
    }

    /// The number of bits flipped per step (1 except for r-complete).
    pub fn flips_per_step(&self) -> usize {
        match self {
            Process::RComplete { r } => *r,
            _ => 1,
        }
    }

    pub fn policy_name(&self) -> Option<&str> {
        match self {
            Process::RChoice { policy, .. } => Some(policy.name()),
            _ => None,
        }
    }

    pub fn r(&self) -> usize {
        match self {
            Process::Solo => 1,
            Process::RChoice { r, .. } | Process::RComplete { r } => *r,
        }
    }

    /// Check the descriptor against a function before running trials.
    pub fn validate(&self, f: &dyn Function) -> Result<()> {
        match self {
            Process::Solo => Ok(()),
            Process::RChoice { r, policy } => {
                if *r == 0 {
                    return Err(Error::InvalidParameter("r must be at least 1".into()));
                }
                if policy.requires_graph() && f.graph_vertices().is_none() {
                    return Err(Error::PolicyIncompatible {
                        policy: policy.name().to_string(),
                        function: f.name(),
                    });
                }
                Ok(())
            }
            Process::RComplete { r } => {
                if *r == 0 {
                    return Err(Error::InvalidParameter("r must be at least 1".into()));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Solo => write!(f, "solo"),
            Process::RChoice { r, policy } => {
                write!(f, "rchoice:r={r},policy={}", policy.name())
            }
            Process::RComplete { r } => write!(f, "rcomplete:r={r}"),
        }
    }
}

/// Outcome of one walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HittingSample {
    /// Steps until the function first evaluated to 1.
    pub hitting_time: usize,
    /// Trial stream the sample was drawn on (0 for direct runs).
    pub trial: u64,
    /// Steps whose proposal contained at least one useful bit, when the
    /// tracker can tell.
    pub useful_proposal_steps: Option<u64>,
}

/// What a policy may observe when choosing from a proposal.
pub struct TrialView<'a> {
    pub function: &'a dyn Function,
    pub state: &'a BitState,
    pub tracker: Option<&'a dyn Tracker>,
    pub step: usize,
    useful_cache: OnceCell<Option<Vec<usize>>>,
    graph_cache: OnceCell<Option<GraphState>>,
}

impl<'a> TrialView<'a> {
    pub fn new(
        function: &'a dyn Function,
        state: &'a BitState,
        tracker: Option<&'a dyn Tracker>,
        step: usize,
    ) -> Self {
        TrialView {
            function,
            state,
            tracker,
            step,
            useful_cache: OnceCell::new(),
            graph_cache: OnceCell::new(),
        }
    }

    /// Whether currently-0 bit `index` is useful, if anyone can tell.
    /// Prefers the tracker's incremental answer, falling back to the
    /// function's structural answer computed once per view.
    pub fn useful_contains(&self, index: usize) -> Option<bool> {
        if let Some(t) = self.tracker {
            if t.supports_useful() {
                return t.useful_contains(index);
            }
        }
        let set = self
            .useful_cache
            .get_or_init(|| self.function.useful_bits(self.state).ok().flatten());
        set.as_ref().map(|s| s.binary_search(&index).is_ok())
    }

    /// Graph observables for graph-backed functions: live from the tracker
    /// during walks, rebuilt from the state otherwise (exact analysis).
    pub fn graph(&self) -> Option<&GraphState> {
        if let Some(g) = self.tracker.and_then(|t| t.graph_state()) {
            return Some(g);
        }
        let v = self.function.graph_vertices()?;
        self.graph_cache
            .get_or_init(|| GraphState::from_state(v, self.state).ok())
            .as_ref()
    }
}

/// Floyd's algorithm: `k` distinct uniform positions in `0..len`,
/// appended to `out`. With k = 1 it consumes exactly one `gen_range(0..len)`
/// draw, matching the solo walk's sampling stream.
fn sample_distinct_positions(rng: &mut ChaCha8Rng, len: usize, k: usize, out: &mut Vec<u32>) {
    out.clear();
    debug_assert!(k <= len);
    for j in (len - k)..len {
        let t = rng.gen_range(0..j + 1) as u32;
        if out.contains(&t) {
            out.push(j as u32);
        } else {
            out.push(t);
        }
    }
}

/// Propose min(r, #zeros) distinct 0-bits, sorted ascending.
fn sample_proposal(
    rng: &mut ChaCha8Rng,
    state: &BitState,
    r: usize,
    positions: &mut Vec<u32>,
    proposal: &mut Vec<usize>,
) {
    let zeros = state.zeros();
    let k = r.min(zeros.len());
    sample_distinct_positions(rng, zeros.len(), k, positions);
    proposal.clear();
    proposal.extend(positions.iter().map(|&p| zeros[p as usize] as usize));
    proposal.sort_unstable();
}

/// Solo walk: one uniform 0-bit per step.
pub fn run_solo(f: &dyn Function, rng: &mut ChaCha8Rng) -> Result<HittingSample> {
    let mut state = BitState::new(f.arity());
    let mut tracker = f.tracker();
    let mut steps = 0usize;
    while !tracker.status().is_active() {
        let i = state.sample_zero(rng);
        state.flip_to_one(i)?;
        steps += 1;
        tracker.activate(i)?;
    }
    Ok(HittingSample {
        hitting_time: steps,
        trial: 0,
        useful_proposal_steps: None,
    })
}

/// r-choice walk: the policy picks one bit from each proposal.
pub fn run_rchoice(
    f: &dyn Function,
    policy: &dyn Policy,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Result<HittingSample> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if policy.requires_graph() && f.graph_vertices().is_none() {
        return Err(Error::PolicyIncompatible {
            policy: policy.name().to_string(),
            function: f.name(),
        });
    }
    let mut state = BitState::new(f.arity());
    let mut tracker = f.tracker();
    let count_useful = tracker.supports_useful();
    let mut useful_steps = 0u64;
    let mut positions = Vec::with_capacity(r);
    let mut proposal = Vec::with_capacity(r);
    let mut class = Vec::with_capacity(r);
    let mut steps = 0usize;
    while !tracker.status().is_active() {
        sample_proposal(rng, &state, r, &mut positions, &mut proposal);
        if count_useful
            && proposal
                .iter()
                .any(|&i| tracker.useful_contains(i) == Some(true))
        {
            useful_steps += 1;
        }
        {
            let view = TrialView::new(f, &state, Some(&*tracker), steps);
            policy.preferred(&view, &proposal, &mut class);
        }
        if class.is_empty() {
            return Err(Error::EmptyPreference);
        }
        for &c in &class {
            if !proposal.contains(&c) {
                return Err(Error::ChoiceOutsideProposal(c));
            }
        }
        let chosen = if class.len() == 1 {
            class[0]
        } else {
            class[rng.gen_range(0..class.len())]
        };
        state.flip_to_one(chosen)?;
        steps += 1;
        tracker.activate(chosen)?;
    }
    Ok(HittingSample {
        hitting_time: steps,
        trial: 0,
        useful_proposal_steps: count_useful.then_some(useful_steps),
    })
}

/// r-complete walk: flips min(r, #zeros) uniform distinct 0-bits per step.
pub fn run_rcomplete(f: &dyn Function, r: usize, rng: &mut ChaCha8Rng) -> Result<HittingSample> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let mut state = BitState::new(f.arity());
    let mut tracker = f.tracker();
    let mut positions = Vec::with_capacity(r);
    let mut proposal = Vec::with_capacity(r);
    let mut steps = 0usize;
    while !tracker.status().is_active() {
        sample_proposal(rng, &state, r, &mut positions, &mut proposal);
        steps += 1;
        for &i in proposal.iter() {
            state.flip_to_one(i)?;
            tracker.activate(i)?;
        }
    }
    Ok(HittingSample {
        hitting_time: steps,
        trial: 0,
        useful_proposal_steps: None,
    })
}

/// Run whichever walk the descriptor names.
pub fn run_process(
    f: &dyn Function,
    process: &Process,
    rng: &mut ChaCha8Rng,
) -> Result<HittingSample> {
    match process {
        Process::Solo => run_solo(f, rng),
        Process::RChoice { r, policy } => run_rchoice(f, policy.as_ref(), *r, rng),
        Process::RComplete { r } => run_rcomplete(f, *r, rng),
    }
}

/// Proposal multiplicity census over a function-free walk on `n` bits with
/// uniform choices: how many bits were never proposed, proposed exactly
/// once, and proposed at least twice after `steps` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusCounts {
    pub n: usize,
    pub steps: usize,
    pub never: u64,
    pub once: u64,
    pub twice_plus: u64,
}

impl CensusCounts {
    pub fn never_fraction(&self) -> f64 {
        self.never as f64 / self.n as f64
    }

    pub fn once_fraction(&self) -> f64 {
        self.once as f64 / self.n as f64
    }

    pub fn twice_plus_fraction(&self) -> f64 {
        self.twice_plus as f64 / self.n as f64
    }
}

pub fn collision_census(
    n: usize,
    r: usize,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CensusCounts> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidParameter("n and r must be at least 1".into()));
    }
    if steps > n {
        return Err(Error::InvalidParameter(format!(
            "steps={steps} exceeds the number of bits n={n}"
        )));
    }
    let mut state = BitState::new(n);
    let mut multiplicity = vec![0u8; n];
    let mut positions = Vec::with_capacity(r);
    let mut proposal = Vec::with_capacity(r);
    for _ in 0..steps {
        sample_proposal(rng, &state, r, &mut positions, &mut proposal);
        for &i in proposal.iter() {
            multiplicity[i] = multiplicity[i].saturating_add(1);
        }
        let chosen = if proposal.len() == 1 {
            proposal[0]
        } else {
            proposal[rng.gen_range(0..proposal.len())]
        };
        state.flip_to_one(chosen)?;
    }
    let mut counts = [0u64; 3];
    for &m in &multiplicity {
        counts[m.min(2) as usize] += 1;
    }
    Ok(CensusCounts {
        n,
        steps,
        never: counts[0],
        once: counts[1],
        twice_plus: counts[2],
    })
}

/// Exact probability that a fixed bit is never proposed across `steps`
/// steps: the product over steps of (z - min(r, z)) / z with z the current
/// 0-count.
pub fn expected_never_fraction(n: usize, r: usize, steps: usize) -> f64 {
    let mut p = 1.0;
    for i in 0..steps {
        let z = (n - i) as f64;
        let k = r.min(n - i) as f64;
        p *= (z - k) / z;
    }
    p
}
