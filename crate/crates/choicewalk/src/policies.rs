//! Agent policies for the r-choice walk.
//!
//! A policy narrows each proposal down to a preference class — a nonempty
//! subset of the proposed bits — and the walk flips a uniformly random
//! member of that class. Expressing policies as classes rather than single
//! picks keeps ties explicit (uniform within the class) and lets the exact
//! analysis in [`crate::oracle`] treat every policy as a distribution over
//! the proposal.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::families::graph::EdgeIndex;
use crate::process::TrialView;

/// A rule for choosing from proposals.
///
/// `preferred` must write a nonempty subset of `proposal` into `out`; the
/// walk then picks uniformly within it. Policies must be deterministic
/// given the view — all randomness lives in the walk's uniform pick.
pub trait Policy: Send + Sync {
    fn name(&self) -> &str;

    /// Narrow `proposal` (sorted, distinct, all currently 0) to the
    /// preference class, written into `out`.
    fn preferred(&self, view: &TrialView<'_>, proposal: &[usize], out: &mut Vec<usize>);

    /// Whether the policy reads graph observables and therefore only runs
    /// on graph-backed functions.
    fn requires_graph(&self) -> bool {
        false
    }
}

/// Picks a uniformly random proposed bit.
pub struct Uniform;

impl Policy for Uniform {
    fn name(&self) -> &str {
        "uniform"
    }

    fn preferred(&self, _view: &TrialView<'_>, proposal: &[usize], out: &mut Vec<usize>) {
        out.clear();
        out.extend_from_slice(proposal);
    }
}

/// Picks uniformly among the proposed bits that are still useful —
/// bits whose flip can matter for activation — falling back to the whole
/// proposal when none are (or when the function cannot tell).
pub struct GreedyUseful;

impl Policy for GreedyUseful {
    fn name(&self) -> &str {
        "greedy_useful"
    }

    fn preferred(&self, view: &TrialView<'_>, proposal: &[usize], out: &mut Vec<usize>) {
        out.clear();
        out.extend(
            proposal
                .iter()
                .copied()
                .filter(|&i| view.useful_contains(i) == Some(true)),
        );
        if out.is_empty() {
            out.extend_from_slice(proposal);
        }
    }
}

/// When to end phase 1 of the two-phase connectivity strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSwitch {
    /// Switch once at most v^(2/3) vertices remain outside the largest
    /// component. Tracks the structural condition the strategy needs and
    /// behaves sensibly at small v.
    Adaptive,
    /// Switch after exactly ⌈v·ln ln v⌉ steps, the textbook step count
    /// after which the giant component has swallowed almost every vertex.
    FixedSteps,
}

/// Two-phase strategy for edge-indexed connectivity functions: while the
/// giant component forms, express no preference at all, so the walk stays
/// distributed exactly like the solo process; afterwards prefer proposed
/// edges with at most one endpoint inside the largest component — the only
/// edges that can still change connectivity.
pub struct ConnectivityTwoPhase {
    switch: PhaseSwitch,
}

impl ConnectivityTwoPhase {
    pub fn new(switch: PhaseSwitch) -> Self {
        ConnectivityTwoPhase { switch }
    }

    fn in_phase_one(&self, view: &TrialView<'_>, v: usize) -> bool {
        match self.switch {
            PhaseSwitch::Adaptive => {
                let cutoff = (v as f64).powf(2.0 / 3.0);
                match view.graph() {
                    Some(g) => g.nongiant() as f64 > cutoff,
                    None => false,
                }
            }
            PhaseSwitch::FixedSteps => {
                let lnln = (v as f64).ln().ln();
                let s = if lnln > 0.0 {
                    (v as f64 * lnln).ceil() as usize
                } else {
                    0
                };
                view.step < s
            }
        }
    }
}

impl Policy for ConnectivityTwoPhase {
    fn name(&self) -> &str {
        match self.switch {
            PhaseSwitch::Adaptive => "connectivity_two_phase",
            PhaseSwitch::FixedSteps => "connectivity_two_phase_fixed",
        }
    }

    fn preferred(&self, view: &TrialView<'_>, proposal: &[usize], out: &mut Vec<usize>) {
        out.clear();
        let Some(v) = view.function.graph_vertices() else {
            out.extend_from_slice(proposal);
            return;
        };
        if self.in_phase_one(view, v) {
            out.extend_from_slice(proposal);
            return;
        }
        let Some(graph) = view.graph() else {
            out.extend_from_slice(proposal);
            return;
        };
        let Ok(edges) = EdgeIndex::new(v) else {
            out.extend_from_slice(proposal);
            return;
        };
        out.extend(proposal.iter().copied().filter(|&i| {
            edges
                .pair(i)
                .map(|(a, b)| !(graph.in_largest(a) && graph.in_largest(b)))
                .unwrap_or(false)
        }));
        if out.is_empty() {
            out.extend_from_slice(proposal);
        }
    }

    fn requires_graph(&self) -> bool {
        true
    }
}

/// Prefers proposed edges incident to a vertex of current minimum degree —
/// a k-core-style heuristic for (k-)connectivity.
pub struct MinDegree;

impl Policy for MinDegree {
    fn name(&self) -> &str {
        "min_degree"
    }

    fn preferred(&self, view: &TrialView<'_>, proposal: &[usize], out: &mut Vec<usize>) {
        out.clear();
        let graph = match view.graph() {
            Some(g) => g,
            None => {
                out.extend_from_slice(proposal);
                return;
            }
        };
        let v = graph.vertices();
        let Ok(edges) = EdgeIndex::new(v) else {
            out.extend_from_slice(proposal);
            return;
        };
        let min = graph.min_degree();
        out.extend(proposal.iter().copied().filter(|&i| {
            edges
                .pair(i)
                .map(|(a, b)| graph.degree(a) == min || graph.degree(b) == min)
                .unwrap_or(false)
        }));
        if out.is_empty() {
            out.extend_from_slice(proposal);
        }
    }

    fn requires_graph(&self) -> bool {
        true
    }
}

/// Look up a shipped policy by name.
pub fn policy_by_name(name: &str) -> Result<Arc<dyn Policy>> {
    match name {
        "uniform" => Ok(Arc::new(Uniform)),
        "greedy_useful" => Ok(Arc::new(GreedyUseful)),
        "connectivity_two_phase" => Ok(Arc::new(ConnectivityTwoPhase::new(PhaseSwitch::Adaptive))),
        "connectivity_two_phase_fixed" => {
            Ok(Arc::new(ConnectivityTwoPhase::new(PhaseSwitch::FixedSteps)))
        }
        "min_degree" => Ok(Arc::new(MinDegree)),
        _ => Err(Error::UnknownPolicy(name.to_string())),
    }
}

/// Names of all shipped policies, in a stable order.
pub fn builtin_policies() -> &'static [&'static str] {
    &[
        "uniform",
        "greedy_useful",
        "connectivity_two_phase",
        "connectivity_two_phase_fixed",
        "min_degree",
    ]
}
