//! Monotone Boolean functions and incremental activation trackers.
//!
//! A [`Function`] is a monotone Boolean function `f : {0,1}^n -> {0,1}`
//! with `f(all-ones) = 1`. Walks never evaluate `f` from scratch on every
//! step; instead they obtain a per-trial [`Tracker`] that absorbs one
//! activation at a time and reports the running status.
//!
//! Bit indices are 0-based throughout the crate.

use crate::error::{Error, Result};
use crate::families::graph::GraphState;
use crate::state::BitState;

/// Activation status of a function on the accumulated set of 1-bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The function still evaluates to 0.
    Inactive,
    /// The function evaluates to 1 (and will stay 1: flips are 0 -> 1 only).
    Active,
}

impl Status {
    pub fn is_active(self) -> bool {
        self == Status::Active
    }
}

/// A monotone Boolean function with `f(all-ones) = 1`.
///
/// Implementations may assume `state.arity() == self.arity()` in the hot
/// methods; the free function [`evaluate`] performs the checked entry.
pub trait Function: Send + Sync {
    fn arity(&self) -> usize;

    /// Short display name, e.g. `tribes:n=8,s=2`.
    fn name(&self) -> String;

    fn evaluate(&self, state: &BitState) -> bool;

    /// Evaluate on a mask; only called with `arity <= 64`.
    fn evaluate_mask(&self, mask: u64) -> bool {
        self.evaluate(&BitState::from_mask(self.arity(), mask))
    }

    /// Fresh tracker for one walk starting from the all-zeros state.
    fn tracker(&self) -> Box<dyn Tracker + '_>;

    /// The currently-0 coordinates whose activation can still affect the
    /// function given `state`, sorted ascending.
    ///
    /// Exact for the structured families; a sound superset for random DNF;
    /// `Ok(None)` when the family offers no structural answer. Calling this
    /// on a state where the function is already active is a usage error.
    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        if self.evaluate(state) {
            return Err(Error::ActiveState);
        }
        Ok(None)
    }

    /// Statically known relevant set, sorted ascending, if the family
    /// determines it structurally. When present it equals the brute-force
    /// relevant set.
    fn known_relevant(&self) -> Option<Vec<usize>> {
        None
    }

    /// Vertex count for graph-backed functions (coordinates are the edges
    /// of a complete graph); `None` otherwise.
    fn graph_vertices(&self) -> Option<usize> {
        None
    }
}

/// Incremental activation state for one walk.
///
/// After activating exactly the set `S` from all-zeros, [`Tracker::status`]
/// equals `f` evaluated at `1_S`, for every prefix of any activation order.
pub trait Tracker {
    /// Record that bit `index` flipped 0 -> 1 and report the new status.
    /// Activating the same bit twice is a usage error.
    fn activate(&mut self, index: usize) -> Result<Status>;

    fn status(&self) -> Status;

    /// Fast path for membership in the useful set, valid for bits that are
    /// currently 0 in the tracker's accumulated state. `None` when the
    /// tracker has no structural answer.
    fn useful_contains(&self, index: usize) -> Option<bool> {
        let _ = index;
        None
    }

    /// Whether [`Tracker::useful_contains`] gives answers.
    fn supports_useful(&self) -> bool {
        false
    }

    /// Live graph observables for graph-backed functions.
    fn graph_state(&self) -> Option<&GraphState> {
        None
    }
}

/// Checked evaluation: verifies the arity matches before delegating.
pub fn evaluate(f: &dyn Function, state: &BitState) -> Result<bool> {
    if state.arity() != f.arity() {
        return Err(Error::ArityMismatch {
            state: state.arity(),
            function: f.arity(),
        });
    }
    Ok(f.evaluate(state))
}

/// Dense set of already-activated bits with duplicate detection.
#[derive(Debug, Clone)]
pub(crate) struct SeenBits {
    words: Vec<u64>,
    arity: usize,
}

impl SeenBits {
    pub fn new(arity: usize) -> Self {
        SeenBits {
            words: vec![0; arity.div_ceil(64)],
            arity,
        }
    }

    /// Mark `index` as activated; errors on out-of-range or repeat.
    pub fn insert(&mut self, index: usize) -> Result<()> {
        if index >= self.arity {
            return Err(Error::IndexOutOfRange {
                index,
                arity: self.arity,
            });
        }
        let (w, b) = (index / 64, index % 64);
        if self.words[w] >> b & 1 == 1 {
            return Err(Error::AlreadyOne(index));
        }
        self.words[w] |= 1 << b;
        Ok(())
    }
}

/// Fallback tracker that re-evaluates the function after every activation.
/// Used by views and any function without an incremental shortcut.
pub struct RecomputeTracker<'f> {
    f: &'f dyn Function,
    state: BitState,
    status: Status,
}

impl<'f> RecomputeTracker<'f> {
    pub fn new(f: &'f dyn Function) -> Self {
        let state = BitState::new(f.arity());
        let status = if f.evaluate(&state) {
            Status::Active
        } else {
            Status::Inactive
        };
        RecomputeTracker { f, state, status }
    }
}

impl Tracker for RecomputeTracker<'_> {
    fn activate(&mut self, index: usize) -> Result<Status> {
        self.state.flip_to_one(index)?;
        if self.status == Status::Inactive && self.f.evaluate(&self.state) {
            self.status = Status::Active;
        }
        Ok(self.status)
    }

    fn status(&self) -> Status {
        self.status
    }
}
