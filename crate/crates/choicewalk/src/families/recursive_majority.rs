//! Recursive majority: a depth-`t` complete `k`-ary tree (`k` odd, >= 3)
//! whose leaves are the `k^t` coordinates, in order. An internal node is
//! active when at least (k+1)/2 of its children are active; the function
//! is the root.
//!
//! The node covering leaves `[i*k^j, (i+1)*k^j)` sits at level `j`,
//! position `i`.

use crate::error::{Error, Result};
use crate::function::{Function, SeenBits, Status, Tracker};
use crate::state::BitState;

const MAX_ARITY: usize = 1 << 26;

pub struct RecursiveMajority {
    k: usize,
    depth: usize,
    arity: usize,
    /// Majority threshold (k+1)/2.
    need: u32,
    /// Flat offsets of each internal level 1..=depth into node arrays.
    level_offset: Vec<usize>,
    node_count: usize,
}

impl RecursiveMajority {
    pub fn new(k: usize, depth: usize) -> Result<Self> {
        if k < 3 || k % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "branching factor must be odd and >= 3, got {k}"
            )));
        }
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be positive".into()));
        }
        let arity = k
            .checked_pow(depth as u32)
            .filter(|&n| n <= MAX_ARITY)
            .ok_or(Error::Capacity {
                arity: usize::MAX,
                limit: MAX_ARITY,
                what: "recursive_majority arity k^t",
            })?;
        // Level j (1-based) has k^(depth-j) nodes.
        let mut level_offset = Vec::with_capacity(depth + 1);
        let mut total = 0usize;
        for j in 1..=depth {
            level_offset.push(total);
            total += k.pow((depth - j) as u32);
        }
        level_offset.push(total);
        Ok(RecursiveMajority {
            k,
            depth,
            arity,
            need: ((k + 1) / 2) as u32,
            level_offset,
            node_count: total,
        })
    }

    pub fn branching(&self) -> usize {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn node(&self, level: usize, pos: usize) -> usize {
        self.level_offset[level - 1] + pos
    }

    /// Active flags for every internal node, bottom-up from a leaf predicate.
    fn node_actives(&self, leaf: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut active = vec![false; self.node_count];
        for j in 1..=self.depth {
            let nodes = self.k.pow((self.depth - j) as u32);
            for pos in 0..nodes {
                let mut count = 0u32;
                for c in 0..self.k {
                    let child_pos = pos * self.k + c;
                    let child_active = if j == 1 {
                        leaf(child_pos)
                    } else {
                        active[self.node(j - 1, child_pos)]
                    };
                    if child_active {
                        count += 1;
                    }
                }
                active[self.node(j, pos)] = count >= self.need;
            }
        }
        active
    }
}

impl Function for RecursiveMajority {
    fn arity(&self) -> usize {
        self.arity
    }

    fn name(&self) -> String {
        format!("recursive_majority:k={},t={}", self.k, self.depth)
    }

    fn evaluate(&self, state: &BitState) -> bool {
        self.node_actives(|i| state.is_one(i))[self.node(self.depth, 0)]
    }

    fn evaluate_mask(&self, mask: u64) -> bool {
        self.node_actives(|i| mask >> i & 1 == 1)[self.node(self.depth, 0)]
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(RecMajTracker {
            f: self,
            count: vec![0; self.node_count],
            active: vec![false; self.node_count],
            seen: SeenBits::new(self.arity),
        })
    }

    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        let active = self.node_actives(|i| state.is_one(i));
        if active[self.node(self.depth, 0)] {
            return Err(Error::ActiveState);
        }
        // A 0-leaf can still matter exactly when no ancestor is already
        // decided: an active node is constant-1 under further flips, and no
        // node can be constant-0 because all-ones activates everything.
        let mut out = Vec::new();
        'leaf: for i in 0..self.arity {
            if state.is_one(i) {
                continue;
            }
            let mut pos = i;
            for j in 1..=self.depth {
                pos /= self.k;
                if active[self.node(j, pos)] {
                    continue 'leaf;
                }
            }
            out.push(i);
        }
        Ok(Some(out))
    }

    fn known_relevant(&self) -> Option<Vec<usize>> {
        Some((0..self.arity).collect())
    }
}

struct RecMajTracker<'f> {
    f: &'f RecursiveMajority,
    /// Active-children count per internal node.
    count: Vec<u32>,
    active: Vec<bool>,
    seen: SeenBits,
}

impl Tracker for RecMajTracker<'_> {
    fn activate(&mut self, index: usize) -> Result<Status> {
        self.seen.insert(index)?;
        let mut pos = index;
        for j in 1..=self.f.depth {
            pos /= self.f.k;
            let node = self.f.node(j, pos);
            self.count[node] += 1;
            if self.count[node] == self.f.need {
                self.active[node] = true;
                // This node just became active; keep propagating upward.
            } else {
                break;
            }
        }
        Ok(self.status())
    }

    fn status(&self) -> Status {
        if self.active[self.f.node(self.f.depth, 0)] {
            Status::Active
        } else {
            Status::Inactive
        }
    }

    fn useful_contains(&self, index: usize) -> Option<bool> {
        let mut pos = index;
        for j in 1..=self.f.depth {
            pos /= self.f.k;
            if self.active[self.f.node(j, pos)] {
                return Some(false);
            }
        }
        Some(true)
    }

    fn supports_useful(&self) -> bool {
        true
    }
}
