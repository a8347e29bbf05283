//! Tribes: an OR of ANDs over a partition of the coordinates into
//! contiguous blocks. Block sizes are `s` or `s+1`; when `s` does not
//! divide `n`, the first `n mod s` of the `floor(n/s)` tribes get the
//! extra bit. Pairs where the remainder exceeds the tribe count admit no
//! such partition and are rejected.

use crate::error::{Error, Result};
use crate::function::{Function, SeenBits, Status, Tracker};
use crate::state::BitState;

pub struct Tribes {
    arity: usize,
    s: usize,
    /// Tribe id of every coordinate.
    tribe_of: Vec<u32>,
    /// Size of each tribe.
    sizes: Vec<u32>,
    /// Tribe masks when arity <= 64.
    masks: Option<Vec<u64>>,
}

impl Tribes {
    pub fn new(arity: usize, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter(
                "tribe size must be positive".into(),
            ));
        }
        if s > arity {
            return Err(Error::InvalidParameter(format!(
                "tribe size {s} exceeds arity {arity}"
            )));
        }
        let tribes = arity / s;
        let extra = arity % s;
        // Each of the `extra` leftover bits must land in a distinct tribe
        // (sizes may only be s or s+1); otherwise no partition exists.
        if extra > tribes {
            return Err(Error::InvalidParameter(format!(
                "no partition of {arity} bits into tribes of size {s} or {}",
                s + 1
            )));
        }
        let mut sizes = vec![s as u32; tribes];
        for sz in sizes.iter_mut().take(extra) {
            *sz += 1;
        }
        let mut tribe_of = Vec::with_capacity(arity);
        for (id, &sz) in sizes.iter().enumerate() {
            tribe_of.extend(std::iter::repeat(id as u32).take(sz as usize));
        }
        debug_assert_eq!(tribe_of.len(), arity);
        let masks = (arity <= 64).then(|| {
            let mut masks = vec![0u64; tribes];
            for (i, &t) in tribe_of.iter().enumerate() {
                masks[t as usize] |= 1 << i;
            }
            masks
        });
        Ok(Tribes {
            arity,
            s,
            tribe_of,
            sizes,
            masks,
        })
    }

    pub fn tribe_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn tribe_sizes(&self) -> &[u32] {
        &self.sizes
    }
}

impl Function for Tribes {
    fn arity(&self) -> usize {
        self.arity
    }

    fn name(&self) -> String {
        format!("tribes:n={},s={}", self.arity, self.s)
    }

    fn evaluate(&self, state: &BitState) -> bool {
        let mut remaining = self.sizes.clone();
        for i in state.ones() {
            let t = self.tribe_of[i] as usize;
            remaining[t] -= 1;
            if remaining[t] == 0 {
                return true;
            }
        }
        false
    }

    fn evaluate_mask(&self, mask: u64) -> bool {
        match &self.masks {
            Some(masks) => masks.iter().any(|&m| mask & m == m),
            None => self.evaluate(&BitState::from_mask(self.arity, mask)),
        }
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(TribesTracker {
            remaining: self.sizes.clone(),
            tribe_of: &self.tribe_of,
            seen: SeenBits::new(self.arity),
            active: false,
        })
    }

    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        if self.evaluate(state) {
            return Err(Error::ActiveState);
        }
        // While inactive no tribe is complete, so every 0-bit still moves
        // some tribe toward completion.
        let mut out: Vec<usize> = state.zeros().iter().map(|&z| z as usize).collect();
        out.sort_unstable();
        Ok(Some(out))
    }

    fn known_relevant(&self) -> Option<Vec<usize>> {
        Some((0..self.arity).collect())
    }
}

struct TribesTracker<'f> {
    remaining: Vec<u32>,
    tribe_of: &'f [u32],
    seen: SeenBits,
    active: bool,
}

impl Tracker for TribesTracker<'_> {
    fn activate(&mut self, index: usize) -> Result<Status> {
        self.seen.insert(index)?;
        let t = self.tribe_of[index] as usize;
        self.remaining[t] -= 1;
        if self.remaining[t] == 0 {
            self.active = true;
        }
        Ok(self.status())
    }

    fn status(&self) -> Status {
        if self.active {
            Status::Active
        } else {
            Status::Inactive
        }
    }

    fn useful_contains(&self, _index: usize) -> Option<bool> {
        Some(!self.active)
    }

    fn supports_useful(&self) -> bool {
        true
    }
}
