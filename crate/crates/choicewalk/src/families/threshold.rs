//! Threshold functions over a designated index set: active once at least
//! `k` of the designated bits are 1. Dictator, junta, prefix threshold,
//! AND, OR, and majority are all instances differing only in how the
//! designated set and threshold are chosen.

use crate::error::{Error, Result};
use crate::function::{Function, SeenBits, Status, Tracker};
use crate::state::BitState;

pub struct ThresholdFunction {
    arity: usize,
    /// Designated indices, sorted ascending.
    bits: Vec<usize>,
    k: usize,
    member: Vec<bool>,
    /// Mask of the designated bits when arity <= 64.
    mask: Option<u64>,
    name: String,
}

impl ThresholdFunction {
    pub fn new(arity: usize, bits: Vec<usize>, k: usize, name: String) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("arity must be positive".into()));
        }
        let mut bits = bits;
        bits.sort_unstable();
        if bits.windows(2).any(|w| w[0] == w[1]) {
            let dup = bits.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
            return Err(Error::DuplicateIndex(dup));
        }
        if let Some(&max) = bits.last() {
            if max >= arity {
                return Err(Error::IndexOutOfRange { index: max, arity });
            }
        }
        if bits.is_empty() {
            return Err(Error::InvalidParameter(
                "the designated set must be nonempty".into(),
            ));
        }
        if k == 0 || k > bits.len() {
            return Err(Error::InvalidParameter(format!(
                "threshold k={k} must lie in 1..={}",
                bits.len()
            )));
        }
        let mut member = vec![false; arity];
        for &b in &bits {
            member[b] = true;
        }
        let mask = (arity <= 64).then(|| bits.iter().fold(0u64, |m, &b| m | 1 << b));
        Ok(ThresholdFunction {
            arity,
            bits,
            k,
            member,
            mask,
            name,
        })
    }

    pub fn dictator(arity: usize, i: usize) -> Result<Self> {
        Self::new(arity, vec![i], 1, format!("dictator:n={arity},i={i}"))
    }

    pub fn junta(arity: usize, bits: Vec<usize>, k: usize) -> Result<Self> {
        let set = bits
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join("+");
        Self::new(arity, bits, k, format!("junta:n={arity},bits={set},k={k}"))
    }

    /// Active once `k` of the first `m` bits are 1.
    pub fn prefix_threshold(arity: usize, m: usize, k: usize) -> Result<Self> {
        if m > arity {
            return Err(Error::InvalidParameter(format!(
                "prefix length m={m} exceeds arity {arity}"
            )));
        }
        Self::new(
            arity,
            (0..m).collect(),
            k,
            format!("prefix_threshold:n={arity},m={m},k={k}"),
        )
    }

    pub fn and(arity: usize) -> Result<Self> {
        Self::new(arity, (0..arity).collect(), arity, format!("and:n={arity}"))
    }

    pub fn or(arity: usize) -> Result<Self> {
        Self::new(arity, (0..arity).collect(), 1, format!("or:n={arity}"))
    }

    /// Strict majority: more than half of the bits.
    pub fn majority(arity: usize) -> Result<Self> {
        Self::new(
            arity,
            (0..arity).collect(),
            arity / 2 + 1,
            format!("majority:n={arity}"),
        )
    }

    fn count_designated(&self, state: &BitState) -> usize {
        self.bits.iter().filter(|&&b| state.is_one(b)).count()
    }
}

impl Function for ThresholdFunction {
    fn arity(&self) -> usize {
        self.arity
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, state: &BitState) -> bool {
        self.count_designated(state) >= self.k
    }

    fn evaluate_mask(&self, mask: u64) -> bool {
        match self.mask {
            Some(m) => (mask & m).count_ones() as usize >= self.k,
            None => self.evaluate(&BitState::from_mask(self.arity, mask)),
        }
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(ThresholdTracker {
            f: self,
            seen: SeenBits::new(self.arity),
            count: 0,
        })
    }

    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        if self.count_designated(state) >= self.k {
            return Err(Error::ActiveState);
        }
        Ok(Some(
            self.bits
                .iter()
                .copied()
                .filter(|&b| !state.is_one(b))
                .collect(),
        ))
    }

    fn known_relevant(&self) -> Option<Vec<usize>> {
        Some(self.bits.clone())
    }
}

struct ThresholdTracker<'f> {
    f: &'f ThresholdFunction,
    seen: SeenBits,
    count: usize,
}

impl Tracker for ThresholdTracker<'_> {
    fn activate(&mut self, index: usize) -> Result<Status> {
        self.seen.insert(index)?;
        if self.f.member[index] {
            self.count += 1;
        }
        Ok(self.status())
    }

    fn status(&self) -> Status {
        if self.count >= self.f.k {
            Status::Active
        } else {
            Status::Inactive
        }
    }

    fn useful_contains(&self, index: usize) -> Option<bool> {
        Some(self.f.member[index] && self.count < self.f.k)
    }

    fn supports_useful(&self) -> bool {
        true
    }
}
