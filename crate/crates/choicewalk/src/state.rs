//! Activation states over `n` bits.
//!
//! A [`BitState`] is the current 0/1 assignment of a walk. It keeps a packed
//! bit array for O(1) membership plus a dense array of the indices that are
//! still 0, so a uniformly random 0-bit can be drawn in O(1) and removed in
//! O(1) by swap-remove. Flips are 0 -> 1 only.

use rand::Rng;

use crate::error::{Error, Result};

const GONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitState {
    words: Vec<u64>,
    zeros: Vec<u32>,
    /// Position of each index inside `zeros`, or `GONE` once the bit is 1.
    zero_pos: Vec<u32>,
    arity: usize,
}

impl BitState {
    /// All-zeros state on `arity` bits.
    pub fn new(arity: usize) -> Self {
        assert!(arity < GONE as usize, "arity too large for BitState");
        BitState {
            words: vec![0; arity.div_ceil(64)],
            zeros: (0..arity as u32).collect(),
            zero_pos: (0..arity as u32).collect(),
            arity,
        }
    }

    /// State with exactly the listed bits set to 1.
    pub fn from_ones(arity: usize, ones: &[usize]) -> Result<Self> {
        let mut s = BitState::new(arity);
        for &i in ones {
            s.flip_to_one(i)?;
        }
        Ok(s)
    }

    /// State on `arity <= 64` bits read off a mask (bit `i` of `mask`).
    pub fn from_mask(arity: usize, mask: u64) -> Self {
        debug_assert!(arity <= 64);
        let mut s = BitState::new(arity);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            s.flip_to_one(i).expect("mask bits are distinct");
            m &= m - 1;
        }
        s
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of 1-bits.
    pub fn weight(&self) -> usize {
        self.arity - self.zeros.len()
    }

    pub fn is_one(&self, index: usize) -> bool {
        debug_assert!(index < self.arity);
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    /// Indices that are still 0, in no particular order.
    pub fn zeros(&self) -> &[u32] {
        &self.zeros
    }

    /// Flip bit `index` from 0 to 1.
    pub fn flip_to_one(&mut self, index: usize) -> Result<()> {
        if index >= self.arity {
            return Err(Error::IndexOutOfRange {
                index,
                arity: self.arity,
            });
        }
        let pos = self.zero_pos[index];
        if pos == GONE {
            return Err(Error::AlreadyOne(index));
        }
        let last = *self.zeros.last().expect("pos valid implies nonempty");
        self.zeros[pos as usize] = last;
        self.zero_pos[last as usize] = pos;
        self.zeros.pop();
        self.zero_pos[index] = GONE;
        self.words[index / 64] |= 1 << (index % 64);
        Ok(())
    }

    /// Draw a uniformly random 0-bit. Panics if no 0-bit remains.
    pub fn sample_zero<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let j = rng.gen_range(0..self.zeros.len());
        self.zeros[j] as usize
    }

    /// Reset to all zeros, keeping the allocation.
    pub fn reset(&mut self) {
        self.words.fill(0);
        self.zeros.clear();
        self.zeros.extend(0..self.arity as u32);
        for (i, p) in self.zero_pos.iter_mut().enumerate() {
            *p = i as u32;
        }
    }

    /// Iterate over the 1-bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.arity).filter(|&i| self.is_one(i))
    }

    /// Mask of the 1-bits; only valid for arity <= 64.
    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.arity <= 64);
        self.words.first().copied().unwrap_or(0)
    }
}
