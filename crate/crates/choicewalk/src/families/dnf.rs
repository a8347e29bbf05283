//! Random monotone DNF: an OR of `clauses` conjunctions, each over `width`
//! distinct coordinates drawn uniformly from a seeded generator. Monotone
//! by construction (no negations); mainly used as fuzz feedstock.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::function::{Function, SeenBits, Status, Tracker};
use crate::state::BitState;

pub struct RandomMonotoneDnf {
    arity: usize,
    clauses: Vec<Vec<usize>>,
    /// Clause ids containing each coordinate.
    clauses_of: Vec<Vec<u32>>,
    /// Clause masks when arity <= 64.
    masks: Option<Vec<u64>>,
    seed: u64,
}

impl RandomMonotoneDnf {
    pub fn new(arity: usize, clauses: usize, width: usize, seed: u64) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("arity must be positive".into()));
        }
        if clauses == 0 {
            return Err(Error::InvalidParameter("need at least one clause".into()));
        }
        if width == 0 || width > arity {
            return Err(Error::InvalidParameter(format!(
                "clause width {width} must lie in 1..={arity}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut clause_list = Vec::with_capacity(clauses);
        for _ in 0..clauses {
            // Partial Fisher-Yates over a scratch index array.
            let mut pool: Vec<usize> = (0..arity).collect();
            for i in 0..width {
                let j = rng.gen_range(i..arity);
                pool.swap(i, j);
            }
            let mut clause: Vec<usize> = pool[..width].to_vec();
            clause.sort_unstable();
            clause_list.push(clause);
        }
        let mut clauses_of = vec![Vec::new(); arity];
        for (id, clause) in clause_list.iter().enumerate() {
            for &i in clause {
                clauses_of[i].push(id as u32);
            }
        }
        let masks = (arity <= 64).then(|| {
            clause_list
                .iter()
                .map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i))
                .collect()
        });
        Ok(RandomMonotoneDnf {
            arity,
            clauses: clause_list,
            clauses_of,
            masks,
            seed,
        })
    }

    pub fn clause_sets(&self) -> &[Vec<usize>] {
        &self.clauses
    }
}

impl Function for RandomMonotoneDnf {
    fn arity(&self) -> usize {
        self.arity
    }

    fn name(&self) -> String {
        format!(
            "random_monotone_dnf:n={},clauses={},width={},seed={}",
            self.arity,
            self.clauses.len(),
            self.clauses[0].len(),
            self.seed
        )
    }

    fn evaluate(&self, state: &BitState) -> bool {
        self.clauses
            .iter()
            .any(|c| c.iter().all(|&i| state.is_one(i)))
    }

    fn evaluate_mask(&self, mask: u64) -> bool {
        match &self.masks {
            Some(masks) => masks.iter().any(|&m| mask & m == m),
            None => self.evaluate(&BitState::from_mask(self.arity, mask)),
        }
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(DnfTracker {
            f: self,
            remaining: self.clauses.iter().map(|c| c.len() as u32).collect(),
            seen: SeenBits::new(self.arity),
            active: false,
        })
    }

    /// Sound superset of the useful set: the 0-bits that appear in at least
    /// one clause. (Subsumed clauses can make some of these irrelevant.)
    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        if self.evaluate(state) {
            return Err(Error::ActiveState);
        }
        let mut out: Vec<usize> = state
            .zeros()
            .iter()
            .map(|&z| z as usize)
            .filter(|&i| !self.clauses_of[i].is_empty())
            .collect();
        out.sort_unstable();
        Ok(Some(out))
    }
}

struct DnfTracker<'f> {
    f: &'f RandomMonotoneDnf,
    /// Unactivated bits left per clause.
    remaining: Vec<u32>,
    seen: SeenBits,
    active: bool,
}

impl Tracker for DnfTracker<'_> {
    fn activate(&mut self, index: usize) -> Result<Status> {
        self.seen.insert(index)?;
        for &c in &self.f.clauses_of[index] {
            self.remaining[c as usize] -= 1;
            if self.remaining[c as usize] == 0 {
                self.active = true;
            }
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

    fn useful_contains(&self, index: usize) -> Option<bool> {
        Some(!self.f.clauses_of[index].is_empty())
    }

    fn supports_useful(&self) -> bool {
        true
    }
}
