//! Views that reinterpret an existing function on a smaller coordinate set.
//!
//! [`RestrictionView`] forces a set of coordinates to 1 and exposes the
//! remaining ones. [`ContractionView`] keeps only a supplied relevant set
//! and evaluates with the dropped coordinates fixed to 0; construction
//! fuzz-checks that the dropped coordinates really are irrelevant (for a
//! monotone function it suffices that the all-0 and all-1 fills agree).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::function::{Function, RecomputeTracker, Tracker};
use crate::state::BitState;

fn checked_index_set(indices: &[usize], arity: usize) -> Result<Vec<usize>> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateIndex(w[0]));
    }
    if let Some(&max) = sorted.last() {
        if max >= arity {
            return Err(Error::IndexOutOfRange { index: max, arity });
        }
    }
    Ok(sorted)
}

/// `f` with the `forced` coordinates fixed to 1, on the remaining
/// coordinates in increasing order.
pub struct RestrictionView<'f> {
    base: &'f dyn Function,
    forced: Vec<usize>,
    /// Base coordinate of each view coordinate.
    free: Vec<usize>,
}

/// Restrict `f` by forcing the given coordinates to 1.
pub fn restrict<'f>(f: &'f dyn Function, forced: &[usize]) -> Result<RestrictionView<'f>> {
    let forced = checked_index_set(forced, f.arity())?;
    let mut is_forced = vec![false; f.arity()];
    for &i in &forced {
        is_forced[i] = true;
    }
    let free = (0..f.arity()).filter(|&i| !is_forced[i]).collect();
    Ok(RestrictionView {
        base: f,
        forced,
        free,
    })
}

impl RestrictionView<'_> {
    pub fn forced(&self) -> &[usize] {
        &self.forced
    }

    /// Base coordinates of the view coordinates, increasing.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    fn embed(&self, state: &BitState) -> BitState {
        debug_assert_eq!(state.arity(), self.free.len());
        let mut base = BitState::new(self.base.arity());
        for &i in &self.forced {
            base.flip_to_one(i).expect("forced indices distinct");
        }
        for j in state.ones() {
            base.flip_to_one(self.free[j])
                .expect("free and forced disjoint");
        }
        base
    }
}

impl Function for RestrictionView<'_> {
    fn arity(&self) -> usize {
        self.free.len()
    }

    fn name(&self) -> String {
        format!("{}^{}", self.base.name(), self.forced.len())
    }

    fn evaluate(&self, state: &BitState) -> bool {
        self.base.evaluate(&self.embed(state))
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(RecomputeTracker::new(self))
    }

    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        let embedded = self.embed(state);
        let Some(base_useful) = self.base.useful_bits(&embedded)? else {
            return Ok(None);
        };
        // Map base coordinates back to view coordinates; forced bits are 1
        // in the embedding, so everything reported is free.
        let mut out = Vec::with_capacity(base_useful.len());
        for b in base_useful {
            let j = self.free.binary_search(&b).expect("useful bits are 0-bits");
            out.push(j);
        }
        out.sort_unstable();
        Ok(Some(out))
    }
}

/// `f` on a supplied relevant coordinate list, dropped coordinates fixed
/// to 0.
pub struct ContractionView<'f> {
    base: &'f dyn Function,
    /// Base coordinate of each view coordinate, increasing.
    relevant: Vec<usize>,
}

const CONTRACTION_FUZZ_ROUNDS: usize = 64;
const CONTRACTION_FUZZ_SEED: u64 = 0x636f_6e74_7261_6374;

/// Contract `f` onto `relevant`. Errors with an integrity failure when a
/// probe input shows the dropped coordinates still matter.
pub fn contract<'f>(f: &'f dyn Function, relevant: &[usize]) -> Result<ContractionView<'f>> {
    let relevant = checked_index_set(relevant, f.arity())?;
    let view = ContractionView { base: f, relevant };
    view.fuzz_fills()?;
    Ok(view)
}

impl ContractionView<'_> {
    pub fn relevant(&self) -> &[usize] {
        &self.relevant
    }

    fn embed_with_fill(&self, state: &BitState, fill_one: bool) -> BitState {
        let mut base = BitState::new(self.base.arity());
        if fill_one {
            let mut keep = vec![false; self.base.arity()];
            for &i in &self.relevant {
                keep[i] = true;
            }
            for (i, &k) in keep.iter().enumerate() {
                if !k {
                    base.flip_to_one(i).expect("fresh state");
                }
            }
        }
        for j in state.ones() {
            base.flip_to_one(self.relevant[j])
                .expect("relevant distinct");
        }
        base
    }

    /// For monotone `f`, the all-0 and all-1 fills bracket every fill; if
    /// they agree on a probe the value is fill-independent there.
    fn fuzz_fills(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(CONTRACTION_FUZZ_SEED);
        let arity = self.relevant.len();
        for _ in 0..CONTRACTION_FUZZ_ROUNDS {
            let mut probe = BitState::new(arity);
            for i in 0..arity {
                if rng.gen_bool(0.5) {
                    probe.flip_to_one(i).expect("fresh probe");
                }
            }
            let lo = self.base.evaluate(&self.embed_with_fill(&probe, false));
            let hi = self.base.evaluate(&self.embed_with_fill(&probe, true));
            if lo != hi {
                return Err(Error::ContractionTooSmall);
            }
        }
        Ok(())
    }
}

impl Function for ContractionView<'_> {
    fn arity(&self) -> usize {
        self.relevant.len()
    }

    fn name(&self) -> String {
        format!("{}~{}", self.base.name(), self.relevant.len())
    }

    fn evaluate(&self, state: &BitState) -> bool {
        self.base.evaluate(&self.embed_with_fill(state, false))
    }

    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(RecomputeTracker::new(self))
    }

    fn useful_bits(&self, state: &BitState) -> Result<Option<Vec<usize>>> {
        let embedded = self.embed_with_fill(state, false);
        let Some(base_useful) = self.base.useful_bits(&embedded)? else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for b in base_useful {
            if let Ok(j) = self.relevant.binary_search(&b) {
                out.push(j);
            }
        }
        out.sort_unstable();
        Ok(Some(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::threshold::ThresholdFunction;
    use crate::function::evaluate;

    #[test]
    fn restricting_majority_of_three_gives_or_of_two() {
        let maj = ThresholdFunction::majority(3).unwrap();
        let view = restrict(&maj, &[2]).unwrap();
        assert_eq!(view.arity(), 2);
        assert!(!view.evaluate(&BitState::new(2)));
        assert!(view.evaluate(&BitState::from_ones(2, &[0]).unwrap()));
        assert!(view.evaluate(&BitState::from_ones(2, &[1]).unwrap()));
        assert!(view.evaluate(&BitState::from_ones(2, &[0, 1]).unwrap()));
    }

    #[test]
    fn restricting_or_yields_a_constant_one_view() {
        let or3 = ThresholdFunction::or(3).unwrap();
        let view = restrict(&or3, &[1]).unwrap();
        assert_eq!(view.arity(), 2);
        assert!(view.evaluate(&BitState::new(2)));
        assert!(view.evaluate(&BitState::from_ones(2, &[0, 1]).unwrap()));
    }

    #[test]
    fn contraction_keeps_the_designated_set() {
        let f = ThresholdFunction::prefix_threshold(10, 4, 2).unwrap();
        let view = contract(&f, &[0, 1, 2, 3]).unwrap();
        assert_eq!(view.arity(), 4);
        assert!(!view.evaluate(&BitState::from_ones(4, &[0]).unwrap()));
        assert!(view.evaluate(&BitState::from_ones(4, &[1, 3]).unwrap()));
    }

    #[test]
    fn contraction_with_a_superset_is_accepted() {
        let f = ThresholdFunction::dictator(8, 5).unwrap();
        let view = contract(&f, &[2, 5, 7]).unwrap();
        assert!(view.evaluate(&BitState::from_ones(3, &[1]).unwrap()));
        assert!(!view.evaluate(&BitState::from_ones(3, &[0, 2]).unwrap()));
    }

    #[test]
    fn contraction_missing_a_relevant_bit_is_rejected() {
        let f = ThresholdFunction::prefix_threshold(10, 4, 2).unwrap();
        assert!(matches!(
            contract(&f, &[0, 1]),
            Err(Error::ContractionTooSmall)
        ));
    }

    #[test]
    fn zero_arity_contraction_of_a_constant_view() {
        let or3 = ThresholdFunction::or(3).unwrap();
        let constant = restrict(&or3, &[1]).unwrap();
        let nothing = contract(&constant, &[]).unwrap();
        assert_eq!(nothing.arity(), 0);
        assert!(nothing.evaluate(&BitState::new(0)));
    }

    #[test]
    fn views_compose_and_check_arity() {
        let f = ThresholdFunction::prefix_threshold(8, 4, 2).unwrap();
        let r = restrict(&f, &[0]).unwrap();
        let c = contract(&r, &[0, 1, 2]).unwrap();
        assert_eq!(c.arity(), 3);
        // One prefix bit is forced, so one more designated bit activates.
        assert!(c.evaluate(&BitState::from_ones(3, &[2]).unwrap()));
        assert!(evaluate(&c, &BitState::new(2)).is_err());
    }

    #[test]
    fn restriction_useful_bits_map_down() {
        let f = ThresholdFunction::prefix_threshold(8, 4, 2).unwrap();
        let r = restrict(&f, &[1]).unwrap();
        // View coordinates are base {0,2,3,4,5,6,7}; useful are 0,2,3 in
        // base terms, i.e. view indices 0,1,2.
        let useful = r.useful_bits(&BitState::new(7)).unwrap().unwrap();
        assert_eq!(useful, vec![0, 1, 2]);
    }
}
