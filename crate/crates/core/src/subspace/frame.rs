use num_integer::Integer;

use crate::pattern::UniverseKind;
use crate::space::{Basis, Side, SpaceSpec};

/// Threshold `N` on `|i|` and modulus `M` of the tail decomposition.
///
/// Positions `p > N` split into `M` blocks by `p mod M`. On two-sided universes block
/// positions carry two slots, `+p` and `-p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame {
    pub threshold: u64,
    pub modulus: u64,
}

impl Frame {
    pub fn new(threshold: u64, modulus: u64) -> Self {
        assert!(modulus > 0);
        Frame { threshold, modulus }
    }

    pub fn join(self, other: Frame) -> Frame {
        Frame::new(self.threshold.max(other.threshold), self.modulus.lcm(&other.modulus))
    }

    /// True when every block of `coarse` is a union of blocks of `self`.
    pub fn refines(self, coarse: Frame) -> bool {
        self.threshold >= coarse.threshold && self.modulus.is_multiple_of(coarse.modulus)
    }

    /// Smallest tail position of `block`.
    pub fn first_position(self, block: usize) -> u64 {
        let start = self.threshold + 1;
        let m = self.modulus;
        start + (block as u64 + m - start % m) % m
    }

    pub fn block_of(self, p: u64) -> usize {
        (p % self.modulus) as usize
    }
}

/// Coordinates of the reduced space: specials, window regulars, then block slots.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub frame: Frame,
    pub specials: usize,
    pub window: Vec<i64>,
    pub slots: usize,
}

impl Layout {
    pub fn new(space: &SpaceSpec, side: Side, frame: Frame) -> Self {
        let slots = if space.universe().kind() == UniverseKind::Positive { 1 } else { 2 };
        Layout {
            frame,
            specials: space.specials(side).len(),
            window: space.universe().window(frame.threshold),
            slots,
        }
    }

    pub fn window_dim(&self) -> usize {
        self.specials + self.window.len()
    }

    pub fn blocks(&self) -> usize {
        self.frame.modulus as usize
    }

    pub fn dim(&self) -> usize {
        self.window_dim() + self.blocks() * self.slots
    }

    pub fn coord(&self, b: Basis) -> Option<usize> {
        match b {
            Basis::Special(s) => (s < self.specials).then_some(s),
            Basis::Regular(i) => self.window.binary_search(&i).ok().map(|k| self.specials + k),
        }
    }

    pub fn window_basis(&self, k: usize) -> Basis {
        if k < self.specials {
            Basis::Special(k)
        } else {
            Basis::Regular(self.window[k - self.specials])
        }
    }

    pub fn block_coord(&self, block: usize, slot: usize) -> usize {
        self.window_dim() + block * self.slots + slot
    }

    pub fn is_block_coord(&self, k: usize) -> bool {
        k >= self.window_dim()
    }

    pub fn tail_index(p: u64, slot: usize) -> i64 {
        if slot == 0 {
            p as i64
        } else {
            -(p as i64)
        }
    }

    /// Block, slot and position of a regular index beyond the threshold.
    pub fn tail_slot(&self, i: i64) -> (usize, usize, u64) {
        let p = i.unsigned_abs();
        debug_assert!(p > self.frame.threshold);
        (self.frame.block_of(p), usize::from(i < 0), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_positions_cover_residues() {
        let f = Frame::new(3, 4);
        let firsts: Vec<u64> = (0..4).map(|b| f.first_position(b)).collect();
        assert_eq!(firsts, vec![4, 5, 6, 7]);
        let f = Frame::new(0, 2);
        assert_eq!(f.first_position(0), 2);
        assert_eq!(f.first_position(1), 1);
    }

    #[test]
    fn refinement_order() {
        assert!(Frame::new(4, 6).refines(Frame::new(2, 3)));
        assert!(!Frame::new(4, 6).refines(Frame::new(5, 3)));
        assert_eq!(Frame::new(1, 4).join(Frame::new(3, 6)), Frame::new(3, 12));
    }
}
