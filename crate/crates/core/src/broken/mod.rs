//! The broken algorithm over `P^⊗p ⊗ (Q^⊗d)^⊗q` and its correction by
//! random permutations.
//!
//! The universe `[n]` is split as `n = p + 3dq`: positions `3j, 3j+1, 3j+2`
//! form block `j` for `j < dq`, and the last `p` positions are free. A set
//! is bad when it contains a whole block. Good sets are indexed in mixed
//! base (base 7 per block, base 2 per free position), which is exactly the
//! index space of `P^⊗p ⊗ Q^⊗dq`.

mod analysis;
mod pipeline;

pub use analysis::{
    good_probability_lower_bound, monte_carlo_good_probability, repeat_count, theta_inner, theta_value,
};
pub use pipeline::{
    broken_count_rational, broken_detect_field, broken_gamma_field, random_permutation_wrapper, QDecomposition,
    TaggedQDecomposition, WrapperOutcome, WRAPPER_BATCH,
};

use crate::error::{Error, Result};
use crate::subsetconv::MAX_MASK_N;

/// The split `n = p + 3dq` of the universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    n: usize,
    p: usize,
    d: usize,
    q: usize,
}

impl BlockStructure {
    pub fn new(p: usize, d: usize, q: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("block power d must be at least 1".into()));
        }
        let n = p + 3 * d * q;
        if n > MAX_MASK_N {
            return Err(Error::TooLarge(format!("n = {n} exceeds {MAX_MASK_N}")));
        }
        Ok(BlockStructure { n, p, d, q })
    }

    /// The structure with `q` copies of `Q^⊗d` and the remaining positions free.
    pub fn for_universe(n: usize, d: usize, q: usize) -> Result<Self> {
        let blocks = 3 * d * q;
        if blocks > n {
            return Err(Error::Parameter(format!("3dq = {blocks} exceeds n = {n}")));
        }
        Self::new(n - blocks, d, q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of blocks `dq`.
    pub fn blocks(&self) -> usize {
        self.d * self.q
    }

    /// `2^p·7^{dq}`, the number of good sets, if it fits in a `usize`.
    pub fn good_count(&self) -> Option<usize> {
        let sevens = 7usize.checked_pow(u32::try_from(self.blocks()).ok()?)?;
        sevens.checked_mul(1usize.checked_shl(u32::try_from(self.p).ok()?)?)
    }

    fn check_mask(&self, x: u64) -> Result<()> {
        if self.n < 64 && x >> self.n != 0 {
            return Err(Error::Parameter(format!("mask {x:#b} is not a subset of [{}]", self.n)));
        }
        Ok(())
    }

    /// False iff some block lies entirely inside `x`.
    pub fn is_good(&self, x: u64) -> bool {
        (0..self.blocks()).all(|j| (x >> (3 * j)) & 0b111 != 0b111)
    }

    /// `x̲ = 7^{dq}·Σ_{j≥3dq} 2^{j−3dq} x_j + Σ_{j<dq} 7^j (x_{3j} + 2x_{3j+1} + 4x_{3j+2})`.
    pub fn mixed_base_index(&self, x: u64) -> Result<usize> {
        self.check_mask(x)?;
        if !self.is_good(x) {
            return Err(Error::Parameter(format!("mask {x:#b} is bad")));
        }
        let size = self.good_count().ok_or_else(|| Error::TooLarge("index space overflows".into()))?;
        let dq = self.blocks();
        let free = (x >> (3 * dq)) as usize;
        let mut low = 0usize;
        for j in (0..dq).rev() {
            low = 7 * low + ((x >> (3 * j)) & 0b111) as usize;
        }
        let sevens = size >> self.p;
        Ok(sevens * free + low)
    }

    /// The good set with mixed-base index `index`.
    pub fn mixed_base_inverse(&self, index: usize) -> Result<u64> {
        let size = self.good_count().ok_or_else(|| Error::TooLarge("index space overflows".into()))?;
        if index >= size {
            return Err(Error::Parameter(format!("index {index} outside [{size}]")));
        }
        let sevens = size >> self.p;
        let dq = self.blocks();
        let mut x = ((index / sevens) as u64) << (3 * dq);
        let mut low = index % sevens;
        for j in 0..dq {
            x |= ((low % 7) as u64) << (3 * j);
            low /= 7;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_examples() {
        let bs = BlockStructure::new(0, 1, 1).unwrap();
        assert!(!bs.is_good(0b111));
        assert!(bs.is_good(0b011));
        assert_eq!(bs.mixed_base_index(0).unwrap(), 0);
        assert_eq!(bs.mixed_base_index(0b001).unwrap(), 1);
        assert_eq!(bs.mixed_base_index(0b101).unwrap(), 5);
        assert!(bs.mixed_base_index(0b111).is_err());
        let bs = BlockStructure::new(1, 1, 1).unwrap();
        assert_eq!(bs.mixed_base_index(0b1000).unwrap(), 7);
    }

    #[test]
    fn inverse_round_trip() {
        for (p, d, q) in [(0, 1, 1), (1, 1, 2), (2, 2, 1)] {
            let bs = BlockStructure::new(p, d, q).unwrap();
            let size = bs.good_count().unwrap();
            for i in 0..size {
                let x = bs.mixed_base_inverse(i).unwrap();
                assert!(bs.is_good(x));
                assert_eq!(bs.mixed_base_index(x).unwrap(), i);
            }
            assert!(bs.mixed_base_inverse(size).is_err());
        }
    }

    #[test]
    fn structure_validation() {
        assert!(BlockStructure::new(1, 0, 1).is_err());
        assert!(BlockStructure::for_universe(5, 1, 2).is_err());
        assert_eq!(BlockStructure::for_universe(9, 1, 2).unwrap().p(), 3);
    }
}
