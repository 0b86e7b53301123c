//! Point subsets as bit masks.
//!
//! A [`SubsetMask`] is a Borel set of a finite space: one bit per point.
//! Masks are sized to their owning space and stay cheap for the thousands of
//! points a sampled sphere produces; the exact subset searches additionally
//! use raw `u32` masks internally and convert at the boundary.

use std::fmt;

const BITS: usize = 64;

/// An n-bit membership indicator for a subset of a finite space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    len: usize,
    blocks: Vec<u64>,
}

impl SubsetMask {
    /// The empty subset of an `len`-point space.
    pub fn empty(len: usize) -> Self {
        Self { len, blocks: vec![0; len.div_ceil(BITS)] }
    }

    /// The full subset of an `len`-point space.
    pub fn full(len: usize) -> Self {
        let mut mask = Self::empty(len);
        for i in 0..len {
            mask.insert(i);
        }
        mask
    }

    /// The singleton `{i}`.
    pub fn singleton(len: usize, i: usize) -> Self {
        let mut mask = Self::empty(len);
        mask.insert(i);
        mask
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut mask = Self::empty(len);
        for &i in indices {
            mask.insert(i);
        }
        mask
    }

    /// Lift a raw `u32` mask (used by the exact searches) into a sized mask.
    pub fn from_u32(len: usize, bits: u32) -> Self {
        debug_assert!(len <= 32);
        let mut mask = Self::empty(len);
        for i in 0..len.min(32) {
            if bits >> i & 1 == 1 {
                mask.insert(i);
            }
        }
        mask
    }

    /// Bit length; equals the point count of the owning space.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.blocks[i / BITS] >> (i % BITS) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.blocks[i / BITS] |= 1 << (i % BITS);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.blocks[i / BITS] &= !(1 << (i % BITS));
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Indices of the member points, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    /// Lowercase hex encoding of the bit pattern (point 0 is the least
    /// significant bit), as written to the profile CSV.
    pub fn to_hex(&self) -> String {
        let mut out = String::new();
        let mut leading = true;
        for block in self.blocks.iter().rev() {
            if leading {
                if *block == 0 && self.blocks.len() > 1 {
                    continue;
                }
                out.push_str(&format!("{block:x}"));
                leading = false;
            } else {
                out.push_str(&format!("{block:016x}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask{{")?;
        for (pos, i) in self.iter_ones().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
