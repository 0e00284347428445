//! Subsequence-sum sets as `|G|`-bit masks.
//!
//! Bit `k` of a mask is set iff the element with dense index `k` is the sum
//! of some nonempty subsequence. Adding one term `g` to a sequence maps the
//! mask `M` to `M | (M + g) | {g}`, where `M + g` permutes bit positions by
//! the translation table of `g`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::sequence::Sequence;

/// Largest sequence the exhaustive oracle will accept.
pub const ORACLE_MAX_LEN: usize = 20;

#[inline]
pub(crate) fn words_for(order: usize) -> usize {
    order.div_ceil(64)
}

#[inline]
pub(crate) fn test_bit(bits: &[u64], k: usize) -> bool {
    bits[k >> 6] >> (k & 63) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(bits: &mut [u64], k: usize) {
    bits[k >> 6] |= 1 << (k & 63);
}

#[inline]
pub(crate) fn popcount(bits: &[u64]) -> u32 {
    bits.iter().map(|w| w.count_ones()).sum()
}

/// Calls `f` with the index of every set bit, in increasing order.
#[inline]
pub(crate) fn for_each_bit(bits: &[u64], mut f: impl FnMut(usize)) {
    for (w, &word) in bits.iter().enumerate() {
        let mut rest = word;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            f((w << 6) | b);
            rest &= rest - 1;
        }
    }
}

/// Writes `src | (src + g) | {g}` into `dst`; `row` is the translation
/// table of `g`.
#[inline]
pub(crate) fn extend_into(src: &[u64], row: &[u32], g: usize, dst: &mut [u64]) {
    dst.copy_from_slice(src);
    for_each_bit(src, |k| set_bit(dst, row[k] as usize));
    set_bit(dst, g);
}

/// `Σ(S)` for a sequence `S`, as a membership mask over the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumsetMask {
    group: Arc<Group>,
    bits: Vec<u64>,
}

impl SumsetMask {
    pub fn empty(group: Arc<Group>) -> Self {
        let bits = vec![0; words_for(group.order())];
        SumsetMask { group, bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(group: Arc<Group>, indices: I) -> Self {
        let mut m = Self::empty(group);
        for k in indices {
            m.insert_idx(k);
        }
        m
    }

    pub(crate) fn from_bits(group: Arc<Group>, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), words_for(group.order()));
        SumsetMask { group, bits }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn insert_idx(&mut self, k: usize) {
        assert!(k < self.group.order(), "index {k} out of range");
        set_bit(&mut self.bits, k);
    }

    pub fn contains_idx(&self, k: usize) -> bool {
        k < self.group.order() && test_bit(&self.bits, k)
    }

    /// Number of set bits, i.e. `f(S)`.
    pub fn count(&self) -> usize {
        popcount(&self.bits) as usize
    }

    pub fn contains_zero(&self) -> bool {
        test_bit(&self.bits, 0)
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count());
        for_each_bit(&self.bits, |k| out.push(k));
        out
    }

    pub fn is_subset_of(&self, other: &SumsetMask) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn to_json(&self) -> SumsetJson {
        SumsetJson {
            group: self.group.to_string(),
            f: self.count(),
            sums: self
                .indices()
                .into_iter()
                .map(|k| self.group.format_index(k))
                .collect(),
        }
    }
}

/// `{"group": "...", "f": n, "sums": [element literals sorted by index]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetJson {
    pub group: String,
    pub f: usize,
    pub sums: Vec<String>,
}

/// Computes `Σ(S)` by processing each support element one term at a time.
pub fn subsequence_sums(seq: &Sequence) -> SumsetMask {
    let group = seq.group().clone();
    let words = words_for(group.order());
    let mut cur = vec![0u64; words];
    let mut next = vec![0u64; words];
    for (g, mult) in seq.counts() {
        let row = group.shift_row(g);
        for _ in 0..mult {
            extend_into(&cur, &row, g, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
    }
    SumsetMask::from_bits(group, cur)
}

/// `f(S) = |Σ(S)|`.
pub fn f_value(seq: &Sequence) -> usize {
    subsequence_sums(seq).count()
}

pub fn is_zero_sum_free(seq: &Sequence) -> bool {
    !subsequence_sums(seq).contains_zero()
}

/// Reference implementation: sums every one of the `2^|S| - 1` nonempty
/// selections of terms directly.
pub fn naive_sums_oracle(seq: &Sequence) -> Result<SumsetMask> {
    let terms = seq.to_indices();
    if terms.len() > ORACLE_MAX_LEN {
        return Err(Error::TooLargeForOracle(terms.len(), ORACLE_MAX_LEN));
    }
    let group = seq.group().clone();
    let mut mask = SumsetMask::empty(group.clone());
    for pick in 1u32..(1u32 << terms.len()) {
        let mut total = group.zero();
        for (bit, &t) in terms.iter().enumerate() {
            if pick >> bit & 1 == 1 {
                let e = group.element_at_unchecked(t);
                total = group.add(&total, &e).expect("same group");
            }
        }
        mask.insert_idx(group.index_of(&total).expect("in group"));
    }
    Ok(mask)
}
