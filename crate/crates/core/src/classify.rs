//! Smoothness certificates and matching against the four extremal forms.
//!
//! A nonempty sequence `S` is `g`-smooth when every term is a multiple
//! `n_i g`, the coefficients sorted ascending start at `n_1 = 1`, their sum
//! `n` stays below `ord(g)`, and `Σ(S) = {g, 2g, ..., ng}`. The coefficient
//! of a term is its least positive multiplier with respect to `g`.
//!
//! Zero-sum free sequences with `f(S) <= 2|S| - 1` are expected to be one of
//!
//! 1. `a`-smooth for some `a`,
//! 2. `a^k b` with `a != b`,
//! 3. `a^k b^l` with `k >= l >= 2`, `a != b` and `2a = 2b`,
//! 4. `a^k b^l (a - b)` with the same conditions as 3.
//!
//! [`match_theorem_forms`] reports the first form that matches, in that order.

use serde::{Deserialize, Serialize};

use crate::group::{Element, Group};
use crate::sequence::Sequence;
use crate::sumset::{subsequence_sums, SumsetMask};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothCertificate {
    pub base: Element,
    /// Sorted coefficients `n_1 <= ... <= n_l`, one per term.
    pub coefficients: Vec<u64>,
    pub n: u64,
}

/// Least positive multipliers of the multiples of `g`: `table[k] = t` when
/// `element_at(k) = t g` with `1 <= t < ord(g)`, and 0 elsewhere.
fn multiplier_table(group: &Group, g: usize) -> (Vec<u64>, u64) {
    let ord = group.order_of_idx(g);
    let mut table = vec![0u64; group.order()];
    let mut cur = g;
    for t in 1..ord {
        table[cur] = t;
        cur = group.add_idx(cur, g);
    }
    (table, ord)
}

/// Checks whether `seq` is `g`-smooth, where `g` is a dense index. `mask` must
/// be `Σ(seq)`.
pub fn smooth_certificate_idx(
    seq: &Sequence,
    mask: &SumsetMask,
    g: usize,
) -> Option<SmoothCertificate> {
    let group = seq.group();
    if seq.is_empty() || g == 0 || seq.multiplicity_idx(g) == 0 {
        return None;
    }
    let (table, ord) = multiplier_table(group, g);
    let mut coefficients = Vec::with_capacity(seq.len());
    for (e, m) in seq.counts() {
        let t = table[e];
        if t == 0 {
            return None;
        }
        coefficients.extend(std::iter::repeat_n(t, m as usize));
    }
    coefficients.sort_unstable();
    let n: u64 = coefficients.iter().sum();
    if coefficients[0] != 1 || n >= ord {
        return None;
    }
    if mask.count() as u64 != n {
        return None;
    }
    let mut cur = g;
    for _ in 0..n {
        if !mask.contains_idx(cur) {
            return None;
        }
        cur = group.add_idx(cur, g);
    }
    Some(SmoothCertificate {
        base: group.element_at_unchecked(g),
        coefficients,
        n,
    })
}

/// Certificate that `seq` is `g`-smooth, or `None`.
pub fn smooth_certificate(seq: &Sequence, g: &Element) -> Option<SmoothCertificate> {
    let g = seq.group().index_of(g).ok()?;
    smooth_certificate_idx(seq, &subsequence_sums(seq), g)
}

/// First support element (by index) that `seq` is smooth with respect to.
pub fn find_smooth_base_with_mask(
    seq: &Sequence,
    mask: &SumsetMask,
) -> Option<(Element, SmoothCertificate)> {
    seq.support_indices()
        .into_iter()
        .find_map(|g| smooth_certificate_idx(seq, mask, g).map(|c| (c.base.clone(), c)))
}

pub fn find_smooth_base(seq: &Sequence) -> Option<(Element, SmoothCertificate)> {
    find_smooth_base_with_mask(seq, &subsequence_sums(seq))
}

pub fn is_smooth(seq: &Sequence) -> bool {
    find_smooth_base(seq).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerdictTag {
    SmoothForm,
    PowerTimesSingleton,
    TwoBlockDoubled,
    TwoBlockDoubledPlusDiff,
    NotExtremal,
    NotZeroSumFree,
}

impl VerdictTag {
    pub const ALL: [VerdictTag; 6] = [
        VerdictTag::SmoothForm,
        VerdictTag::PowerTimesSingleton,
        VerdictTag::TwoBlockDoubled,
        VerdictTag::TwoBlockDoubledPlusDiff,
        VerdictTag::NotExtremal,
        VerdictTag::NotZeroSumFree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerdictTag::SmoothForm => "SmoothForm",
            VerdictTag::PowerTimesSingleton => "PowerTimesSingleton",
            VerdictTag::TwoBlockDoubled => "TwoBlockDoubled",
            VerdictTag::TwoBlockDoubledPlusDiff => "TwoBlockDoubledPlusDiff",
            VerdictTag::NotExtremal => "NotExtremal",
            VerdictTag::NotZeroSumFree => "NotZeroSumFree",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub a: Option<Element>,
    pub b: Option<Element>,
    pub k: Option<u32>,
    pub l: Option<u32>,
    pub certificate: Option<SmoothCertificate>,
    /// For `a^k b`: whether `b` lies in `{a, 2a, ..., ka}`.
    pub singleton_in_power_sums: Option<bool>,
}

impl Verdict {
    fn bare(tag: VerdictTag) -> Self {
        Verdict {
            tag,
            a: None,
            b: None,
            k: None,
            l: None,
            certificate: None,
            singleton_in_power_sums: None,
        }
    }

    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            tag: self.tag.name().to_string(),
            a: self.a.as_ref().map(|e| e.to_string()),
            b: self.b.as_ref().map(|e| e.to_string()),
            k: self.k,
            l: self.l,
            smooth_base: self.certificate.as_ref().map(|c| c.base.to_string()),
            coefficients: self.certificate.as_ref().map(|c| c.coefficients.clone()),
            singleton_in_power_sums: self.singleton_in_power_sums,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub tag: String,
    pub a: Option<String>,
    pub b: Option<String>,
    pub k: Option<u32>,
    pub l: Option<u32>,
    pub smooth_base: Option<String>,
    pub coefficients: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singleton_in_power_sums: Option<bool>,
}

/// Orders two support entries so the larger multiplicity comes first,
/// breaking ties by smaller index.
fn orient(x: (usize, u32), y: (usize, u32)) -> ((usize, u32), (usize, u32)) {
    if x.1 > y.1 || (x.1 == y.1 && x.0 < y.0) {
        (x, y)
    } else {
        (y, x)
    }
}

pub fn match_theorem_forms(seq: &Sequence) -> Verdict {
    match_theorem_forms_with_mask(seq, &subsequence_sums(seq))
}

/// As [`match_theorem_forms`], reusing an already computed `Σ(seq)`.
pub fn match_theorem_forms_with_mask(seq: &Sequence, mask: &SumsetMask) -> Verdict {
    let group = seq.group();
    if mask.contains_zero() {
        return Verdict::bare(VerdictTag::NotZeroSumFree);
    }
    if seq.is_empty() {
        return Verdict::bare(VerdictTag::NotExtremal);
    }
    let el = |i: usize| group.element_at_unchecked(i);

    if let Some((base, cert)) = find_smooth_base_with_mask(seq, mask) {
        let k = seq.multiplicity(&base).ok();
        return Verdict {
            tag: VerdictTag::SmoothForm,
            a: Some(base),
            k,
            certificate: Some(cert),
            ..Verdict::bare(VerdictTag::SmoothForm)
        };
    }

    let counts: Vec<(usize, u32)> = seq.counts().collect();
    let doubled_equal = |a: usize, b: usize| group.add_idx(a, a) == group.add_idx(b, b);

    if counts.len() == 2 {
        let (hi, lo) = orient(counts[0], counts[1]);
        if lo.1 == 1 {
            let (a, k) = hi;
            let b = lo.0;
            let mut cur = a;
            let mut in_sums = false;
            for _ in 0..k {
                if cur == b {
                    in_sums = true;
                    break;
                }
                cur = group.add_idx(cur, a);
            }
            return Verdict {
                tag: VerdictTag::PowerTimesSingleton,
                a: Some(el(a)),
                b: Some(el(b)),
                k: Some(k),
                l: Some(1),
                singleton_in_power_sums: Some(in_sums),
                ..Verdict::bare(VerdictTag::PowerTimesSingleton)
            };
        }
        if lo.1 >= 2 && doubled_equal(hi.0, lo.0) {
            return Verdict {
                tag: VerdictTag::TwoBlockDoubled,
                a: Some(el(hi.0)),
                b: Some(el(lo.0)),
                k: Some(hi.1),
                l: Some(lo.1),
                ..Verdict::bare(VerdictTag::TwoBlockDoubled)
            };
        }
    }

    if counts.len() == 3 {
        let singles: Vec<usize> = (0..3).filter(|&i| counts[i].1 == 1).collect();
        if singles.len() == 1 {
            let c = counts[singles[0]].0;
            let rest: Vec<(usize, u32)> = (0..3)
                .filter(|&i| i != singles[0])
                .map(|i| counts[i])
                .collect();
            let ((a, k), (b, l)) = orient(rest[0], rest[1]);
            // 2a = 2b makes a - b an involution, so a - b = b - a.
            if l >= 2 && doubled_equal(a, b) && group.sub_idx(a, b) == c {
                return Verdict {
                    tag: VerdictTag::TwoBlockDoubledPlusDiff,
                    a: Some(el(a)),
                    b: Some(el(b)),
                    k: Some(k),
                    l: Some(l),
                    ..Verdict::bare(VerdictTag::TwoBlockDoubledPlusDiff)
                };
            }
        }
    }

    Verdict::bare(VerdictTag::NotExtremal)
}
