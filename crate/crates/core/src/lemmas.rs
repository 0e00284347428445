//! Exhaustive checks of structural bounds on `f(S)`.
//!
//! Each [`LemmaId`] names one statement about zero-sum free sequences of a
//! particular shape. [`lemma_bound_scan`] generates every instance of the
//! hypothesis inside a given group, evaluates `f` with the bitset engine and
//! tallies the instances where the asserted equality or bound fails.
//! Hypotheses of the form "not `g`-smooth" are decided with the smoothness
//! certifier on exactly the sequence the statement names.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classify::smooth_certificate_idx;
use crate::enumerate::{search, EnumConfig, Node, MAX_LISTED};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::sequence::Sequence;
use crate::sumset::{extend_into, popcount, subsequence_sums, words_for, SumsetMask};
use crate::VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    /// `f(S) >= f(S_1) + f(S_2)` for every split of a zero-sum free `S`.
    Superadditive,
    /// Minimum `f` of squarefree zero-sum free sequences of length `k`.
    SquarefreeMinimum,
    /// `f(a^2 b^2) = 8` away from the degenerate relations.
    TwoSquaresEight,
    /// `f(a^k b) = 2k + 1` when not `a`-smooth.
    PowerPlusOne,
    /// `f(S) >= 2|S| - 1` when `S` has a term of order 2.
    OrderTwoBound,
    /// `f(a^k b^l) >= 2(k + l)` when not smooth and `2a != 2b`.
    TwoBlockGeneric,
    /// `f(a^k b^l) = 2(k + l) - 1` when not smooth and `2a = 2b`.
    TwoBlockDoubled,
    /// `a^k b^l` is never both smooth and subject to `2a = 2b`.
    TwoBlockSmoothExclusion,
    /// `f(a^k b^l g) = 2(k + l) + 1` when `g = b - a` has order 2.
    DoubledPlusDifference,
    /// `f(S_1 a) = 2 f(S_1) + 1` when `S_1` is `g`-smooth and `S_1 a` is not.
    SmoothExtension,
    /// `f(a^k b c) >= 2k + 4` when not `a`-smooth.
    PowerPlusTwo,
    /// `f(a^k b c d) >= 2k + 6` when not `a`-smooth.
    PowerPlusThree,
    /// `f(a^k b^l x) >= 2(k + l + 1) + 1` when `2a = 2b` and `x != a - b`.
    DoubledPlusOther,
    /// `f(a^k b^2 x) = 2k + 5` iff `2a = 2b` and `x = b - a`.
    PowerSquareIff,
    /// `f(S) >= 2|S| - 1` when `<S>` is not cyclic.
    NoncyclicBound,
}

impl LemmaId {
    pub const ALL: [LemmaId; 15] = [
        LemmaId::Superadditive,
        LemmaId::SquarefreeMinimum,
        LemmaId::TwoSquaresEight,
        LemmaId::PowerPlusOne,
        LemmaId::OrderTwoBound,
        LemmaId::TwoBlockGeneric,
        LemmaId::TwoBlockDoubled,
        LemmaId::TwoBlockSmoothExclusion,
        LemmaId::DoubledPlusDifference,
        LemmaId::SmoothExtension,
        LemmaId::PowerPlusTwo,
        LemmaId::PowerPlusThree,
        LemmaId::DoubledPlusOther,
        LemmaId::PowerSquareIff,
        LemmaId::NoncyclicBound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LemmaId::Superadditive => "superadditive",
            LemmaId::SquarefreeMinimum => "squarefree-min",
            LemmaId::TwoSquaresEight => "two-squares",
            LemmaId::PowerPlusOne => "power-plus-one",
            LemmaId::OrderTwoBound => "order-two",
            LemmaId::TwoBlockGeneric => "two-block-generic",
            LemmaId::TwoBlockDoubled => "two-block-doubled",
            LemmaId::TwoBlockSmoothExclusion => "two-block-exclusion",
            LemmaId::DoubledPlusDifference => "doubled-plus-diff",
            LemmaId::SmoothExtension => "smooth-extension",
            LemmaId::PowerPlusTwo => "power-plus-two",
            LemmaId::PowerPlusThree => "power-plus-three",
            LemmaId::DoubledPlusOther => "doubled-plus-other",
            LemmaId::PowerSquareIff => "power-square-iff",
            LemmaId::NoncyclicBound => "noncyclic",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            LemmaId::Superadditive => "S = S1 S2 zero-sum free => f(S) >= f(S1) + f(S2)",
            LemmaId::SquarefreeMinimum => {
                "S squarefree zero-sum free, |S| = k => f = 1 (k=1), f = 3 (k=2), f >= 5 (k=3), \
                 f >= 6 (k=3, no term of order 2), f >= 2k (k>=4)"
            }
            LemmaId::TwoSquaresEight => {
                "a^2 b^2 zero-sum free, a != b, 2a != 2b, a != 2b, b != 2a => f = 8"
            }
            LemmaId::PowerPlusOne => "a^k b zero-sum free, not a-smooth => f = 2k + 1",
            LemmaId::OrderTwoBound => "S zero-sum free with a term of order 2 => f(S) >= 2|S| - 1",
            LemmaId::TwoBlockGeneric => {
                "a^k b^l zero-sum free, k >= l >= 2, not smooth, 2a != 2b => f >= 2(k + l); \
                 least relation nb = sa (1<=n<=l, 1<=s<=k) => f = n(k - s + 1) + ls + s - 1; \
                 no relation => f = kl + k + l"
            }
            LemmaId::TwoBlockDoubled => {
                "a^k b^l zero-sum free, k >= l >= 2, not smooth, 2a = 2b => f = 2(k + l) - 1"
            }
            LemmaId::TwoBlockSmoothExclusion => {
                "a^k b^l zero-sum free, k >= l >= 2 => not (smooth and 2a = 2b)"
            }
            LemmaId::DoubledPlusDifference => {
                "a^k b^l g zero-sum free, k >= l >= 1, g = b - a, ord(g) = 2 => f = 2(k + l) + 1"
            }
            LemmaId::SmoothExtension => {
                "S = S1 a zero-sum free, S1 g-smooth, S not g-smooth => f(S) = 2 f(S1) + 1"
            }
            LemmaId::PowerPlusTwo => {
                "a^k b c zero-sum free, k >= 2, a, b, c distinct, not a-smooth => f >= 2k + 4"
            }
            LemmaId::PowerPlusThree => {
                "a^k b c d zero-sum free, k >= 1, a, b, c, d distinct, not a-smooth => f >= 2k + 6"
            }
            LemmaId::DoubledPlusOther => {
                "a^k b^l x zero-sum free, k >= l >= 1, a, b, x distinct, 2a = 2b, x != a - b \
                 => f >= 2(k + l + 1) + 1"
            }
            LemmaId::PowerSquareIff => {
                "a^k b^2 x zero-sum free, k >= 2, a, b, x distinct, not a-smooth, not b-smooth \
                 => (f = 2k + 5 iff 2a = 2b and x = b - a)"
            }
            LemmaId::NoncyclicBound => "S zero-sum free, <S> not cyclic => f(S) >= 2|S| - 1",
        }
    }

    /// Whether the scan walks the full zero-sum free enumeration (and so
    /// benefits from extra workers).
    pub fn needs_enumeration(self) -> bool {
        matches!(
            self,
            LemmaId::Superadditive
                | LemmaId::SquarefreeMinimum
                | LemmaId::OrderTwoBound
                | LemmaId::SmoothExtension
                | LemmaId::NoncyclicBound
        )
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        LemmaId::ALL
            .into_iter()
            .find(|l| l.id() == key)
            .ok_or_else(|| Error::UnknownLemmaId(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sequence: String,
    pub f: usize,
    pub expected: String,
}

/// Pass/fail tally for one asserted relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl CheckTally {
    fn new(name: &str) -> Self {
        CheckTally {
            name: name.to_string(),
            instances: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(
        &mut self,
        ok: bool,
        seq: impl FnOnce() -> String,
        f: usize,
        expected: impl FnOnce() -> String,
    ) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_LISTED {
                self.counterexamples.push(Counterexample {
                    sequence: seq(),
                    f,
                    expected: expected(),
                });
            }
        }
    }

    fn absorb(&mut self, other: CheckTally) {
        self.instances += other.instances;
        self.failures += other.failures;
        for c in other.counterexamples {
            if self.counterexamples.len() < MAX_LISTED {
                self.counterexamples.push(c);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub version: String,
    pub group: String,
    pub lemma: String,
    pub statement: String,
    pub checks: Vec<CheckTally>,
    /// Informational counters that are not pass/fail.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, u64>,
}

impl LemmaReport {
    fn new(group: &Group, lemma: LemmaId, checks: Vec<CheckTally>) -> Self {
        LemmaReport {
            version: VERSION.to_string(),
            group: group.to_string(),
            lemma: lemma.id().to_string(),
            statement: lemma.statement().to_string(),
            checks,
            info: BTreeMap::new(),
        }
    }

    pub fn instances(&self) -> u64 {
        self.checks.iter().map(|c| c.instances).sum()
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Builds `Σ` of small explicit sequences given as `(index, multiplicity)`.
struct Scan {
    group: Arc<Group>,
}

struct Instance {
    seq: Sequence,
    mask: SumsetMask,
}

impl Instance {
    fn f(&self) -> usize {
        self.mask.count()
    }

    fn zero_sum_free(&self) -> bool {
        !self.mask.contains_zero()
    }

    fn smooth_wrt(&self, g: usize) -> bool {
        smooth_certificate_idx(&self.seq, &self.mask, g).is_some()
    }

    fn smooth(&self) -> bool {
        self.seq
            .support_indices()
            .into_iter()
            .any(|g| self.smooth_wrt(g))
    }

    fn literal(&self) -> String {
        self.seq.to_string()
    }
}

impl Scan {
    fn instance(&self, terms: &[(usize, u32)]) -> Instance {
        let seq = Sequence::from_index_counts(self.group.clone(), terms.iter().copied(), false)
            .expect("nonzero indices");
        let mask = subsequence_sums(&seq);
        Instance { seq, mask }
    }

    fn order(&self) -> usize {
        self.group.order()
    }

    fn ord(&self, g: usize) -> u64 {
        self.group.order_of_idx(g)
    }

    fn double(&self, g: usize) -> usize {
        self.group.add_idx(g, g)
    }

    /// Calls `f(a, b, k, l, instance)` for every zero-sum free `a^k b^l` with
    /// `a != b`, `k >= l >= lo`; when `k = l` only `a < b` is visited.
    fn two_blocks(&self, lo: u32, mut f: impl FnMut(usize, usize, u32, u32, &Instance)) {
        let n = self.order();
        for a in 1..n {
            for b in 1..n {
                if a == b {
                    continue;
                }
                let mut k = lo;
                loop {
                    let first = self.instance(&[(a, k), (b, lo)]);
                    if !first.zero_sum_free() {
                        break;
                    }
                    for l in lo..=k {
                        if l == k && a > b {
                            continue;
                        }
                        let inst = if l == lo {
                            None
                        } else {
                            Some(self.instance(&[(a, k), (b, l)]))
                        };
                        let inst = inst.as_ref().unwrap_or(&first);
                        if !inst.zero_sum_free() {
                            break;
                        }
                        f(a, b, k, l, inst);
                    }
                    k += 1;
                }
            }
        }
    }
}

/// Least `n` in `[1, l]` with `n b = s a` for some `s` in `[1, k]`, with that `s`.
fn least_relation(group: &Group, a: usize, b: usize, k: u32, l: u32) -> Option<(u64, u64)> {
    let mut nb = 0;
    for n in 1..=l as u64 {
        nb = group.add_idx(nb, b);
        let mut sa = 0;
        for s in 1..=k as u64 {
            sa = group.add_idx(sa, a);
            if sa == nb {
                return Some((n, s));
            }
        }
    }
    None
}

/// Runs the check named by `lemma` over every hypothesis instance in `group`.
pub fn lemma_bound_scan(group: &Arc<Group>, lemma: LemmaId, workers: usize) -> LemmaReport {
    let scan = Scan {
        group: group.clone(),
    };
    match lemma {
        LemmaId::Superadditive => superadditive(group, workers),
        LemmaId::SquarefreeMinimum => squarefree_minimum(group, workers),
        LemmaId::TwoSquaresEight => two_squares(&scan),
        LemmaId::PowerPlusOne => power_plus_one(&scan),
        LemmaId::OrderTwoBound => order_two(group, workers),
        LemmaId::TwoBlockGeneric => two_block(&scan, LemmaId::TwoBlockGeneric),
        LemmaId::TwoBlockDoubled => two_block(&scan, LemmaId::TwoBlockDoubled),
        LemmaId::TwoBlockSmoothExclusion => two_block(&scan, LemmaId::TwoBlockSmoothExclusion),
        LemmaId::DoubledPlusDifference => doubled_plus_difference(&scan),
        LemmaId::SmoothExtension => smooth_extension(group, workers),
        LemmaId::PowerPlusTwo => power_plus_two(&scan),
        LemmaId::PowerPlusThree => power_plus_three(&scan),
        LemmaId::DoubledPlusOther => doubled_plus_other(&scan),
        LemmaId::PowerSquareIff => power_square_iff(&scan).0,
        LemmaId::NoncyclicBound => noncyclic(group, workers),
    }
}

/// Parses `id` and runs the scan.
pub fn lemma_bound_scan_by_name(
    group: &Arc<Group>,
    id: &str,
    workers: usize,
) -> Result<LemmaReport> {
    Ok(lemma_bound_scan(group, id.parse()?, workers))
}

/// Full-enumeration scans share this driver: `visit` fills a vector of
/// tallies (one per check) for each node; shards are merged in order.
fn enumeration_scan<V>(cfg: &EnumConfig, names: &[&str], visit: V) -> Vec<CheckTally>
where
    V: Fn(&mut Vec<CheckTally>, &Node) + Sync,
{
    let init = || names.iter().map(|n| CheckTally::new(n)).collect::<Vec<_>>();
    let parts = search(cfg, init, visit);
    let mut total = init();
    for part in parts {
        for (t, p) in total.iter_mut().zip(part) {
            t.absorb(p);
        }
    }
    total
}

fn node_literal(node: &Node) -> String {
    node.to_sequence().to_string()
}

fn superadditive(group: &Arc<Group>, workers: usize) -> LemmaReport {
    let cfg = EnumConfig::exhaustive(group.clone()).workers(workers);
    let order = group.order();
    let words = words_for(order);
    let rows: Vec<Vec<u32>> = (0..order).map(|g| group.shift_row(g)).collect();
    let checks = enumeration_scan(&cfg, &["f(S) >= f(S1) + f(S2)"], |t, node| {
        let mut counts: Vec<(usize, u32)> = Vec::new();
        for &x in node.terms {
            match counts.last_mut() {
                Some((g, m)) if *g == x as usize => *m += 1,
                _ => counts.push((x as usize, 1)),
            }
        }
        let f = node.f();
        // Depth-first over how many copies of each support element go to S1.
        // Level i holds the masks of S1 and S2 built from the first i entries.
        let levels = counts.len() + 1;
        let mut left = vec![0u64; levels * words];
        let mut right = vec![0u64; levels * words];
        let mut scratch = vec![0u64; words];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            counts: &[(usize, u32)],
            rows: &[Vec<u32>],
            words: usize,
            left: &mut [u64],
            right: &mut [u64],
            scratch: &mut [u64],
            f: usize,
            tally: &mut CheckTally,
            node: &Node,
        ) {
            if i == counts.len() {
                let l = &left[i * words..(i + 1) * words];
                let r = &right[i * words..(i + 1) * words];
                let (fl, fr) = (popcount(l) as usize, popcount(r) as usize);
                if fl > 0 && fr > 0 {
                    tally.record(
                        f >= fl + fr,
                        || node_literal(node),
                        f,
                        || format!(">= {} (split into parts with f = {fl}, {fr})", fl + fr),
                    );
                }
                return;
            }
            let (g, m) = counts[i];
            for to_left in 0..=m {
                let (lo, hi) = left.split_at_mut((i + 1) * words);
                hi[..words].copy_from_slice(&lo[i * words..]);
                for _ in 0..to_left {
                    scratch.copy_from_slice(&hi[..words]);
                    extend_into(scratch, &rows[g], g, &mut hi[..words]);
                }
                let (lo, hi) = right.split_at_mut((i + 1) * words);
                hi[..words].copy_from_slice(&lo[i * words..]);
                for _ in 0..(m - to_left) {
                    scratch.copy_from_slice(&hi[..words]);
                    extend_into(scratch, &rows[g], g, &mut hi[..words]);
                }
                rec(
                    i + 1,
                    counts,
                    rows,
                    words,
                    left,
                    right,
                    scratch,
                    f,
                    tally,
                    node,
                );
            }
        }
        rec(
            0,
            &counts,
            &rows,
            words,
            &mut left,
            &mut right,
            &mut scratch,
            f,
            &mut t[0],
            node,
        );
    });
    LemmaReport::new(group, LemmaId::Superadditive, checks)
}

fn squarefree_minimum(group: &Arc<Group>, workers: usize) -> LemmaReport {
    let cfg = EnumConfig::exhaustive(group.clone())
        .squarefree(true)
        .workers(workers);
    let names = [
        "k=1: f = 1",
        "k=2: f = 3",
        "k=3: f >= 5",
        "k=3, no term of order 2: f >= 6",
        "k>=4: f >= 2k",
    ];
    let checks = enumeration_scan(&cfg, &names, |t, node| {
        let k = node.len();
        let f = node.f();
        let lit = || node_literal(node);
        match k {
            1 => t[0].record(f == 1, lit, f, || "= 1".into()),
            2 => t[1].record(f == 3, lit, f, || "= 3".into()),
            3 => {
                t[2].record(f >= 5, lit, f, || ">= 5".into());
                let no_involution = node
                    .terms
                    .iter()
                    .all(|&g| node.group.order_of_idx(g as usize) != 2);
                if no_involution {
                    t[3].record(f >= 6, lit, f, || ">= 6".into());
                }
            }
            _ => t[4].record(f >= 2 * k, lit, f, || format!(">= {}", 2 * k)),
        }
    });
    LemmaReport::new(group, LemmaId::SquarefreeMinimum, checks)
}

fn two_squares(scan: &Scan) -> LemmaReport {
    let mut t = CheckTally::new("f(a^2 b^2) = 8");
    let n = scan.order();
    for a in 1..n {
        for b in a + 1..n {
            let (da, db) = (scan.double(a), scan.double(b));
            if da == db || a == db || b == da {
                continue;
            }
            let inst = scan.instance(&[(a, 2), (b, 2)]);
            if !inst.zero_sum_free() {
                continue;
            }
            let f = inst.f();
            t.record(f == 8, || inst.literal(), f, || "= 8".into());
        }
    }
    LemmaReport::new(&scan.group, LemmaId::TwoSquaresEight, vec![t])
}

fn power_plus_one(scan: &Scan) -> LemmaReport {
    let mut t = CheckTally::new("f(a^k b) = 2k + 1");
    let n = scan.order();
    for a in 1..n {
        for b in 1..n {
            if a == b {
                continue;
            }
            for k in 1.. {
                let inst = scan.instance(&[(a, k), (b, 1)]);
                if !inst.zero_sum_free() {
                    break;
                }
                if inst.smooth_wrt(a) {
                    continue;
                }
                let f = inst.f();
                let want = 2 * k as usize + 1;
                t.record(f == want, || inst.literal(), f, || format!("= {want}"));
            }
        }
    }
    LemmaReport::new(&scan.group, LemmaId::PowerPlusOne, vec![t])
}

fn order_two(group: &Arc<Group>, workers: usize) -> LemmaReport {
    let cfg = EnumConfig::exhaustive(group.clone()).workers(workers);
    let checks = enumeration_scan(&cfg, &["f(S) >= 2|S| - 1"], |t, node| {
        if node
            .terms
            .iter()
            .any(|&g| node.group.order_of_idx(g as usize) == 2)
        {
            let f = node.f();
            let want = 2 * node.len() - 1;
            t[0].record(f >= want, || node_literal(node), f, || format!(">= {want}"));
        }
    });
    LemmaReport::new(group, LemmaId::OrderTwoBound, checks)
}

fn two_block(scan: &Scan, lemma: LemmaId) -> LemmaReport {
    let group = &scan.group;
    let mut main = CheckTally::new(match lemma {
        LemmaId::TwoBlockGeneric => "f(a^k b^l) >= 2(k + l)",
        LemmaId::TwoBlockDoubled => "f(a^k b^l) = 2(k + l) - 1",
        _ => "not (smooth and 2a = 2b)",
    });
    let mut relation = CheckTally::new("least relation: f = n(k - s + 1) + ls + s - 1");
    let mut free = CheckTally::new("no relation: f = kl + k + l");
    scan.two_blocks(2, |a, b, k, l, inst| {
        let doubled = scan.double(a) == scan.double(b);
        if lemma == LemmaId::TwoBlockSmoothExclusion {
            let smooth = inst.smooth();
            let f = inst.f();
            main.record(
                !(smooth && doubled),
                || inst.literal(),
                f,
                || "not both smooth and 2a = 2b".into(),
            );
            return;
        }
        let wanted_doubled = lemma == LemmaId::TwoBlockDoubled;
        if doubled != wanted_doubled || inst.smooth() {
            return;
        }
        let f = inst.f();
        let (k64, l64) = (k as usize, l as usize);
        if wanted_doubled {
            let want = 2 * (k64 + l64) - 1;
            main.record(f == want, || inst.literal(), f, || format!("= {want}"));
        } else {
            let want = 2 * (k64 + l64);
            main.record(f >= want, || inst.literal(), f, || format!(">= {want}"));
        }
        match least_relation(group, a, b, k, l) {
            Some((n, s)) => {
                let (k, l) = (k as u64, l as u64);
                let want = (n * (k - s + 1) + l * s + s - 1) as usize;
                relation.record(
                    f == want,
                    || inst.literal(),
                    f,
                    || format!("= {want} (n = {n}, s = {s})"),
                );
            }
            None => {
                let want = k64 * l64 + k64 + l64;
                free.record(f == want, || inst.literal(), f, || format!("= {want}"));
            }
        }
    });
    let checks = if lemma == LemmaId::TwoBlockSmoothExclusion {
        vec![main]
    } else {
        vec![main, relation, free]
    };
    LemmaReport::new(group, lemma, checks)
}

fn doubled_plus_difference(scan: &Scan) -> LemmaReport {
    let mut t = CheckTally::new("f(a^k b^l g) = 2(k + l) + 1");
    let n = scan.order();
    for a in 1..n {
        for b in 1..n {
            if a == b {
                continue;
            }
            let g = scan.group.sub_idx(b, a);
            if scan.ord(g) != 2 {
                continue;
            }
            for k in 1.. {
                if !scan.instance(&[(a, k), (b, 1), (g, 1)]).zero_sum_free() {
                    break;
                }
                for l in 1..=k {
                    if l == k && a > b {
                        continue;
                    }
                    let inst = scan.instance(&[(a, k), (b, l), (g, 1)]);
                    if !inst.zero_sum_free() {
                        break;
                    }
                    let f = inst.f();
                    let want = 2 * (k + l) as usize + 1;
                    t.record(f == want, || inst.literal(), f, || format!("= {want}"));
                }
            }
        }
    }
    LemmaReport::new(&scan.group, LemmaId::DoubledPlusDifference, vec![t])
}

fn smooth_extension(group: &Arc<Group>, workers: usize) -> LemmaReport {
    let cfg = EnumConfig::exhaustive(group.clone()).workers(workers);
    let checks = enumeration_scan(&cfg, &["f(S1 a) = 2 f(S1) + 1"], |t, node| {
        if node.len() < 2 {
            return;
        }
        let seq = node.to_sequence();
        let mask = node.mask();
        let f = mask.count();
        for (a, _) in seq.counts() {
            let single =
                Sequence::from_index_counts(group.clone(), [(a, 1)], false).expect("valid");
            let rest = seq.remove_sub(&single).expect("a divides S");
            let rest_mask = subsequence_sums(&rest);
            for g in rest.support_indices() {
                if smooth_certificate_idx(&rest, &rest_mask, g).is_none()
                    || smooth_certificate_idx(&seq, &mask, g).is_some()
                {
                    continue;
                }
                let want = 2 * rest_mask.count() + 1;
                t[0].record(
                    f == want,
                    || {
                        format!(
                            "{seq} (S1 = {rest}, a = {}, g = {})",
                            group.format_index(a),
                            group.format_index(g)
                        )
                    },
                    f,
                    || format!("= {want}"),
                );
            }
        }
    });
    LemmaReport::new(group, LemmaId::SmoothExtension, checks)
}

fn power_plus_two(scan: &Scan) -> LemmaReport {
    let mut t = CheckTally::new("f(a^k b c) >= 2k + 4");
    let n = scan.order();
    for a in 1..n {
        for b in 1..n {
            for c in b + 1..n {
                if a == b || a == c {
                    continue;
                }
                for k in 2.. {
                    let inst = scan.instance(&[(a, k), (b, 1), (c, 1)]);
                    if !inst.zero_sum_free() {
                        break;
                    }
                    if inst.smooth_wrt(a) {
                        continue;
                    }
                    let f = inst.f();
                    let want = 2 * k as usize + 4;
                    t.record(f >= want, || inst.literal(), f, || format!(">= {want}"));
                }
            }
        }
    }
    LemmaReport::new(&scan.group, LemmaId::PowerPlusTwo, vec![t])
}

fn power_plus_three(scan: &Scan) -> LemmaReport {
    let mut t = CheckTally::new("f(a^k b c d) >= 2k + 6");
    let n = scan.order();
    for b in 1..n {
        for c in b + 1..n {
            for d in c + 1..n {
                // a triple that already sums to zero in some way rules out every a
                if !scan.instance(&[(b, 1), (c, 1), (d, 1)]).zero_sum_free() {
                    continue;
                }
                for a in 1..n {
                    if a == b || a == c || a == d {
                        continue;
                    }
                    for k in 1.. {
                        let inst = scan.instance(&[(a, k), (b, 1), (c, 1), (d, 1)]);
                        if !inst.zero_sum_free() {
                            break;
                        }
                        if inst.smooth_wrt(a) {
                            continue;
                        }
                        let f = inst.f();
                        let want = 2 * k as usize + 6;
                        t.record(f >= want, || inst.literal(), f, || format!(">= {want}"));
                    }
                }
            }
        }
    }
    LemmaReport::new(&scan.group, LemmaId::PowerPlusThree, vec![t])
}

fn doubled_plus_other(scan: &Scan) -> LemmaReport {
    let mut t = CheckTally::new("f(a^k b^l x) >= 2(k + l + 1) + 1");
    let n = scan.order();
    for a in 1..n {
        for b in 1..n {
            if a == b || scan.double(a) != scan.double(b) {
                continue;
            }
            let diff = scan.group.sub_idx(a, b);
            for x in 1..n {
                if x == a || x == b || x == diff {
                    continue;
                }
                for k in 1.. {
                    if !scan.instance(&[(a, k), (b, 1), (x, 1)]).zero_sum_free() {
                        break;
                    }
                    for l in 1..=k {
                        if l == k && a > b {
                            continue;
                        }
                        let inst = scan.instance(&[(a, k), (b, l), (x, 1)]);
                        if !inst.zero_sum_free() {
                            break;
                        }
                        let f = inst.f();
                        let want = 2 * (k + l + 1) as usize + 1;
                        t.record(f >= want, || inst.literal(), f, || format!(">= {want}"));
                    }
                }
            }
        }
    }
    LemmaReport::new(&scan.group, LemmaId::DoubledPlusOther, vec![t])
}

/// `(a, b, x, k)` as element indices and multiplicity.
pub type PowerSquareQuad = (usize, usize, usize, u32);

/// Instances of `a^k b^2 x` under the stated hypotheses, split into those with
/// `f = 2k + 5` and those with `2a = 2b` and `x = b - a`.
pub fn power_square_sets(group: &Arc<Group>) -> (Vec<PowerSquareQuad>, Vec<PowerSquareQuad>) {
    let scan = Scan {
        group: group.clone(),
    };
    let (_, eq, cond) = power_square_iff(&scan);
    (eq, cond)
}

fn power_square_iff(scan: &Scan) -> (LemmaReport, Vec<PowerSquareQuad>, Vec<PowerSquareQuad>) {
    let mut t = CheckTally::new("f(a^k b^2 x) = 2k + 5 iff 2a = 2b and x = b - a");
    let mut equal = Vec::new();
    let mut cond = Vec::new();
    let n = scan.order();
    for a in 1..n {
        for b in 1..n {
            if a == b {
                continue;
            }
            let doubled = scan.double(a) == scan.double(b);
            let diff = scan.group.sub_idx(b, a);
            for x in 1..n {
                if x == a || x == b {
                    continue;
                }
                for k in 2.. {
                    let inst = scan.instance(&[(a, k), (b, 2), (x, 1)]);
                    if !inst.zero_sum_free() {
                        break;
                    }
                    if inst.smooth_wrt(a) || inst.smooth_wrt(b) {
                        continue;
                    }
                    let f = inst.f();
                    let hits = f == 2 * k as usize + 5;
                    let holds = doubled && x == diff;
                    if hits {
                        equal.push((a, b, x, k));
                    }
                    if holds {
                        cond.push((a, b, x, k));
                    }
                    t.record(
                        hits == holds,
                        || inst.literal(),
                        f,
                        || {
                            if holds {
                                format!("= {} (2a = 2b, x = b - a)", 2 * k + 5)
                            } else {
                                format!("!= {}", 2 * k + 5)
                            }
                        },
                    );
                }
            }
        }
    }
    let mut report = LemmaReport::new(&scan.group, LemmaId::PowerSquareIff, vec![t]);
    report
        .info
        .insert("equality_cases".into(), equal.len() as u64);
    report
        .info
        .insert("condition_cases".into(), cond.len() as u64);
    (report, equal, cond)
}

fn noncyclic(group: &Arc<Group>, workers: usize) -> LemmaReport {
    let cfg = EnumConfig::exhaustive(group.clone()).workers(workers);
    let checks = enumeration_scan(&cfg, &["f(S) >= 2|S| - 1"], |t, node| {
        let mut support: Vec<usize> = node.terms.iter().map(|&g| g as usize).collect();
        support.dedup();
        if support.len() < 2 || group.is_cyclic_subgroup_idx(&support) {
            return;
        }
        let f = node.f();
        let want = 2 * node.len() - 1;
        t[0].record(f >= want, || node_literal(node), f, || format!(">= {want}"));
    });
    LemmaReport::new(group, LemmaId::NoncyclicBound, checks)
}

/// Every registered scan, in registry order.
pub fn all_lemma_reports(group: &Arc<Group>, workers: usize) -> Vec<LemmaReport> {
    LemmaId::ALL
        .iter()
        .map(|&l| lemma_bound_scan(group, l, workers))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(s: &str) -> Arc<Group> {
        Arc::new(s.parse().unwrap())
    }

    #[test]
    fn ids_round_trip() {
        for l in LemmaId::ALL {
            assert_eq!(l.id().parse::<LemmaId>().unwrap(), l);
        }
        assert_eq!(
            "nope".parse::<LemmaId>(),
            Err(Error::UnknownLemmaId("nope".into()))
        );
    }

    #[test]
    fn least_relation_examples() {
        // Z2 x Z8, a = (0,1), b = (1,1): 2b = 2a is the least relation
        let g = grp("2x8");
        assert_eq!(least_relation(&g, 1, 9, 3, 2), Some((2, 2)));
        // Z5 x Z5 independent generators: no relation
        let g = grp("5x5");
        assert_eq!(least_relation(&g, 5, 1, 3, 3), None);
    }

    #[test]
    fn two_squares_on_z5xz5() {
        let r = lemma_bound_scan(&grp("5x5"), LemmaId::TwoSquaresEight, 1);
        assert!(r.instances() > 0);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn doubled_two_block_on_z2xz8() {
        let r = lemma_bound_scan(&grp("2x8"), LemmaId::TwoBlockDoubled, 1);
        assert!(r.check("f(a^k b^l) = 2(k + l) - 1").unwrap().instances > 0);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn power_square_iff_on_z2xz8() {
        let r = lemma_bound_scan(&grp("2x8"), LemmaId::PowerSquareIff, 1);
        assert!(r.info["equality_cases"] > 0);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn unknown_id_through_name_lookup() {
        assert!(lemma_bound_scan_by_name(&grp("3"), "bogus", 1).is_err());
    }
}
