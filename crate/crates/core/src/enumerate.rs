//! Exhaustive enumeration of zero-sum free sequences.
//!
//! Multisets are walked as nondecreasing index tuples in depth-first
//! preorder, which is lexicographic order on the tuples. Every node carries
//! the sumset mask of its tuple; a child is dropped as soon as its mask would
//! contain zero, and with it the whole subtree, since every extension keeps
//! the zero-sum subsequence.
//!
//! The search forest is cut into shards by the first two terms. Shards are
//! processed independently (in parallel when more than one worker is
//! requested) and their results come back in shard order, so every report
//! built on top of [`search`] is identical for any worker count.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{match_theorem_forms_with_mask, VerdictTag};
use crate::group::Group;
use crate::sequence::Sequence;
use crate::sumset::{extend_into, popcount, test_bit, words_for, SumsetMask};
use crate::VERSION;

/// Cap on the number of example sequences kept in a report.
pub const MAX_LISTED: usize = 64;

#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub group: Arc<Group>,
    pub max_length: usize,
    pub squarefree_only: bool,
    pub workers: usize,
}

impl EnumConfig {
    pub fn new(group: Arc<Group>, max_length: usize) -> Self {
        EnumConfig {
            group,
            max_length,
            squarefree_only: false,
            workers: 1,
        }
    }

    /// Enough length to reach every zero-sum free sequence (`D(G) <= |G|`).
    pub fn exhaustive(group: Arc<Group>) -> Self {
        let n = group.order();
        Self::new(group, n)
    }

    pub fn squarefree(mut self, on: bool) -> Self {
        self.squarefree_only = on;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// One zero-sum free sequence reached by the search.
pub struct Node<'a> {
    pub group: &'a Arc<Group>,
    /// Terms as nondecreasing element indices.
    pub terms: &'a [u32],
    /// `Σ` of the terms, one bit per group element.
    pub bits: &'a [u64],
}

impl Node<'_> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn f(&self) -> usize {
        popcount(self.bits) as usize
    }

    pub fn to_sequence(&self) -> Sequence {
        Sequence::from_index_counts(
            self.group.clone(),
            self.terms.iter().map(|&t| (t as usize, 1)),
            false,
        )
        .expect("enumerated terms are valid nonzero indices")
    }

    pub fn mask(&self) -> SumsetMask {
        SumsetMask::from_bits(self.group.clone(), self.bits.to_vec())
    }
}

/// Translation tables and negation for every element, shared by all shards.
struct Tables {
    order: usize,
    words: usize,
    rows: Vec<u32>,
    neg: Vec<u32>,
}

impl Tables {
    fn new(group: &Group) -> Self {
        let order = group.order();
        let mut rows = Vec::with_capacity(order * order);
        for g in 0..order {
            rows.extend(group.shift_row(g));
        }
        Tables {
            order,
            words: words_for(order),
            rows,
            neg: (0..order).map(|g| group.neg_idx(g) as u32).collect(),
        }
    }

    #[inline]
    fn row(&self, g: usize) -> &[u32] {
        &self.rows[g * self.order..(g + 1) * self.order]
    }
}

struct Walker<'a, R, V> {
    group: &'a Arc<Group>,
    tables: &'a Tables,
    max_length: usize,
    squarefree: bool,
    visit: &'a V,
    acc: &'a mut R,
    terms: Vec<u32>,
    masks: Vec<u64>,
}

impl<R, V: Fn(&mut R, &Node)> Walker<'_, R, V> {
    /// Tries to append `g` at depth `terms.len()`; on success the new mask is
    /// in slot `terms.len()` (after the push, slot `len - 1`).
    fn push(&mut self, g: usize) -> bool {
        let w = self.tables.words;
        let depth = self.terms.len();
        if depth > 0 {
            let prev = &self.masks[(depth - 1) * w..depth * w];
            // zero enters the new mask iff -g was already a sum
            if test_bit(prev, self.tables.neg[g] as usize) {
                return false;
            }
        }
        let (lo, hi) = self.masks.split_at_mut(depth * w);
        let dst = &mut hi[..w];
        if depth == 0 {
            dst.fill(0);
            dst[g >> 6] |= 1 << (g & 63);
        } else {
            extend_into(&lo[(depth - 1) * w..], self.tables.row(g), g, dst);
        }
        self.terms.push(g as u32);
        true
    }

    fn pop(&mut self) {
        self.terms.pop();
    }

    fn emit(&mut self) {
        let w = self.tables.words;
        let d = self.terms.len();
        let node = Node {
            group: self.group,
            terms: &self.terms,
            bits: &self.masks[(d - 1) * w..d * w],
        };
        (self.visit)(self.acc, &node);
    }

    fn descend(&mut self) {
        if self.terms.len() >= self.max_length {
            return;
        }
        let last = *self.terms.last().expect("nonempty") as usize;
        let start = if self.squarefree { last + 1 } else { last };
        for g in start..self.tables.order {
            if self.push(g) {
                self.emit();
                self.descend();
                self.pop();
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Shard {
    first: usize,
    second: Option<usize>,
}

fn shards(cfg: &EnumConfig) -> Vec<Shard> {
    let order = cfg.group.order();
    let mut out = Vec::new();
    if cfg.max_length == 0 {
        return out;
    }
    for first in 1..order {
        out.push(Shard {
            first,
            second: None,
        });
        if cfg.max_length >= 2 {
            let start = if cfg.squarefree_only {
                first + 1
            } else {
                first
            };
            for second in start..order {
                out.push(Shard {
                    first,
                    second: Some(second),
                });
            }
        }
    }
    out
}

fn run_shard<R, V>(cfg: &EnumConfig, tables: &Tables, shard: Shard, acc: &mut R, visit: &V)
where
    V: Fn(&mut R, &Node),
{
    let mut walker = Walker {
        group: &cfg.group,
        tables,
        max_length: cfg.max_length,
        squarefree: cfg.squarefree_only,
        visit,
        acc,
        terms: Vec::with_capacity(cfg.max_length),
        masks: vec![0; tables.words * cfg.max_length.max(1)],
    };
    walker.push(shard.first);
    match shard.second {
        None => walker.emit(),
        Some(second) => {
            if walker.push(second) {
                walker.emit();
                walker.descend();
            }
        }
    }
}

/// Runs `visit` on every zero-sum free sequence allowed by `cfg`, one
/// accumulator per shard. Accumulators are returned in shard order, which
/// is lexicographic order of the visited tuples.
pub fn search<R, I, V>(cfg: &EnumConfig, init: I, visit: V) -> Vec<R>
where
    R: Send,
    I: Fn() -> R + Sync,
    V: Fn(&mut R, &Node) + Sync,
{
    let tables = Tables::new(&cfg.group);
    let shards = shards(cfg);
    let work = |shard: &Shard| {
        let mut acc = init();
        run_shard(cfg, &tables, *shard, &mut acc, &visit);
        acc
    };
    if cfg.workers <= 1 {
        return shards.iter().map(work).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .expect("thread pool");
    pool.install(|| shards.par_iter().map(work).collect())
}

/// Serial streaming walk in lexicographic order.
pub fn for_each_zero_sum_free<F: FnMut(&Node)>(cfg: &EnumConfig, mut f: F) {
    let tables = Tables::new(&cfg.group);
    let visit = |f: &mut &mut F, node: &Node| f(node);
    let mut fref = &mut f;
    for shard in shards(cfg) {
        run_shard(cfg, &tables, shard, &mut fref, &visit);
    }
}

/// Every zero-sum free sequence of length at most `cfg.max_length`, in
/// lexicographic order of index tuples.
pub fn enumerate_zero_sum_free(cfg: &EnumConfig) -> Vec<Sequence> {
    search(cfg, Vec::new, |acc: &mut Vec<Sequence>, node| {
        acc.push(node.to_sequence())
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Number of zero-sum free sequences reached, by length (index 0 unused).
pub fn count_by_length(cfg: &EnumConfig) -> Vec<u64> {
    let len = cfg.max_length + 1;
    let parts = search(cfg, || vec![0u64; len], |acc, node| acc[node.len()] += 1);
    let mut out = vec![0u64; len];
    for p in parts {
        for (o, c) in out.iter_mut().zip(p) {
            *o += c;
        }
    }
    out
}

/// One more than the longest zero-sum free sequence.
pub fn davenport_constant(group: &Arc<Group>, workers: usize) -> usize {
    let cfg = EnumConfig::exhaustive(group.clone()).workers(workers);
    let longest = search(&cfg, || 0usize, |m, node| *m = (*m).max(node.len()))
        .into_iter()
        .max()
        .unwrap_or(0);
    longest + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgTableEntry {
    pub r: usize,
    /// `None` when no zero-sum free sequence of length `r` exists.
    pub fg: Option<usize>,
    /// Lexicographically least sequence attaining the minimum.
    pub witness: Option<Sequence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgTableJson {
    pub version: String,
    pub group: String,
    pub rows: Vec<FgRowJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgRowJson {
    pub r: usize,
    pub fg: Option<usize>,
    pub witness: Option<String>,
}

/// Minimum of `f(S)` over zero-sum free `S` of each length `1..=r_max`.
pub fn fg_table(group: &Arc<Group>, r_max: usize, workers: usize) -> Vec<FgTableEntry> {
    let cfg = EnumConfig::new(group.clone(), r_max).workers(workers);
    type Best = Vec<Option<(usize, Vec<u32>)>>;
    let parts: Vec<Best> = search(
        &cfg,
        || vec![None; r_max + 1],
        |acc: &mut Best, node| {
            let f = node.f();
            let slot = &mut acc[node.len()];
            if slot.as_ref().is_none_or(|(best, _)| f < *best) {
                *slot = Some((f, node.terms.to_vec()));
            }
        },
    );
    let mut best: Best = vec![None; r_max + 1];
    for part in parts {
        for (b, p) in best.iter_mut().zip(part) {
            if let Some((f, terms)) = p {
                // strict comparison keeps the earliest shard on ties
                if b.as_ref().is_none_or(|(cur, _)| f < *cur) {
                    *b = Some((f, terms));
                }
            }
        }
    }
    (1..=r_max)
        .map(|r| match &best[r] {
            Some((f, terms)) => FgTableEntry {
                r,
                fg: Some(*f),
                witness: Some(
                    Sequence::from_index_counts(
                        group.clone(),
                        terms.iter().map(|&t| (t as usize, 1)),
                        false,
                    )
                    .expect("valid"),
                ),
            },
            None => FgTableEntry {
                r,
                fg: None,
                witness: None,
            },
        })
        .collect()
}

pub fn fg_table_json(group: &Group, table: &[FgTableEntry]) -> FgTableJson {
    FgTableJson {
        version: VERSION.to_string(),
        group: group.to_string(),
        rows: table
            .iter()
            .map(|e| FgRowJson {
                r: e.r,
                fg: e.fg,
                witness: e.witness.as_ref().map(|w| w.to_string()),
            })
            .collect(),
    }
}

/// CSV with columns `r,f_G(r),witness`; an absent value is an empty field.
pub fn fg_table_csv(table: &[FgTableEntry]) -> String {
    let mut out = String::from("r,f_G(r),witness\n");
    for e in table {
        let fg = e.fg.map(|v| v.to_string()).unwrap_or_default();
        let w = e
            .witness
            .as_ref()
            .map(|w| format!("\"{w}\""))
            .unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", e.r, fg, w));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub version: String,
    pub group: String,
    /// Zero-sum free sequences examined.
    pub checked: u64,
    /// Those with `f(S) <= 2|S| - 1`.
    pub extremal: u64,
    /// Extremal sequences by matched form.
    pub by_form: BTreeMap<String, u64>,
    pub violation_count: u64,
    /// Extremal sequences matching no form (at most [`MAX_LISTED`]).
    pub violations: Vec<String>,
}

#[derive(Default)]
struct AuditAcc {
    checked: u64,
    extremal: u64,
    by_form: BTreeMap<VerdictTag, u64>,
    violation_count: u64,
    violations: Vec<String>,
}

/// Classifies every extremal zero-sum free sequence of `group`.
pub fn audit_classification(group: &Arc<Group>, workers: usize) -> AuditReport {
    let cfg = EnumConfig::exhaustive(group.clone()).workers(workers);
    let parts = search(&cfg, AuditAcc::default, |acc, node| {
        acc.checked += 1;
        if node.f() + 1 > 2 * node.len() {
            return;
        }
        acc.extremal += 1;
        let seq = node.to_sequence();
        let verdict = match_theorem_forms_with_mask(&seq, &node.mask());
        *acc.by_form.entry(verdict.tag).or_default() += 1;
        if verdict.tag == VerdictTag::NotExtremal {
            acc.violation_count += 1;
            if acc.violations.len() < MAX_LISTED {
                acc.violations.push(seq.to_string());
            }
        }
    });
    let mut total = AuditAcc::default();
    for p in parts {
        total.checked += p.checked;
        total.extremal += p.extremal;
        for (k, v) in p.by_form {
            *total.by_form.entry(k).or_default() += v;
        }
        total.violation_count += p.violation_count;
        for v in p.violations {
            if total.violations.len() < MAX_LISTED {
                total.violations.push(v);
            }
        }
    }
    AuditReport {
        version: VERSION.to_string(),
        group: group.to_string(),
        checked: total.checked,
        extremal: total.extremal,
        by_form: total
            .by_form
            .into_iter()
            .map(|(k, v)| (k.name().to_string(), v))
            .collect(),
        violation_count: total.violation_count,
        violations: total.violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(s: &str) -> Arc<Group> {
        Arc::new(s.parse().unwrap())
    }

    fn tuples(g: &str, max_length: usize) -> Vec<Vec<usize>> {
        enumerate_zero_sum_free(&EnumConfig::new(grp(g), max_length))
            .iter()
            .map(|s| s.to_indices())
            .collect()
    }

    #[test]
    fn klein_group() {
        let t = tuples("2x2", 4);
        assert_eq!(
            t,
            vec![
                vec![1],
                vec![1, 2],
                vec![1, 3],
                vec![2],
                vec![2, 3],
                vec![3]
            ]
        );
    }

    #[test]
    fn z3_up_to_two() {
        assert_eq!(
            tuples("3", 2),
            vec![vec![1], vec![1, 1], vec![2], vec![2, 2]]
        );
    }

    #[test]
    fn z2_single() {
        assert_eq!(tuples("2", 1), vec![vec![1]]);
    }

    #[test]
    fn squarefree_mode() {
        let cfg = EnumConfig::new(grp("5"), 5).squarefree(true);
        let all = enumerate_zero_sum_free(&cfg);
        assert!(all.iter().all(|s| s.is_squarefree()));
        // {1,2}: sums 1,2,3; {1,3}: 1,3,4; {2,4}; {3,4}; {1,2}... pairs avoiding a+b=5
        let pairs: Vec<_> = all
            .iter()
            .filter(|s| s.len() == 2)
            .map(|s| s.to_indices())
            .collect();
        assert_eq!(pairs, vec![vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]]);
    }

    #[test]
    fn streaming_matches_collected() {
        let cfg = EnumConfig::exhaustive(grp("2x4"));
        let mut streamed = Vec::new();
        for_each_zero_sum_free(&cfg, |n| streamed.push(n.terms.to_vec()));
        let collected: Vec<Vec<u32>> = enumerate_zero_sum_free(&cfg)
            .iter()
            .map(|s| s.to_indices().iter().map(|&i| i as u32).collect())
            .collect();
        assert_eq!(streamed, collected);
        let mut sorted = streamed.clone();
        sorted.sort();
        assert_eq!(streamed, sorted);
    }

    #[test]
    fn small_davenport() {
        assert_eq!(davenport_constant(&grp("2x2"), 1), 3);
        assert_eq!(davenport_constant(&grp("3x3"), 1), 5);
        assert_eq!(davenport_constant(&grp("7"), 1), 7);
    }

    #[test]
    fn fg_small() {
        let t = fg_table(&grp("5"), 5, 1);
        assert_eq!(t[3].fg, Some(4));
        assert_eq!(t[3].witness.as_ref().unwrap().to_string(), "1^4");
        assert_eq!(
            t[4],
            FgTableEntry {
                r: 5,
                fg: None,
                witness: None
            }
        );
        let csv = fg_table_csv(&t);
        assert!(csv.starts_with("r,f_G(r),witness\n1,1,\"1\"\n"));
        assert!(csv.ends_with("5,,\n"));
    }

    #[test]
    fn audit_trivial_group() {
        let r = audit_classification(&grp("2"), 1);
        assert_eq!((r.checked, r.extremal, r.violation_count), (1, 1, 0));
        assert_eq!(r.by_form.get("SmoothForm"), Some(&1));
    }

    #[test]
    fn parallel_shards_agree() {
        let g = grp("3x3");
        let a = serde_json::to_string(&audit_classification(&g, 1)).unwrap();
        let b = serde_json::to_string(&audit_classification(&g, 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(fg_table(&g, 5, 1), fg_table(&g, 5, 4));
    }
}
