//! Sequences over a group, stored as multisets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group};

/// A finite multiset of group elements. Term order carries no meaning, so the
/// representation is a count map keyed by dense element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    group: Arc<Group>,
    counts: BTreeMap<usize, u32>,
}

impl Sequence {
    pub fn empty(group: Arc<Group>) -> Self {
        Sequence {
            group,
            counts: BTreeMap::new(),
        }
    }

    /// Builds a sequence from `(element index, multiplicity)` pairs, merging
    /// repeated indices. The identity is rejected unless `allow_zero` is set.
    pub fn from_index_counts<I>(group: Arc<Group>, terms: I, allow_zero: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, u32)>,
    {
        let mut counts = BTreeMap::new();
        for (idx, mult) in terms {
            if idx >= group.order() {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    order: group.order(),
                });
            }
            if idx == 0 && !allow_zero {
                return Err(Error::ZeroElementRejected);
            }
            if mult > 0 {
                *counts.entry(idx).or_insert(0) += mult;
            }
        }
        Ok(Sequence { group, counts })
    }

    /// Builds a sequence from a list of element indices, one term each.
    pub fn from_indices(group: Arc<Group>, indices: &[usize]) -> Result<Self> {
        Self::from_index_counts(group, indices.iter().map(|&i| (i, 1)), false)
    }

    pub fn from_elements<'a, I>(group: Arc<Group>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a Element, u32)>,
    {
        let idx = terms
            .into_iter()
            .map(|(e, m)| group.index_of(e).map(|i| (i, m)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_index_counts(group, idx, false)
    }

    /// Parses whitespace-separated terms `elem` or `elem^mult`, e.g.
    /// `"(0,1)^3 (1,1)^2"` or, for cyclic groups, `"1^3 2"`.
    pub fn parse(group: Arc<Group>, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for token in tokenize(text)? {
            let (elem, mult) = match token.rsplit_once('^') {
                Some((e, m)) => {
                    let mult: u32 = m
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in `{token}`")))?;
                    if mult == 0 {
                        return Err(Error::Parse(format!(
                            "multiplicity must be at least 1 in `{token}`"
                        )));
                    }
                    (e, mult)
                }
                None => (token.as_str(), 1),
            };
            let e = group.parse_element(elem)?;
            terms.push((group.index_of(&e)?, mult));
        }
        Self::from_index_counts(group, terms, false)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    /// `(element index, multiplicity)` in increasing index order.
    pub fn counts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts.iter().map(|(&i, &m)| (i, m))
    }

    pub fn len(&self) -> usize {
        self.counts.values().map(|&m| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Support as sorted element indices.
    pub fn support_indices(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn support(&self) -> Vec<Element> {
        self.counts
            .keys()
            .map(|&i| self.group.element_at_unchecked(i))
            .collect()
    }

    pub fn multiplicity_idx(&self, idx: usize) -> u32 {
        self.counts.get(&idx).copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, g: &Element) -> Result<u32> {
        Ok(self.multiplicity_idx(self.group.index_of(g)?))
    }

    /// Largest multiplicity, 0 for the empty sequence.
    pub fn h_max(&self) -> u32 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.h_max() <= 1
    }

    pub fn sigma_idx(&self) -> usize {
        self.counts.iter().fold(0, |acc, (&i, &m)| {
            self.group.add_idx(acc, self.group.scale_idx(m as u64, i))
        })
    }

    /// Sum of all terms.
    pub fn sigma(&self) -> Element {
        self.group.element_at_unchecked(self.sigma_idx())
    }

    /// Terms as a nondecreasing index list.
    pub fn to_indices(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&i, &m)| std::iter::repeat_n(i, m as usize))
            .collect()
    }

    fn same_group(&self, other: &Sequence) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Multiset union `S T`.
    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        let mut counts = self.counts.clone();
        for (&i, &m) in &other.counts {
            *counts.entry(i).or_insert(0) += m;
        }
        Ok(Sequence {
            group: self.group.clone(),
            counts,
        })
    }

    /// Deletes the terms of `other` from `self`; `other` must divide `self`.
    pub fn remove_sub(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        let mut counts = self.counts.clone();
        for (&i, &m) in &other.counts {
            match counts.get_mut(&i) {
                Some(c) if *c > m => *c -= m,
                Some(c) if *c == m => {
                    counts.remove(&i);
                }
                _ => return Err(Error::NotASubsequence),
            }
        }
        Ok(Sequence {
            group: self.group.clone(),
            counts,
        })
    }

    /// True iff every multiplicity of `other` is at most the one in `self`.
    pub fn contains_sub(&self, other: &Sequence) -> bool {
        other
            .counts
            .iter()
            .all(|(&i, &m)| self.multiplicity_idx(i) >= m)
    }

    pub fn to_json(&self) -> SequenceJson {
        SequenceJson {
            group: self.group.to_string(),
            terms: self
                .counts
                .iter()
                .map(|(&i, &m)| TermJson {
                    elem: self.group.element_at_unchecked(i),
                    mult: m,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &SequenceJson, group: Arc<Group>) -> Result<Self> {
        if json.group != group.to_string() {
            return Err(Error::GroupMismatch);
        }
        Self::from_elements(group, json.terms.iter().map(|t| (&t.elem, t.mult)))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("[]");
        }
        for (n, (&i, &m)) in self.counts.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", self.group.element_at_unchecked(i))?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub elem: Element,
    pub mult: u32,
}

/// `{"group": "2x4", "terms": [{"elem": [1,2], "mult": 3}, ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub group: String,
    pub terms: Vec<TermJson>,
}

/// Splits on whitespace outside parentheses, so `(1, 2)^3` stays one token.
fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced `)` in `{text}`")));
                }
                cur.push(c);
            }
            c if c.is_whitespace() => {
                if depth == 0 && !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                } // whitespace inside parentheses is dropped
            }
            _ => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced `(` in `{text}`")));
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    Ok(tokens)
}
