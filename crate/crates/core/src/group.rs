//! Finite abelian groups presented as products of cyclic factors.
//!
//! A [`Group`] is `Z_{d_1} x ... x Z_{d_r}` with the moduli kept in the
//! order they were given. Elements have two representations: the coordinate
//! vector [`Element`] used at the API boundary, and a dense index in
//! `[0, order)` used by the bitset machinery. The index is mixed radix with
//! the first modulus outermost, so in `Z2 x Z4` the element `(1,3)` has
//! index `1*4 + 3 = 7`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest group order accepted unless the caller raises it.
pub const DEFAULT_ORDER_CAP: usize = 4096;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A group element as a coordinate vector, each coordinate reduced modulo
/// its factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element {
    coords: Vec<u32>,
}

impl Element {
    /// Builds an element without checking it against a group; use
    /// [`Group::element`] for a checked constructor.
    pub fn from_coords(coords: Vec<u32>) -> Self {
        Element { coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `Z_{d_1} x ... x Z_{d_r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    moduli: Vec<u32>,
    strides: Vec<usize>,
    order: usize,
    exponent: u64,
}

impl Group {
    /// Builds a group under the default order cap.
    pub fn new(moduli: &[u64]) -> Result<Self> {
        Self::with_cap(moduli, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(moduli: &[u64], cap: usize) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::EmptyModuli);
        }
        if let Some(&d) = moduli.iter().find(|&&d| d < 2) {
            return Err(Error::ModulusTooSmall(d));
        }
        let mut order: u64 = 1;
        for &d in moduli {
            order = order.saturating_mul(d);
            if order > cap as u64 {
                return Err(Error::OrderCapExceeded {
                    order: moduli.iter().fold(1u64, |acc, &d| acc.saturating_mul(d)),
                    cap,
                });
            }
        }
        let exponent = moduli.iter().fold(1, |acc, &d| lcm(acc, d));
        let mut strides = vec![1usize; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1] as usize;
        }
        Ok(Group {
            moduli: moduli.iter().map(|&d| d as u32).collect(),
            strides,
            order: order as usize,
            exponent,
        })
    }

    /// Parses a group literal such as `Z4xZ9`, `4x9` or `z2 x z2 x z2`.
    pub fn parse_with_cap(text: &str, cap: usize) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty group literal".into()));
        }
        let mut moduli = Vec::new();
        for part in cleaned.split(['x', 'X', '*']) {
            let digits = part.strip_prefix(['z', 'Z']).unwrap_or(part);
            let d: u64 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad cyclic factor `{part}` in `{text}`")))?;
            moduli.push(d);
        }
        Self::with_cap(&moduli, cap)
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_cyclic_presentation(&self) -> bool {
        self.moduli.len() == 1
    }

    /// Checked element constructor.
    pub fn element(&self, coords: &[u32]) -> Result<Element> {
        let e = Element::from_coords(coords.to_vec());
        self.check(&e)?;
        Ok(e)
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: a.rank(),
            });
        }
        if a.coords.iter().zip(&self.moduli).any(|(c, d)| c >= d) {
            return Err(Error::ElementOutOfGroup(a.to_string()));
        }
        Ok(())
    }

    pub fn zero(&self) -> Element {
        Element::from_coords(vec![0; self.rank()])
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self
            .element_at_unchecked(self.add_idx(self.index_unchecked(a), self.index_unchecked(b))))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.element_at_unchecked(self.neg_idx(self.index_unchecked(a))))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// `t * a`.
    pub fn scale(&self, t: u64, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.element_at_unchecked(self.scale_idx(t, self.index_unchecked(a))))
    }

    /// Smallest `t >= 1` with `t * a = 0`.
    pub fn element_order(&self, a: &Element) -> Result<u64> {
        self.check(a)?;
        Ok(self.order_of_idx(self.index_unchecked(a)))
    }

    pub fn index_of(&self, a: &Element) -> Result<usize> {
        self.check(a)?;
        Ok(self.index_unchecked(a))
    }

    pub fn element_at(&self, index: usize) -> Result<Element> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(self.element_at_unchecked(index))
    }

    fn index_unchecked(&self, a: &Element) -> usize {
        a.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub(crate) fn element_at_unchecked(&self, index: usize) -> Element {
        Element::from_coords(
            self.strides
                .iter()
                .zip(&self.moduli)
                .map(|(&s, &d)| ((index / s) % d as usize) as u32)
                .collect(),
        )
    }

    #[inline]
    fn coord(&self, index: usize, axis: usize) -> usize {
        (index / self.strides[axis]) % self.moduli[axis] as usize
    }

    /// Addition on dense indices.
    pub fn add_idx(&self, i: usize, j: usize) -> usize {
        let mut out = 0;
        for axis in 0..self.rank() {
            let d = self.moduli[axis] as usize;
            out += ((self.coord(i, axis) + self.coord(j, axis)) % d) * self.strides[axis];
        }
        out
    }

    pub fn neg_idx(&self, i: usize) -> usize {
        let mut out = 0;
        for axis in 0..self.rank() {
            let d = self.moduli[axis] as usize;
            out += ((d - self.coord(i, axis)) % d) * self.strides[axis];
        }
        out
    }

    pub fn sub_idx(&self, i: usize, j: usize) -> usize {
        self.add_idx(i, self.neg_idx(j))
    }

    pub fn scale_idx(&self, t: u64, i: usize) -> usize {
        let mut out = 0;
        for axis in 0..self.rank() {
            let d = self.moduli[axis] as u64;
            let c = self.coord(i, axis) as u64;
            out += (((t % d) * c) % d) as usize * self.strides[axis];
        }
        out
    }

    /// Order of the element at `i`: the lcm over axes of `d / gcd(c, d)`.
    pub fn order_of_idx(&self, i: usize) -> u64 {
        (0..self.rank()).fold(1, |acc, axis| {
            let d = self.moduli[axis] as u64;
            let c = self.coord(i, axis) as u64;
            lcm(acc, d / gcd(c, d))
        })
    }

    /// The permutation `k -> index_of(element_at(k) + g)`.
    pub fn shift_row(&self, g: usize) -> Vec<u32> {
        (0..self.order).map(|k| self.add_idx(k, g) as u32).collect()
    }

    /// Sorted indices of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[Element]) -> Result<Vec<usize>> {
        let idx = gens
            .iter()
            .map(|g| self.index_of(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.subgroup_generated_idx(&idx))
    }

    /// Index-level closure. In a finite group closure under addition alone
    /// already contains negatives and zero.
    pub fn subgroup_generated_idx(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0usize];
        for &g in gens {
            if member[g] {
                continue;
            }
            // Adjoin g: H' = H + <g>; walk cosets h + t*g until we return to H.
            let base = elems.clone();
            let in_base = member.clone();
            let mut step = g;
            while !in_base[step] {
                for &h in &base {
                    let e = self.add_idx(h, step);
                    if !member[e] {
                        member[e] = true;
                        elems.push(e);
                    }
                }
                step = self.add_idx(step, g);
            }
        }
        elems.sort_unstable();
        elems
    }

    pub fn is_cyclic_subgroup(&self, gens: &[Element]) -> Result<bool> {
        let idx = gens
            .iter()
            .map(|g| self.index_of(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.is_cyclic_subgroup_idx(&idx))
    }

    /// True iff some member of `<gens>` has order equal to the subgroup size.
    pub fn is_cyclic_subgroup_idx(&self, gens: &[usize]) -> bool {
        let sub = self.subgroup_generated_idx(gens);
        let size = sub.len() as u64;
        sub.iter().any(|&h| self.order_of_idx(h) == size)
    }

    /// Parses `(a,b,...)`, or a bare integer for rank-1 groups.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        let inner = match t.strip_prefix('(') {
            Some(rest) => rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in `{t}`")))?,
            None if self.rank() == 1 => t,
            None => {
                return Err(Error::Parse(format!(
                    "element `{t}` needs the (c1,...,c{}) form",
                    self.rank()
                )))
            }
        };
        let mut coords = Vec::with_capacity(self.rank());
        for part in inner.split(',') {
            let part = part.trim();
            let v: i64 = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate `{part}` in `{t}`")))?;
            coords.push(v);
        }
        if coords.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        if coords
            .iter()
            .zip(&self.moduli)
            .any(|(&c, &d)| c < 0 || c >= d as i64)
        {
            return Err(Error::ElementOutOfGroup(t.to_string()));
        }
        Ok(Element::from_coords(
            coords.into_iter().map(|c| c as u32).collect(),
        ))
    }

    /// Display form of the element at `index`.
    pub fn format_index(&self, index: usize) -> String {
        self.element_at_unchecked(index).to_string()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.moduli.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Group::parse_with_cap(s, DEFAULT_ORDER_CAP)
    }
}

impl Serialize for Group {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        // Deserialized groups were produced by this crate, so any order that
        // fits in memory is accepted.
        Group::parse_with_cap(&s, usize::MAX).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: &Group, c: &[u32]) -> Element {
        g.element(c).unwrap()
    }

    #[test]
    fn construction() {
        let g = Group::new(&[2]).unwrap();
        assert_eq!((g.order(), g.exponent()), (2, 2));
        let g = Group::new(&[3, 3]).unwrap();
        assert_eq!((g.order(), g.exponent()), (9, 3));
        let g = Group::new(&[2, 4]).unwrap();
        assert_eq!((g.order(), g.exponent()), (8, 4));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Group::new(&[]), Err(Error::EmptyModuli));
        assert_eq!(Group::new(&[4, 1]), Err(Error::ModulusTooSmall(1)));
        assert!(matches!(
            Group::new(&[64, 128]),
            Err(Error::OrderCapExceeded {
                order: 8192,
                cap: 4096
            })
        ));
        assert!(Group::with_cap(&[64, 128], 8192).is_ok());
    }

    #[test]
    fn arithmetic() {
        let z6 = Group::new(&[6]).unwrap();
        assert_eq!(
            z6.add(&el(&z6, &[4]), &el(&z6, &[5])).unwrap(),
            el(&z6, &[3])
        );
        let z33 = Group::new(&[3, 3]).unwrap();
        assert_eq!(z33.neg(&el(&z33, &[1, 2])).unwrap(), el(&z33, &[2, 1]));
        let x = el(&z33, &[2, 1]);
        assert_eq!(z33.add(&z33.zero(), &x).unwrap(), x);
        assert!(matches!(
            z33.add(&x, &el(&z6, &[1])),
            Err(Error::RankMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn orders() {
        let z6 = Group::new(&[6]).unwrap();
        assert_eq!(z6.element_order(&el(&z6, &[2])).unwrap(), 3);
        let z24 = Group::new(&[2, 4]).unwrap();
        assert_eq!(z24.element_order(&el(&z24, &[1, 2])).unwrap(), 2);
        assert_eq!(z24.element_order(&z24.zero()).unwrap(), 1);
    }

    #[test]
    fn indexing() {
        let z24 = Group::new(&[2, 4]).unwrap();
        assert_eq!(z24.index_of(&z24.zero()).unwrap(), 0);
        assert_eq!(z24.index_of(&el(&z24, &[1, 3])).unwrap(), 7);
        assert_eq!(z24.element_at(7).unwrap(), el(&z24, &[1, 3]));
        let z5 = Group::new(&[5]).unwrap();
        assert_eq!(z5.element_at(3).unwrap(), el(&z5, &[3]));
        assert!(matches!(
            z5.element_at(5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn subgroups() {
        let z4 = Group::new(&[4]).unwrap();
        assert_eq!(z4.subgroup_generated(&[el(&z4, &[2])]).unwrap(), vec![0, 2]);
        let z33 = Group::new(&[3, 3]).unwrap();
        let all = z33
            .subgroup_generated(&[el(&z33, &[1, 0]), el(&z33, &[0, 1])])
            .unwrap();
        assert_eq!(all, (0..9).collect::<Vec<_>>());
        let z24 = Group::new(&[2, 4]).unwrap();
        let h = z24.subgroup_generated(&[el(&z24, &[1, 2])]).unwrap();
        assert_eq!(h, vec![0, z24.index_of(&el(&z24, &[1, 2])).unwrap()]);
    }

    #[test]
    fn cyclicity() {
        let v4 = Group::new(&[2, 2]).unwrap();
        assert!(!v4
            .is_cyclic_subgroup(&[el(&v4, &[1, 0]), el(&v4, &[0, 1])])
            .unwrap());
        let z6 = Group::new(&[6]).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert!(z6.is_cyclic_subgroup_idx(&[a, b]));
            }
        }
        let z24 = Group::new(&[2, 4]).unwrap();
        assert!(z24.is_cyclic_subgroup(&[el(&z24, &[0, 1])]).unwrap());
        assert!(z24.is_cyclic_subgroup(&[]).unwrap());
    }

    #[test]
    fn literals() {
        let g: Group = "Z4xZ9".parse().unwrap();
        assert_eq!(g.moduli(), &[4, 9]);
        let g: Group = "4x9".parse().unwrap();
        assert_eq!(g.to_string(), "4x9");
        let g: Group = "z2 X z2 x Z2".parse().unwrap();
        assert_eq!(g.moduli(), &[2, 2, 2]);
        // input order is preserved, no normalization
        let g: Group = "9x4".parse().unwrap();
        assert_eq!(g.moduli(), &[9, 4]);
        assert!(matches!("Zx4".parse::<Group>(), Err(Error::Parse(_))));
        assert!(matches!("".parse::<Group>(), Err(Error::Parse(_))));

        let z24: Group = "2x4".parse().unwrap();
        assert_eq!(z24.parse_element("(1, 3)").unwrap(), el(&z24, &[1, 3]));
        assert!(matches!(
            z24.parse_element("(2,0)"),
            Err(Error::ElementOutOfGroup(_))
        ));
        assert!(matches!(
            z24.parse_element("(1)"),
            Err(Error::RankMismatch { .. })
        ));
        assert!(matches!(z24.parse_element("3"), Err(Error::Parse(_))));
        let z5: Group = "5".parse().unwrap();
        assert_eq!(z5.parse_element("3").unwrap(), el(&z5, &[3]));
        assert_eq!(z5.parse_element("(3)").unwrap(), el(&z5, &[3]));
        assert_eq!(el(&z24, &[1, 3]).to_string(), "(1,3)");
    }
}
