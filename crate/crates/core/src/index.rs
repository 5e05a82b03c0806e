//! Totally odd index sets: compositions of a weight `N` into `r` odd parts,
//! each at least 3, kept in lexicographically decreasing order.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `r`-tuple of odd integers `>= 3`. Ordering is lexicographic on the parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OddComposition(Vec<u32>);

impl OddComposition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p < 3 || p % 2 == 0) {
            let weight = parts.iter().sum();
            let depth = parts.len();
            return Err(Error::NotAMember(parts, weight, depth));
        }
        Ok(Self(parts))
    }

    /// Skips validation; callers guarantee every part is odd and at least 3.
    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&p| p >= 3 && p % 2 == 1));
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }
}

impl fmt::Display for OddComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The ordered index set `S(N, r)` together with its inverse position map.
#[derive(Clone, Debug)]
pub struct IndexTable {
    weight: u32,
    depth: usize,
    entries: Vec<OddComposition>,
    position: HashMap<OddComposition, usize>,
}

impl PartialEq for IndexTable {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.depth == other.depth && self.entries == other.entries
    }
}

impl Eq for IndexTable {}

impl IndexTable {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entries(&self) -> &[OddComposition] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&OddComposition> {
        self.entries.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OddComposition> {
        self.entries.iter()
    }

    /// Zero-based position of `c` in the lex-decreasing order.
    pub fn position_of(&self, c: &OddComposition) -> Result<usize> {
        self.position
            .get(c)
            .copied()
            .ok_or_else(|| Error::NotAMember(c.parts().to_vec(), self.weight, self.depth))
    }

    /// Looks up raw parts, rejecting anything outside `S(N, r)`.
    pub fn position_of_parts(&self, parts: &[u32]) -> Result<usize> {
        let c = OddComposition::new(parts.to_vec())
            .map_err(|_| Error::NotAMember(parts.to_vec(), self.weight, self.depth))?;
        self.position_of(&c)
    }

    fn from_entries(weight: u32, depth: usize, entries: Vec<OddComposition>) -> Self {
        let position = entries
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Self {
            weight,
            depth,
            entries,
            position,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct IndexTableJson {
    #[serde(rename = "N")]
    n: u32,
    r: usize,
    entries: Vec<Vec<u32>>,
}

impl Serialize for IndexTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IndexTableJson {
            n: self.weight,
            r: self.depth,
            entries: self.entries.iter().map(|c| c.parts().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = IndexTableJson::deserialize(d)?;
        let table = enumerate_s(raw.n, raw.r);
        let listed: Vec<Vec<u32>> = table.entries.iter().map(|c| c.parts().to_vec()).collect();
        if listed != raw.entries {
            return Err(D::Error::custom(format!(
                "entries do not match S({}, {}) in lex-decreasing order",
                raw.n, raw.r
            )));
        }
        Ok(table)
    }
}

/// All totally odd compositions of `n` into `r` parts, lex-decreasing.
pub fn enumerate_s(n: u32, r: usize) -> IndexTable {
    let mut entries = Vec::with_capacity(count_s(n, r) as usize);
    let mut prefix = Vec::with_capacity(r);
    if r > 0 {
        fill(n, r, &mut prefix, &mut entries);
    } else if n == 0 {
        // S(0, 0) holds the empty tuple; used for the empty tensor factor.
        entries.push(OddComposition(Vec::new()));
    }
    IndexTable::from_entries(n, r, entries)
}

fn fill(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<OddComposition>) {
    if slots == 1 {
        if remaining >= 3 && remaining % 2 == 1 {
            prefix.push(remaining);
            out.push(OddComposition::from_parts_unchecked(prefix.clone()));
            prefix.pop();
        }
        return;
    }
    let reserve = 3 * (slots as u32 - 1);
    if remaining < reserve + 3 {
        return;
    }
    let mut first = remaining - reserve;
    if first.is_multiple_of(2) {
        first -= 1;
    }
    while first >= 3 {
        prefix.push(first);
        fill(remaining - first, slots - 1, prefix, out);
        prefix.pop();
        first -= 2;
    }
}

/// Every composition of `n` into `r` positive parts, lex-decreasing.
pub fn compositions(n: u32, r: usize) -> Vec<Vec<u32>> {
    fn go(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let max_first = remaining.saturating_sub(slots as u32 - 1);
        for first in (1..=max_first).rev() {
            prefix.push(first);
            go(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, r, &mut Vec::with_capacity(r), &mut out);
    out
}

/// `|S(N, r)|` in closed form.
pub fn count_s(n: u32, r: usize) -> u64 {
    if r == 0 {
        return u64::from(n == 0);
    }
    let r32 = r as u32;
    if n < 3 * r32 || !(n - r32).is_multiple_of(2) {
        return 0;
    }
    let free = (n - 3 * r32) / 2;
    binomial_u(u64::from(free) + r as u64 - 1, r as u64 - 1)
        .to_u64()
        .expect("index set too large")
}

pub(crate) fn binomial_u(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(t: &IndexTable) -> Vec<Vec<u32>> {
        t.iter().map(|c| c.parts().to_vec()).collect()
    }

    #[test]
    fn enumerates_small_sets() {
        assert_eq!(parts(&enumerate_s(9, 3)), vec![vec![3, 3, 3]]);
        assert_eq!(
            parts(&enumerate_s(12, 2)),
            vec![vec![9, 3], vec![7, 5], vec![5, 7], vec![3, 9]]
        );
        assert!(enumerate_s(10, 3).is_empty());
        assert!(enumerate_s(5, 2).is_empty());
        assert_eq!(parts(&enumerate_s(7, 1)), vec![vec![7]]);
    }

    #[test]
    fn plain_compositions() {
        assert_eq!(compositions(4, 2), vec![vec![3, 1], vec![2, 2], vec![1, 3]]);
        assert_eq!(compositions(21, 4).len(), 1140);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn counts() {
        assert_eq!(count_s(12, 2), 4);
        assert_eq!(count_s(15, 3), 10);
        assert_eq!(count_s(9, 3), 1);
        assert_eq!(count_s(10, 3), 0);
        assert_eq!(count_s(4, 2), 0);
    }

    #[test]
    fn positions() {
        let t = enumerate_s(12, 2);
        assert_eq!(t.position_of_parts(&[7, 5]).unwrap(), 1);
        assert_eq!(enumerate_s(9, 3).position_of_parts(&[3, 3, 3]).unwrap(), 0);
        assert!(matches!(
            t.position_of_parts(&[6, 6]),
            Err(Error::NotAMember(..))
        ));
        assert!(t.position_of_parts(&[5, 5]).is_err());
    }

    #[test]
    fn json_shape() {
        let t = enumerate_s(12, 2);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"N":12,"r":2,"entries":[[9,3],[7,5],[5,7],[3,9]]}"#);
        let back: IndexTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<IndexTable>(r#"{"N":12,"r":2,"entries":[[3,9]]}"#).is_err());
    }

    #[test]
    fn rejects_even_and_small_parts() {
        assert!(OddComposition::new(vec![3, 4]).is_err());
        assert!(OddComposition::new(vec![1, 5]).is_err());
        assert!(OddComposition::new(vec![3, 5]).is_ok());
    }
}
