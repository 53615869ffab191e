//! Coxeter systems: matrices, finite balls of group elements, Bruhat order
//! and parabolic quotients.

mod ball;
mod matrix;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ball::{GroupBall, Verdict, DEFAULT_ELEMENT_BUDGET};
pub use matrix::CoxeterMatrix;

/// An element of a [`GroupBall`]. Ids follow ShortLex order of the canonical
/// reduced words and `Element(0)` is the identity, so `Ord` refines length.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Element(pub u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A subset `I ⊆ S` of generator indices (0-based), as a bitmask.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct ParabolicSubset(u64);

impl ParabolicSubset {
    pub fn empty() -> Self {
        ParabolicSubset(0)
    }

    pub fn full(rank: usize) -> Self {
        ParabolicSubset(if rank == 64 { u64::MAX } else { (1u64 << rank) - 1 })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ParabolicSubset(it.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn contains(self, s: usize) -> bool {
        s < 64 && self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1u64 << s;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Every subset of `{0, .., rank-1}`, in increasing bitmask order.
    pub fn all(rank: usize) -> impl Iterator<Item = Self> {
        (0..1u64 << rank).map(ParabolicSubset)
    }

    /// Parses `"1,2"`, `"s1,s2"` or `""` (1-based generator names).
    pub fn parse(text: &str, rank: usize) -> crate::Result<Self> {
        let mut out = Self::empty();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let digits = tok.trim_start_matches('s');
            let k: usize = digits
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad generator {:?}", tok)))?;
            if k == 0 || k > rank {
                return Err(crate::Error::Parse(format!("generator {:?} out of range 1..={}", tok, rank)));
            }
            out.insert(k - 1);
        }
        Ok(out)
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Renders a word as `s1s2s1`; the empty word is `e`.
pub fn format_word(word: &[u8]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|&s| format!("s{}", s + 1)).collect()
}
