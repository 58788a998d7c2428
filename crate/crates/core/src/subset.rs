//! Subsets of the positive integers, their modified standard tableaux and
//! the rank-preserving successor / predecessor operators.
//!
//! The tableau of `F = {a_1 < ... < a_n}` has `F` on its top row. Below each
//! `a_i` sits the largest positive integer smaller than `a_i` that is neither
//! in `F` nor already used further left, or the blank marker when no such
//! integer exists. Reading `1, 2, 3, ...` as a bracket word (non-members open,
//! members close) the bottom entry of `a_i` is exactly the opener that `a_i`
//! closes, which is how [`tableau`] computes it in `O(|F|)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of positive integers stored as a strictly increasing
/// sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct SubsetWord(Vec<u32>);

impl SubsetWord {
    pub fn empty() -> Self {
        SubsetWord(Vec::new())
    }

    /// Builds a subset from any sequence of positive integers; duplicates are
    /// rejected rather than merged.
    pub fn new(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        if elements.first() == Some(&0) {
            return Err(Error::InvalidSubset("elements must be positive".into()));
        }
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset("duplicate element".into()));
        }
        Ok(SubsetWord(elements))
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.first().is_none_or(|&a| a > 0));
        SubsetWord(elements)
    }

    /// The interval `[n] = {1, ..., n}`.
    pub fn interval(n: u32) -> Self {
        SubsetWord((1..=n).collect())
    }

    /// Decodes a bitmask where bit `i` stands for element `i + 1`.
    pub fn from_mask(mask: u64) -> Self {
        let mut elements = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let bit = m.trailing_zeros();
            elements.push(bit + 1);
            m &= m - 1;
        }
        SubsetWord(elements)
    }

    /// Bitmask form; `None` when an element exceeds 64.
    pub fn to_mask(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, &a| {
            if a > 64 {
                None
            } else {
                Some(acc | 1 << (a - 1))
            }
        })
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, a: u32) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubsetWord) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for a in &self.0 {
            for b in rest.by_ref() {
                match b.cmp(a) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// True when every element lies in `[v]`.
    pub fn within(&self, v: u32) -> bool {
        self.largest().is_none_or(|m| m <= v)
    }

    /// `[v] \ self`; the caller guarantees `self ⊆ [v]`.
    pub fn complement(&self, v: u32) -> SubsetWord {
        SubsetWord((1..=v).filter(|a| !self.contains(*a)).collect())
    }

    pub fn with(&self, a: u32) -> SubsetWord {
        let mut elements = self.0.clone();
        match elements.binary_search(&a) {
            Ok(_) => {}
            Err(pos) => elements.insert(pos, a),
        }
        SubsetWord(elements)
    }

    pub fn without(&self, a: u32) -> SubsetWord {
        SubsetWord(self.0.iter().copied().filter(|&x| x != a).collect())
    }

    /// Paper-style compact rendering: `∅`, `2378`, or `{2,10,11}` once an
    /// element needs more than one digit.
    pub fn compact(&self) -> String {
        if self.0.is_empty() {
            "∅".to_string()
        } else if self.0.iter().all(|&a| a < 10) {
            self.0.iter().map(|a| a.to_string()).collect()
        } else {
            format!("{{{self}}}")
        }
    }
}

/// All `k`-subsets of `[v]` in lexicographic order.
pub fn k_subsets(v: u32, k: usize) -> Vec<SubsetWord> {
    let mut out = Vec::new();
    if k > v as usize {
        return out;
    }
    let mut cur: Vec<u32> = (1..=k as u32).collect();
    loop {
        out.push(SubsetWord(cur.clone()));
        // rightmost position that can still advance
        let mut i = k;
        while i > 0 && cur[i - 1] == v - (k - i) as u32 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Every subset of `[v]`, in canonical order.
pub fn all_subsets(v: u32) -> Vec<SubsetWord> {
    (0..=v as usize).flat_map(|k| k_subsets(v, k)).collect()
}

/// Canonical order: by cardinality first, then lexicographically on the
/// ascending element sequence. Within one cardinality this is the canonical
/// index order used for every matrix.
impl Ord for SubsetWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SubsetWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma-separated ascending integers; `∅` is the empty string.
impl fmt::Display for SubsetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for SubsetWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SubsetWord::empty());
        }
        let elements = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidSubset(format!("bad element {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(format!(
                "elements must be strictly increasing: {s:?}"
            )));
        }
        SubsetWord::new(elements)
    }
}

impl TryFrom<Vec<u32>> for SubsetWord {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        SubsetWord::new(v)
    }
}

impl From<SubsetWord> for Vec<u32> {
    fn from(s: SubsetWord) -> Self {
        s.0
    }
}

/// An entry of the tableau's second row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Filled(u32),
    Blank,
}

impl Cell {
    pub fn is_blank(self) -> bool {
        matches!(self, Cell::Blank)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Filled(b) => write!(f, "{b}"),
            Cell::Blank => f.write_str("j"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    top: Vec<u32>,
    bottom: Vec<Cell>,
}

impl Tableau {
    pub fn top(&self) -> &[u32] {
        &self.top
    }

    pub fn bottom(&self) -> &[Cell] {
        &self.bottom
    }

    pub fn blanks(&self) -> usize {
        self.bottom.iter().filter(|c| c.is_blank()).count()
    }

    /// Number of filled cells, i.e. the rank of the top-row set.
    pub fn filled(&self) -> usize {
        self.bottom.len() - self.blanks()
    }

    /// Least positive integer appearing in neither row.
    pub fn least_absent(&self) -> u32 {
        let mut seen: Vec<u32> = self
            .top
            .iter()
            .copied()
            .chain(self.bottom.iter().filter_map(|c| match c {
                Cell::Filled(b) => Some(*b),
                Cell::Blank => None,
            }))
            .collect();
        seen.sort_unstable();
        let mut candidate = 1;
        for a in seen {
            if a == candidate {
                candidate += 1;
            } else if a > candidate {
                break;
            }
        }
        candidate
    }
}

/// Two lines, entries separated by single spaces, blanks rendered as `j`.
/// The empty tableau is two empty lines.
impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top: Vec<String> = self.top.iter().map(|a| a.to_string()).collect();
        let bottom: Vec<String> = self.bottom.iter().map(|c| c.to_string()).collect();
        writeln!(f, "{}", top.join(" "))?;
        write!(f, "{}", bottom.join(" "))
    }
}

/// Computes the tableau of `f`.
pub fn tableau(f: &SubsetWord) -> Tableau {
    // Unmatched non-members, as inclusive ranges; the top range ends at the
    // largest available integer.
    let mut open: Vec<(u32, u32)> = Vec::new();
    let mut bottom = Vec::with_capacity(f.len());
    let mut next = 1u32;
    for &a in f.elements() {
        if a > next {
            open.push((next, a - 1));
        }
        next = a + 1;
        let cell = match open.last_mut() {
            Some(range) => {
                let b = range.1;
                if range.0 == range.1 {
                    open.pop();
                } else {
                    range.1 -= 1;
                }
                Cell::Filled(b)
            }
            None => Cell::Blank,
        };
        bottom.push(cell);
    }
    Tableau {
        top: f.elements().to_vec(),
        bottom,
    }
}

/// Frankl rank: the number of filled cells of the tableau.
pub fn rank(f: &SubsetWord) -> usize {
    let mut available = 0usize;
    let mut filled = 0usize;
    let mut next = 1u32;
    for &a in f.elements() {
        available += (a - next) as usize;
        next = a + 1;
        if available > 0 {
            available -= 1;
            filled += 1;
        }
    }
    filled
}

pub fn is_full_rank(f: &SubsetWord) -> bool {
    rank(f) == f.len()
}

/// Rank read off the lattice walk of `f` inside `[v]`: `|F| - b`, where `b`
/// is the largest value of `2·|F ∩ [i]| - i` over `i = 0..=v`.
pub fn rank_via_walk(f: &SubsetWord, v: u32) -> Result<usize> {
    if !f.within(v) {
        return Err(Error::OutsideUniverse {
            set: f.to_string(),
            v,
        });
    }
    let mut height = 0i64;
    let mut best = 0i64;
    for i in 1..=v {
        height += if f.contains(i) { 1 } else { -1 };
        best = best.max(height);
    }
    Ok(f.len() - best as usize)
}

/// `F ∪ {a}` with `a` the least positive integer absent from the tableau.
pub fn successor(f: &SubsetWord) -> SubsetWord {
    f.with(tableau(f).least_absent())
}

/// Removes the element above the rightmost blank; `None` for full-rank sets.
pub fn predecessor(f: &SubsetWord) -> Option<SubsetWord> {
    let t = tableau(f);
    let idx = t.bottom.iter().rposition(|c| c.is_blank())?;
    Some(f.without(t.top[idx]))
}

/// The member of `f`'s chain with `m` more (or `-m` fewer) elements, by
/// repeated successor / predecessor.
pub fn jump(f: &SubsetWord, m: i64) -> Option<SubsetWord> {
    let mut cur = f.clone();
    if m >= 0 {
        for _ in 0..m {
            cur = successor(&cur);
        }
    } else {
        for _ in 0..m.unsigned_abs() {
            cur = predecessor(&cur)?;
        }
    }
    Some(cur)
}

/// Deletes the elements above the `m` rightmost blanks of the tableau.
pub fn delete_rightmost_j(f: &SubsetWord, m: usize) -> Option<SubsetWord> {
    let t = tableau(f);
    let doomed: Vec<u32> = t
        .top
        .iter()
        .zip(&t.bottom)
        .rev()
        .filter(|(_, c)| c.is_blank())
        .take(m)
        .map(|(a, _)| *a)
        .collect();
    if doomed.len() < m {
        return None;
    }
    Some(SubsetWord::from_sorted_unchecked(
        f.elements()
            .iter()
            .copied()
            .filter(|a| !doomed.contains(a))
            .collect(),
    ))
}

/// First member of the rank chain through `f`.
pub fn chain_min(f: &SubsetWord) -> SubsetWord {
    let blanks = f.len() - rank(f);
    delete_rightmost_j(f, blanks).expect("blank count is exact")
}

/// Last member of the rank chain through `f` inside `[v]`, of size `v - rank(f)`.
pub fn chain_max(f: &SubsetWord, v: u32) -> Result<SubsetWord> {
    if !f.within(v) {
        return Err(Error::OutsideUniverse {
            set: f.to_string(),
            v,
        });
    }
    let target = v as usize - rank(f);
    let mut cur = f.clone();
    while cur.len() < target {
        cur = successor(&cur);
    }
    Ok(cur)
}

/// `[v] \ chain_min([v] \ K)`: the largest member of the complement chain
/// through `K`.
pub fn underline_map(k: &SubsetWord, v: u32) -> Result<SubsetWord> {
    if !k.within(v) {
        return Err(Error::OutsideUniverse {
            set: k.to_string(),
            v,
        });
    }
    Ok(chain_min(&k.complement(v)).complement(v))
}
