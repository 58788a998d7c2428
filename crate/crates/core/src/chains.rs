//! Symmetric skipless chain decompositions of `2^[v]`.
//!
//! Rank chains start at a full-rank set and climb by [`successor`] until they
//! reach size `v - rank`. Complement chains are the member-wise complements
//! of rank chains, stored bottom-up.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{chain_min, rank, successor, SubsetWord};

/// Default ceiling on `v` for anything that materialises all of `2^[v]`.
pub const DEFAULT_UNIVERSE_CAP: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    rank: usize,
    v: u32,
    members: Vec<SubsetWord>,
}

impl Chain {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn members(&self) -> &[SubsetWord] {
        &self.members
    }

    pub fn first(&self) -> &SubsetWord {
        &self.members[0]
    }

    pub fn last(&self) -> &SubsetWord {
        self.members.last().expect("chains are nonempty")
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `2 → 23 → 234` style rendering.
    pub fn to_arrow_string(&self) -> String {
        self.members
            .iter()
            .map(SubsetWord::compact)
            .collect::<Vec<_>>()
            .join(" → ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionKind {
    Rank,
    Complement,
    /// Any other symmetric skipless chain partition, supplied by the caller.
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    v: u32,
    kind: DecompositionKind,
    chains: Vec<Chain>,
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    rank: usize,
    members: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    v: u32,
    kind: DecompositionKind,
    chains: Vec<ChainJson>,
}

impl Decomposition {
    /// Validates an arbitrary chain partition of `2^[v]`: chains must be
    /// nested with cardinality steps of one, symmetric about `v/2`, and
    /// jointly cover every subset exactly once.
    pub fn from_chains(v: u32, chains: Vec<Vec<SubsetWord>>) -> Result<Self> {
        if v > 63 {
            return Err(Error::UniverseTooLarge { v, cap: 63 });
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(chains.len());
        for members in chains {
            let Some(first) = members.first() else {
                return Err(Error::InvalidDecomposition("empty chain".into()));
            };
            let bottom = first.len();
            let top = members.last().unwrap().len();
            if bottom + top != v as usize {
                return Err(Error::InvalidDecomposition(format!(
                    "chain from {{{first}}} spans levels {bottom}..{top}, not symmetric in [{v}]"
                )));
            }
            for w in members.windows(2) {
                if w[1].len() != w[0].len() + 1 || !w[0].is_subset_of(&w[1]) {
                    return Err(Error::InvalidDecomposition(format!(
                        "{{{}}} → {{{}}} is not a covering step",
                        w[0], w[1]
                    )));
                }
            }
            for m in &members {
                if !m.within(v) {
                    return Err(Error::OutsideUniverse {
                        set: m.to_string(),
                        v,
                    });
                }
                if !seen.insert(m.clone()) {
                    return Err(Error::InvalidDecomposition(format!(
                        "{{{m}}} appears in more than one place"
                    )));
                }
            }
            out.push(Chain {
                rank: bottom,
                v,
                members,
            });
        }
        if seen.len() != 1usize << v {
            return Err(Error::InvalidDecomposition(format!(
                "chains cover {} of the {} subsets",
                seen.len(),
                1u64 << v
            )));
        }
        Ok(Decomposition {
            v,
            kind: DecompositionKind::Custom,
            chains: out,
        })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn kind(&self) -> DecompositionKind {
        self.kind
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    /// Map from every member to the index of its chain.
    pub fn index(&self) -> HashMap<&SubsetWord, usize> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.members.iter().map(move |m| (m, i)))
            .collect()
    }

    pub fn chain_containing(&self, f: &SubsetWord) -> Option<&Chain> {
        self.chains.iter().find(|c| c.members.contains(f))
    }

    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.chains {
            *out.entry(c.rank).or_insert(0) += 1;
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = DecompositionJson {
            v: self.v,
            kind: self.kind,
            chains: self
                .chains
                .iter()
                .map(|c| ChainJson {
                    rank: c.rank,
                    members: c.members.iter().map(|m| m.to_string()).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serialises")
    }

    /// One chain per line in arrow notation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.chains {
            out.push_str(&c.to_arrow_string());
            out.push('\n');
        }
        out
    }
}

fn check_universe(v: u32, cap: u32) -> Result<()> {
    if v == 0 {
        return Err(Error::Parameters("universe size must be positive".into()));
    }
    if v > cap.min(63) {
        return Err(Error::UniverseTooLarge { v, cap });
    }
    Ok(())
}

fn rank_chain_from_min(min: SubsetWord, v: u32) -> Chain {
    let r = min.len();
    let top = v as usize - r;
    let mut members = Vec::with_capacity(top - r + 1);
    members.push(min);
    while members.last().unwrap().len() < top {
        let next = successor(members.last().unwrap());
        members.push(next);
    }
    Chain {
        rank: r,
        v,
        members,
    }
}

/// Full-rank subsets of `[v]` in canonical order.
fn chain_minima(v: u32) -> Vec<SubsetWord> {
    let mut minima: Vec<SubsetWord> = (0u64..1 << v)
        .map(SubsetWord::from_mask)
        .filter(|f| rank(f) == f.len())
        .collect();
    minima.sort();
    minima
}

/// Rank-chain decomposition of `2^[v]` with the default universe cap.
pub fn decompose(v: u32) -> Result<Decomposition> {
    decompose_capped(v, DEFAULT_UNIVERSE_CAP)
}

/// Chains are ordered by rank, then by their minimum element sequence.
pub fn decompose_capped(v: u32, cap: u32) -> Result<Decomposition> {
    check_universe(v, cap)?;
    let chains = chain_minima(v)
        .into_iter()
        .map(|min| rank_chain_from_min(min, v))
        .collect();
    Ok(Decomposition {
        v,
        kind: DecompositionKind::Rank,
        chains,
    })
}

/// The rank chain through `f` inside `[v]`, built without enumerating `2^[v]`.
pub fn chain_of(f: &SubsetWord, v: u32) -> Result<Chain> {
    if !f.within(v) {
        return Err(Error::OutsideUniverse {
            set: f.to_string(),
            v,
        });
    }
    Ok(rank_chain_from_min(chain_min(f), v))
}

pub fn complement_decompose(v: u32) -> Result<Decomposition> {
    complement_decompose_capped(v, DEFAULT_UNIVERSE_CAP)
}

pub fn complement_decompose_capped(v: u32, cap: u32) -> Result<Decomposition> {
    let rank_chains = decompose_capped(v, cap)?;
    let chains = rank_chains
        .chains
        .into_iter()
        .map(|c| Chain {
            rank: c.rank,
            v,
            members: c.members.iter().rev().map(|m| m.complement(v)).collect(),
        })
        .collect();
    Ok(Decomposition {
        v,
        kind: DecompositionKind::Complement,
        chains,
    })
}

/// Number of rank chains per rank, counted from the actual decomposition.
pub fn chain_census(v: u32) -> Result<BTreeMap<usize, usize>> {
    Ok(decompose(v)?.census())
}
