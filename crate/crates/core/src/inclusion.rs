//! Inclusion matrices and their diagonal companions.
//!
//! Every index set is listed in canonical order (cardinality, then
//! lexicographic), so entrywise identities between different builders hold
//! without any reordering.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::binom::{binomial, binomial_big, level_count};
use crate::chains::Decomposition;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::subset::{chain_min, is_full_rank, jump, k_subsets, rank, underline_map, SubsetWord};
use crate::vector::RationalVector;

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameters(what()))
    }
}

fn check_tkv(t: u32, k: u32, v: u32) -> Result<()> {
    require(t <= k && k <= v, || {
        format!("need 0 ≤ t ≤ k ≤ v, got t={t} k={k} v={v}")
    })
}

/// `t ≤ k ≤ v - t`, the range of the structural theorems.
pub(crate) fn check_admissible(t: u32, k: u32, v: u32) -> Result<()> {
    require(t <= k && k + t <= v, || {
        format!("need t ≤ k ≤ v − t, got t={t} k={k} v={v}")
    })
}

/// Full-rank `i`-subsets of `[v]`, canonical order.
pub fn full_rank_subsets(v: u32, i: u32) -> Vec<SubsetWord> {
    k_subsets(v, i as usize)
        .into_iter()
        .filter(is_full_rank)
        .collect()
}

/// Chain minima of the `t`-subsets: full-rank sets of rank `0..=min(t, v-t)`.
pub fn bar_row_labels(t: u32, v: u32) -> Vec<SubsetWord> {
    (0..=t.min(v - t))
        .flat_map(|i| full_rank_subsets(v, i))
        .collect()
}

/// `W_tk(v)`: `t`-subsets against `k`-subsets.
pub fn build_w(t: u32, k: u32, v: u32) -> Result<ExactMatrix> {
    check_tkv(t, k, v)?;
    Ok(ExactMatrix::inclusion(
        k_subsets(v, t as usize),
        k_subsets(v, k as usize),
    ))
}

/// `R_it(v)`: full-rank `i`-subsets against `t`-subsets.
pub fn build_r(i: u32, t: u32, v: u32) -> Result<ExactMatrix> {
    check_tkv(i, t, v)?;
    Ok(ExactMatrix::inclusion(
        full_rank_subsets(v, i),
        k_subsets(v, t as usize),
    ))
}

/// `W_t̄k(v)`: each row index `T` replaced by its chain minimum. The rows are
/// the blocks `R_0k, R_1k, ...` stacked in order.
pub fn build_w_bar(t: u32, k: u32, v: u32) -> Result<ExactMatrix> {
    check_tkv(t, k, v)?;
    Ok(ExactMatrix::inclusion(
        bar_row_labels(t, v),
        k_subsets(v, k as usize),
    ))
}

/// `(value, multiplicity)` blocks of `D_t̄k`.
fn d_bar_blocks(t: u32, k: u32, v: u32) -> Vec<(BigInt, usize)> {
    (0..=t.min(v - t))
        .map(|i| {
            let i = i as i64;
            (binomial_big(k as i64 - i, t as i64 - i), level_count(v, i))
        })
        .filter(|(_, mult)| *mult > 0)
        .collect()
}

fn expand(blocks: &[(BigInt, usize)]) -> Vec<BigInt> {
    blocks
        .iter()
        .flat_map(|(x, n)| std::iter::repeat_n(x.clone(), *n))
        .collect()
}

/// `D_t̄k(v)`: `C(k-i, t-i)` repeated `C(v,i) - C(v,i-1)` times, aligned with
/// the row blocks of [`build_w_bar`].
pub fn build_d_bar(t: u32, k: u32, v: u32) -> Result<ExactMatrix> {
    check_tkv(t, k, v)?;
    let labels = bar_row_labels(t, v);
    ExactMatrix::diagonal(expand(&d_bar_blocks(t, k, v)))
        .with_labels(Some(labels.clone()), Some(labels))
}

/// Column labels of `W_tk̲`: underline images of all `k`-subsets, sorted by
/// size and then lexicographically.
pub fn under_col_labels(k: u32, v: u32) -> Vec<SubsetWord> {
    let mut cols: Vec<SubsetWord> = k_subsets(v, k as usize)
        .iter()
        .map(|s| underline_map(s, v).expect("k-subsets lie in [v]"))
        .collect();
    cols.sort();
    cols
}

/// `W_tk̲(v)`: `t`-subsets against the underline images of `k`-subsets.
pub fn build_w_under(t: u32, k: u32, v: u32) -> Result<ExactMatrix> {
    check_tkv(t, k, v)?;
    Ok(ExactMatrix::inclusion(
        k_subsets(v, t as usize),
        under_col_labels(k, v),
    ))
}

/// `Q_tj`: the size-`j` column block of `W_tk̲`, for `max(k, v-k) ≤ j ≤ v`.
pub fn build_q(t: u32, j: u32, v: u32, k: u32) -> Result<ExactMatrix> {
    check_tkv(t, k, v)?;
    let k_star = k.max(v - k);
    require(k_star <= j && j <= v, || {
        format!("need max(k, v−k) = {k_star} ≤ j ≤ v = {v}, got j={j}")
    })?;
    let cols: Vec<SubsetWord> = under_col_labels(k, v)
        .into_iter()
        .filter(|c| c.len() == j as usize)
        .collect();
    Ok(ExactMatrix::inclusion(k_subsets(v, t as usize), cols))
}

/// `D_tk̲(v)`: `C(j-t, k-t)` repeated `C(v,j) - C(v,j+1)` times for
/// `j = max(k, v-k) ..= v`, aligned with the columns of [`build_w_under`].
pub fn build_d_under(t: u32, k: u32, v: u32) -> Result<ExactMatrix> {
    check_tkv(t, k, v)?;
    let k_star = k.max(v - k);
    let blocks: Vec<(BigInt, usize)> = (k_star..=v)
        .map(|j| {
            let mult =
                binomial(v as i64, j as i64).saturating_sub(binomial(v as i64, j as i64 + 1));
            (
                binomial_big(j as i64 - t as i64, k as i64 - t as i64),
                mult as usize,
            )
        })
        .filter(|(_, n)| *n > 0)
        .collect();
    let labels = under_col_labels(k, v);
    ExactMatrix::diagonal(expand(&blocks)).with_labels(Some(labels.clone()), Some(labels))
}

/// Indices of the columns of `W_t̄k` whose `k`-subset has rank at most `t`.
pub fn select_a_columns(t: u32, k: u32, v: u32) -> Result<Vec<usize>> {
    check_admissible(t, k, v)?;
    Ok(k_subsets(v, k as usize)
        .iter()
        .enumerate()
        .filter(|(_, s)| rank(s) <= t as usize)
        .map(|(i, _)| i)
        .collect())
}

/// `A_{t,k}(v)`: the square unimodular submatrix of `W_t̄k`.
pub fn select_a(t: u32, k: u32, v: u32) -> Result<ExactMatrix> {
    let cols = select_a_columns(t, k, v)?;
    Ok(build_w_bar(t, k, v)?.select_columns(&cols))
}

/// `h = D_t̄k⁻¹ W_t̄t 1`: `C(v-i, t-i) / C(k-i, t-i)` per row block.
pub fn h_vector(t: u32, k: u32, v: u32) -> Result<RationalVector> {
    check_tkv(t, k, v)?;
    let mut out = Vec::new();
    for i in 0..=t.min(v - t) {
        let i = i as i64;
        let value = BigRational::new(
            binomial_big(v as i64 - i, t as i64 - i),
            binomial_big(k as i64 - i, t as i64 - i),
        );
        out.extend(std::iter::repeat_n(value, level_count(v, i)));
    }
    Ok(RationalVector::new(out))
}

/// Stack of `W_0k, ..., W_tk`.
pub fn build_m(t: u32, k: u32, v: u32) -> Result<ExactMatrix> {
    check_tkv(t, k, v)?;
    let mut acc = build_w(0, k, v)?;
    for i in 1..=t {
        acc = acc.vstack(&build_w(i, k, v)?)?;
    }
    Ok(acc)
}

/// Inclusion matrix whose rows are the chain minima (under an arbitrary
/// symmetric chain partition) of the `t`-subsets.
pub fn matrix_from_decomposition(
    decomposition: &Decomposition,
    t: u32,
    k: u32,
    v: u32,
) -> Result<ExactMatrix> {
    check_admissible(t, k, v)?;
    if decomposition.v() != v {
        return Err(Error::Parameters(format!(
            "decomposition is of [{}], not [{v}]",
            decomposition.v()
        )));
    }
    let index = decomposition.index();
    let mut rows: Vec<SubsetWord> = k_subsets(v, t as usize)
        .iter()
        .map(|s| decomposition.chains()[index[s]].first().clone())
        .collect();
    rows.sort();
    rows.dedup();
    Ok(ExactMatrix::inclusion(rows, k_subsets(v, k as usize)))
}

/// Row-replaced inclusion matrix: every `t`-subset of rank `≤ t - m` becomes
/// its chain member `m` levels down, every other one its chain minimum.
/// Coinciding labels keep a single row.
pub fn build_w_mixed(t: u32, k: u32, v: u32, m: u32) -> Result<ExactMatrix> {
    check_admissible(t, k, v)?;
    require(m <= t, || format!("need m ≤ t, got m={m} t={t}"))?;
    let mut rows: Vec<SubsetWord> = k_subsets(v, t as usize)
        .iter()
        .map(|s| {
            if rank(s) + m as usize <= t as usize {
                jump(s, -(m as i64)).expect("enough blanks below rank t - m")
            } else {
                chain_min(s)
            }
        })
        .collect();
    rows.sort();
    rows.dedup();
    Ok(ExactMatrix::inclusion(rows, k_subsets(v, k as usize)))
}

/// Checks that `W_tt̲` is the transpose of `W_{s̄, v-t}` with
/// `s = min(t, v-t)`, matching rows and columns through complementation.
pub fn transpose_identity_holds(t: u32, v: u32) -> Result<bool> {
    require(t <= v, || format!("need t ≤ v, got t={t} v={v}"))?;
    let under = build_w_under(t, t, v)?;
    let bar = build_w_bar(t.min(v - t), v - t, v)?;
    if under.shape() != (bar.cols(), bar.rows()) {
        return Ok(false);
    }
    let under_rows = under.row_labels().unwrap();
    let under_cols = under.col_labels().unwrap();
    let row_pos = |s: &SubsetWord| under_rows.binary_search(s).ok();
    let col_pos = |s: &SubsetWord| under_cols.binary_search(s).ok();
    for (r, rl) in bar.row_labels().unwrap().iter().enumerate() {
        let Some(uc) = col_pos(&rl.complement(v)) else {
            return Ok(false);
        };
        for (c, cl) in bar.col_labels().unwrap().iter().enumerate() {
            let Some(ur) = row_pos(&cl.complement(v)) else {
                return Ok(false);
            };
            if bar.get(r, c) != under.get(ur, uc) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
