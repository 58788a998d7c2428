//! Exhaustive checks of the structural identities, run up to a chosen
//! universe size. Each check clamps `v_max` to the size at which it stays
//! interactive.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binom::{binomial, binomial_big, level_count};
use crate::chains::{chain_of, complement_decompose, decompose, Decomposition};
use crate::error::{Error, Result};
use crate::inclusion::{
    build_d_bar, build_d_under, build_m, build_r, build_w, build_w_bar, build_w_under, h_vector,
    matrix_from_decomposition, select_a, transpose_identity_holds,
};
use crate::matrix::ExactMatrix;
use crate::snf::{invariant_factors, is_unimodular, p_rank, smith_normal_form, wilson_diagonal};
use crate::solver::{design_divisibility, mul_rational, signed_design, solve_square, system};
use crate::subset::{
    all_subsets, delete_rightmost_j, jump, predecessor, rank, rank_via_walk, successor,
    underline_map, SubsetWord,
};
use crate::vector::IntegerVector;

pub const MAX_VERIFY_V: u32 = 14;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(u32) -> std::result::Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("tableau rank = walk rank", check_rank_oracle),
    ("successor/predecessor round trips", check_round_trips),
    ("rank chain decomposition", check_decomposition),
    ("complement chain decomposition", check_complement),
    ("R_it W_tk = C(k-i,t-i) R_ik", check_rw),
    ("W_t̄t W_tk = D_t̄k W_t̄k", check_wd),
    ("W_tk W_kk̲ = W_tk̲ D_tk̲", check_wq2),
    ("W_tt̲ is a transposed W_t̄,v-t", check_transpose),
    ("row spaces of W_tk, W_t̄k, M_tk", check_row_space),
    ("SNF of W_t̄k is (I|O)", check_snf_bar),
    ("SNF of W_tk̲ is (I|O)", check_snf_under),
    ("full p-rank of W_t̄k", check_p_rank),
    ("Wilson diagonal form", check_wilson),
    ("A_tk and W_t̄t unimodular", check_unimodular),
    ("singular counterexample", check_counterexample),
    ("signed design feasibility", check_designs),
    ("λ1 vs λh systems", check_h_equivalence),
    ("underline solutions lift", check_underline_lift),
];

/// Runs every check; `v_max` must lie in `1..=MAX_VERIFY_V`.
pub fn run_all(v_max: u32) -> Result<Vec<CheckResult>> {
    if v_max == 0 || v_max > MAX_VERIFY_V {
        return Err(Error::Parameters(format!(
            "v_max must be in 1..={MAX_VERIFY_V}, got {v_max}"
        )));
    }
    Ok(CHECKS
        .iter()
        .map(|(name, check)| {
            let (passed, detail) = match check(v_max) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name,
                passed,
                detail,
            }
        })
        .collect())
}

/// One aligned `PASS`/`FAIL` line per check.
pub fn format_report(results: &[CheckResult]) -> String {
    let width = results
        .iter()
        .map(|r| display_width(r.name))
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let pad = width - display_width(r.name);
        out.push_str(&format!(
            "{status}  {}{}  {}\n",
            r.name,
            " ".repeat(pad),
            r.detail
        ));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", results.len()));
    out
}

/// Character count ignoring combining diacritics such as the bar in `t̄`.
fn display_width(s: &str) -> usize {
    s.chars()
        .filter(|c| !('\u{0300}'..='\u{036f}').contains(c))
        .count()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `(t, k)` with `t ≤ k ≤ v - t`.
fn admissible(v: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=v / 2).flat_map(move |t| (t..=v - t).map(move |k| (t, k)))
}

fn check_rank_oracle(v_max: u32) -> std::result::Result<String, String> {
    let v = v_max.min(12);
    let mut n = 0;
    for f in all_subsets(v) {
        let walk = rank_via_walk(&f, v).map_err(err)?;
        ensure(rank(&f) == walk, || format!("rank mismatch on {{{f}}}"))?;
        ensure((rank(&f) == f.len()) == walk_below_diagonal(&f, v), || {
            format!("full-rank criterion fails on {{{f}}}")
        })?;
        n += 1;
    }
    Ok(format!("{n} subsets, v ≤ {v}"))
}

fn walk_below_diagonal(f: &SubsetWord, v: u32) -> bool {
    (0..=v).all(|i| 2 * f.elements().iter().filter(|&&a| a <= i).count() <= i as usize)
}

fn check_round_trips(v_max: u32) -> std::result::Result<String, String> {
    let v = v_max.min(12);
    let mut n = 0;
    for f in all_subsets(v) {
        let up = successor(&f);
        ensure(rank(&up) == rank(&f), || {
            format!("successor changes rank of {{{f}}}")
        })?;
        ensure(predecessor(&up).as_ref() == Some(&f), || {
            format!("(F⁺)⁻ ≠ F for {{{f}}}")
        })?;
        if let Some(down) = predecessor(&f) {
            ensure(successor(&down) == f, || format!("(F⁻)⁺ ≠ F for {{{f}}}"))?;
        }
        let blanks = f.len() - rank(&f);
        for m in 0..=blanks + 1 {
            ensure(delete_rightmost_j(&f, m) == jump(&f, -(m as i64)), || {
                format!("rightmost-j deletion differs from predecessor steps on {{{f}}}, m={m}")
            })?;
        }
        n += 1;
    }
    Ok(format!("{n} subsets, v ≤ {v}"))
}

fn validate_rank_decomposition(d: &Decomposition) -> std::result::Result<(), String> {
    let v = d.v();
    let mut seen = HashSet::new();
    for c in d.chains() {
        let r = c.rank();
        ensure(c.first().len() == r && rank(c.first()) == r, || {
            format!(
                "chain minimum {{{}}} is not full-rank of size {r}",
                c.first()
            )
        })?;
        ensure(c.last().len() == v as usize - r, || {
            "chain is not symmetric".into()
        })?;
        for w in c.members().windows(2) {
            ensure(successor(&w[0]) == w[1] && w[0].is_subset_of(&w[1]), || {
                format!("{{{}}} → {{{}}} is not a successor step", w[0], w[1])
            })?;
        }
        for m in c.members() {
            ensure(rank(m) == r, || format!("rank drifts at {{{m}}}"))?;
            ensure(seen.insert(m.clone()), || format!("{{{m}}} repeated"))?;
        }
    }
    ensure(seen.len() == 1 << v, || "chains do not cover 2^[v]".into())?;
    for (r, n) in d.census() {
        ensure(n == level_count(v, r as i64), || {
            format!("census off at rank {r}")
        })?;
    }
    Ok(())
}

fn check_decomposition(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(14);
    let mut previous: Option<Decomposition> = None;
    for v in 1..=v_top {
        let d = decompose(v).map_err(err)?;
        validate_rank_decomposition(&d)?;
        let weighted: u64 = d
            .census()
            .iter()
            .map(|(r, n)| *n as u64 * (v as u64 - 2 * *r as u64 + 1))
            .sum();
        ensure(weighted == 1 << v, || format!("Σ census·length ≠ 2^{v}"))?;
        if let Some(prev) = &previous {
            for c in prev.chains() {
                let hits = d
                    .chains()
                    .iter()
                    .filter(|big| big.members().starts_with(c.members()))
                    .count();
                ensure(hits == 1, || {
                    format!(
                        "chain from {{{}}} of [{}] extends {hits} times",
                        c.first(),
                        v - 1
                    )
                })?;
            }
        }
        if v <= 10 {
            for f in all_subsets(v) {
                let direct = chain_of(&f, v).map_err(err)?;
                ensure(d.chain_containing(&f) == Some(&direct), || {
                    format!("chain_of disagrees on {{{f}}}")
                })?;
            }
        }
        previous = Some(d);
    }
    Ok(format!("v ≤ {v_top}"))
}

fn check_complement(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(12);
    for v in 1..=v_top {
        let d = complement_decompose(v).map_err(err)?;
        let index = d.index();
        ensure(index.len() == 1 << v, || {
            "complement chains do not partition".into()
        })?;
        for k in all_subsets(v) {
            let chain = &d.chains()[index[&k]];
            ensure(chain.last() == &underline_map(&k, v).map_err(err)?, || {
                format!("underline of {{{k}}} is not its chain maximum")
            })?;
        }
    }
    Ok(format!("v ≤ {v_top}"))
}

fn check_rw(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(9);
    let mut n = 0;
    for v in 1..=v_top {
        for t in 0..=v {
            for k in t..=v {
                let w = build_w(t, k, v).map_err(err)?;
                for i in 0..=t {
                    let lhs = build_r(i, t, v).map_err(err)?.mul(&w).map_err(err)?;
                    let rhs = build_r(i, k, v)
                        .map_err(err)?
                        .scale(&binomial_big((k - i) as i64, (t - i) as i64));
                    ensure(lhs == rhs, || format!("fails at i={i} t={t} k={k} v={v}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_wd(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(9);
    let mut n = 0;
    for v in 1..=v_top {
        for t in 0..=v {
            let bar_tt = build_w_bar(t, t, v).map_err(err)?;
            for k in t..=v {
                let lhs = bar_tt.mul(&build_w(t, k, v).map_err(err)?).map_err(err)?;
                let rhs = build_d_bar(t, k, v)
                    .map_err(err)?
                    .mul(&build_w_bar(t, k, v).map_err(err)?)
                    .map_err(err)?;
                ensure(lhs == rhs, || format!("fails at t={t} k={k} v={v}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_wq2(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(9);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let lhs = build_w(t, k, v)
                .map_err(err)?
                .mul(&build_w_under(k, k, v).map_err(err)?)
                .map_err(err)?;
            let rhs = build_w_under(t, k, v)
                .map_err(err)?
                .mul(&build_d_under(t, k, v).map_err(err)?)
                .map_err(err)?;
            ensure(lhs == rhs, || format!("fails at t={t} k={k} v={v}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_transpose(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(9);
    let mut n = 0;
    for v in 1..=v_top {
        for t in 0..=v {
            ensure(transpose_identity_holds(t, v).map_err(err)?, || {
                format!("fails at t={t} v={v}")
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_row_space(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(9);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let full = binomial(v as i64, t as i64) as usize;
            let w = build_w(t, k, v).map_err(err)?;
            let bar = build_w_bar(t, k, v).map_err(err)?;
            let stacked = w.vstack(&bar).map_err(err)?;
            let m = build_m(t, k, v).map_err(err)?;
            for (what, mat) in [("W", &w), ("W̄", &bar), ("W over W̄", &stacked), ("M", &m)] {
                ensure(mat.rank_rational() == full, || {
                    format!("rank of {what} ≠ C(v,t) at t={t} k={k} v={v}")
                })?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn all_ones(d: &[BigInt], len: usize) -> bool {
    d.len() == len && d.iter().all(|x| x.is_one())
}

fn check_snf_bar(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(10);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let m = build_w_bar(t, k, v).map_err(err)?;
            let snf = smith_normal_form(&m);
            ensure(all_ones(&snf.d, m.rows()), || {
                format!("fails at t={t} k={k} v={v}")
            })?;
            if v <= 7 {
                ensure(snf.verify(&m), || {
                    format!("U·M·V check fails at t={t} k={k} v={v}")
                })?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_snf_under(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(10);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let m = build_w_under(t, k, v).map_err(err)?;
            let snf = smith_normal_form(&m);
            ensure(all_ones(&snf.d, m.rows()), || {
                format!("fails at t={t} k={k} v={v}")
            })?;
            if v <= 7 {
                ensure(snf.verify(&m), || {
                    format!("U·M·V check fails at t={t} k={k} v={v}")
                })?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_p_rank(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(9);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let m = build_w_bar(t, k, v).map_err(err)?;
            for p in [2, 3, 5, 7] {
                ensure(p_rank(&m, p).map_err(err)? == m.rows(), || {
                    format!("{p}-rank deficient at t={t} k={k} v={v}")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_wilson(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(10);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let w = invariant_factors(&build_w(t, k, v).map_err(err)?);
            let diag = ExactMatrix::diagonal(wilson_diagonal(t, k, v).map_err(err)?);
            ensure(w == invariant_factors(&diag), || {
                format!("fails at t={t} k={k} v={v}")
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn check_unimodular(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(10);
    let mut n = 0;
    for v in 1..=v_top {
        for t in 0..=v / 2 {
            ensure(is_unimodular(&build_w_bar(t, t, v).map_err(err)?), || {
                format!("W_t̄t not unimodular at t={t} v={v}")
            })?;
            for k in t..=v - t {
                ensure(is_unimodular(&select_a(t, k, v).map_err(err)?), || {
                    format!("A not unimodular at t={t} k={k} v={v}")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

/// The v = 4 partition whose row replacement gives a singular `W_2,2`.
pub fn counterexample_decomposition() -> Decomposition {
    let s = |x: &str| x.parse::<SubsetWord>().expect("literal subset");
    Decomposition::from_chains(
        4,
        vec![
            vec![s(""), s("4"), s("1,4"), s("1,2,4"), s("1,2,3,4")],
            vec![s("1"), s("1,3"), s("1,3,4")],
            vec![s("2"), s("2,4"), s("2,3,4")],
            vec![s("3"), s("2,3"), s("1,2,3")],
            vec![s("1,2")],
            vec![s("3,4")],
        ],
    )
    .expect("valid partition of 2^[4]")
}

fn check_counterexample(_: u32) -> std::result::Result<String, String> {
    let bad = matrix_from_decomposition(&counterexample_decomposition(), 2, 2, 4).map_err(err)?;
    ensure(bad.determinant().map_err(err)?.is_zero(), || {
        "counterexample is nonsingular".into()
    })?;
    let good = matrix_from_decomposition(&decompose(4).map_err(err)?, 2, 2, 4).map_err(err)?;
    ensure(is_unimodular(&good), || {
        "rank-chain version is not unimodular".into()
    })?;
    Ok("det 0 vs det ±1".into())
}

fn check_designs(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(7);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let rows = binomial(v as i64, t as i64) as usize;
            let sys = system(t, k, v).map_err(err)?;
            for lambda in 1..=12 {
                let report = signed_design(t, k, v, lambda).map_err(err)?;
                ensure(
                    report.feasible == design_divisibility(t, k, v, lambda),
                    || format!("feasibility mismatch at t={t} k={k} v={v} λ={lambda}"),
                )?;
                if let Some(x) = &report.witness {
                    let b = IntegerVector::constant(rows, lambda);
                    ensure(sys.verify(x, &b).map_err(err)?, || {
                        format!("bad witness at t={t} k={k} v={v} λ={lambda}")
                    })?;
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<BigInt> {
    (0..len)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect()
}

fn check_h_equivalence(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(7);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            let w = build_w(t, k, v).map_err(err)?;
            let bar = build_w_bar(t, k, v).map_err(err)?;
            let h = h_vector(t, k, v).map_err(err)?;
            let mut candidates: Vec<(i64, Vec<BigInt>)> = Vec::new();
            for lambda in 1..=3 {
                if let Some(x) = signed_design(t, k, v, lambda).map_err(err)?.witness {
                    let mut nudged = x.entries().to_vec();
                    nudged[0] += 1;
                    candidates.push((lambda, x.entries().to_vec()));
                    candidates.push((lambda, nudged));
                }
                candidates.push((lambda, random_vector(&mut rng, w.cols(), 3)));
            }
            for (lambda, x) in candidates {
                let lhs = w
                    .mul_vec(&x)
                    .map_err(err)?
                    .iter()
                    .all(|y| *y == BigInt::from(lambda));
                let xr: Vec<BigRational> =
                    x.iter().cloned().map(BigRational::from_integer).collect();
                let scaled = h.scale(&BigRational::from_integer(lambda.into()));
                let rhs = mul_rational(&bar, &xr).map_err(err)? == scaled.entries();
                ensure(lhs == rhs, || {
                    format!("equivalence fails at t={t} k={k} v={v}")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} vectors, v ≤ {v_top}"))
}

/// A rational `x` with `W_tk̲ x = λ1`, supported on the `W_tt̲` columns.
pub fn underline_solution(t: u32, k: u32, v: u32, lambda: i64) -> Result<Vec<BigRational>> {
    let under = build_w_under(t, k, v)?;
    let square = build_w_under(t, t, v)?;
    let rhs = vec![BigRational::from_integer(lambda.into()); square.rows()];
    let y =
        solve_square(&square, &rhs).ok_or_else(|| Error::Parameters("W_tt̲ is singular".into()))?;
    let cols = under.col_labels().expect("labelled");
    let mut x = vec![BigRational::zero(); under.cols()];
    for (label, value) in square.col_labels().expect("labelled").iter().zip(y) {
        let pos = cols
            .binary_search(label)
            .map_err(|_| Error::Parameters("W_tt̲ columns missing from W_tk̲".into()))?;
        x[pos] = value;
    }
    Ok(x)
}

/// `W_kk̲ D_tk̲⁻¹ x`.
pub fn lift_underline_solution(
    t: u32,
    k: u32,
    v: u32,
    x: &[BigRational],
) -> Result<Vec<BigRational>> {
    let d = build_d_under(t, k, v)?;
    let scaled: Vec<BigRational> = x
        .iter()
        .enumerate()
        .map(|(i, xi)| xi / BigRational::from_integer(d.get(i, i).clone()))
        .collect();
    mul_rational(&build_w_under(k, k, v)?, &scaled)
}

fn check_underline_lift(v_max: u32) -> std::result::Result<String, String> {
    let v_top = v_max.min(7);
    let mut n = 0;
    for v in 1..=v_top {
        for (t, k) in admissible(v) {
            for lambda in [1, 2, 5] {
                let x = underline_solution(t, k, v, lambda).map_err(err)?;
                let under = build_w_under(t, k, v).map_err(err)?;
                let target = vec![BigRational::from_integer(lambda.into()); under.rows()];
                ensure(mul_rational(&under, &x).map_err(err)? == target, || {
                    format!("constructed x is wrong at t={t} k={k} v={v}")
                })?;
                let y = lift_underline_solution(t, k, v, &x).map_err(err)?;
                let w = build_w(t, k, v).map_err(err)?;
                ensure(mul_rational(&w, &y).map_err(err)? == target, || {
                    format!("lift fails at t={t} k={k} v={v} λ={lambda}")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances, v ≤ {v_top}"))
}
