//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report is always printed.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use incmat_core::binom::{binomial, level_count};
use incmat_core::chains::{decompose, Decomposition};
use incmat_core::inclusion::{
    build_d_bar, build_d_under, build_r, build_w, build_w_bar, build_w_under, h_vector,
    matrix_from_decomposition, select_a,
};
use incmat_core::snf::{
    invariant_factors, invariant_factors_minors, p_rank, smith_normal_form, wilson_diagonal,
};
use incmat_core::solver::{
    design_divisibility, mul_rational, signed_design, solve_integral, verify_solution,
};
use incmat_core::subset::{
    all_subsets, delete_rightmost_j, predecessor, rank, rank_via_walk, successor, tableau,
};
use incmat_core::{ExactMatrix, IntegerVector, SubsetWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn s(text: &str) -> SubsetWord {
    text.parse().expect("literal subset")
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(t, k)` with `t ≤ k ≤ v - t`.
fn admissible(v: u32) -> Vec<(u32, u32)> {
    (0..=v / 2)
        .flat_map(|t| (t..=v - t).map(move |k| (t, k)))
        .collect()
}

fn all_ones(d: &[BigInt], len: usize) -> bool {
    d.len() == len && d.iter().all(|x| x.is_one())
}

fn c1() -> Outcome {
    let f = s("2,3,7,8");
    check(rank(&f) == 3, || format!("rank = {}", rank(&f)))?;
    let text = tableau(&f).to_string();
    check(text == "2 3 7 8\n1 j 6 5", || format!("tableau {text:?}"))
}

fn listed_chains_v6() -> Vec<&'static str> {
    vec![
        "∅ → 1 → 12 → 123 → 1234 → 12345 → 123456",
        "2 → 23 → 234 → 2345 → 23456",
        "3 → 13 → 134 → 1345 → 13456",
        "4 → 14 → 124 → 1245 → 12456",
        "5 → 15 → 125 → 1235 → 12356",
        "6 → 16 → 126 → 1236 → 12346",
        "24 → 245 → 2456",
        "25 → 235 → 2356",
        "26 → 236 → 2346",
        "34 → 345 → 3456",
        "35 → 135 → 1356",
        "36 → 136 → 1346",
        "45 → 145 → 1456",
        "46 → 146 → 1246",
        "56 → 156 → 1256",
        "246",
        "256",
        "346",
        "356",
        "456",
    ]
}

fn c2() -> Outcome {
    let d = decompose(6).map_err(|e| e.to_string())?;
    let mut got: Vec<String> = d.chains().iter().map(|c| c.to_arrow_string()).collect();
    let mut want: Vec<String> = listed_chains_v6().into_iter().map(String::from).collect();
    check(got.len() == 20, || format!("{} chains", got.len()))?;
    got.sort();
    want.sort();
    check(got == want, || format!("chains differ: {got:?}"))
}

fn c3() -> Outcome {
    for v in 1..=12 {
        for f in all_subsets(v) {
            let walk = rank_via_walk(&f, v).map_err(|e| e.to_string())?;
            check(walk == rank(&f), || format!("{{{f}}} in [{v}]"))?;
        }
    }
    Ok(())
}

fn c4() -> Outcome {
    for f in all_subsets(12) {
        check(predecessor(&successor(&f)).as_ref() == Some(&f), || {
            format!("(F⁺)⁻ on {{{f}}}")
        })?;
        let mut cur = Some(f.clone());
        for m in 0..=f.len() + 1 {
            check(delete_rightmost_j(&f, m) == cur, || {
                format!("{{{f}}} m={m}")
            })?;
            cur = cur.and_then(|c| predecessor(&c));
        }
    }
    Ok(())
}

fn c5() -> Outcome {
    let mut previous: Option<Decomposition> = None;
    for v in 1..=14 {
        let d = decompose(v).map_err(|e| e.to_string())?;
        for (r, n) in d.census() {
            check(n == level_count(v, r as i64), || {
                format!("census v={v} r={r}")
            })?;
        }
        let mut seen = vec![false; 1 << v];
        for c in d.chains() {
            check(c.first().len() + c.last().len() == v as usize, || {
                "asymmetric chain".into()
            })?;
            for w in c.members().windows(2) {
                check(
                    w[0].is_subset_of(&w[1]) && w[1].len() == w[0].len() + 1,
                    || format!("skip in chain from {{{}}}", c.first()),
                )?;
            }
            for m in c.members() {
                let mask = m.to_mask().expect("small universe") as usize;
                check(!seen[mask], || format!("{{{m}}} repeated"))?;
                seen[mask] = true;
            }
        }
        check(seen.iter().all(|&x| x), || format!("v={v} not covered"))?;
        if let Some(prev) = &previous {
            let mut by_min = std::collections::HashMap::new();
            for c in d.chains() {
                by_min.insert(c.first().clone(), c);
            }
            for c in prev.chains() {
                let ext = by_min
                    .get(c.first())
                    .ok_or_else(|| "minimum lost".to_string())?;
                check(ext.members().starts_with(c.members()), || {
                    format!("chain from {{{}}} does not extend to v={v}", c.first())
                })?;
            }
        }
        previous = Some(d);
    }
    Ok(())
}

fn snf_sweep(build: fn(u32, u32, u32) -> incmat_core::Result<ExactMatrix>) -> Outcome {
    for v in 1..=10 {
        for (t, k) in admissible(v) {
            let m = build(t, k, v).map_err(|e| e.to_string())?;
            let d = smith_normal_form(&m).d;
            check(all_ones(&d, binomial(v as i64, t as i64) as usize), || {
                format!("t={t} k={k} v={v}: {d:?}")
            })?;
        }
    }
    Ok(())
}

fn c6() -> Outcome {
    snf_sweep(build_w_bar)
}

fn c7() -> Outcome {
    snf_sweep(build_w_under)
}

fn c8() -> Outcome {
    for v in 1..=9 {
        for (t, k) in admissible(v) {
            let m = build_w_bar(t, k, v).map_err(|e| e.to_string())?;
            for p in [2, 3, 5, 7] {
                let r = p_rank(&m, p).map_err(|e| e.to_string())?;
                check(r == binomial(v as i64, t as i64) as usize, || {
                    format!("p={p} t={t} k={k} v={v}")
                })?;
            }
        }
    }
    Ok(())
}

fn c9() -> Outcome {
    for v in 1..=10 {
        for (t, k) in admissible(v) {
            let w = invariant_factors(&build_w(t, k, v).map_err(|e| e.to_string())?);
            let diag = wilson_diagonal(t, k, v).map_err(|e| e.to_string())?;
            check(w == invariant_factors(&ExactMatrix::diagonal(diag)), || {
                format!("t={t} k={k} v={v}")
            })?;
        }
    }
    let m = build_w(1, 2, 4).map_err(|e| e.to_string())?;
    let want: Vec<BigInt> = [1, 1, 1, 2].into_iter().map(BigInt::from).collect();
    check(invariant_factors(&m) == want, || "W_12(4) factors".into())?;
    let minors = invariant_factors_minors(&m).map_err(|e| e.to_string())?;
    check(minors == want, || format!("minors oracle gives {minors:?}"))
}

fn c10() -> Outcome {
    for v in 1..=9 {
        for t in 0..=v {
            for k in t..=v {
                let w = build_w(t, k, v).map_err(|e| e.to_string())?;
                for i in 0..=t {
                    let lhs = build_r(i, t, v).unwrap().mul(&w).unwrap();
                    let c = BigInt::from(binomial((k - i) as i64, (t - i) as i64));
                    let rhs = build_r(i, k, v).unwrap().scale(&c);
                    check(lhs.same_entries(&rhs), || {
                        format!("(rw) i={i} t={t} k={k} v={v}")
                    })?;
                }
                let lhs = build_w_bar(t, t, v).unwrap().mul(&w).unwrap();
                let rhs = build_d_bar(t, k, v)
                    .unwrap()
                    .mul(&build_w_bar(t, k, v).unwrap())
                    .unwrap();
                check(lhs.same_entries(&rhs), || format!("(wd) t={t} k={k} v={v}"))?;
            }
        }
        for (t, k) in admissible(v) {
            let lhs = build_w(t, k, v)
                .unwrap()
                .mul(&build_w_under(k, k, v).unwrap())
                .unwrap();
            let rhs = build_w_under(t, k, v)
                .unwrap()
                .mul(&build_d_under(t, k, v).unwrap())
                .unwrap();
            check(lhs.same_entries(&rhs), || {
                format!("(wq2) t={t} k={k} v={v}")
            })?;
        }
    }
    Ok(())
}

fn unit_det(m: &ExactMatrix) -> bool {
    m.determinant().is_ok_and(|d| d.magnitude().is_one())
}

fn c11() -> Outcome {
    for v in 1..=10 {
        for t in 0..=v / 2 {
            check(unit_det(&build_w_bar(t, t, v).unwrap()), || {
                format!("W_t̄t t={t} v={v}")
            })?;
            for k in t..=v - t {
                check(unit_det(&select_a(t, k, v).unwrap()), || {
                    format!("A t={t} k={k} v={v}")
                })?;
            }
        }
    }
    Ok(())
}

fn c12() -> Outcome {
    let d = Decomposition::from_chains(
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
    .map_err(|e| e.to_string())?;
    let m = matrix_from_decomposition(&d, 2, 2, 4).map_err(|e| e.to_string())?;
    let expected = [
        [1, 1, 1, 1, 1, 1],
        [1, 1, 1, 0, 0, 0],
        [1, 0, 0, 1, 1, 0],
        [0, 1, 0, 1, 0, 1],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
    ];
    let mut got = m.to_i64_rows();
    let mut want: Vec<Vec<i64>> = expected.iter().map(|r| r.to_vec()).collect();
    got.sort();
    want.sort();
    check(got == want, || format!("matrix {got:?}"))?;
    check(m.determinant().unwrap().is_zero(), || "nonsingular".into())?;
    let good = matrix_from_decomposition(&decompose(4).unwrap(), 2, 2, 4).unwrap();
    check(unit_det(&good), || {
        "rank-chain version not unimodular".into()
    })
}

fn c13() -> Outcome {
    for v in 1..=7 {
        for (t, k) in admissible(v) {
            let rows = binomial(v as i64, t as i64) as usize;
            for lambda in 1..=12 {
                let r = signed_design(t, k, v, lambda).map_err(|e| e.to_string())?;
                check(r.feasible == design_divisibility(t, k, v, lambda), || {
                    format!("t={t} k={k} v={v} λ={lambda}")
                })?;
                if let Some(x) = &r.witness {
                    let b = IntegerVector::constant(rows, lambda);
                    check(verify_solution(t, k, v, x, &b).unwrap(), || {
                        "bad witness".into()
                    })?;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let v = rng.gen_range(1..=7);
        let t = rng.gen_range(0..=v / 2);
        let k = rng.gen_range(t..=v - t);
        let w = build_w(t, k, v).unwrap();
        let x0: Vec<BigInt> = (0..w.cols())
            .map(|_| BigInt::from(rng.gen_range(-5..=5)))
            .collect();
        let b = IntegerVector::new(w.mul_vec(&x0).unwrap());
        let r = solve_integral(t, k, v, &b).map_err(|e| e.to_string())?;
        let x = r
            .witness
            .ok_or_else(|| format!("W·x₀ infeasible at t={t} k={k} v={v}"))?;
        check(verify_solution(t, k, v, &x, &b).unwrap(), || {
            "round trip fails".into()
        })?;
    }
    check(signed_design(2, 3, 7, 1).unwrap().feasible, || {
        "(2,3,7,1)".into()
    })?;
    let r = signed_design(2, 3, 8, 1).unwrap();
    check(!r.feasible && r.levels().contains(&0), || {
        "(2,3,8,1)".into()
    })
}

fn c14() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for v in 1..=7 {
        for (t, k) in admissible(v) {
            let w = build_w(t, k, v).unwrap();
            let bar = build_w_bar(t, k, v).unwrap();
            let h = h_vector(t, k, v).unwrap();
            let design = signed_design(t, k, v, 1).unwrap().witness;
            for trial in 0..50 {
                let x: Vec<BigInt> = match (&design, trial % 5) {
                    (Some(d), 0) => d.entries().iter().map(|e| e * (trial / 5 + 1)).collect(),
                    _ => (0..w.cols())
                        .map(|_| BigInt::from(rng.gen_range(-3..=3)))
                        .collect(),
                };
                let wx = w.mul_vec(&x).unwrap();
                let lambda = BigRational::from_integer(wx[0].clone());
                let lhs = wx.iter().all(|y| *y == wx[0]);
                let xr: Vec<BigRational> = x.into_iter().map(BigRational::from_integer).collect();
                let rhs = mul_rational(&bar, &xr).unwrap() == h.scale(&lambda).entries();
                check(lhs == rhs, || format!("t={t} k={k} v={v} trial {trial}"))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        (
            "rank and tableau of {2,3,7,8}",
            c1,
            Duration::from_millis(1),
        ),
        ("decompose(6) chain list", c2, Duration::from_millis(10)),
        (
            "tableau rank = walk rank, v ≤ 12",
            c3,
            Duration::from_secs(2),
        ),
        (
            "successor/predecessor round trips, v ≤ 12",
            c4,
            Duration::from_secs(5),
        ),
        (
            "chain census and structure, v ≤ 14",
            c5,
            Duration::from_secs(30),
        ),
        (
            "SNF of W_t̄k is all ones, v ≤ 10",
            c6,
            Duration::from_secs(120),
        ),
        (
            "SNF of W_tk̲ is all ones, v ≤ 10",
            c7,
            Duration::from_secs(120),
        ),
        ("full p-rank of W_t̄k, v ≤ 9", c8, Duration::from_secs(30)),
        ("Wilson diagonal form, v ≤ 10", c9, Duration::from_secs(120)),
        (
            "identities (rw), (wd), (wq2), v ≤ 9",
            c10,
            Duration::from_secs(60),
        ),
        (
            "A_tk and W_t̄t unimodular, v ≤ 10",
            c11,
            Duration::from_secs(60),
        ),
        (
            "singular counterexample at v = 4",
            c12,
            Duration::from_millis(1),
        ),
        (
            "solver soundness and completeness, v ≤ 7",
            c13,
            Duration::from_secs(60),
        ),
        ("λ1 vs λh equivalence, v ≤ 7", c14, Duration::from_secs(10)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (n, (name, run, budget)) in criteria.iter().enumerate() {
        // Sub-millisecond budgets are judged on the best of a few runs.
        let repeats = if *budget < Duration::from_secs(1) {
            5
        } else {
            1
        };
        let mut best = Duration::MAX;
        let mut outcome = Ok(());
        for _ in 0..repeats {
            let start = Instant::now();
            outcome = panic::catch_unwind(AssertUnwindSafe(run))
                .unwrap_or_else(|_| Err("panicked".into()));
            best = best.min(start.elapsed());
            if outcome.is_err() {
                break;
            }
        }
        let outcome = outcome.and_then(|()| {
            check(best < *budget, || {
                format!("took {best:?}, budget {budget:?}")
            })
        });
        match outcome {
            Ok(()) => println!("PASS criterion {:>2}: {name} ({best:.2?})", n + 1),
            Err(e) => {
                failures += 1;
                println!("FAIL criterion {:>2}: {name}: {e}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
