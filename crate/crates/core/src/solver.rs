//! Integral solutions of `W_tk x = b`.
//!
//! `b` is admissible exactly when every block `R_it b / C(k-i, t-i)` is
//! integral. In that case `b' = D_t̄k⁻¹ W_t̄t b` is integral, and since
//! `W_t̄k = (A | B)` with `A` unimodular, `x = (A⁻¹ b', 0)` is an integral
//! solution supported on the columns of `A`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::binom::{binomial, binomial_big};
use crate::error::{Error, Result};
use crate::inclusion::{build_r, build_w, check_admissible, select_a, select_a_columns};
use crate::matrix::{big_to_json, ExactMatrix};
use crate::snf::smith_normal_form;
use crate::subset::k_subsets;
use crate::vector::{IntegerVector, RationalVector};

/// First entry of `R_it b` not divisible by `C(k-i, t-i)` at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelViolation {
    pub level: u32,
    pub divisor: BigInt,
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub feasible: bool,
    pub witness: Option<IntegerVector>,
    pub violated_levels: Option<Vec<LevelViolation>>,
    pub b_prime: RationalVector,
}

impl fmt::Display for LevelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "violated at i={}: {} ∤ {}",
            self.level, self.divisor, self.value
        )
    }
}

impl SolveReport {
    pub fn levels(&self) -> Vec<u32> {
        self.violated_levels
            .iter()
            .flatten()
            .map(|v| v.level)
            .collect()
    }

    /// The witness in vector format, or one line per violated level.
    pub fn to_text(&self) -> String {
        match (&self.witness, &self.violated_levels) {
            (Some(x), _) => x.to_text(),
            (None, Some(levels)) => levels.iter().map(|l| format!("{l}\n")).collect(),
            (None, None) => String::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|x| {
            serde_json::json!({
                "entries": x.entries().iter().map(big_to_json).collect::<Vec<_>>(),
                "labels": x.labels().map(|l| l.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            })
        });
        let levels = self.violated_levels.as_ref().map(|levels| {
            levels
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "level": l.level,
                        "divisor": big_to_json(&l.divisor),
                        "value": big_to_json(&l.value),
                    })
                })
                .collect::<Vec<_>>()
        });
        serde_json::json!({
            "feasible": self.feasible,
            "witness": witness,
            "violated_levels": levels,
            "b_prime": self.b_prime.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Matrices shared by every right-hand side for one `(t, k, v)`.
pub struct System {
    pub t: u32,
    pub k: u32,
    pub v: u32,
    pub w: ExactMatrix,
    /// `R_it` for `i = 0..=t`.
    pub r_blocks: Vec<ExactMatrix>,
    pub a: ExactMatrix,
    pub a_columns: Vec<usize>,
    /// `A⁻¹ = V U` from the Smith form `U A V = I`.
    pub a_inverse: ExactMatrix,
}

impl System {
    pub fn build(t: u32, k: u32, v: u32) -> Result<Self> {
        check_admissible(t, k, v)?;
        let a = select_a(t, k, v)?;
        let snf = smith_normal_form(&a);
        assert!(
            snf.rank() == a.rows() && snf.is_identity_form(),
            "the column block of rank ≤ t is unimodular"
        );
        Ok(System {
            t,
            k,
            v,
            w: build_w(t, k, v)?,
            r_blocks: (0..=t).map(|i| build_r(i, t, v)).collect::<Result<_>>()?,
            a_inverse: snf.v.mul(&snf.u)?,
            a,
            a_columns: select_a_columns(t, k, v)?,
        })
    }

    fn divisor(&self, i: u32) -> BigInt {
        binomial_big((self.k - i) as i64, (self.t - i) as i64)
    }

    fn check_rhs(&self, b: &IntegerVector) -> Result<()> {
        if b.len() != self.w.rows() {
            return Err(Error::Shape(format!(
                "right-hand side has {} entries, W_{},{}({}) has {} rows",
                b.len(),
                self.t,
                self.k,
                self.v,
                self.w.rows()
            )));
        }
        Ok(())
    }

    /// `b' = D_t̄k⁻¹ W_t̄t b`, block by block.
    pub fn reduce_rhs(&self, b: &IntegerVector) -> Result<RationalVector> {
        self.check_rhs(b)?;
        let mut out = Vec::with_capacity(b.len());
        for (i, r) in self.r_blocks.iter().enumerate() {
            let d = self.divisor(i as u32);
            for x in r.mul_vec(b.entries())? {
                out.push(BigRational::new(x, d.clone()));
            }
        }
        Ok(RationalVector::new(out))
    }

    pub fn divisibility_check(&self, b: &IntegerVector) -> Result<SolveReport> {
        self.check_rhs(b)?;
        let mut violations = Vec::new();
        let mut b_prime = Vec::with_capacity(b.len());
        for (i, r) in self.r_blocks.iter().enumerate() {
            let d = self.divisor(i as u32);
            let mut first_bad = None;
            for x in r.mul_vec(b.entries())? {
                if first_bad.is_none() && !x.is_multiple_of(&d) {
                    first_bad = Some(x.clone());
                }
                b_prime.push(BigRational::new(x, d.clone()));
            }
            if let Some(value) = first_bad {
                violations.push(LevelViolation {
                    level: i as u32,
                    divisor: d,
                    value,
                });
            }
        }
        let feasible = violations.is_empty();
        Ok(SolveReport {
            feasible,
            witness: None,
            violated_levels: (!feasible).then_some(violations),
            b_prime: RationalVector::new(b_prime),
        })
    }

    pub fn solve(&self, b: &IntegerVector) -> Result<SolveReport> {
        let mut report = self.divisibility_check(b)?;
        if !report.feasible {
            return Ok(report);
        }
        let b_prime: Vec<BigInt> = report
            .b_prime
            .entries()
            .iter()
            .map(|q| q.to_integer())
            .collect();
        let y = self.a_inverse.mul_vec(&b_prime)?;
        let mut x = vec![BigInt::zero(); self.w.cols()];
        for (&col, value) in self.a_columns.iter().zip(y) {
            x[col] = value;
        }
        debug_assert_eq!(self.w.mul_vec(&x).unwrap(), b.entries());
        let labels = self
            .w
            .col_labels()
            .map(<[_]>::to_vec)
            .unwrap_or_else(|| k_subsets(self.v, self.k as usize));
        report.witness = Some(IntegerVector::labeled(x, labels)?);
        Ok(report)
    }

    pub fn verify(&self, x: &IntegerVector, b: &IntegerVector) -> Result<bool> {
        self.check_rhs(b)?;
        if x.len() != self.w.cols() {
            return Err(Error::Shape(format!(
                "solution has {} entries, W has {} columns",
                x.len(),
                self.w.cols()
            )));
        }
        Ok(self.w.mul_vec(x.entries())? == b.entries())
    }
}

/// Gauss-Jordan over the rationals; `None` when `a` is singular.
pub fn solve_square(a: &ExactMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            a.row(r)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .chain(std::iter::once(b[r].clone()))
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].recip();
        for x in m[c][c..].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Process-wide store of [`System`]s keyed by `(t, k, v)`.
#[derive(Default)]
pub struct SystemCache {
    systems: RwLock<HashMap<(u32, u32, u32), Arc<System>>>,
}

impl SystemCache {
    pub fn get(&self, t: u32, k: u32, v: u32) -> Result<Arc<System>> {
        if let Some(s) = self.systems.read().unwrap().get(&(t, k, v)) {
            return Ok(Arc::clone(s));
        }
        let built = Arc::new(System::build(t, k, v)?);
        let mut map = self.systems.write().unwrap();
        Ok(Arc::clone(map.entry((t, k, v)).or_insert(built)))
    }
}

fn cache() -> &'static SystemCache {
    static CACHE: OnceLock<SystemCache> = OnceLock::new();
    CACHE.get_or_init(SystemCache::default)
}

pub fn system(t: u32, k: u32, v: u32) -> Result<Arc<System>> {
    cache().get(t, k, v)
}

pub fn divisibility_check(t: u32, k: u32, v: u32, b: &IntegerVector) -> Result<SolveReport> {
    system(t, k, v)?.divisibility_check(b)
}

pub fn solve_integral(t: u32, k: u32, v: u32, b: &IntegerVector) -> Result<SolveReport> {
    system(t, k, v)?.solve(b)
}

pub fn reduce_rhs(t: u32, k: u32, v: u32, b: &IntegerVector) -> Result<RationalVector> {
    system(t, k, v)?.reduce_rhs(b)
}

pub fn verify_solution(
    t: u32,
    k: u32,
    v: u32,
    x: &IntegerVector,
    b: &IntegerVector,
) -> Result<bool> {
    system(t, k, v)?.verify(x, b)
}

/// Signed `t-(v, k, λ)` design: an integral `x` with `W_tk x = λ·1`.
pub fn signed_design(t: u32, k: u32, v: u32, lambda: i64) -> Result<SolveReport> {
    let rows = binomial(v as i64, t as i64) as usize;
    solve_integral(t, k, v, &IntegerVector::constant(rows, lambda))
}

/// Closed-form feasibility of `W_tk x = λ·1`: `C(k-i, t-i) | λ·C(v-i, t-i)`
/// for every `i = 0..=t`.
pub fn design_divisibility(t: u32, k: u32, v: u32, lambda: i64) -> bool {
    (0..=t as i64).all(|i| {
        let d = binomial_big(k as i64 - i, t as i64 - i);
        (BigInt::from(lambda) * binomial_big(v as i64 - i, t as i64 - i)).is_multiple_of(&d)
    })
}

/// `m · x` over the rationals.
pub fn mul_rational(m: &ExactMatrix, x: &[BigRational]) -> Result<Vec<BigRational>> {
    if x.len() != m.cols() {
        return Err(Error::Shape("vector length does not match columns".into()));
    }
    Ok((0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .zip(x)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(BigRational::zero(), |acc, (a, b)| {
                    if a.is_one() {
                        acc + b
                    } else {
                        acc + b * BigRational::from_integer(a.clone())
                    }
                })
        })
        .collect())
}
