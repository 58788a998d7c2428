//! Smith normal form over the integers.
//!
//! [`smith_normal_form`] diagonalises by gcd pivoting: the nonzero entry of
//! least absolute value (ties to the lowest `(row, col)`) is moved to the
//! pivot, its row and column are cleared by Euclidean steps, and the process
//! repeats on the trailing block. A second pass makes adjacent diagonal
//! entries divide each other. Both passes record the unimodular transforms.
//!
//! The elimination first runs on `i64` with checked arithmetic and restarts
//! on `BigInt` if anything overflows, so desk-scale inputs never touch the
//! allocator for individual entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::binom::{binomial_big, level_count};
use crate::error::{Error, Result};
use crate::inclusion::check_admissible;
use crate::matrix::{big_to_json, ExactMatrix};

/// `u · m · v = diag(d)` padded with zeros to the shape of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: ExactMatrix,
    pub v: ExactMatrix,
    pub d: Vec<BigInt>,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// `diag(d)` padded to `rows × cols`.
    pub fn diagonal_form(&self, rows: usize, cols: usize) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(rows, cols);
        for (i, x) in self.d.iter().enumerate() {
            out.set(i, i, x.clone());
        }
        out
    }

    /// Re-multiplies `u · m · v` and compares with the padded diagonal; also
    /// checks unimodularity of the transforms and the divisibility chain.
    pub fn verify(&self, m: &ExactMatrix) -> bool {
        let Ok(prod) = self.u.mul(m).and_then(|um| um.mul(&self.v)) else {
            return false;
        };
        prod.same_entries(&self.diagonal_form(m.rows(), m.cols()))
            && is_unimodular(&self.u)
            && is_unimodular(&self.v)
            && self.d.iter().all(|x| x.is_positive())
            && self.d.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }

    pub fn is_identity_form(&self) -> bool {
        self.d.iter().all(|x| x.is_one())
    }

    /// `d = d_1,d_2,...`
    pub fn to_text(&self) -> String {
        format_factors(&self.d)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d.iter().map(big_to_json).collect::<Vec<_>>(),
            "u": self.u.to_json(),
            "v": self.v.to_json(),
        })
    }
}

/// `d = d_1,d_2,...` on one line.
pub fn format_factors(d: &[BigInt]) -> String {
    let list: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("d = {}\n", list.join(","))
}

/// Arithmetic the elimination needs; `None` signals overflow.
trait Scalar: Clone + PartialEq + Sized {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    /// `|self| < |other|`
    fn abs_lt(&self, other: &Self) -> bool;
    /// Truncating quotient.
    fn quot(&self, divisor: &Self) -> Self;
    /// `self - q * x`
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn is_multiple(&self, other: &Self) -> bool;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn quot(&self, divisor: &Self) -> Self {
        // i64::MIN / -1 cannot arise: entries are kept away from i64::MIN by
        // sub_mul and neg.
        self / divisor
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        let r = self.checked_sub(q.checked_mul(*x)?)?;
        (r != i64::MIN).then_some(r)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn is_multiple(&self, other: &Self) -> bool {
        if *other == 0 {
            *self == 0
        } else {
            self % other == 0
        }
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64().filter(|&v| v != i64::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn quot(&self, divisor: &Self) -> Self {
        self / divisor
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn is_multiple(&self, other: &Self) -> bool {
        if Zero::is_zero(other) {
            Zero::is_zero(self)
        } else {
            Integer::is_multiple_of(self, other)
        }
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

/// Working state: `u · m · vᵀᵀ = a`, with `v` stored transposed so column
/// operations become row operations.
struct Elimination<S> {
    rows: usize,
    cols: usize,
    a: Vec<Vec<S>>,
    u: Option<Vec<Vec<S>>>,
    vt: Option<Vec<Vec<S>>>,
}

fn identity<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::unit() } else { S::nil() })
                .collect()
        })
        .collect()
}

/// `dst -= q * src` over whole rows, skipping zero source entries.
fn row_sub_mul<S: Scalar>(dst: &mut [S], src: &[S], q: &S) -> Result<(), Overflow> {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_nil() {
            *d = d.sub_mul(q, s).ok_or(Overflow)?;
        }
    }
    Ok(())
}

fn two_rows<S>(rows: &mut [Vec<S>], i: usize, p: usize) -> (&mut Vec<S>, &Vec<S>) {
    debug_assert_ne!(i, p);
    if i < p {
        let (lo, hi) = rows.split_at_mut(p);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[p])
    }
}

impl<S: Scalar> Elimination<S> {
    fn new(m: &ExactMatrix, track: bool) -> Option<Self> {
        let a = (0..m.rows())
            .map(|r| m.row(r).iter().map(S::from_big).collect::<Option<Vec<S>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Elimination {
            rows: m.rows(),
            cols: m.cols(),
            a,
            u: track.then(|| identity(m.rows())),
            vt: track.then(|| identity(m.cols())),
        })
    }

    /// row `i` -= q · row `p`
    fn row_op(&mut self, i: usize, p: usize, q: &S) -> Result<(), Overflow> {
        let (dst, src) = two_rows(&mut self.a, i, p);
        row_sub_mul(dst, src, q)?;
        if let Some(u) = &mut self.u {
            let (dst, src) = two_rows(u, i, p);
            row_sub_mul(dst, src, q)?;
        }
        Ok(())
    }

    /// column `j` -= q · column `p`
    fn col_op(&mut self, j: usize, p: usize, q: &S) -> Result<(), Overflow> {
        for row in &mut self.a {
            if !row[p].is_nil() {
                row[j] = row[j].sub_mul(q, &row[p]).ok_or(Overflow)?;
            }
        }
        if let Some(vt) = &mut self.vt {
            let (dst, src) = two_rows(vt, j, p);
            row_sub_mul(dst, src, q)?;
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, p: usize) {
        if i != p {
            self.a.swap(i, p);
            if let Some(u) = &mut self.u {
                u.swap(i, p);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, p: usize) {
        if j != p {
            for row in &mut self.a {
                row.swap(j, p);
            }
            if let Some(vt) = &mut self.vt {
                vt.swap(j, p);
            }
        }
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Overflow> {
        let neg = |row: &mut Vec<S>| -> Result<(), Overflow> {
            for x in row.iter_mut() {
                *x = x.neg().ok_or(Overflow)?;
            }
            Ok(())
        };
        neg(&mut self.a[i])?;
        if let Some(u) = &mut self.u {
            neg(&mut u[i])?;
        }
        Ok(())
    }

    /// Least nonzero |entry| in the trailing block from `(s, s)`.
    fn find_pivot(&self, s: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in s..self.rows {
            for c in s..self.cols {
                let x = &self.a[r][c];
                if x.is_nil() {
                    continue;
                }
                match best {
                    Some((br, bc)) if !x.abs_lt(&self.a[br][bc]) => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }

    /// Clears row `s` and column `s` apart from the pivot at `(s, s)`.
    fn clear_cross(&mut self, s: usize) -> Result<(), Overflow> {
        loop {
            let mut clean = true;
            for i in s + 1..self.rows {
                if !self.a[i][s].is_nil() {
                    let q = self.a[i][s].quot(&self.a[s][s]);
                    self.row_op(i, s, &q)?;
                    clean &= self.a[i][s].is_nil();
                }
            }
            for j in s + 1..self.cols {
                if !self.a[s][j].is_nil() {
                    let q = self.a[s][j].quot(&self.a[s][s]);
                    self.col_op(j, s, &q)?;
                    clean &= self.a[s][j].is_nil();
                }
            }
            if clean {
                return Ok(());
            }
            // a remainder smaller than the pivot is left; promote the least one
            let mut best = (s, s);
            for i in s + 1..self.rows {
                let x = &self.a[i][s];
                if !x.is_nil() && x.abs_lt(&self.a[best.0][best.1]) {
                    best = (i, s);
                }
            }
            for j in s + 1..self.cols {
                let x = &self.a[s][j];
                if !x.is_nil() && x.abs_lt(&self.a[best.0][best.1]) {
                    best = (s, j);
                }
            }
            self.swap_rows(s, best.0);
            self.swap_cols(s, best.1);
        }
    }

    /// Turns diagonal entries `(i, i)`, `(j, j)` into `(gcd, lcm)`.
    fn fix_pair(&mut self, i: usize, j: usize) -> Result<(), Overflow> {
        // column i += column j
        let minus_one = S::unit().neg().ok_or(Overflow)?;
        self.col_op(i, j, &minus_one)?;
        loop {
            if !self.a[j][i].is_nil() {
                if self.a[j][i].abs_lt(&self.a[i][i]) {
                    self.swap_rows(i, j);
                }
                let q = self.a[j][i].quot(&self.a[i][i]);
                self.row_op(j, i, &q)?;
                continue;
            }
            if !self.a[i][j].is_nil() {
                if self.a[i][j].abs_lt(&self.a[i][i]) {
                    self.swap_cols(i, j);
                    continue;
                }
                let q = self.a[i][j].quot(&self.a[i][i]);
                self.col_op(j, i, &q)?;
                continue;
            }
            break;
        }
        for x in [i, j] {
            if self.a[x][x].is_neg() {
                self.negate_row(x)?;
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<usize, Overflow> {
        let mut r = 0;
        while r < self.rows.min(self.cols) {
            let Some((pr, pc)) = self.find_pivot(r) else {
                break;
            };
            self.swap_rows(r, pr);
            self.swap_cols(r, pc);
            self.clear_cross(r)?;
            if self.a[r][r].is_neg() {
                self.negate_row(r)?;
            }
            r += 1;
        }
        for i in 0..r {
            for j in i + 1..r {
                if !self.a[j][j].is_multiple(&self.a[i][i]) {
                    self.fix_pair(i, j)?;
                }
            }
        }
        Ok(r)
    }
}

fn to_matrix<S: Scalar>(rows: &[Vec<S>]) -> ExactMatrix {
    ExactMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(S::to_big).collect::<Vec<_>>())
            .collect(),
    )
    .expect("rectangular")
}

fn eliminate<S: Scalar>(
    m: &ExactMatrix,
    track: bool,
) -> Option<Result<(Elimination<S>, usize), Overflow>> {
    let mut work = Elimination::<S>::new(m, track)?;
    Some(work.run().map(|r| (work, r)))
}

fn finish<S: Scalar>(work: Elimination<S>, rank: usize) -> SnfDecomposition {
    let d = (0..rank).map(|i| work.a[i][i].to_big()).collect();
    let u = work
        .u
        .as_deref()
        .map(to_matrix)
        .unwrap_or_else(|| ExactMatrix::identity(0));
    let v = work
        .vt
        .as_deref()
        .map(|vt| to_matrix(vt).transpose())
        .unwrap_or_else(|| ExactMatrix::identity(0));
    SnfDecomposition { u, v, d }
}

fn compute(m: &ExactMatrix, track: bool) -> SnfDecomposition {
    if let Some(Ok((work, rank))) = eliminate::<i64>(m, track) {
        return finish(work, rank);
    }
    match eliminate::<BigInt>(m, track) {
        Some(Ok((work, rank))) => finish(work, rank),
        _ => unreachable!("BigInt arithmetic does not overflow"),
    }
}

/// Smith normal form with its unimodular transforms.
pub fn smith_normal_form(m: &ExactMatrix) -> SnfDecomposition {
    compute(m, true)
}

/// Invariant factors only; skips accumulating the transforms.
pub fn invariant_factors(m: &ExactMatrix) -> Vec<BigInt> {
    compute(m, false).d
}

/// Largest `min(rows, cols)` accepted by [`invariant_factors_minors`].
pub const MINORS_ORACLE_CAP: usize = 5;

/// Invariant factors from gcds of minors: `d_i = f_i / f_{i-1}` with `f_i`
/// the gcd of all `i × i` minors. Exponential; small matrices only.
pub fn invariant_factors_minors(m: &ExactMatrix) -> Result<Vec<BigInt>> {
    let (rows, cols) = m.shape();
    if rows.min(cols) > MINORS_ORACLE_CAP || rows.max(cols) > 24 {
        return Err(Error::OracleTooLarge {
            rows,
            cols,
            cap: MINORS_ORACLE_CAP,
        });
    }
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for order in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, order) {
            for cs in combinations(cols, order) {
                let sub = ExactMatrix::from_rows(
                    rs.iter()
                        .map(|&r| cs.iter().map(|&c| m.get(r, c).clone()).collect::<Vec<_>>())
                        .collect(),
                )
                .expect("square");
                g = g.gcd(&sub.determinant().expect("square"));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
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

/// Square with determinant ±1.
pub fn is_unimodular(m: &ExactMatrix) -> bool {
    m.is_square() && m.determinant().is_ok_and(|d| d.magnitude().is_one())
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Rank over the field with `p` elements.
pub fn p_rank(m: &ExactMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(m.rank_mod(p))
}

/// Wilson's diagonal form of `W_tk(v)`: `C(k-i, t-i)` with multiplicity
/// `C(v,i) - C(v,i-1)`, `i = 0..=t`, in block order.
pub fn wilson_diagonal(t: u32, k: u32, v: u32) -> Result<Vec<BigInt>> {
    check_admissible(t, k, v)?;
    let mut out = Vec::new();
    for i in 0..=t as i64 {
        let x = binomial_big(k as i64 - i, t as i64 - i);
        out.extend(std::iter::repeat_n(x, level_count(v, i)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusion::{build_w, build_w_bar};

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        let w = build_w_bar(1, 2, 3).unwrap();
        let snf = smith_normal_form(&w);
        assert_eq!(snf.d, big(&[1, 1, 1]));
        assert!(snf.verify(&w));
        let diag = ExactMatrix::diagonal(big(&[2, 1, 1, 1]));
        assert_eq!(smith_normal_form(&diag).d, big(&[1, 1, 1, 2]));
        let w = build_w(1, 2, 4).unwrap();
        let snf = smith_normal_form(&w);
        assert_eq!(snf.d, big(&[1, 1, 1, 2]));
        assert!(snf.verify(&w));
        assert_eq!(invariant_factors_minors(&w).unwrap(), big(&[1, 1, 1, 2]));
    }

    #[test]
    fn minors_oracle() {
        let m = ExactMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(invariant_factors_minors(&m).unwrap(), big(&[1, 6]));
        assert_eq!(
            invariant_factors_minors(&ExactMatrix::identity(5)).unwrap(),
            big(&[1; 5])
        );
        assert!(invariant_factors_minors(&ExactMatrix::identity(6)).is_err());
        assert!(invariant_factors_minors(&ExactMatrix::zeros(2, 3))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn degenerate_shapes() {
        let z = ExactMatrix::zeros(3, 2);
        let snf = smith_normal_form(&z);
        assert!(snf.d.is_empty());
        assert!(snf.verify(&z));
        let e = ExactMatrix::zeros(0, 3);
        assert!(smith_normal_form(&e).verify(&e));
        let col = ExactMatrix::from_rows(vec![vec![4], vec![6], vec![-10]]).unwrap();
        let snf = smith_normal_form(&col);
        assert_eq!(snf.d, big(&[2]));
        assert!(snf.verify(&col));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge: BigInt = BigInt::from(i64::MAX) * 4 + 3;
        let m = ExactMatrix::from_rows(vec![
            vec![huge.clone(), BigInt::from(6)],
            vec![BigInt::from(4), huge.clone() * 2],
        ])
        .unwrap();
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m));
        let m = ExactMatrix::from_rows(vec![
            vec![i64::MAX, i64::MAX - 1],
            vec![i64::MAX - 2, i64::MAX - 7],
        ])
        .unwrap();
        let snf = smith_normal_form(&m);
        assert!(snf.verify(&m));
        assert_eq!(snf.d[0], BigInt::one());
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&build_w_bar(2, 2, 6).unwrap()));
        assert!(!is_unimodular(&build_w(1, 2, 4).unwrap()));
        assert!(!is_unimodular(&ExactMatrix::diagonal(big(&[1, 2]))));
        assert!(is_unimodular(&ExactMatrix::identity(0)));
    }

    #[test]
    fn p_ranks() {
        let w = build_w(1, 2, 4).unwrap();
        assert_eq!(p_rank(&w, 2).unwrap(), 3);
        assert_eq!(p_rank(&w, 3).unwrap(), 4);
        assert_eq!(p_rank(&ExactMatrix::zeros(3, 3), 7).unwrap(), 0);
        assert!(p_rank(&w, 4).is_err());
        assert!(p_rank(&w, 1).is_err());
    }

    #[test]
    fn wilson() {
        assert_eq!(wilson_diagonal(1, 2, 4).unwrap(), big(&[2, 1, 1, 1]));
        assert_eq!(wilson_diagonal(3, 3, 8).unwrap(), vec![BigInt::one(); 56]);
        let w = wilson_diagonal(2, 3, 7).unwrap();
        assert_eq!(w.len(), 21);
        assert_eq!(w[0], BigInt::from(3));
        assert!(w[1..7].iter().all(|x| *x == BigInt::from(2)));
        assert!(w[7..].iter().all(|x| x.is_one()));
        assert!(wilson_diagonal(2, 6, 7).is_err());
    }
}
