//! Dense matrices over arbitrary-precision integers, with optional subset
//! labels on rows and columns.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::subset::SubsetWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
    row_labels: Option<Vec<SubsetWord>>,
    col_labels: Option<Vec<SubsetWord>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal<I, T>(diag: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let d: Vec<BigInt> = diag.into_iter().map(Into::into).collect();
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.into_iter().enumerate() {
            m.entries[i * m.cols + i] = x;
        }
        m
    }

    pub fn from_rows<R, T>(rows: Vec<R>) -> Result<Self>
    where
        R: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(ExactMatrix {
            rows: n_rows,
            cols: n_cols,
            entries: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        })
    }

    /// 0/1 matrix with `entry(r, c) = 1` iff `row_label ⊆ col_label`.
    pub fn inclusion(row_labels: Vec<SubsetWord>, col_labels: Vec<SubsetWord>) -> Self {
        let (rows, cols) = (row_labels.len(), col_labels.len());
        let mut entries = Vec::with_capacity(rows * cols);
        for r in &row_labels {
            for c in &col_labels {
                entries.push(if r.is_subset_of(c) {
                    BigInt::one()
                } else {
                    BigInt::zero()
                });
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
            row_labels: Some(row_labels),
            col_labels: Some(col_labels),
        }
    }

    pub fn with_labels(
        mut self,
        row_labels: Option<Vec<SubsetWord>>,
        col_labels: Option<Vec<SubsetWord>>,
    ) -> Result<Self> {
        if let Some(l) = &row_labels {
            check_labels(l, self.rows, "row")?;
        }
        if let Some(l) = &col_labels {
            check_labels(l, self.cols, "column")?;
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row_labels(&self) -> Option<&[SubsetWord]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[SubsetWord]> {
        self.col_labels.as_deref()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Entries as `i64`, for tests and small displays. Panics on overflow.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| x.to_i64().expect("entry fits in i64"))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Product `self · rhs`; keeps `self`'s row labels and `rhs`'s column labels.
    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let acc = &mut out.entries[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let unit = a.is_one();
                for (dst, b) in acc.iter_mut().zip(rhs.row(k)) {
                    if b.is_zero() {
                        continue;
                    }
                    if unit {
                        *dst += b;
                    } else {
                        *dst += a * b;
                    }
                }
            }
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = rhs.col_labels.clone();
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn scale(&self, c: &BigInt) -> ExactMatrix {
        let mut out = self.clone();
        for x in &mut out.entries {
            *x *= c;
        }
        out
    }

    /// Columns `cols` in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> ExactMatrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        ExactMatrix {
            rows: self.rows,
            cols: cols.len(),
            entries,
            row_labels: self.row_labels.clone(),
            col_labels: self
                .col_labels
                .as_ref()
                .map(|l| cols.iter().map(|&c| l[c].clone()).collect()),
        }
    }

    /// `self` on top of `below`; labels survive only when both carry them.
    pub fn vstack(&self, below: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != below.cols {
            return Err(Error::Shape("column counts differ".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        let row_labels = match (&self.row_labels, &below.row_labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(ExactMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
            row_labels,
            col_labels: self.col_labels.clone(),
        })
    }

    /// Entrywise equality ignoring labels.
    pub fn same_entries(&self, other: &ExactMatrix) -> bool {
        self.shape() == other.shape() && self.entries == other.entries
    }

    /// Diagonal entries of a square matrix.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            let (head, tail) = a.split_at_mut(k + 1);
            let pivot_row = &head[k];
            for row in tail.iter_mut() {
                let lead = row[k].clone();
                for j in k + 1..n {
                    let val = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                    row[j] = if prev.is_one() { val } else { val / &prev };
                }
                row[k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank_rational(&self) -> usize {
        let mut a = self.to_rows();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            let (head, tail) = a.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                let lead = row[c].clone();
                for j in c + 1..n {
                    let val = &row[j] * &pivot_row[c] - &lead * &pivot_row[j];
                    row[j] = if prev.is_one() { val } else { val / &prev };
                }
                row[c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }

    /// Rank over `GF(p)`; `p` must be prime.
    pub fn rank_mod(&self, p: u64) -> usize {
        let p_big = BigInt::from(p);
        let mut a: Vec<Vec<u64>> = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| x.mod_floor(&p_big).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..n {
            if rank == m {
                break;
            }
            let Some(piv) = (rank..m).find(|&r| a[r][c] != 0) else {
                continue;
            };
            a.swap(piv, rank);
            let inv = mod_pow(a[rank][c], p - 2, p);
            for x in &mut a[rank][c..] {
                *x = mulmod(*x, inv, p);
            }
            let (head, tail) = a.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let sub = mulmod(f, pivot_row[j], p);
                    row[j] = (row[j] + p - sub) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Writes the plain-text matrix format: `rows cols`, then optional
    /// `#row <subset>` / `#col <subset>` lines (one per label), then one line
    /// of space-separated integers per row.
    pub fn to_text(&self, with_labels: bool) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        if with_labels {
            if let Some(l) = &self.row_labels {
                for s in l {
                    writeln!(out, "#row {s}").unwrap();
                }
            }
            if let Some(l) = &self.col_labels {
                for s in l {
                    writeln!(out, "#col {s}").unwrap();
                }
            }
        }
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(cl) = &self.col_labels {
            if self.row_labels.is_some() {
                out.push_str("\"\",");
            }
            let header: Vec<String> = cl.iter().map(|s| format!("\"{s}\"")).collect();
            out.push_str(&header.join(","));
            out.push('\n');
        }
        for r in 0..self.rows {
            if let Some(rl) = &self.row_labels {
                write!(out, "\"{}\",", rl[r]).unwrap();
            }
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|r| self.row(r).iter().map(big_to_json).collect())
            .collect();
        let labels = |l: &Option<Vec<SubsetWord>>| {
            l.as_ref()
                .map(|l| l.iter().map(|s| s.to_string()).collect::<Vec<_>>().into())
                .unwrap_or(serde_json::Value::Null)
        };
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "row_labels": labels(&self.row_labels),
            "col_labels": labels(&self.col_labels),
            "entries": rows,
        })
    }

    /// Parses [`ExactMatrix::to_text`] output. Blank lines are ignored.
    pub fn from_text(text: &str) -> Result<ExactMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing dimension line".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: ln,
                msg: format!("bad dimension: {e}"),
            })?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse {
                line: ln,
                msg: "expected `rows cols`".into(),
            });
        };
        let mut row_labels = Vec::new();
        let mut col_labels = Vec::new();
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen_rows = 0;
        for (ln, line) in lines {
            let parse_label = |rest: &str| -> Result<SubsetWord> {
                rest.trim().parse().map_err(|e: Error| Error::Parse {
                    line: ln,
                    msg: e.to_string(),
                })
            };
            if let Some(rest) = line.strip_prefix("#row") {
                row_labels.push(parse_label(rest)?);
                continue;
            }
            if let Some(rest) = line.strip_prefix("#col") {
                col_labels.push(parse_label(rest)?);
                continue;
            }
            if line.trim_start().starts_with('#') {
                continue;
            }
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: ln,
                    msg: format!("bad integer: {e}"),
                })?;
            if row.len() != cols {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {cols} entries, found {}", row.len()),
                });
            }
            entries.extend(row);
            seen_rows += 1;
        }
        if seen_rows != rows {
            return Err(Error::Parse {
                line: 1,
                msg: format!("declared {rows} rows, found {seen_rows}"),
            });
        }
        let m = ExactMatrix {
            rows,
            cols,
            entries,
            row_labels: None,
            col_labels: None,
        };
        let opt = |l: Vec<SubsetWord>| if l.is_empty() { None } else { Some(l) };
        m.with_labels(opt(row_labels), opt(col_labels))
    }
}

fn check_labels(labels: &[SubsetWord], n: usize, what: &str) -> Result<()> {
    if labels.len() != n {
        return Err(Error::Shape(format!(
            "{} {what} labels for {n} {what}s",
            labels.len()
        )));
    }
    let mut sorted: Vec<&SubsetWord> = labels.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Shape(format!("duplicate {what} label")));
    }
    Ok(())
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Largest absolute entry; zero for empty matrices.
/// A JSON number when the value fits in `i64`, otherwise a decimal string.
pub(crate) fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(i) => i.into(),
        None => x.to_string().into(),
    }
}

pub fn max_abs(m: &ExactMatrix) -> BigInt {
    m.entries()
        .iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_default()
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(true))
    }
}
