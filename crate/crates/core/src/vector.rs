//! Integer and rational vectors with their one-entry-per-line text format.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::subset::SubsetWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerVector {
    entries: Vec<BigInt>,
    labels: Option<Vec<SubsetWord>>,
}

impl IntegerVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntegerVector {
            entries,
            labels: None,
        }
    }

    pub fn labeled(entries: Vec<BigInt>, labels: Vec<SubsetWord>) -> Result<Self> {
        if entries.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} labels for {} entries",
                labels.len(),
                entries.len()
            )));
        }
        Ok(IntegerVector {
            entries,
            labels: Some(labels),
        })
    }

    pub fn constant(len: usize, value: impl Into<BigInt>) -> Self {
        IntegerVector::new(vec![value.into(); len])
    }

    pub fn from_i64(values: &[i64]) -> Self {
        IntegerVector::new(values.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn labels(&self) -> Option<&[SubsetWord]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> usize {
        self.entries.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector::new(
            self.entries
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        )
    }

    /// One integer per line, followed by ` #<subset>` when labelled.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, x) in self.entries.iter().enumerate() {
            match &self.labels {
                Some(l) => writeln!(out, "{x} #{}", l[i]).unwrap(),
                None => writeln!(out, "{x}").unwrap(),
            }
        }
        out
    }

    /// Parses [`IntegerVector::to_text`] output. Lines holding only a comment
    /// are skipped; labels are kept only when every entry has one.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let (value, comment) = match line.split_once('#') {
                Some((v, c)) => (v.trim(), Some(c)),
                None => (line.trim(), None),
            };
            if value.is_empty() {
                continue;
            }
            let x: BigInt = value.parse().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("bad integer {value:?}: {e}"),
            })?;
            entries.push(x);
            if let Some(c) = comment {
                let label = c.trim().parse().map_err(|e: Error| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
                labels.push(label);
            }
        }
        if !labels.is_empty() && labels.len() == entries.len() {
            IntegerVector::labeled(entries, labels)
        } else {
            Ok(IntegerVector::new(entries))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector {
    entries: Vec<BigRational>,
}

impl RationalVector {
    /// `BigRational` keeps fractions reduced with a positive denominator.
    pub fn new(entries: Vec<BigRational>) -> Self {
        RationalVector { entries }
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.denom().is_one())
    }

    pub fn to_integers(&self) -> Option<IntegerVector> {
        self.is_integral()
            .then(|| IntegerVector::new(self.entries.iter().map(|x| x.numer().clone()).collect()))
    }

    pub fn scale(&self, c: &BigRational) -> RationalVector {
        RationalVector::new(self.entries.iter().map(|x| x * c).collect())
    }

    /// One `p/q` (or plain `p`) per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for x in &self.entries {
            writeln!(out, "{x}").unwrap();
        }
        out
    }
}
