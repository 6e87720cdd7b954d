//! Dense integer matrices and the plain-text exchange format.
//!
//! The exchange format is the one used by common algebraic-statistics
//! tooling: a header line `rows cols`, then one row per line of
//! space-separated integers.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::Dimension { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Builds a matrix with the given shape from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows).map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }

    /// `true` when `self * z == 0`; `false` on a length mismatch.
    pub fn annihilates(&self, z: &[i64]) -> bool {
        z.len() == self.cols && (0..self.rows).all(|r| self.row(r).iter().zip(z).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                m.set(r, k, self.get(r, c));
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self { rows: rows.len(), cols: self.cols, data }
    }

    /// Stacks `blocks` (a grid of equally-shaped rows of matrices).
    pub fn block(blocks: &[Vec<&IntMatrix>]) -> Result<Self> {
        let mut out_rows = Vec::new();
        for band in blocks {
            let h = band.first().map_or(0, |m| m.rows);
            for r in 0..h {
                let mut row = Vec::new();
                for m in band {
                    if m.rows != h {
                        return Err(Error::Dimension { expected: h, found: m.rows });
                    }
                    row.extend_from_slice(m.row(r));
                }
                out_rows.push(row);
            }
        }
        Self::from_rows(out_rows)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0)
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.cols).any(|c| (0..self.rows).all(|r| self.get(r, c) == 0))
    }

    pub fn column_sums(&self) -> Vec<i64> {
        (0..self.cols).map(|c| (0..self.rows).map(|r| self.get(r, c)).sum()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(i64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &str| -> Result<i64> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("{what}: {e}")))
        };
        let rows = usize::try_from(next("row count")?).map_err(|_| Error::Parse("negative row count".into()))?;
        let cols = usize::try_from(next("column count")?).map_err(|_| Error::Parse("negative column count".into()))?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(next("entry")?);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data after matrix".into()));
        }
        Ok(Self { rows, cols, data })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses a vector file: one integer per line (blank lines and `#` comments ignored).
pub fn parse_vector(text: &str) -> Result<Vec<i64>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

pub fn vector_to_text(v: &[i64]) -> String {
    let mut s = String::new();
    for x in v {
        s.push_str(&x.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = IntMatrix::from_rows(vec![vec![1, 0, -2], vec![3, 4, 5]]).unwrap();
        let t = m.to_text();
        assert!(t.starts_with("2 3\n"));
        assert_eq!(IntMatrix::from_text(&t).unwrap(), m);
    }

    #[test]
    fn rejects_short_body() {
        assert!(IntMatrix::from_text("2 2\n1 2 3").is_err());
        assert!(IntMatrix::from_text("1 1\n1 2").is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_rows(vec![vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn mul_vec_checks_length() {
        let m = IntMatrix::identity(3);
        assert_eq!(m.mul_vec(&[1, 2, 3]).unwrap(), vec![1, 2, 3]);
        assert!(m.mul_vec(&[1, 2]).is_err());
    }

    #[test]
    fn vector_file_parsing() {
        assert_eq!(parse_vector("1\n\n# c\n-2\n 3 \n").unwrap(), vec![1, -2, 3]);
        assert!(parse_vector("1\nx\n").is_err());
    }
}
