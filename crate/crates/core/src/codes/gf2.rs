//! Dense matrices over GF(2) stored as packed rows.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = words_for(cols);
        Gf2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Rows written as `'0'`/`'1'` strings, leftmost character = column 1.
    pub fn from_bitstrings<S: AsRef<str>>(rows: &[S], cols: usize) -> Result<Self> {
        let mut m = Gf2Matrix::zeros(rows.len(), cols);
        for (r, text) in rows.iter().enumerate() {
            let text = text.as_ref();
            if text.chars().count() != cols {
                return Err(Error::Spec(format!(
                    "row {} has {} bits, expected {cols}",
                    r + 1,
                    text.chars().count()
                )));
            }
            for (c, ch) in text.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    _ => return Err(Error::Spec(format!("row {} contains {ch:?}", r + 1))),
                }
            }
        }
        Ok(m)
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| if self.get(r, c) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let word = &mut self.data[r * self.words + c / 64];
        if value {
            *word |= 1 << (c % 64);
        } else {
            *word &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let value = self.get(r, c);
        self.set(r, c, !value);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::Argument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for w in 0..out.words {
                        out.data[r * out.words + w] ^= other.data[k * other.words + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.cols {
            return Err(Error::Argument(format!(
                "cannot stack {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut out = self.clone();
        out.rows += other.rows;
        out.data.extend_from_slice(&other.data);
        Ok(out)
    }

    /// The submatrix formed by the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, k, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            out.data[k * self.words..(k + 1) * self.words].copy_from_slice(self.row(r));
        }
        out
    }

    /// Block `(bi, bj)` of size `h × w` (0-based block indices).
    pub fn block(&self, bi: usize, bj: usize, h: usize, w: usize) -> Gf2Matrix {
        let rows: Vec<usize> = (bi * h..(bi + 1) * h).collect();
        let cols: Vec<usize> = (bj * w..(bj + 1) * w).collect();
        self.select_rows(&rows).select_columns(&cols)
    }

    /// Reduced row echelon form and its pivot columns; zero rows dropped.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_rows(r, rank);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        m.data.truncate(rank * m.words);
        m.rows = rank;
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.words {
                self.data.swap(a * self.words + w, b * self.words + w);
            }
        }
    }

    /// `row[target] ^= row[source]`.
    fn xor_rows(&mut self, target: usize, source: usize) {
        for w in 0..self.words {
            let v = self.data[source * self.words + w];
            self.data[target * self.words + w] ^= v;
        }
    }

    /// Basis (in reduced echelon form) of `{x : self · xᵀ = 0}`, as rows.
    pub fn nullspace(&self) -> Gf2Matrix {
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Gf2Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set(k, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if reduced.get(r, f) {
                    basis.set(k, p, true);
                }
            }
        }
        basis.rref().0
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for row in self.to_bitstrings() {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Rank over GF(2).
pub fn gf2_rank(m: &Gf2Matrix) -> usize {
    m.rref().0.rows()
}

/// `X` with `X · a = target`, if every target row lies in the row space of
/// `a`.
pub fn gf2_solve(a: &Gf2Matrix, target: &Gf2Matrix) -> Result<Option<Gf2Matrix>> {
    if a.cols() != target.cols() {
        return Err(Error::Argument(format!(
            "column mismatch: {} vs {}",
            a.cols(),
            target.cols()
        )));
    }
    // Eliminate [a | I] so each reduced row remembers how it was formed.
    let n = a.rows();
    let mut rows: Vec<(Gf2Matrix, Gf2Matrix)> = (0..n)
        .map(|r| {
            (
                a.select_rows(&[r]),
                Gf2Matrix::identity(n).select_rows(&[r]),
            )
        })
        .collect();
    let mut basis: Vec<(usize, Gf2Matrix, Gf2Matrix)> = Vec::new();
    for c in 0..a.cols() {
        let Some(p) = rows.iter().position(|(v, _)| v.get(0, c)) else {
            continue;
        };
        let (pv, pc) = rows.swap_remove(p);
        for (v, comb) in rows.iter_mut() {
            if v.get(0, c) {
                v.xor_rows_from(&pv);
                comb.xor_rows_from(&pc);
            }
        }
        basis.push((c, pv, pc));
    }
    let mut x = Gf2Matrix::zeros(target.rows(), n);
    for t in 0..target.rows() {
        let mut v = target.select_rows(&[t]);
        let mut comb = Gf2Matrix::zeros(1, n);
        for (c, pv, pc) in &basis {
            if v.get(0, *c) {
                v.xor_rows_from(pv);
                comb.xor_rows_from(pc);
            }
        }
        if !v.is_zero() {
            return Ok(None);
        }
        for k in 0..n {
            x.set(t, k, comb.get(0, k));
        }
    }
    Ok(Some(x))
}

impl Gf2Matrix {
    fn xor_rows_from(&mut self, other: &Gf2Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }
}
