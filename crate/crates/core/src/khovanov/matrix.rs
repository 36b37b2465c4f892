//! Sparse integer matrices and dense Smith normal form over big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Column-sparse integer matrix; `cols[c]` holds `(row, value)` sorted by row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Builds a matrix from unsorted triples, summing duplicates.
    pub fn from_triples(rows: usize, ncols: usize, triples: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); ncols];
        for (r, c, v) in triples {
            cols[c].push((r, v));
        }
        for col in &mut cols {
            *col = normalize(std::mem::take(col));
        }
        SparseMatrix { rows, cols }
    }

    pub fn apply(&self, v: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for &(c, x) in v {
            for &(r, a) in &self.cols[c] {
                out.push((r, a * x));
            }
        }
        normalize(out)
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.rows);
        SparseMatrix { rows: self.rows, cols: rhs.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.ncols()), (rhs.rows, rhs.ncols()));
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| normalize(a.iter().chain(b).copied().collect()))
            .collect();
        SparseMatrix { rows: self.rows, cols }
    }

    pub fn neg(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.iter().map(|&(r, v)| (r, -v)).collect()).collect(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zero(self.rows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m.data[r][c] = BigInt::from(v);
            }
        }
        m
    }
}

/// Sorts by index, merges duplicates and drops zeros.
pub fn normalize(mut v: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigInt>>,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| row.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn row_range(&self, range: std::ops::Range<usize>) -> DenseMatrix {
        DenseMatrix { rows: range.len(), cols: self.cols, data: self.data[range].to_vec() }
    }

    pub fn col_range(&self, range: std::ops::Range<usize>) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: range.len(),
            data: self.data.iter().map(|r| r[range.clone()].to_vec()).collect(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[c].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

/// Smith normal form `left * A * right = diag(d)` with the inverses of both
/// transforms. Divisors are positive and each divides the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub left: DenseMatrix,
    pub left_inv: DenseMatrix,
    pub right: DenseMatrix,
    pub right_inv: DenseMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct SnfState {
    a: DenseMatrix,
    l: DenseMatrix,
    li: DenseMatrix,
    r: DenseMatrix,
    ri: DenseMatrix,
}

impl SnfState {
    // row_i += k * row_j ; left gets the same row op, left_inv the inverse column op
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.l] {
            let (ri, rj) = two_rows(&mut m.data, i, j);
            for (x, y) in ri.iter_mut().zip(rj.iter()) {
                if !y.is_zero() {
                    *x += k * y;
                }
            }
        }
        for row in &mut self.li.data {
            let t = &row[i] * k;
            if !t.is_zero() {
                row[j] -= t;
            }
        }
    }

    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.r] {
            for row in &mut m.data {
                let t = &row[j] * k;
                if !t.is_zero() {
                    row[i] += t;
                }
            }
        }
        let (ri, rj) = two_rows(&mut self.ri.data, j, i);
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            if !y.is_zero() {
                *x -= k * y;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.data.swap(i, j);
        self.l.data.swap(i, j);
        for row in &mut self.li.data {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a.data {
            row.swap(i, j);
        }
        for row in &mut self.r.data {
            row.swap(i, j);
        }
        self.ri.data.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.l] {
            for x in &mut m.data[i] {
                *x = -std::mem::take(x);
            }
        }
        for row in &mut self.li.data {
            row[i] = -std::mem::take(&mut row[i]);
        }
    }
}

fn two_rows<T>(data: &mut [Vec<T>], i: usize, j: usize) -> (&mut Vec<T>, &Vec<T>) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = data.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = data.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

pub fn smith(a: &DenseMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut s = SnfState {
        a: a.clone(),
        l: DenseMatrix::identity(m),
        li: DenseMatrix::identity(m),
        r: DenseMatrix::identity(n),
        ri: DenseMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        // pivot of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let v = &s.a.data[i][j];
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < s.a.data[bi][bj].abs()) {
                    best = Some((i, j));
                    if v.abs().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| s.a.data[bi][bj].abs().is_one()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if s.a.data[i][t].is_zero() {
                    continue;
                }
                let q = s.a.data[i][t].div_floor(&s.a.data[t][t]);
                s.add_row(i, t, &-q);
                if !s.a.data[i][t].is_zero() {
                    s.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s.a.data[t][j].is_zero() {
                    continue;
                }
                let q = s.a.data[t][j].div_floor(&s.a.data[t][t]);
                s.add_col(j, t, &-q);
                if !s.a.data[t][j].is_zero() {
                    s.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let p = s.a.data[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.a.data[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => s.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.a.data[t][t].is_negative() {
            s.negate_row(t);
        }
        t += 1;
    }
    let diag = (0..t).map(|i| s.a.data[i][i].clone()).collect();
    Smith { diag, left: s.l, left_inv: s.li, right: s.r, right_inv: s.ri }
}
