//! Exact integer matrices: Smith normal form with unimodular transforms,
//! Hermite form for lattice comparison, kernels, and determinants.
//! Entries are arbitrary precision; nothing here ever rounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

/// Wire format for an integer matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(entries: &[Vec<i64>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut m = Self::zero(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn from_doc(doc: &MatrixDoc) -> crate::error::Result<Self> {
        if doc.entries.len() != doc.rows || doc.entries.iter().any(|r| r.len() != doc.cols) {
            return Err(crate::error::Error::InvalidParams(format!(
                "matrix entries do not match declared shape {}x{}",
                doc.rows, doc.cols
            )));
        }
        Ok(Self::from_i64(&doc.entries))
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Stack `other` below `self` (same column count).
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = IntMatrix::zero(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i)).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev; // exact by Bareiss
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}

#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries d1 | d2 | ... as nonnegative integers.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows.min(self.d.cols);
        (0..k)
            .map(|i| self.d.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

/// U * m * V = D with U, V unimodular and D diagonal with d1 | d2 | ...
/// Pivots are chosen by minimal absolute value, then lexicographic position.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let k = m.rows.min(m.cols);

    loop {
        let rank = diagonalize(&mut d, &mut u, &mut v);
        // repair the divisibility chain; each repair couples two diagonal
        // entries and strictly shrinks d_t, so this terminates
        let mut repaired = false;
        for t in 0..rank.min(k).saturating_sub(1) {
            let a = d.get(t, t).clone();
            let b = d.get(t + 1, t + 1).clone();
            if !a.is_zero() && !b.is_zero() && !(&b % &a).is_zero() {
                // C_t <- C_t + C_{t+1} puts b into column t; re-diagonalizing
                // brings gcd(a, b) to position t
                col_add(&mut d, &mut v, t, t + 1, &BigInt::one());
                repaired = true;
                break;
            }
        }
        if !repaired {
            break;
        }
    }
    for t in 0..k {
        if d.get(t, t).is_negative() {
            negate_row(&mut d, &mut u, t);
        }
    }
    Snf { u, d, v }
}

/// Eliminate into diagonal form, accumulating transforms; returns the number
/// of nonzero diagonal entries produced.
fn diagonalize(d: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix) -> usize {
    let k = d.rows.min(d.cols);
    for t in 0..k {
        loop {
            // pivot: minimal |a| then lexicographic, over the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if d.get(i, j).is_zero() {
                        continue;
                    }
                    pivot = match pivot {
                        None => Some((i, j)),
                        Some((pi, pj)) => {
                            if d.get(i, j).abs() < d.get(pi, pj).abs() {
                                Some((i, j))
                            } else {
                                Some((pi, pj))
                            }
                        }
                    };
                }
            }
            let (pi, pj) = match pivot {
                None => return t,
                Some(p) => p,
            };
            swap_rows(d, u, t, pi);
            swap_cols(d, v, t, pj);

            let mut dirty = false;
            for i in t + 1..d.rows {
                if !d.get(i, t).is_zero() {
                    let q = rounded_div(d.get(i, t), d.get(t, t));
                    row_sub(d, u, i, t, &q);
                    if !d.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..d.cols {
                if !d.get(t, j).is_zero() {
                    let q = rounded_div(d.get(t, j), d.get(t, t));
                    col_sub(d, v, j, t, &q);
                    if !d.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (t + 1..d.rows).all(|i| d.get(i, t).is_zero())
                && (t + 1..d.cols).all(|j| d.get(t, j).is_zero())
            {
                break;
            }
        }
    }
    k
}

fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    // quotient minimizing |a - q*b|
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a * b).is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let x = d.get(a, j).clone();
        d.set(a, j, d.get(b, j).clone());
        d.set(b, j, x);
    }
    for j in 0..u.cols {
        let x = u.get(a, j).clone();
        u.set(a, j, u.get(b, j).clone());
        u.set(b, j, x);
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let x = d.get(i, a).clone();
        d.set(i, a, d.get(i, b).clone());
        d.set(i, b, x);
    }
    for i in 0..v.rows {
        let x = v.get(i, a).clone();
        v.set(i, a, v.get(i, b).clone());
        v.set(i, b, x);
    }
}

/// row a -= q * row b (and the same on U).
fn row_sub(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for j in 0..d.cols {
        let x = d.get(a, j) - q * d.get(b, j);
        d.set(a, j, x);
    }
    for j in 0..u.cols {
        let x = u.get(a, j) - q * u.get(b, j);
        u.set(a, j, x);
    }
}

/// col a -= q * col b (and the same on V).
fn col_sub(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for i in 0..d.rows {
        let x = d.get(i, a) - q * d.get(i, b);
        d.set(i, a, x);
    }
    for i in 0..v.rows {
        let x = v.get(i, a) - q * v.get(i, b);
        v.set(i, a, x);
    }
}

/// col a += q * col b (and the same on V).
fn col_add(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    let neg = -q;
    col_sub(d, v, a, b, &neg);
}

fn negate_row(d: &mut IntMatrix, u: &mut IntMatrix, t: usize) {
    for j in 0..d.cols {
        let x = -d.get(t, j);
        d.set(t, j, x);
    }
    for j in 0..u.cols {
        let x = -u.get(t, j);
        u.set(t, j, x);
    }
}

/// Canonical row-style Hermite normal form of the lattice spanned by the rows
/// of `m`; zero rows are dropped. Two row sets span the same lattice iff their
/// Hermite forms are equal.
// index loops throughout: row combinations read one row while writing another
#[allow(clippy::needless_range_loop)]
pub fn hnf_rows(m: &IntMatrix) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| m.row(i)).collect();
    let cols = m.cols;
    let mut pivot_row = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..cols {
        // Euclidean reduction in this column among rows >= pivot_row
        loop {
            let mut idx: Option<usize> = None;
            for i in pivot_row..rows.len() {
                if !rows[i][col].is_zero() {
                    idx = match idx {
                        None => Some(i),
                        Some(j) => {
                            if rows[i][col].abs() < rows[j][col].abs() {
                                Some(i)
                            } else {
                                Some(j)
                            }
                        }
                    };
                }
            }
            let pi = match idx {
                None => break,
                Some(i) => i,
            };
            rows.swap(pivot_row, pi);
            let mut again = false;
            for i in pivot_row + 1..rows.len() {
                if !rows[i][col].is_zero() {
                    let q = rounded_div(&rows[i][col], &rows[pivot_row][col]);
                    for j in 0..cols {
                        let x = &rows[i][j] - &q * &rows[pivot_row][j];
                        rows[i][j] = x;
                    }
                    if !rows[i][col].is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                if rows[pivot_row][col].is_negative() {
                    for j in 0..cols {
                        rows[pivot_row][j] = -&rows[pivot_row][j];
                    }
                }
                pivots.push((pivot_row, col));
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == rows.len() {
            break;
        }
    }
    // reduce entries above each pivot into [0, pivot)
    for &(pr, pc) in pivots.iter() {
        for i in 0..pr {
            let p = rows[pr][pc].clone();
            let q = rows[i][pc].div_floor(&p);
            if !q.is_zero() {
                for j in 0..cols {
                    let x = &rows[i][j] - &q * &rows[pr][j];
                    rows[i][j] = x;
                }
            }
        }
    }
    rows.truncate(pivot_row);
    let mut out = IntMatrix::zero(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            out.set(i, j, v.clone());
        }
    }
    out
}

/// Basis (as rows) of the integer kernel { x : m * x = 0 }.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.diagonal().len();
    let mut out = IntMatrix::zero(m.cols - rank, m.cols);
    for (row, col) in (rank..m.cols).enumerate() {
        for i in 0..m.cols {
            out.set(row, i, snf.v.get(i, col).clone());
        }
    }
    out
}
