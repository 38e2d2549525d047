//! Dense integer matrices with checked arithmetic and the Smith normal form.

use std::fmt;

use crate::error::{Error, Result};

pub(crate) fn cadd(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

pub(crate) fn cmul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

pub(crate) fn cneg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow("negation"))
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub(crate) fn lcm(a: i64, b: i64) -> Result<i64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    cmul(a / gcd(a, b), b).map(i64::abs)
}

/// Row-major integer matrix. Zero rows or zero columns are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed to describe `rows.is_empty()` shapes.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::domain(format!(
                    "row {i} has length {} but {cols} columns were declared",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<i64>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::domain(format!(
                    "column {j} has length {} but {rows} rows were declared",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i128;
                for k in 0..self.cols {
                    acc = acc
                        .checked_add(i128::from(self.get(i, k)) * i128::from(other.get(k, j)))
                        .ok_or(Error::Overflow("multiplication"))?;
                }
                out.set(i, j, i64::try_from(acc).map_err(|_| Error::Overflow("multiplication"))?);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::domain(format!(
                "vector of length {} does not fit {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                let acc = (0..self.cols).try_fold(0i128, |acc, k| {
                    acc.checked_add(i128::from(self.get(i, k)) * i128::from(v[k]))
                });
                acc.and_then(|a| i64::try_from(a).ok()).ok_or(Error::Overflow("multiplication"))
            })
            .collect()
    }

    /// Places `self` above `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::domain("vstack: column counts differ"));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::domain("hstack: row counts differ"));
        }
        let mut m = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(m)
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(Error::Overflow("determinant"))?;
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow("determinant"))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for j in 0..self.cols {
            let v = cadd(self.get(dst, j), cmul(k, self.get(src, j))?)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for i in 0..self.rows {
            let v = cadd(self.get(i, dst), cmul(k, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) -> Result<()> {
        for j in 0..self.cols {
            let v = cneg(self.get(r, j))?;
            self.set(r, j, v);
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// `d = u * m * v` with `u`, `v` unimodular and `d` diagonal, `d_i | d_{i+1}`, `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|&&x| x != 0).count()
    }
}

/// `x / y` rounded to the nearest integer, keeping remainders small.
fn round_div(x: i64, y: i64) -> i64 {
    let (q, r) = (x.div_euclid(y), x.rem_euclid(y));
    if 2 * r.unsigned_abs() > y.unsigned_abs() { q + y.signum() } else { q }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<Snf> {
    let (p, q) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(p);
    let mut v = IntMatrix::identity(q);

    for t in 0..p.min(q) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..p {
                for j in t..q {
                    let x = d.get(i, j);
                    if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < d.get(bi, bj).unsigned_abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Ok(Snf { u, d, v });
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t);
            let mut clean = true;
            for i in t + 1..p {
                let x = d.get(i, t);
                if x != 0 {
                    let k = cneg(round_div(x, pivot))?;
                    d.add_row_multiple(i, t, k)?;
                    u.add_row_multiple(i, t, k)?;
                    clean &= d.get(i, t) == 0;
                }
            }
            for j in t + 1..q {
                let x = d.get(t, j);
                if x != 0 {
                    let k = cneg(round_div(x, pivot))?;
                    d.add_col_multiple(j, t, k)?;
                    v.add_col_multiple(j, t, k)?;
                    clean &= d.get(t, j) == 0;
                }
            }
            if !clean {
                continue;
            }
            let offender =
                (t + 1..p).find(|&i| (t + 1..q).any(|j| d.get(i, j) % pivot != 0));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, 1)?;
                    u.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t)?;
            u.negate_row(t)?;
        }
    }
    Ok(Snf { u, d, v })
}

/// Generators of the integer null space `{z : m z = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let snf = smith_normal_form(m)?;
    let r = snf.rank();
    Ok((r..m.cols).map(|j| snf.v.column(j)).collect())
}

/// An integer solution of `m z = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[i64]) -> Result<Option<Vec<i64>>> {
    if b.len() != m.rows {
        return Err(Error::domain("right-hand side length does not match row count"));
    }
    let snf = smith_normal_form(m)?;
    let c = snf.u.mul_vec(b)?;
    let diag = snf.diagonal();
    let mut w = vec![0i64; m.cols];
    for (i, &ci) in c.iter().enumerate() {
        let di = diag.get(i).copied().unwrap_or(0);
        if di == 0 {
            if ci != 0 {
                return Ok(None);
            }
        } else if ci % di != 0 {
            return Ok(None);
        } else {
            w[i] = ci / di;
        }
    }
    snf.v.mul_vec(&w).map(Some)
}
