//! Dense integer matrices and exact rational elimination helpers.

use crate::arith::{int_to_rat, Int, Rat};
use crate::error::Error;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix. Zero rows/columns are permitted so that empty
/// equality systems (full-dimensional affine hulls) stay representable.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    /// Builds from machine-integer rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| Int::from(v))).collect();
        IntMat { rows: r, cols: c, data }
    }

    pub fn from_int_rows(rows: &[Vec<Int>], cols: usize) -> Self {
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        let data = rows.iter().flatten().cloned().collect();
        IntMat { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Int> {
        self.row(i).to_vec()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Int]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat, Error> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_int_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot_int(self.row(i), v)).collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| int_to_rat(a) * x).sum())
            .collect()
    }

    /// Vertically stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMat) -> Result<IntMat, Error> {
        if self.cols != other.cols {
            return Err(Error::dim("vstack column mismatch"));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMat { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        let data = idx.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        IntMat { rows: idx.len(), cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        let rat_rows: Vec<Vec<Rat>> =
            self.iter_rows().map(|r| r.iter().map(int_to_rat).collect()).collect();
        rank_rat(&rat_rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<Rat>> {
        self.iter_rows().map(|r| r.iter().map(int_to_rat).collect()).collect()
    }
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int_rat(a: &[Int], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| int_to_rat(x) * y).sum()
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in 0..nrows {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..ncols {
                    let v = &m[i][j] - &f * &m[rank][j];
                    m[i][j] = v;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Exact solution set of `A x = b` over the rationals: a particular solution
/// plus a basis of the kernel, or `None` when inconsistent.
pub struct RatSolution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<RatSolution> {
    let nrows = a.len();
    assert_eq!(b.len(), nrows);
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for j in col..=ncols {
            let v = &m[rank][j] / &pivot;
            m[rank][j] = v;
        }
        for i in 0..nrows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=ncols {
                    let v = &m[i][j] - &f * &m[rank][j];
                    m[i][j] = v;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }

    for row in m.iter().skip(rank) {
        if !row[ncols].is_zero() {
            return None;
        }
    }

    let mut particular = vec![Rat::zero(); ncols];
    for (r, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = m[r][ncols].clone();
    }

    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut kernel = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][fc].clone();
        }
        kernel.push(v);
    }

    Some(RatSolution { particular, kernel })
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn invert_rat(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for j in 0..2 * n {
            let v = &m[col][j] / &pivot;
            m[col][j] = v;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..2 * n {
                    let v = &m[i][j] - &f * &m[col][j];
                    m[i][j] = v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Inverse of a unimodular integer matrix (det ±1), which is again integral.
pub fn invert_unimodular(m: &IntMat) -> Result<IntMat, Error> {
    let inv = invert_rat(&m.to_rat_rows())
        .ok_or_else(|| Error::internal("unimodular matrix must be invertible"))?;
    let n = m.rows();
    let mut out = IntMat::zero(n, n);
    for (i, row) in inv.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !e.is_integer() {
                return Err(Error::internal("inverse of unimodular matrix must be integral"));
            }
            out.set(i, j, e.to_integer());
        }
    }
    Ok(out)
}

/// Scales a rational vector to a primitive integer vector pointing the same
/// way; the zero vector maps to itself.
pub fn primitive_direction(v: &[Rat]) -> Vec<Int> {
    use crate::arith::denominator_lcm;
    let l = denominator_lcm(v);
    let ints: Vec<Int> = v.iter().map(|x| (x * int_to_rat(&l)).to_integer()).collect();
    let g = crate::arith::gcd_all(&ints);
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

/// Primitive integer vector with the sign fixed so the first nonzero entry
/// is positive; used to canonicalize direction classes.
pub fn primitive_signed(v: &[Int]) -> (Vec<Int>, i8) {
    let g = crate::arith::gcd_all(v);
    if g.is_zero() {
        return (v.to_vec(), 0);
    }
    let mut p: Vec<Int> = v.iter().map(|x| x / &g).collect();
    let sign = match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -1,
        _ => 1,
    };
    if sign < 0 {
        for x in p.iter_mut() {
            *x = -x.clone();
        }
    }
    (p, sign)
}
