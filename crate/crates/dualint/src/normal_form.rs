//! Hermite and Smith normal forms over the integers, with unimodular
//! transform matrices tracked throughout.

use crate::arith::Int;
use crate::matrix::IntMat;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Result of a normal-form computation: `U · A · V = D` with `U`, `V`
/// unimodular. For the Hermite form `V` is the identity, so the same
/// invariant covers both.
///
/// Smith: `D` diagonal, entries nonnegative, `d₁ | d₂ | …`.
/// Hermite: `D` in row-echelon form, pivots positive, entries above each
/// pivot reduced into `[0, pivot)`. (Row echelon rather than lower
/// triangular: only row operations are applied, so a wide or rank-deficient
/// matrix cannot be forced triangular without column moves.)
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
    pub rank: usize,
}

impl NormalForm {
    /// Diagonal of `D` (length `min(rows, cols)`); only meaningful for Smith.
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    d: IntMat,
    u: IntMat,
    v: IntMat,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.d.cols() {
            let (x, y) = (self.d.get(a, j).clone(), self.d.get(b, j).clone());
            self.d.set(a, j, y);
            self.d.set(b, j, x);
        }
        for j in 0..self.u.cols() {
            let (x, y) = (self.u.get(a, j).clone(), self.u.get(b, j).clone());
            self.u.set(a, j, y);
            self.u.set(b, j, x);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.d.rows() {
            let (x, y) = (self.d.get(i, a).clone(), self.d.get(i, b).clone());
            self.d.set(i, a, y);
            self.d.set(i, b, x);
        }
        for i in 0..self.v.rows() {
            let (x, y) = (self.v.get(i, a).clone(), self.v.get(i, b).clone());
            self.v.set(i, a, y);
            self.v.set(i, b, x);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &Int) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.d.cols() {
            let v = self.d.get(dst, j) + f * self.d.get(src, j);
            self.d.set(dst, j, v);
        }
        for j in 0..self.u.cols() {
            let v = self.u.get(dst, j) + f * self.u.get(src, j);
            self.u.set(dst, j, v);
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &Int) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.d.rows() {
            let v = self.d.get(i, dst) + f * self.d.get(i, src);
            self.d.set(i, dst, v);
        }
        for i in 0..self.v.rows() {
            let v = self.v.get(i, dst) + f * self.v.get(i, src);
            self.v.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.d.cols() {
            let v = -self.d.get(r, j).clone();
            self.d.set(r, j, v);
        }
        for j in 0..self.u.cols() {
            let v = -self.u.get(r, j).clone();
            self.u.set(r, j, v);
        }
    }
}

/// Smith normal form: `U · A · V = D` diagonal with `d₁ | d₂ | …`,
/// all diagonal entries nonnegative.
pub fn smith(a: &IntMat) -> NormalForm {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work { d: a.clone(), u: IntMat::identity(m), v: IntMat::identity(n) };
    let k = m.min(n);
    let mut rank = 0;

    for t in 0..k {
        // Pivot: smallest-magnitude nonzero entry of the trailing block.
        let Some((pi, pj)) = pivot_min_abs(&w.d, t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            if w.d.get(t, t).is_negative() {
                w.negate_row(t);
            }
            let mut clean = true;
            for i in t + 1..m {
                if w.d.get(i, t).is_zero() {
                    continue;
                }
                let q = w.d.get(i, t).div_floor(w.d.get(t, t));
                w.add_row(i, t, &(-q));
                if !w.d.get(i, t).is_zero() {
                    // Remainder is strictly smaller than the pivot; promote it.
                    w.swap_rows(t, i);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            for j in t + 1..n {
                if w.d.get(t, j).is_zero() {
                    continue;
                }
                let q = w.d.get(t, j).div_floor(w.d.get(t, t));
                w.add_col(j, t, &(-q));
                if !w.d.get(t, j).is_zero() {
                    w.swap_cols(t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row t and column t are clear. Enforce the divisibility chain:
            // fold any non-multiple from the trailing block into row t and
            // restart the reduction (the pivot strictly shrinks).
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !w.d.get(i, j).mod_floor(w.d.get(t, t)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = Int::from(1);
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        rank += 1;
    }

    NormalForm { d: w.d, u: w.u, v: w.v, rank }
}

fn pivot_min_abs(d: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d.get(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Hermite form by row operations: `U · A = D` in row-echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite(a: &IntMat) -> NormalForm {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work { d: a.clone(), u: IntMat::identity(m), v: IntMat::identity(n) };
    let mut r = 0;

    for col in 0..n {
        if r == m {
            break;
        }
        // Euclidean reduction within the column until one nonzero survives.
        loop {
            let mut nz: Vec<usize> = (r..m).filter(|&i| !w.d.get(i, col).is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            nz.sort_by_key(|&i| w.d.get(i, col).abs());
            let p = nz[0];
            w.swap_rows(r, p);
            if nz.len() == 1 {
                break;
            }
            for i in r + 1..m {
                if w.d.get(i, col).is_zero() {
                    continue;
                }
                let q = w.d.get(i, col).div_floor(w.d.get(r, col));
                w.add_row(i, r, &(-q));
            }
        }
        if w.d.get(r, col).is_zero() {
            continue;
        }
        if w.d.get(r, col).is_negative() {
            w.negate_row(r);
        }
        for i in 0..r {
            let q = w.d.get(i, col).div_floor(w.d.get(r, col));
            w.add_row(i, r, &(-q));
        }
        r += 1;
    }

    NormalForm { d: w.d, u: w.u, v: w.v, rank: r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use num_traits::One;

    fn check_smith(a: &IntMat) -> NormalForm {
        let nf = smith(a);
        let uav = nf.u.mul(a).unwrap().mul(&nf.v).unwrap();
        assert_eq!(uav, nf.d, "U·A·V must equal D");
        for i in 0..nf.d.rows() {
            for j in 0..nf.d.cols() {
                if i != j {
                    assert!(nf.d.get(i, j).is_zero(), "off-diagonal must vanish");
                }
            }
        }
        let diag = nf.diagonal();
        for i in 0..diag.len() {
            assert!(!diag[i].is_negative());
            if i + 1 < diag.len() && !diag[i].is_zero() {
                assert!(
                    (diag[i + 1].clone() % diag[i].clone()).is_zero(),
                    "divisibility chain broken: {:?}",
                    diag
                );
            }
        }
        nf
    }

    #[test]
    fn smith_identity() {
        let nf = check_smith(&IntMat::identity(2));
        assert_eq!(nf.diagonal(), vec![int(1), int(1)]);
        assert_eq!(nf.rank, 2);
    }

    #[test]
    fn smith_diag_2_3() {
        let nf = check_smith(&IntMat::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(nf.diagonal(), vec![int(1), int(6)]);
    }

    #[test]
    fn smith_single_row() {
        let nf = check_smith(&IntMat::from_rows(&[vec![2, 4]]));
        assert_eq!(nf.diagonal(), vec![int(2)]);
        assert_eq!(nf.rank, 1);
    }

    #[test]
    fn smith_rank_deficient() {
        let nf = check_smith(&IntMat::from_rows(&[vec![1, 2], vec![2, 4]]));
        assert_eq!(nf.diagonal(), vec![int(1), int(0)]);
        assert_eq!(nf.rank, 1);
    }

    #[test]
    fn smith_zero_matrix() {
        let nf = check_smith(&IntMat::zero(2, 3));
        assert_eq!(nf.rank, 0);
    }

    #[test]
    fn smith_antiparallel_pair() {
        let nf = check_smith(&IntMat::from_rows(&[vec![3], vec![-3]]));
        assert_eq!(nf.diagonal(), vec![int(3)]);
    }

    #[test]
    fn hermite_row_echelon() {
        let a = IntMat::from_rows(&[vec![4, 6], vec![2, 2]]);
        let nf = hermite(&a);
        let ua = nf.u.mul(&a).unwrap();
        assert_eq!(ua, nf.d);
        assert_eq!(nf.rank, 2);
        // Pivots positive, below-pivot entries zero.
        assert!(nf.d.get(0, 0) > &Int::zero());
        assert!(nf.d.get(1, 0).is_zero());
        assert!(nf.d.get(1, 1) > &Int::zero());
        // Entry above the (1,1) pivot reduced into [0, pivot).
        assert!(!nf.d.get(0, 1).is_negative() && nf.d.get(0, 1) < nf.d.get(1, 1));
    }

    #[test]
    fn transforms_are_unimodular() {
        let a = IntMat::from_rows(&[vec![6, 10, 15], vec![2, 4, 8], vec![0, 0, 7]]);
        let nf = check_smith(&a);
        for t in [&nf.u, &nf.v] {
            let inv = crate::matrix::invert_rat(&t.to_rat_rows()).expect("unimodular");
            for row in &inv {
                for e in row {
                    assert!(e.denom().is_one(), "inverse of a unimodular matrix is integral");
                }
            }
        }
    }
}
