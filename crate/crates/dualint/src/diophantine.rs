//! Solvability of integer linear systems over Z and over L(S).

use crate::arith::{int_to_rat, Int, Rat};
use crate::error::Error;
use crate::lspec::LSpec;
use crate::matrix::IntMat;
use crate::normal_form::{smith, NormalForm};
use num_integer::Integer;
use num_traits::Zero;

/// A particular integer solution of `A x = b` together with a lattice basis
/// of the integer kernel of `A`; the full solution set is
/// `particular + Z-span(kernel)`.
pub struct IntegerSolution {
    pub particular: Vec<Int>,
    pub kernel: Vec<Vec<Int>>,
}

/// Smith form of a fixed coefficient matrix, reusable across right-hand
/// sides. Each query costs one matrix-vector product and a divisibility
/// pass instead of a fresh normal-form computation, which matters inside
/// weight scans that solve thousands of systems sharing a matrix.
pub struct SmithSolver {
    nf: NormalForm,
    rows: usize,
    cols: usize,
}

impl SmithSolver {
    pub fn new(a: &IntMat) -> SmithSolver {
        SmithSolver { nf: smith(a), rows: a.rows(), cols: a.cols() }
    }

    fn check_rhs(&self, b: &[Int]) -> Result<(), Error> {
        if b.len() != self.rows {
            return Err(Error::dim(format!(
                "system {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        Ok(())
    }

    /// Decides `A x = b` over the integers via the stored Smith form
    /// `U A V = D`: writing `c = U b`, the system is solvable iff `dᵢ | cᵢ`
    /// on the rank part and `cᵢ = 0` beyond it; then `x = V z` with
    /// `zᵢ = cᵢ/dᵢ`.
    pub fn solve_integer(&self, b: &[Int]) -> Result<Option<IntegerSolution>, Error> {
        self.check_rhs(b)?;
        let nf = &self.nf;
        let c = nf.u.mul_int_vec(b);
        let n = self.cols;
        let r = nf.rank;
        let mut z = vec![Int::zero(); n];
        for i in 0..self.rows {
            if i < r {
                let d = nf.d.get(i, i);
                let (q, rem) = c[i].div_mod_floor(d);
                if !rem.is_zero() {
                    return Ok(None);
                }
                z[i] = q;
            } else if !c[i].is_zero() {
                return Ok(None);
            }
        }
        let particular = nf.v.mul_int_vec(&z);
        let kernel =
            (r..n).map(|j| (0..n).map(|i| nf.v.get(i, j).clone()).collect()).collect();
        Ok(Some(IntegerSolution { particular, kernel }))
    }

    /// Decides `A x = b` with every entry of `x` in `L`; see [`solve_in_l`].
    pub fn solve_in_l(&self, b: &[Int], l: &LSpec) -> Result<Option<Vec<Rat>>, Error> {
        if matches!(l, LSpec::Integers) {
            return Ok(self
                .solve_integer(b)?
                .map(|s| s.particular.iter().map(int_to_rat).collect()));
        }
        self.check_rhs(b)?;
        let nf = &self.nf;
        let c = nf.u.mul_int_vec(b);
        let n = self.cols;
        let r = nf.rank;
        let mut z = vec![Rat::zero(); n];
        for i in 0..self.rows {
            if i < r {
                let q = Rat::new(c[i].clone(), nf.d.get(i, i).clone());
                if !l.admits_denominator(q.denom()) {
                    return Ok(None);
                }
                z[i] = q;
            } else if !c[i].is_zero() {
                return Ok(None);
            }
        }
        // x = V z; V is integral so denominators stay S-numbers.
        let x = (0..n)
            .map(|i| (0..n).map(|j| int_to_rat(nf.v.get(i, j)) * &z[j]).sum())
            .collect();
        Ok(Some(x))
    }
}

/// Decides `A x = b` over the integers; one-shot form of
/// [`SmithSolver::solve_integer`].
pub fn solve_integer(a: &IntMat, b: &[Int]) -> Result<Option<IntegerSolution>, Error> {
    SmithSolver::new(a).solve_integer(b)
}

/// Lattice basis of `{x ∈ Zⁿ : A x = 0}`.
pub fn integer_kernel_basis(a: &IntMat) -> Vec<Vec<Int>> {
    let nf = smith(a);
    let n = a.cols();
    (nf.rank..n).map(|j| (0..n).map(|i| nf.v.get(i, j).clone()).collect()).collect()
}

/// Decides `A x = b` with every entry of `x` in `L`. Over the integers this
/// is [`solve_integer`]; over `L(S)` the Smith reduction gives the exact
/// criterion: `cᵢ/dᵢ` must have an S-number reduced denominator on the rank
/// part (equivalently, `v_q(dᵢ) ≤ v_q(cᵢ)` for every prime `q ∉ S`) and
/// `cᵢ = 0` beyond it. Any returned witness has S-number denominators.
pub fn solve_in_l(a: &IntMat, b: &[Int], l: &LSpec) -> Result<Option<Vec<Rat>>, Error> {
    SmithSolver::new(a).solve_in_l(b, l)
}

/// Decides the single equation `a · u = c` with `u` ranging over `Lᵏ`.
/// The value set `{a · u : u ∈ Lᵏ}` is `gcd(a) · L`, so the equation is
/// solvable iff `c / gcd(a) ∈ L`; the witness scales the Bezout
/// certificate by that ratio. `a = 0` is solvable only for `c = 0`.
pub fn single_eq_solvable_in_l(a: &[Int], c: &Int, l: &LSpec) -> (bool, Option<Vec<Rat>>) {
    if a.iter().all(|x| x.is_zero()) {
        return if c.is_zero() {
            (true, Some(vec![Rat::zero(); a.len()]))
        } else {
            (false, None)
        };
    }
    let (g, bez) = crate::arith::gcd_bezout(a);
    let q = Rat::new(c.clone(), g);
    if l.contains(&q) {
        let u = bez.iter().map(|t| int_to_rat(t) * &q).collect();
        (true, Some(u))
    } else {
        (false, None)
    }
}
