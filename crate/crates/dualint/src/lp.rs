//! Exact rational linear programming.
//!
//! A dense two-phase primal simplex over arbitrary-precision rationals with
//! Bland's anti-cycling rule, plus the primal/dual pair analysis for
//! `max {wᵀx : Mx ≤ b}` / `min {bᵀy : Mᵀy = w, y ≥ 0}`: admissibility,
//! optimal-face extraction, strictly complementary dual solutions and the
//! affine hull of the optimal dual face.

use crate::arith::{int_to_rat, Int, Rat};
use crate::error::Error;
use crate::matrix::{dot_int_rat, dot_rat, IntMat};
use crate::polyhedron::{AffineSubspace, Face, LinearSystem};
use num_traits::{One, Signed, Zero};

/// Relation of a single constraint row.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Eq,
}

/// One constraint `coeffs · x  rel  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

/// A linear program in `n` variables; `nonneg[j]` restricts variable `j`
/// to be nonnegative, otherwise it is free. The objective and its sense
/// are supplied at solve time.
#[derive(Clone, Debug)]
pub struct Program {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub nonneg: Vec<bool>,
}

/// Raw solver outcome. For `maximize`, `y` satisfies
/// `Σᵢ yᵢ·rowᵢ = objective`, `Σᵢ yᵢ·rhsᵢ = value`, and `yᵢ ≥ 0` on `Le`
/// rows; for `minimize` the returned `y` is negated accordingly
/// (`yᵢ ≤ 0` on `Le` rows).
#[derive(Clone, Debug)]
pub enum RawOutcome {
    Optimal { value: Rat, x: Vec<Rat>, y: Vec<Rat> },
    Unbounded { ray: Vec<Rat> },
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Col {
    /// Standard-form column contributing `sign` times variable `j`.
    Var { j: usize, sign: i8 },
    Slack { row: usize },
    Art { row: usize },
}

impl Program {
    pub fn from_system(sys: &LinearSystem) -> Program {
        let n = sys.m.cols();
        let constraints = (0..sys.m.rows())
            .map(|i| Constraint {
                coeffs: sys.m.row(i).iter().map(int_to_rat).collect(),
                rel: Relation::Le,
                rhs: int_to_rat(&sys.b[i]),
            })
            .collect();
        Program { n, constraints, nonneg: vec![false; n] }
    }

    pub fn add_int_row(&mut self, coeffs: &[Int], rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.n);
        self.constraints.push(Constraint {
            coeffs: coeffs.iter().map(int_to_rat).collect(),
            rel,
            rhs,
        });
    }

    pub fn add_rat_row(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.n);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn maximize(&self, obj: &[Rat]) -> Result<RawOutcome, Error> {
        simplex(self, obj)
    }

    pub fn minimize(&self, obj: &[Rat]) -> Result<RawOutcome, Error> {
        let neg: Vec<Rat> = obj.iter().map(|c| -c.clone()).collect();
        Ok(match simplex(self, &neg)? {
            RawOutcome::Optimal { value, x, y } => RawOutcome::Optimal {
                value: -value,
                x,
                y: y.into_iter().map(|v| -v).collect(),
            },
            other => other,
        })
    }

    /// Any feasible point, or `None` when the constraints are inconsistent.
    pub fn feasible_point(&self) -> Result<Option<Vec<Rat>>, Error> {
        match self.maximize(&vec![Rat::zero(); self.n])? {
            RawOutcome::Optimal { x, .. } => Ok(Some(x)),
            RawOutcome::Infeasible => Ok(None),
            RawOutcome::Unbounded { .. } => Err(Error::internal(
                "zero objective reported unbounded",
            )),
        }
    }
}

struct Tableau {
    cols: Vec<Col>,
    /// `t[i]` is a running combination of the original standard-form rows;
    /// `rhs[i]` the current basic value. Redundant rows get dropped.
    t: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    pivots: u64,
    pivot_cap: u64,
}

impl Tableau {
    fn pivot(&mut self, pr: usize, pc: usize, red: &mut [Rat]) -> Result<(), Error> {
        self.pivots += 1;
        if self.pivots > self.pivot_cap {
            return Err(Error::internal(
                "simplex pivot budget 2^(m+n) exceeded despite Bland's rule",
            ));
        }
        let p = self.t[pr][pc].clone();
        for v in self.t[pr].iter_mut() {
            *v = &*v / &p;
        }
        self.rhs[pr] = &self.rhs[pr] / &p;
        for i in 0..self.t.len() {
            if i == pr || self.t[i][pc].is_zero() {
                continue;
            }
            let f = self.t[i][pc].clone();
            for j in 0..self.cols.len() {
                if self.t[pr][j].is_zero() {
                    continue;
                }
                let v = &self.t[i][j] - &f * &self.t[pr][j];
                self.t[i][j] = v;
            }
            let v = &self.rhs[i] - &f * &self.rhs[pr];
            self.rhs[i] = v;
        }
        if !red[pc].is_zero() {
            let f = red[pc].clone();
            for j in 0..self.cols.len() {
                if !self.t[pr][j].is_zero() {
                    let v = &red[j] - &f * &self.t[pr][j];
                    red[j] = v;
                }
            }
        }
        self.basis[pr] = pc;
        Ok(())
    }

    fn reduced_costs(&self, cost: &dyn Fn(Col) -> Rat) -> Vec<Rat> {
        let cb: Vec<Rat> = self.basis.iter().map(|&b| cost(self.cols[b])).collect();
        (0..self.cols.len())
            .map(|j| {
                let mut r = cost(self.cols[j]);
                for i in 0..self.t.len() {
                    if !cb[i].is_zero() && !self.t[i][j].is_zero() {
                        r -= &cb[i] * &self.t[i][j];
                    }
                }
                r
            })
            .collect()
    }

    /// Bland's rule to optimality of the current cost row. `Ok(None)` means
    /// optimal; `Ok(Some(col))` means unbounded in column `col`. Artificial
    /// columns never re-enter the basis: with them excluded the run solves
    /// the program spanned by the genuine columns, which expresses every
    /// feasible point of the real constraints, so both the phase-1
    /// feasibility verdict and the phase-2 optimum are unaffected.
    fn run(&mut self, red: &mut [Rat]) -> Result<Option<usize>, Error> {
        loop {
            let entering = (0..self.cols.len()).find(|&j| {
                !matches!(self.cols[j], Col::Art { .. }) && red[j].is_positive()
            });
            let Some(e) = entering else { return Ok(None) };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.t[i][e];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr || (ratio == lr && self.basis[i] < self.basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            match leave {
                None => return Ok(Some(e)),
                Some((li, _)) => self.pivot(li, e, red)?,
            }
        }
    }
}

fn simplex(p: &Program, obj: &[Rat]) -> Result<RawOutcome, Error> {
    assert_eq!(obj.len(), p.n);
    assert_eq!(p.nonneg.len(), p.n);
    let m = p.constraints.len();

    let mut cols = Vec::new();
    for j in 0..p.n {
        cols.push(Col::Var { j, sign: 1 });
        if !p.nonneg[j] {
            cols.push(Col::Var { j, sign: -1 });
        }
    }
    for (i, c) in p.constraints.iter().enumerate() {
        if c.rel == Relation::Le {
            cols.push(Col::Slack { row: i });
        }
    }
    let art0 = cols.len();
    for i in 0..m {
        cols.push(Col::Art { row: i });
    }

    let sigma: Vec<i8> =
        p.constraints.iter().map(|c| if c.rhs.is_negative() { -1 } else { 1 }).collect();
    let sig = |i: usize| if sigma[i] < 0 { -Rat::one() } else { Rat::one() };

    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, c) in p.constraints.iter().enumerate() {
        let mut row = vec![Rat::zero(); cols.len()];
        for (k, col) in cols.iter().enumerate() {
            row[k] = match *col {
                Col::Var { j, sign } => {
                    let v = &c.coeffs[j] * sig(i);
                    if sign < 0 {
                        -v
                    } else {
                        v
                    }
                }
                Col::Slack { row: r } if r == i => sig(i),
                Col::Art { row: r } if r == i => Rat::one(),
                _ => Rat::zero(),
            };
        }
        t.push(row);
        rhs.push(&c.rhs * sig(i));
    }

    let shift = p.n + m;
    let mut tab = Tableau {
        cols,
        t,
        rhs,
        basis: (art0..art0 + m).collect(),
        pivots: 0,
        pivot_cap: 1u64.checked_shl(shift.min(62) as u32).unwrap_or(u64::MAX),
    };

    // Phase 1: maximize minus-the-sum of artificials.
    let phase1_cost = |c: Col| match c {
        Col::Art { .. } => -Rat::one(),
        _ => Rat::zero(),
    };
    let mut red = tab.reduced_costs(&phase1_cost);
    if tab.run(&mut red)?.is_some() {
        return Err(Error::internal("phase-1 objective is bounded by zero"));
    }
    let p1: Rat = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .map(|(&b, v)| phase1_cost(tab.cols[b]) * v)
        .sum();
    if p1.is_negative() {
        return Ok(RawOutcome::Infeasible);
    }

    // Drive artificials out of the basis; a row where no genuine column has
    // a nonzero coefficient is a redundant (0 = 0) row and is dropped.
    let mut i = 0;
    while i < tab.t.len() {
        if matches!(tab.cols[tab.basis[i]], Col::Art { .. }) {
            let pc = (0..art0).find(|&j| !tab.t[i][j].is_zero());
            match pc {
                Some(pc) => tab.pivot(i, pc, &mut red)?,
                None => {
                    tab.t.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2 over the genuine columns.
    let obj_owned: Vec<Rat> = obj.to_vec();
    let phase2_cost = move |c: Col| match c {
        Col::Var { j, sign } => {
            if sign < 0 {
                -obj_owned[j].clone()
            } else {
                obj_owned[j].clone()
            }
        }
        _ => Rat::zero(),
    };
    let mut red = tab.reduced_costs(&phase2_cost);
    if let Some(e) = tab.run(&mut red)? {
        // Unbounded: assemble the improving ray in original variables.
        let mut ray = vec![Rat::zero(); p.n];
        if let Col::Var { j, sign } = tab.cols[e] {
            ray[j] += if sign < 0 { -Rat::one() } else { Rat::one() };
        }
        for i in 0..tab.t.len() {
            if let Col::Var { j, sign } = tab.cols[tab.basis[i]] {
                let step = -tab.t[i][e].clone();
                ray[j] += if sign < 0 { -step } else { step };
            }
        }
        return Ok(RawOutcome::Unbounded { ray });
    }

    let mut x = vec![Rat::zero(); p.n];
    let mut value = Rat::zero();
    for i in 0..tab.t.len() {
        match tab.cols[tab.basis[i]] {
            Col::Var { j, sign } => {
                let v = tab.rhs[i].clone();
                value += phase2_cost(tab.cols[tab.basis[i]]) * &tab.rhs[i];
                x[j] += if sign < 0 { -v } else { v };
            }
            Col::Art { .. } => {
                if !tab.rhs[i].is_zero() {
                    return Err(Error::internal("artificial variable basic and nonzero"));
                }
            }
            Col::Slack { .. } => {}
        }
    }

    // Row duals. The maintained cost row always has the form
    // red = c − λᵀ·(original standard-form rows) for a single multiplier
    // vector λ, and the artificial column of row r is eᵣ with cost 0, so
    // red[artᵣ] = −λᵣ. Undoing the sign flip gives the original-row dual.
    let mut y = vec![Rat::zero(); m];
    for (r, yr) in y.iter_mut().enumerate() {
        let pi = -red[art0 + r].clone();
        *yr = if sigma[r] < 0 { -pi } else { pi };
    }

    Ok(RawOutcome::Optimal { value, x, y })
}

/// Outcome of the primal/dual pair `max {wᵀx : Mx ≤ b}` /
/// `min {bᵀy : Mᵀy = w, y ≥ 0}`. When `Optimal`, the primal and dual
/// objective values agree exactly and the pair satisfies complementary
/// slackness.
#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal { value: Rat, primal: Vec<Rat>, dual: Vec<Rat> },
    Unbounded { ray: Vec<Rat> },
    Infeasible,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

/// Solves `max {wᵀx : Mx ≤ b}` exactly, returning a complementary
/// primal-dual pair when an optimum exists.
pub fn solve(sys: &LinearSystem, w: &[Rat]) -> Result<LpOutcome, Error> {
    if w.len() != sys.m.cols() {
        return Err(Error::dim(format!(
            "weight of length {} against {} variables",
            w.len(),
            sys.m.cols()
        )));
    }
    let prog = Program::from_system(sys);
    match prog.maximize(w)? {
        RawOutcome::Infeasible => Ok(LpOutcome::Infeasible),
        RawOutcome::Unbounded { ray } => Ok(LpOutcome::Unbounded { ray }),
        RawOutcome::Optimal { value, x, y } => {
            verify_pair(sys, w, &value, &x, &y)?;
            Ok(LpOutcome::Optimal { value, primal: x, dual: y })
        }
    }
}

/// Exact certification of a claimed optimal pair: primal feasibility, dual
/// feasibility, equal objectives, and complementary slackness.
fn verify_pair(
    sys: &LinearSystem,
    w: &[Rat],
    value: &Rat,
    x: &[Rat],
    y: &[Rat],
) -> Result<(), Error> {
    let m = sys.m.rows();
    for i in 0..m {
        let lhs = dot_int_rat(sys.m.row(i), x);
        let bi = int_to_rat(&sys.b[i]);
        if lhs > bi {
            return Err(Error::internal("simplex returned an infeasible primal point"));
        }
        if y[i].is_negative() {
            return Err(Error::internal("simplex returned a negative dual multiplier"));
        }
        if y[i].is_positive() && lhs != bi {
            return Err(Error::internal("complementary slackness violated"));
        }
    }
    for j in 0..sys.m.cols() {
        let col: Rat = (0..m).map(|i| int_to_rat(sys.m.get(i, j)) * &y[i]).sum();
        if col != w[j] {
            return Err(Error::internal("dual point does not satisfy Mᵀy = w"));
        }
    }
    let primal_val = dot_rat(w, x);
    let dual_val: Rat = (0..m).map(|i| int_to_rat(&sys.b[i]) * &y[i]).sum();
    if &primal_val != value || dual_val != primal_val {
        return Err(Error::internal("strong duality violated in returned pair"));
    }
    Ok(())
}

/// True iff both programs of the pair attain optima, i.e. the primal is
/// feasible and bounded.
pub fn is_admissible(sys: &LinearSystem, w: &[Rat]) -> Result<bool, Error> {
    Ok(solve(sys, w)?.is_optimal())
}

/// The face of all primal optimizers, identified by its closed tight set.
///
/// The tight set is never inferred from a single optimal basis: indices in
/// the support of the returned dual are tight on every optimum by
/// complementary slackness, indices slack at the returned optimum are out,
/// and each remaining index is settled by minimizing its row over
/// `{x : Mx ≤ b, wᵀx = τ}`.
pub fn optimal_face(sys: &LinearSystem, w: &[Rat]) -> Result<Face, Error> {
    let LpOutcome::Optimal { value, primal, dual } = solve(sys, w)? else {
        return Err(Error::InadmissibleWeight);
    };
    let m = sys.m.rows();
    let mut tight = Vec::new();
    for i in 0..m {
        let at_opt = dot_int_rat(sys.m.row(i), &primal) == int_to_rat(&sys.b[i]);
        if !at_opt {
            continue; // slack at one optimum, so not tight on the face
        }
        if dual[i].is_positive() {
            tight.push(i);
            continue;
        }
        let mut prog = Program::from_system(sys);
        prog.add_rat_row(w.to_vec(), Relation::Eq, value.clone());
        let row: Vec<Rat> = sys.m.row(i).iter().map(int_to_rat).collect();
        match prog.minimize(&row)? {
            RawOutcome::Optimal { value: lo, .. } => {
                if lo == int_to_rat(&sys.b[i]) {
                    tight.push(i);
                }
            }
            RawOutcome::Unbounded { .. } => {}
            RawOutcome::Infeasible => {
                return Err(Error::internal("optimal face vanished in tightness probe"))
            }
        }
    }
    Ok(Face::from_closed_tight_set(sys, tight))
}

/// An optimal dual solution with `yᵢ > 0` exactly on the tight set of the
/// optimal face, built by convex averaging of per-index maximizing duals.
pub fn strictly_complementary_dual(sys: &LinearSystem, w: &[Rat]) -> Result<Vec<Rat>, Error> {
    let LpOutcome::Optimal { value, .. } = solve(sys, w)? else {
        return Err(Error::InadmissibleWeight);
    };
    let face = optimal_face(sys, w)?;
    let m = sys.m.rows();
    let tight = face.tight_set.clone();
    if tight.is_empty() {
        return Ok(vec![Rat::zero(); m]);
    }

    let mut total = vec![Rat::zero(); m];
    for &i in &tight {
        let mut prog = Program { n: m, constraints: Vec::new(), nonneg: vec![true; m] };
        for j in 0..sys.m.cols() {
            let col: Vec<Rat> = (0..m).map(|r| int_to_rat(sys.m.get(r, j))).collect();
            prog.add_rat_row(col, Relation::Eq, w[j].clone());
        }
        let brow: Vec<Rat> = sys.b.iter().map(int_to_rat).collect();
        prog.add_rat_row(brow, Relation::Eq, value.clone());
        // Cap yᵢ so the probe is bounded even when the optimal dual face
        // has a recession direction increasing yᵢ.
        let mut cap = vec![Rat::zero(); m];
        cap[i] = Rat::one();
        prog.add_rat_row(cap.clone(), Relation::Le, Rat::one());
        match prog.maximize(&cap)? {
            RawOutcome::Optimal { value: vi, x: yi, .. } => {
                if !vi.is_positive() {
                    return Err(Error::internal(
                        "no optimal dual charges a tight constraint",
                    ));
                }
                for (acc, v) in total.iter_mut().zip(&yi) {
                    *acc += v;
                }
            }
            _ => return Err(Error::internal("dual probe must be feasible and bounded")),
        }
    }
    let k = int_to_rat(&Int::from(tight.len() as i64));
    let y: Vec<Rat> = total.into_iter().map(|v| v / &k).collect();

    // supp(y) must equal the closed tight set exactly.
    for i in 0..m {
        let in_tight = tight.contains(&i);
        if in_tight != y[i].is_positive() || y[i].is_negative() {
            return Err(Error::internal("strict complementarity construction failed"));
        }
    }
    verify_pair_dual_only(sys, w, &value, &y)?;
    Ok(y)
}

fn verify_pair_dual_only(
    sys: &LinearSystem,
    w: &[Rat],
    value: &Rat,
    y: &[Rat],
) -> Result<(), Error> {
    for j in 0..sys.m.cols() {
        let col: Rat = (0..sys.m.rows()).map(|i| int_to_rat(sys.m.get(i, j)) * &y[i]).sum();
        if col != w[j] {
            return Err(Error::internal("averaged dual violates Mᵀy = w"));
        }
    }
    let dual_val: Rat = (0..sys.m.rows()).map(|i| int_to_rat(&sys.b[i]) * &y[i]).sum();
    if &dual_val != value {
        return Err(Error::internal("averaged dual is not optimal"));
    }
    Ok(())
}

/// Affine hull of the optimal dual face:
/// `{y : Mᵀy = w, yᵢ = 0 for i ∉ I(F)}`, returned as one integer equality
/// system (rows with rational `w` entries are scaled by their denominator).
pub fn dual_affine_hull(sys: &LinearSystem, w: &[Rat]) -> Result<AffineSubspace, Error> {
    let face = optimal_face(sys, w)?;
    let m = sys.m.rows();
    let n = sys.m.cols();
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut rhs: Vec<Int> = Vec::new();
    for j in 0..n {
        let d = w[j].denom().clone();
        rows.push((0..m).map(|i| sys.m.get(i, j) * &d).collect());
        rhs.push(w[j].numer().clone());
    }
    for i in 0..m {
        if !face.tight_set.contains(&i) {
            let mut e = vec![Int::zero(); m];
            e[i] = Int::one();
            rows.push(e);
            rhs.push(Int::zero());
        }
    }
    Ok(AffineSubspace { coeffs: IntMat::from_int_rows(&rows, m), rhs })
}
