//! Face structure of a polyhedron `{x : Mx ≤ b}`: implicit equalities,
//! affine hulls, the face lattice, minimal faces, integrality, the
//! recession cone, degeneracy and facetedness checks, and constraint
//! shifting.

use crate::arith::{int_to_rat, Int, Rat};
use crate::diophantine::{integer_kernel_basis, solve_integer};
use crate::error::Error;
use crate::lp::{Program, RawOutcome, Relation};
use crate::matrix::{dot_int_rat, primitive_direction, primitive_signed, rank_rat, IntMat};
use itertools::Itertools;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Row cap for exhaustive face-lattice enumeration.
pub const FACE_ENUMERATION_ROW_CAP: usize = 16;

/// The integer system `Mx ≤ b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearSystem {
    pub m: IntMat,
    pub b: Vec<Int>,
}

impl LinearSystem {
    pub fn new(m: IntMat, b: Vec<Int>) -> Result<Self, Error> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(Error::EmptyInput("linear system needs at least one row and one column"));
        }
        if b.len() != m.rows() {
            return Err(Error::dim(format!(
                "{} rows against rhs of length {}",
                m.rows(),
                b.len()
            )));
        }
        Ok(LinearSystem { m, b })
    }

    pub fn from_rows(rows: &[Vec<i64>], b: &[i64]) -> Result<Self, Error> {
        LinearSystem::new(IntMat::from_rows(rows), b.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.m.rows()
    }

    pub fn nvars(&self) -> usize {
        self.m.cols()
    }

    pub fn row_value_at(&self, i: usize, x: &[Rat]) -> Rat {
        dot_int_rat(self.m.row(i), x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        (0..self.nrows()).all(|i| self.row_value_at(i, x) <= int_to_rat(&self.b[i]))
    }

    pub fn tight_rows_at(&self, x: &[Rat]) -> Vec<usize> {
        (0..self.nrows())
            .filter(|&i| self.row_value_at(i, x) == int_to_rat(&self.b[i]))
            .collect()
    }
}

/// An affine subspace `{x : coeffs·x = rhs}` given by one integer equality
/// system; zero rows encode the whole space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSubspace {
    pub coeffs: IntMat,
    pub rhs: Vec<Int>,
}

impl AffineSubspace {
    pub fn whole_space(n: usize) -> Self {
        AffineSubspace { coeffs: IntMat::zero(0, n), rhs: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn rational_point(&self) -> Option<Vec<Rat>> {
        if self.coeffs.rows() == 0 {
            return Some(vec![Rat::zero(); self.ambient_dim()]);
        }
        let rhs: Vec<Rat> = self.rhs.iter().map(int_to_rat).collect();
        crate::matrix::solve_rat(&self.coeffs.to_rat_rows(), &rhs).map(|s| s.particular)
    }

    pub fn is_empty(&self) -> bool {
        self.rational_point().is_none()
    }

    /// Dimension of the solution set; −1 when inconsistent.
    pub fn dim(&self) -> i64 {
        if self.is_empty() {
            -1
        } else {
            self.ambient_dim() as i64 - self.coeffs.rank() as i64
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        (0..self.coeffs.rows())
            .all(|i| dot_int_rat(self.coeffs.row(i), x) == int_to_rat(&self.rhs[i]))
    }
}

/// A face of `{x : Mx ≤ b}`, canonically identified by its closed tight
/// set: the indices of every constraint that is tight on all of the face.
/// The empty face carries `dim = −1` and the full index set.
#[derive(Clone, Debug)]
pub struct Face {
    pub system: LinearSystem,
    pub tight_set: Vec<usize>,
    pub dim: i64,
}

impl PartialEq for Face {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.tight_set == other.tight_set
    }
}
impl Eq for Face {}

impl Face {
    /// Builds a face from a tight set already known to be closed and to cut
    /// a nonempty face.
    pub(crate) fn from_closed_tight_set(sys: &LinearSystem, mut tight: Vec<usize>) -> Face {
        tight.sort_unstable();
        let dim = sys.nvars() as i64 - sys.m.select_rows(&tight).rank() as i64;
        Face { system: sys.clone(), tight_set: tight, dim }
    }

    pub fn empty(sys: &LinearSystem) -> Face {
        Face { system: sys.clone(), tight_set: (0..sys.nrows()).collect(), dim: -1 }
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    /// The tight rows as an equality system; its solution set is the
    /// affine hull of the face.
    pub fn equality_system(&self) -> (IntMat, Vec<Int>) {
        let m = self.system.m.select_rows(&self.tight_set);
        let b = self.tight_set.iter().map(|&i| self.system.b[i].clone()).collect();
        (m, b)
    }

    pub fn affine_hull(&self) -> AffineSubspace {
        let (m, b) = self.equality_system();
        AffineSubspace { coeffs: m, rhs: b }
    }

    /// Constraint program cutting out this face: the full system plus the
    /// tight rows as equalities.
    pub fn program(&self) -> Program {
        let mut prog = Program::from_system(&self.system);
        for &i in &self.tight_set {
            prog.add_int_row(self.system.m.row(i), Relation::Eq, int_to_rat(&self.system.b[i]));
        }
        prog
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.system.contains(x)
            && self
                .tight_set
                .iter()
                .all(|&i| self.system.row_value_at(i, x) == int_to_rat(&self.system.b[i]))
    }

    pub fn feasible_point(&self) -> Result<Option<Vec<Rat>>, Error> {
        if self.is_empty() {
            return Ok(None);
        }
        self.program().feasible_point()
    }
}

/// Indices of constraints tight on the entire feasible region, decided per
/// row by minimizing the row over the region (the row is implicit iff even
/// its minimum sits at the bound; a per-row maximum would wrongly flag
/// rows whose bound is only attained somewhere).
pub fn implicit_equalities(sys: &LinearSystem) -> Result<Vec<usize>, Error> {
    let prog = Program::from_system(sys);
    if prog.feasible_point()?.is_none() {
        return Err(Error::InfeasibleSystem);
    }
    let mut out = Vec::new();
    for i in 0..sys.nrows() {
        if row_min_is_at_bound(&prog, sys, i)? {
            out.push(i);
        }
    }
    Ok(out)
}

fn row_min_is_at_bound(prog: &Program, sys: &LinearSystem, i: usize) -> Result<bool, Error> {
    let row: Vec<Rat> = sys.m.row(i).iter().map(int_to_rat).collect();
    Ok(match prog.minimize(&row)? {
        RawOutcome::Optimal { value, .. } => value == int_to_rat(&sys.b[i]),
        RawOutcome::Unbounded { .. } => false,
        RawOutcome::Infeasible => return Err(Error::InfeasibleSystem),
    })
}

/// Affine hull of the feasible region: `{x : M⁼x = b⁼}` over the
/// implicit-equality rows.
pub fn affine_hull(sys: &LinearSystem) -> Result<AffineSubspace, Error> {
    let eq = implicit_equalities(sys)?;
    Ok(AffineSubspace {
        coeffs: sys.m.select_rows(&eq),
        rhs: eq.iter().map(|&i| sys.b[i].clone()).collect(),
    })
}

/// The face obtained by forcing the rows of `req` to equality, with its
/// tight set closed to all constraints tight on the whole face. The empty
/// face is returned as a value, never an error.
pub fn face_from_tight(sys: &LinearSystem, req: &[usize]) -> Result<Face, Error> {
    for &i in req {
        if i >= sys.nrows() {
            return Err(Error::dim(format!("tight index {i} out of range")));
        }
    }
    let mut prog = Program::from_system(sys);
    for &i in req {
        prog.add_int_row(sys.m.row(i), Relation::Eq, int_to_rat(&sys.b[i]));
    }
    if prog.feasible_point()?.is_none() {
        return Ok(Face::empty(sys));
    }
    let req_set: BTreeSet<usize> = req.iter().copied().collect();
    let mut tight = Vec::new();
    for i in 0..sys.nrows() {
        if req_set.contains(&i) || row_min_is_at_bound(&prog, sys, i)? {
            tight.push(i);
        }
    }
    Ok(Face::from_closed_tight_set(sys, tight))
}

/// Every nonempty face of the polyhedron, each exactly once (by closed
/// tight set), including the polyhedron itself and all minimal faces.
pub fn enumerate_faces(sys: &LinearSystem) -> Result<Vec<Face>, Error> {
    if sys.nrows() > FACE_ENUMERATION_ROW_CAP {
        return Err(Error::ResourceLimit {
            limit: "face enumeration row cap",
            cap: FACE_ENUMERATION_ROW_CAP as u64,
        });
    }
    let all: Vec<usize> = (0..sys.nrows()).collect();
    enumerate_downward(sys, &all)
}

/// Closure walk: starting from the whole polyhedron, force one additional
/// index (drawn from `allowed`) at a time and close. Every face whose
/// tight set lies inside `allowed` is reached: such a face sits at the
/// bottom of a chain of facet covers whose members all have tight sets
/// inside `allowed`, and each cover is realized by one closure step.
fn enumerate_downward(sys: &LinearSystem, allowed: &[usize]) -> Result<Vec<Face>, Error> {
    let top = face_from_tight(sys, &[])?;
    if top.is_empty() {
        return Err(Error::InfeasibleSystem);
    }
    let mut memo: BTreeMap<Vec<usize>, Option<Vec<usize>>> = BTreeMap::new();
    let mut out: Vec<Face> = vec![top.clone()];
    let mut queue = vec![top];
    let mut seen: BTreeSet<Vec<usize>> =
        out.iter().map(|f| f.tight_set.clone()).collect();
    while let Some(face) = queue.pop() {
        for &i in allowed {
            if face.tight_set.contains(&i) {
                continue;
            }
            let mut key = face.tight_set.clone();
            key.push(i);
            key.sort_unstable();
            let closed = match memo.get(&key) {
                Some(c) => c.clone(),
                None => {
                    let f = face_from_tight(sys, &key)?;
                    let c = if f.is_empty() { None } else { Some(f.tight_set) };
                    memo.insert(key, c.clone());
                    c
                }
            };
            let Some(ts) = closed else { continue };
            // In a restricted walk, a closure escaping `allowed` is a face
            // that does not contain the base face; skip it.
            if !ts.iter().all(|t| allowed.contains(t)) {
                continue;
            }
            if seen.insert(ts.clone()) {
                let f = Face::from_closed_tight_set(sys, ts);
                queue.push(f.clone());
                out.push(f);
            }
        }
    }
    out.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.tight_set.cmp(&b.tight_set)));
    Ok(out)
}

/// All faces `F⁺` with `F ⊂ F⁺` and `dim F⁺ = dim F + 1`.
pub fn down_faces(face: &Face) -> Result<Vec<Face>, Error> {
    if face.is_empty() {
        return Ok(Vec::new());
    }
    // Faces containing F are exactly those whose closed tight set is a
    // subset of I(F), so a closure walk restricted to I(F) finds them all.
    let above = enumerate_downward(&face.system, &face.tight_set)?;
    Ok(above.into_iter().filter(|g| g.dim == face.dim + 1).collect())
}

/// The minimal faces: translates of the lineality space, one per feasible
/// rank-`r` tight equality system (`r = rank M`).
pub fn minimal_faces(sys: &LinearSystem) -> Result<Vec<Face>, Error> {
    let prog = Program::from_system(sys);
    if prog.feasible_point()?.is_none() {
        return Err(Error::InfeasibleSystem);
    }
    let r = sys.m.rank();
    if r == 0 {
        // M = 0: the region is all of Rⁿ; its unique minimal face is itself.
        let tight = (0..sys.nrows()).filter(|&i| sys.b[i].is_zero()).collect();
        return Ok(vec![Face::from_closed_tight_set(sys, tight)]);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for subset in (0..sys.nrows()).combinations(r) {
        let sub = sys.m.select_rows(&subset);
        if sub.rank() < r {
            continue;
        }
        let rhs: Vec<Rat> = subset.iter().map(|&i| int_to_rat(&sys.b[i])).collect();
        let Some(sol) = crate::matrix::solve_rat(&sub.to_rat_rows(), &rhs) else { continue };
        let x0 = sol.particular;
        if !sys.contains(&x0) {
            continue;
        }
        // Every row of M is constant on x0 + ker(M), so the tight set of
        // the whole minimal face can be read off at x0.
        let tight = sys.tight_rows_at(&x0);
        if seen.insert(tight.clone()) {
            out.push(Face::from_closed_tight_set(sys, tight));
        }
    }
    Ok(out)
}

/// True iff every minimal face contains an integer point; on failure the
/// second component is a minimal face whose tight equality system has no
/// integer solution.
pub fn integrality_check(sys: &LinearSystem) -> Result<(bool, Option<Face>), Error> {
    for face in minimal_faces(sys)? {
        let (a, b) = face.equality_system();
        if solve_integer(&a, &b)?.is_none() {
            return Ok((false, Some(face)));
        }
    }
    Ok((true, None))
}

pub fn is_integral(sys: &LinearSystem) -> Result<bool, Error> {
    Ok(integrality_check(sys)?.0)
}

/// Primitive integer generators of the recession cone `{x : Mx ≤ 0}`.
///
/// For a pointed cone these are exactly the extreme rays. Otherwise the
/// result is a lattice basis of the lineality space together with its
/// negation, plus one representative ray per extreme ray of the quotient
/// cone; deduplication of the representatives is modulo the lineality
/// space.
pub fn recession_generators(sys: &LinearSystem) -> Result<Vec<Vec<Int>>, Error> {
    let n = sys.nvars();
    let r = sys.m.rank();
    let mut out: BTreeSet<Vec<Int>> = BTreeSet::new();

    if r < n {
        for v in integer_kernel_basis(&sys.m) {
            let (p, _) = primitive_signed(&v);
            out.insert(p.iter().map(|x| -x.clone()).collect());
            out.insert(p);
        }
    }
    if r == 0 {
        return Ok(out.into_iter().collect());
    }

    let mut quotient_keys: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut rays = Vec::new();
    for subset in (0..sys.nrows()).combinations(r - 1) {
        let sub = sys.m.select_rows(&subset);
        if r > 1 && sub.rank() < r - 1 {
            continue;
        }
        let zero = vec![Rat::zero(); subset.len()];
        let Some(sol) = solve_rat_or_whole(&sub, &zero, n) else { continue };
        // Kernel of the subset has dimension n − r + 1; pick a direction
        // outside ker(M).
        let Some(u) = sol.into_iter().find(|k| {
            !sys.m.mul_rat_vec(k).iter().all(|v| v.is_zero())
        }) else {
            continue;
        };
        let u = primitive_direction(&u);
        let mu = sys.m.mul_int_vec(&u);
        let candidate = if mu.iter().all(|v| !v.is_positive()) {
            Some(u)
        } else if mu.iter().all(|v| !v.is_negative()) {
            Some(u.iter().map(|x| -x.clone()).collect::<Vec<Int>>())
        } else {
            None
        };
        if let Some(ray) = candidate {
            let (key, _) = primitive_signed(&sys.m.mul_int_vec(&ray));
            if quotient_keys.insert(key) {
                rays.push(ray);
            }
        }
    }
    out.extend(rays);
    Ok(out.into_iter().collect())
}

fn solve_rat_or_whole(sub: &IntMat, rhs: &[Rat], n: usize) -> Option<Vec<Vec<Rat>>> {
    if sub.rows() == 0 {
        // Empty subsystem: the kernel is all of Rⁿ.
        let mut basis = vec![vec![Rat::zero(); n]; n];
        for (j, v) in basis.iter_mut().enumerate() {
            v[j] = crate::arith::rat_int(1);
        }
        return Some(basis);
    }
    crate::matrix::solve_rat(&sub.to_rat_rows(), rhs).map(|s| s.kernel)
}

/// Degeneracy analysis across all minimal faces.
#[derive(Clone, Debug)]
pub struct DegeneracyReport {
    pub non_degenerate: bool,
    /// True when the antiparallel-pair collapse rule changed some tight
    /// row set before a rank test.
    pub collapse_fired: bool,
    /// A minimal face with dependent tight rows, when degenerate.
    pub witness: Option<Face>,
}

/// At every minimal face, the tight constraint left-hand sides must be
/// linearly independent after collapsing antiparallel pairs (a pair
/// `αᵀx ≤ β`, `−αᵀx ≤ −β` counts once; pairs are matched after primitive
/// normalization of each row).
pub fn degeneracy_report(sys: &LinearSystem) -> Result<DegeneracyReport, Error> {
    let mut collapse_fired = false;
    for face in minimal_faces(sys)? {
        let mut groups: BTreeMap<Vec<Int>, (usize, usize)> = BTreeMap::new();
        for &i in &face.tight_set {
            let (p, sign) = primitive_signed(sys.m.row(i));
            if sign == 0 {
                continue; // zero rows never constrain directions
            }
            let entry = groups.entry(p).or_insert((0, 0));
            if sign > 0 {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
        let mut reps: Vec<Vec<Rat>> = Vec::new();
        for (dir, (plus, minus)) in &groups {
            let pairs = (*plus).min(*minus);
            if pairs > 0 {
                collapse_fired = true;
            }
            let survivors = plus + minus - pairs;
            for _ in 0..survivors {
                reps.push(dir.iter().map(int_to_rat).collect());
            }
        }
        if rank_rat(&reps) < reps.len() {
            return Ok(DegeneracyReport {
                non_degenerate: false,
                collapse_fired,
                witness: Some(face),
            });
        }
    }
    Ok(DegeneracyReport { non_degenerate: true, collapse_fired, witness: None })
}

pub fn is_non_degenerate(sys: &LinearSystem) -> Result<bool, Error> {
    Ok(degeneracy_report(sys)?.non_degenerate)
}

/// Faceted-system check: (i) every constraint irredundant, (ii) every row
/// `(rowᵢ, bᵢ)` primitive, (iii) full-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetedReport {
    pub redundant_row: Option<usize>,
    pub non_primitive_row: Option<usize>,
    pub not_full_dimensional: bool,
}

impl FacetedReport {
    pub fn is_faceted(&self) -> bool {
        self.redundant_row.is_none() && !self.not_full_dimensional
            && self.non_primitive_row.is_none()
    }
}

pub fn faceted_report(sys: &LinearSystem) -> Result<FacetedReport, Error> {
    if Program::from_system(sys).feasible_point()?.is_none() {
        return Err(Error::InfeasibleSystem);
    }
    let mut report = FacetedReport {
        redundant_row: None,
        non_primitive_row: None,
        not_full_dimensional: !implicit_equalities(sys)?.is_empty(),
    };
    for i in 0..sys.nrows() {
        let mut with_b = sys.m.row_vec(i);
        with_b.push(sys.b[i].clone());
        if crate::arith::gcd_all(&with_b) != Int::from(1) {
            report.non_primitive_row = Some(i);
            break;
        }
    }
    for i in 0..sys.nrows() {
        // Row i is redundant iff its bound already holds over the others.
        let mut prog = Program { n: sys.nvars(), constraints: Vec::new(), nonneg: vec![false; sys.nvars()] };
        for j in 0..sys.nrows() {
            if j != i {
                prog.add_int_row(sys.m.row(j), Relation::Le, int_to_rat(&sys.b[j]));
            }
        }
        let row: Vec<Rat> = sys.m.row(i).iter().map(int_to_rat).collect();
        let redundant = match prog.maximize(&row)? {
            RawOutcome::Optimal { value, .. } => value <= int_to_rat(&sys.b[i]),
            RawOutcome::Unbounded { .. } => false,
            RawOutcome::Infeasible => {
                return Err(Error::internal("subsystem of a feasible system is infeasible"))
            }
        };
        if redundant {
            report.redundant_row = Some(i);
            break;
        }
    }
    Ok(report)
}

pub fn is_faceted(sys: &LinearSystem) -> Result<bool, Error> {
    Ok(faceted_report(sys)?.is_faceted())
}

/// The system with `bᵢ` lowered by `s ≥ 1` (the constraint's boundary
/// hyperplane shifted inward).
pub fn shift_in(sys: &LinearSystem, i: usize, s: &Int) -> Result<LinearSystem, Error> {
    if i >= sys.nrows() {
        return Err(Error::dim(format!("row {i} out of range")));
    }
    if !s.is_positive() {
        return Err(Error::usage("shift amount must be a positive integer"));
    }
    let mut b = sys.b.clone();
    b[i] = &b[i] - s;
    LinearSystem::new(sys.m.clone(), b)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::{int, rat_int};

    pub(crate) fn sys2() -> LinearSystem {
        LinearSystem::from_rows(&[vec![1, 1], vec![-1, 0], vec![0, -1]], &[3, 0, 0]).unwrap()
    }

    pub(crate) fn sys3() -> LinearSystem {
        LinearSystem::from_rows(
            &[vec![3, 1], vec![0, 1], vec![-1, 0], vec![0, -1]],
            &[6, 3, 0, 0],
        )
        .unwrap()
    }

    pub(crate) fn sys4() -> LinearSystem {
        LinearSystem::from_rows(&[vec![2], vec![3]], &[0, 0]).unwrap()
    }

    #[test]
    fn implicit_equality_examples() {
        assert!(implicit_equalities(&sys2()).unwrap().is_empty());
        let point = LinearSystem::from_rows(&[vec![1], vec![-1]], &[0, 0]).unwrap();
        assert_eq!(implicit_equalities(&point).unwrap(), vec![0, 1]);
        // For 2x ≤ 0, 3x ≤ 0 the bound 0 is attained at x = 0 but 2x < 0 is
        // feasible, so neither row is implicit.
        assert!(implicit_equalities(&sys4()).unwrap().is_empty());
    }

    #[test]
    fn affine_hull_examples() {
        assert_eq!(affine_hull(&sys2()).unwrap().dim(), 2);
        let line = LinearSystem::from_rows(&[vec![1, 1], vec![-1, -1]], &[1, -1]).unwrap();
        let hull = affine_hull(&line).unwrap();
        assert_eq!(hull.dim(), 1);
        assert!(hull.contains(&[rat_int(1), rat_int(0)]));
        assert!(!hull.contains(&[rat_int(0), rat_int(0)]));
    }

    #[test]
    fn face_from_tight_examples() {
        let f = face_from_tight(&sys2(), &[0, 1]).unwrap();
        assert_eq!(f.tight_set, vec![0, 1]);
        assert_eq!(f.dim, 0);
        let p = f.feasible_point().unwrap().unwrap();
        assert_eq!(p, vec![rat_int(0), rat_int(3)]);

        let whole = face_from_tight(&sys2(), &[]).unwrap();
        assert!(whole.tight_set.is_empty());
        assert_eq!(whole.dim, 2);

        let v = face_from_tight(&sys3(), &[0, 1]).unwrap();
        let p = v.feasible_point().unwrap().unwrap();
        assert_eq!(p, vec![rat_int(1), rat_int(3)]);
    }

    #[test]
    fn face_closure_is_idempotent() {
        for sys in [sys2(), sys3()] {
            for f in enumerate_faces(&sys).unwrap() {
                let again = face_from_tight(&sys, &f.tight_set).unwrap();
                assert_eq!(again.tight_set, f.tight_set);
                assert_eq!(again.dim, f.dim);
            }
        }
    }

    #[test]
    fn face_counts() {
        assert_eq!(enumerate_faces(&sys2()).unwrap().len(), 7);
        assert_eq!(enumerate_faces(&sys3()).unwrap().len(), 9);
        let halfline = LinearSystem::from_rows(&[vec![1]], &[1]).unwrap();
        assert_eq!(enumerate_faces(&halfline).unwrap().len(), 2);
    }

    #[test]
    fn down_face_examples() {
        let vertex = face_from_tight(&sys2(), &[0, 1]).unwrap();
        let ups = down_faces(&vertex).unwrap();
        assert_eq!(ups.len(), 2);
        for g in &ups {
            assert_eq!(g.dim, 1);
            assert!(g.tight_set.iter().all(|i| vertex.tight_set.contains(i)));
        }
        let whole = face_from_tight(&sys2(), &[]).unwrap();
        assert!(down_faces(&whole).unwrap().is_empty());

        let v3 = face_from_tight(&sys3(), &[0, 1]).unwrap();
        assert_eq!(down_faces(&v3).unwrap().len(), 2);
    }

    #[test]
    fn integrality_examples() {
        assert!(is_integral(&sys2()).unwrap());
        assert!(is_integral(&sys3()).unwrap());
        let shifted = shift_in(&sys3(), 0, &int(1)).unwrap();
        let (ok, witness) = integrality_check(&shifted).unwrap();
        assert!(!ok);
        // The fractional vertex (2/3, 3).
        let w = witness.unwrap();
        let p = w.feasible_point().unwrap().unwrap();
        assert_eq!(p, vec![crate::arith::rat(2, 3), rat_int(3)]);
    }

    #[test]
    fn recession_examples() {
        assert!(recession_generators(&sys2()).unwrap().is_empty());
        let orthant = LinearSystem::from_rows(&[vec![-1, 0], vec![0, -1]], &[0, 0]).unwrap();
        let rays = recession_generators(&orthant).unwrap();
        assert_eq!(rays, vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let line = LinearSystem::from_rows(&[vec![1, 1], vec![-1, -1]], &[1, -1]).unwrap();
        let gens = recession_generators(&line).unwrap();
        assert_eq!(gens.len(), 2);
        assert!(gens.contains(&vec![int(1), int(-1)]));
        assert!(gens.contains(&vec![int(-1), int(1)]));
    }

    #[test]
    fn degeneracy_examples() {
        assert!(is_non_degenerate(&sys2()).unwrap());
        assert!(is_non_degenerate(&sys3()).unwrap());
        // Unit square with the redundant x₁+x₂ ≤ 2: three tight rows at (1,1).
        let square = LinearSystem::from_rows(
            &[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![1, 1]],
            &[1, 1, 0, 0, 2],
        )
        .unwrap();
        assert!(!is_non_degenerate(&square).unwrap());
        // An antiparallel pair alone is not degeneracy.
        let seg = LinearSystem::from_rows(&[vec![1, 1], vec![-1, -1], vec![1, -1]], &[1, -1, 0])
            .unwrap();
        let rep = degeneracy_report(&seg).unwrap();
        assert!(rep.non_degenerate);
        assert!(rep.collapse_fired);
    }

    #[test]
    fn faceted_examples() {
        assert!(is_faceted(&sys2()).unwrap());
        let doubled = LinearSystem::from_rows(&[vec![2, 2], vec![-1, 0], vec![0, -1]], &[6, 0, 0])
            .unwrap();
        let rep = faceted_report(&doubled).unwrap();
        assert_eq!(rep.non_primitive_row, Some(0));
        assert!(!rep.is_faceted());
        let rep4 = faceted_report(&sys4()).unwrap();
        assert!(!rep4.is_faceted());
        assert!(rep4.redundant_row.is_some());
    }

    #[test]
    fn shift_in_examples() {
        let s = shift_in(&sys2(), 0, &int(1)).unwrap();
        assert_eq!(s.b, vec![int(2), int(0), int(0)]);
        assert!(shift_in(&sys2(), 0, &int(0)).is_err());
        assert!(shift_in(&sys2(), 9, &int(1)).is_err());
    }
}
