//! Tilt constraints, braces, and the resiliency certificates.
//!
//! Given a face `F` supported by the hyperplane `wᵀx = τ` and a down-face
//! `F⁺` (one dimension up), the tilt constraint is the single linear equation
//!
//! ```text
//!   Σ [(bᵢ − rowᵢ(M)ρ) / (τ − wᵀρ)] · uᵢ = 1,   i ∈ I(F)\I(F⁺),
//! ```
//!
//! for any ρ in the affine hull of `F⁺` but not of `F`; the equation does not
//! depend on the choice of ρ. Whether it has a solution with entries in a
//! fractional ring decides total dual integrality properties of the system.
//!
//! A brace is a cheap certificate producing such solutions: an integer point
//! ρ of `aff(F⁺)` that misses one tight row `î` of `F` by an integer gap.
//! Resiliency (all rows can be shifted inward by some s ∈ [p] keeping the
//! polyhedron integral) guarantees braces with gaps ≤ p exist for every
//! face pair, which is how the certificates chain together.

use crate::arith::{
    denominator_lcm, gcd_all, int_to_rat, rat_to_int, Int, Rat,
};
use crate::diophantine::{single_eq_solvable_in_l, solve_integer};
use crate::error::Error;
use crate::lattice::{find_integer_point, PointSearch};
use crate::lspec::LSpec;
use crate::lp::{self, LpOutcome, Relation};
use crate::matrix::{dot_int_rat, dot_rat, rank_rat, solve_rat};
use crate::polyhedron::{integrality_check, recession_generators, shift_in, Face, LinearSystem};
use num_traits::{One, Signed, Zero};

/// The canonical integer form `Σ coeffᵢ·uᵢ = rhs` of a tilt constraint:
/// denominators cleared, divided by the overall gcd, right-hand side
/// positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltConstraint {
    /// Rows of `I(F)\I(F⁺)`, ascending; the variables of the equation.
    pub index_set: Vec<usize>,
    /// Integer coefficients parallel to `index_set`; at least one nonzero.
    pub coeff: Vec<Int>,
    /// Positive integer right-hand side.
    pub rhs: Int,
    pub provenance: TiltProvenance,
}

/// The data the constraint was built from, kept for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltProvenance {
    pub w: Vec<Rat>,
    pub tau: Rat,
    pub rho: Vec<Rat>,
    pub f_tight: Vec<usize>,
    pub fplus_tight: Vec<usize>,
}

/// An `(F, F⁺)`-brace: an integer point of `aff(F⁺)` that misses the tight
/// row `î` of `F` by a positive integer gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Brace {
    pub i_hat: usize,
    pub rho: Vec<Int>,
    pub gap: Int,
}

/// Checks that `fplus` is a down-face of `f` within `sys` and returns
/// `I(F)\I(F⁺)` in ascending order.
pub(crate) fn down_face_diff(sys: &LinearSystem, f: &Face, fplus: &Face) -> Result<Vec<usize>, Error> {
    if f.system != *sys || fplus.system != *sys {
        return Err(Error::usage("faces must belong to the given system"));
    }
    if f.is_empty() || fplus.is_empty() {
        return Err(Error::usage("tilt machinery needs nonempty faces"));
    }
    if fplus.dim != f.dim + 1 || !fplus.tight_set.iter().all(|i| f.tight_set.contains(i)) {
        return Err(Error::usage("second face is not a down-face of the first"));
    }
    let diff: Vec<usize> =
        f.tight_set.iter().copied().filter(|i| !fplus.tight_set.contains(i)).collect();
    if diff.is_empty() {
        return Err(Error::internal("down-face with identical tight set"));
    }
    Ok(diff)
}

/// Optimal value of `max wᵀx` over the system, which is the only `τ` for
/// which `wᵀx = τ` can support a face.
fn supporting_value(sys: &LinearSystem, w: &[Rat]) -> Result<Rat, Error> {
    if w.iter().all(Zero::is_zero) {
        return Err(Error::usage("the zero weight supports no hyperplane"));
    }
    match lp::solve(sys, w)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded { .. } => Err(Error::InadmissibleWeight),
        LpOutcome::Infeasible => Err(Error::InfeasibleSystem),
    }
}

/// Confirms `F ⊆ {wᵀx = τ}`: the weight must be constant at `τ` on the
/// face, i.e. agree at one point and be spanned by the tight rows.
fn check_supports(sys: &LinearSystem, w: &[Rat], tau: &Rat, f: &Face) -> Result<(), Error> {
    let x0 = f
        .feasible_point()?
        .ok_or_else(|| Error::internal("nonempty face without a feasible point"))?;
    if &dot_rat(w, &x0) != tau {
        return Err(Error::usage("hyperplane does not support the face"));
    }
    let mut rows: Vec<Vec<Rat>> = f
        .tight_set
        .iter()
        .map(|&i| sys.m.row(i).iter().map(int_to_rat).collect())
        .collect();
    let base = rank_rat(&rows);
    rows.push(w.to_vec());
    if rank_rat(&rows) != base {
        return Err(Error::usage("hyperplane does not support the face"));
    }
    Ok(())
}

/// A rational point of `aff(F⁺)\aff(F)`, preferring integer coordinates when
/// the hull's equality system has an integer solution. Walking the kernel
/// basis from any particular solution must escape `aff(F)`, because
/// otherwise the whole hull of `F⁺` would sit inside it.
fn pick_rho(sys: &LinearSystem, fplus: &Face, diff: &[usize]) -> Result<Vec<Rat>, Error> {
    let escapes = |x: &[Rat]| -> bool {
        diff.iter().any(|&i| sys.row_value_at(i, x) != int_to_rat(&sys.b[i]))
    };
    let (a, b) = fplus.equality_system();

    if let Some(sol) = solve_integer(&a, &b)? {
        let base: Vec<Rat> = sol.particular.iter().map(int_to_rat).collect();
        let mut candidates = vec![base.clone()];
        for k in &sol.kernel {
            candidates
                .push(base.iter().zip(k).map(|(x, d)| x + int_to_rat(d)).collect::<Vec<Rat>>());
        }
        if let Some(rho) = candidates.into_iter().find(|c| escapes(c)) {
            return Ok(rho);
        }
        return Err(Error::internal("affine hull of the down-face collapsed into the face"));
    }

    let rat_rows: Vec<Vec<Rat>> =
        a.iter_rows().map(|r| r.iter().map(int_to_rat).collect()).collect();
    let rat_rhs: Vec<Rat> = b.iter().map(int_to_rat).collect();
    let sol = solve_rat(&rat_rows, &rat_rhs)
        .ok_or_else(|| Error::internal("nonempty face with unsolvable equality system"))?;
    let mut candidates = vec![sol.particular.clone()];
    for k in &sol.kernel {
        candidates.push(sol.particular.iter().zip(k).map(|(x, d)| x + d).collect::<Vec<Rat>>());
    }
    candidates
        .into_iter()
        .find(|c| escapes(c))
        .ok_or_else(|| Error::internal("affine hull of the down-face collapsed into the face"))
}

/// Builds the `(w, F, F⁺)`-tilt constraint. `w` must define a supporting
/// hyperplane of `F` (its maximum over the system, attained on all of `F`)
/// and `fplus` must be a down-face of `f`.
pub fn tilt_constraint(
    sys: &LinearSystem,
    w: &[Rat],
    f: &Face,
    fplus: &Face,
) -> Result<TiltConstraint, Error> {
    let diff = down_face_diff(sys, f, fplus)?;
    let rho = pick_rho(sys, fplus, &diff)?;
    tilt_constraint_with_rho(sys, w, f, fplus, &rho)
}

/// Same as [`tilt_constraint`] with the hull point `rho` supplied by the
/// caller; the canonical form is independent of this choice.
pub fn tilt_constraint_with_rho(
    sys: &LinearSystem,
    w: &[Rat],
    f: &Face,
    fplus: &Face,
    rho: &[Rat],
) -> Result<TiltConstraint, Error> {
    let diff = down_face_diff(sys, f, fplus)?;
    let tau = supporting_value(sys, w)?;
    check_supports(sys, w, &tau, f)?;

    if !fplus.affine_hull().contains(rho) {
        return Err(Error::usage("rho must lie in the affine hull of the down-face"));
    }
    let in_aff_f = diff.iter().all(|&i| sys.row_value_at(i, rho) == int_to_rat(&sys.b[i]));
    if in_aff_f {
        return Err(Error::usage("rho must escape the affine hull of the face"));
    }

    let denom = &tau - &dot_rat(w, rho);
    if denom.is_zero() {
        // Happens exactly when w is constant on aff(F⁺), i.e. its optimal
        // face already contains the down-face; such a weight supports F
        // but cannot separate it within F⁺.
        return Err(Error::usage(
            "weight is constant on the down-face; pick one whose optimum selects the face exactly",
        ));
    }

    let coeff_rat: Vec<Rat> = diff
        .iter()
        .map(|&i| (int_to_rat(&sys.b[i]) - sys.row_value_at(i, rho)) / &denom)
        .collect();
    let scale = denominator_lcm(&coeff_rat);
    let mut coeff: Vec<Int> = coeff_rat
        .iter()
        .map(|c| {
            rat_to_int(&(c * int_to_rat(&scale)))
                .expect("scaling by the denominator lcm clears every denominator")
        })
        .collect();
    let mut rhs = scale;
    let mut all = coeff.clone();
    all.push(rhs.clone());
    let g = gcd_all(&all);
    for c in &mut coeff {
        *c /= &g;
    }
    rhs /= &g;

    if coeff.iter().all(Zero::is_zero) {
        return Err(Error::internal("tilt constraint lost all coefficients"));
    }
    Ok(TiltConstraint {
        index_set: diff,
        coeff,
        rhs,
        provenance: TiltProvenance {
            w: w.to_vec(),
            tau,
            rho: rho.to_vec(),
            f_tight: f.tight_set.clone(),
            fplus_tight: fplus.tight_set.clone(),
        },
    })
}

/// Does the constraint have a solution with every variable in `l`? Returns
/// the witness when one exists.
pub fn tilt_solvable(t: &TiltConstraint, l: &LSpec) -> (bool, Option<Vec<Rat>>) {
    single_eq_solvable_in_l(&t.coeff, &t.rhs, l)
}

/// Search options for [`find_brace_with`].
#[derive(Clone, Debug)]
pub struct BraceSearchOptions {
    /// Probe the inward slices `row_î·x = b_î − s` for `s = 1..max_gap`.
    /// Disabling leaves only the slack-maximizing path (a diagnostic that
    /// mirrors the textbook construction).
    pub s_search: bool,
    /// Integer values tried per coordinate in the face point searches;
    /// unbounded faces are clipped to this window.
    pub window_cap: u64,
}

impl Default for BraceSearchOptions {
    fn default() -> Self {
        BraceSearchOptions { s_search: true, window_cap: 64 }
    }
}

/// Finds an `(F, F⁺)`-brace with gap ≤ `max_gap`, minimizing the gap and
/// tie-breaking on the smallest row index. Absence within the search budget
/// is a value, not an error.
pub fn find_brace(
    sys: &LinearSystem,
    f: &Face,
    fplus: &Face,
    max_gap: &Int,
) -> Result<Option<Brace>, Error> {
    find_brace_with(sys, f, fplus, max_gap, &BraceSearchOptions::default())
}

pub fn find_brace_with(
    sys: &LinearSystem,
    f: &Face,
    fplus: &Face,
    max_gap: &Int,
    opts: &BraceSearchOptions,
) -> Result<Option<Brace>, Error> {
    if !max_gap.is_positive() {
        return Err(Error::usage("max_gap must be a positive integer"));
    }
    let diff = down_face_diff(sys, f, fplus)?;
    let mut best: Option<Brace> = None;

    for &i_hat in &diff {
        let mut candidate: Option<Brace> = None;

        // Slack-maximizing path: κ = sup{b_î − row_î·x : x ∈ F⁺}. When the
        // supremum is finite, integral, and within reach, an integer point of
        // the maximizing sub-face is a brace with gap κ.
        let row = sys.m.row(i_hat);
        let obj: Vec<Rat> = row.iter().map(|e| -int_to_rat(e)).collect();
        let kappa = match fplus.program().maximize(&obj)? {
            lp::RawOutcome::Optimal { value, .. } => Some(int_to_rat(&sys.b[i_hat]) + value),
            lp::RawOutcome::Unbounded { .. } => None,
            lp::RawOutcome::Infeasible => {
                return Err(Error::internal("nonempty face with infeasible program"))
            }
        };
        if let Some(k) = &kappa {
            if !k.is_positive() {
                return Err(Error::internal("closed tight set admits zero slack off-face"));
            }
            if k.is_integer() && &k.to_integer() <= max_gap {
                let gap = k.to_integer();
                if let Some(rho) = slice_point(sys, fplus, i_hat, &gap, opts.window_cap)? {
                    candidate = Some(Brace { i_hat, rho, gap });
                }
            }
        }

        if opts.s_search {
            let mut ladder_top = max_gap.clone();
            if let Some(k) = &kappa {
                let k_floor = k.to_integer(); // kappa > 0, so floor ≥ 0
                if k_floor < ladder_top {
                    ladder_top = k_floor;
                }
            }
            let mut s = Int::one();
            while s <= ladder_top {
                if candidate.as_ref().is_some_and(|c| c.gap <= s) {
                    break;
                }
                if let Some(rho) = slice_point(sys, fplus, i_hat, &s, opts.window_cap)? {
                    candidate = Some(Brace { i_hat, rho, gap: s.clone() });
                    break;
                }
                s += Int::one();
            }
        }

        if let Some(c) = candidate {
            if best.as_ref().is_none_or(|b| c.gap < b.gap) {
                best = Some(c);
            }
        }
        if best.as_ref().is_some_and(|b| b.gap.is_one()) {
            break;
        }
    }

    if let Some(b) = &best {
        verify_brace(sys, f, fplus, b)?;
    }
    Ok(best)
}

/// Integer point of `F⁺ ∩ {row_î·x = b_î − s}`, if the bounded search finds
/// one.
fn slice_point(
    sys: &LinearSystem,
    fplus: &Face,
    i_hat: usize,
    s: &Int,
    window_cap: u64,
) -> Result<Option<Vec<Int>>, Error> {
    let mut prog = fplus.program();
    prog.add_int_row(sys.m.row(i_hat), Relation::Eq, int_to_rat(&(&sys.b[i_hat] - s)));
    match find_integer_point(&prog, window_cap)? {
        PointSearch::Found(p) => Ok(Some(p)),
        PointSearch::Empty | PointSearch::BudgetExhausted => Ok(None),
    }
}

/// Re-verifies b1–b3 for a brace against the face pair.
fn verify_brace(sys: &LinearSystem, f: &Face, fplus: &Face, brace: &Brace) -> Result<(), Error> {
    let diff = down_face_diff(sys, f, fplus)?;
    if !diff.contains(&brace.i_hat) {
        return Err(Error::internal("brace row not in I(F)\\I(F+)"));
    }
    let rho_rat: Vec<Rat> = brace.rho.iter().map(int_to_rat).collect();
    if !fplus.affine_hull().contains(&rho_rat) {
        return Err(Error::internal("brace point left the down-face hull"));
    }
    let miss = &sys.b[brace.i_hat] - crate::matrix::dot_int(sys.m.row(brace.i_hat), &brace.rho);
    if miss.abs() != brace.gap || brace.gap.is_zero() {
        return Err(Error::internal("brace gap mismatch"));
    }
    Ok(())
}

/// The tilt solution a brace induces: zero on every index except `î`, where
/// `u_î = (τ − wᵀρ)/(b_î − row_î·ρ)`. Requires an integral polyhedron and
/// `f` equal to the optimal face of `w`, which is what makes the value land
/// in rings closed under gap-division.
pub fn brace_to_tilt_solution(
    sys: &LinearSystem,
    w: &[Rat],
    f: &Face,
    fplus: &Face,
    brace: &Brace,
) -> Result<Vec<Rat>, Error> {
    let diff = down_face_diff(sys, f, fplus)?;
    verify_brace(sys, f, fplus, brace).map_err(|_| Error::usage("invalid brace for this face pair"))?;
    if !integrality_check(sys)?.0 {
        return Err(Error::usage("brace-to-solution needs an integral polyhedron"));
    }
    let tau = supporting_value(sys, w)?;
    let optimal = lp::optimal_face(sys, w)?;
    if optimal != *f {
        return Err(Error::usage("the face must be the optimal face of the weight"));
    }

    let denom = int_to_rat(&sys.b[brace.i_hat]) - dot_int_rat(sys.m.row(brace.i_hat), &rho_to_rat(&brace.rho));
    let u_hat = (&tau - &dot_rat(w, &rho_to_rat(&brace.rho))) / denom;

    let mut u = vec![Rat::zero(); diff.len()];
    let pos = diff.iter().position(|&i| i == brace.i_hat).expect("verified membership");
    u[pos] = u_hat;

    // The solution must satisfy the canonical constraint exactly.
    let t = tilt_constraint_with_rho(sys, w, f, fplus, &rho_to_rat(&brace.rho))?;
    let lhs: Rat = t.coeff.iter().zip(&u).map(|(c, ui)| int_to_rat(c) * ui).sum();
    if lhs != int_to_rat(&t.rhs) {
        return Err(Error::internal("brace solution violates its tilt constraint"));
    }
    Ok(u)
}

fn rho_to_rat(rho: &[Int]) -> Vec<Rat> {
    rho.iter().map(int_to_rat).collect()
}

/// Per-row inward-shift integrality profile.
#[derive(Clone, Debug)]
pub struct ResiliencyProfile {
    /// Is the unshifted polyhedron integral?
    pub integral: bool,
    /// Integral and every row keeps integrality under a shift of exactly 1.
    pub resilient: bool,
    /// Integral and every row keeps integrality under some shift in [2]
    /// (meaningful when the profile was computed with `p ≥ 2`).
    pub half_resilient: bool,
    /// Integral and every row has a working shift in [p].
    pub p_resilient: bool,
    /// Least working shift per row, `None` when no shift in [p] works.
    pub shifts: Vec<Option<Int>>,
    /// Rows whose recorded shift empties the polyhedron, which counts as
    /// integral only vacuously.
    pub vacuous: Vec<bool>,
}

/// Finds, for each row, the least `s ∈ [p]` whose inward shift keeps the
/// polyhedron integral. An empty shifted polyhedron is treated as integral
/// (it has no minimal face to violate integrality) and flagged per row.
pub fn resiliency_profile(sys: &LinearSystem, p: &Int) -> Result<ResiliencyProfile, Error> {
    if !p.is_positive() {
        return Err(Error::usage("resiliency order p must be a positive integer"));
    }
    let integral = match integrality_check(sys) {
        Ok((flag, _)) => flag,
        Err(Error::InfeasibleSystem) => true,
        Err(e) => return Err(e),
    };

    let m = sys.nrows();
    let mut shifts: Vec<Option<Int>> = vec![None; m];
    let mut vacuous = vec![false; m];
    for i in 0..m {
        let mut s = Int::one();
        while &s <= p {
            let shifted = shift_in(sys, i, &s)?;
            match integrality_check(&shifted) {
                Ok((true, _)) => {
                    shifts[i] = Some(s);
                    break;
                }
                Ok((false, _)) => {}
                Err(Error::InfeasibleSystem) => {
                    shifts[i] = Some(s);
                    vacuous[i] = true;
                    break;
                }
                Err(e) => return Err(e),
            }
            s += Int::one();
        }
    }

    let all_within = |cap: &Int| -> bool {
        shifts.iter().all(|s| s.as_ref().is_some_and(|v| v <= cap))
    };
    Ok(ResiliencyProfile {
        integral,
        resilient: integral && all_within(&Int::one()),
        half_resilient: integral && all_within(&Int::from(2)),
        p_resilient: integral && shifts.iter().all(Option::is_some),
        shifts,
        vacuous,
    })
}

/// Verdict of the vertex-slack bound test.
#[derive(Clone, Debug)]
pub struct SmallnessReport {
    pub holds: bool,
    /// Why the property fails structurally (not a polytope, not integral).
    pub reason: Option<String>,
    /// Largest slack `bᵢ − rowᵢ(M)·x̄` over vertices `x̄` and rows `i`.
    pub max_slack: Option<Int>,
}

/// Is the polyhedron an integral polytope whose vertex–row slacks are all at
/// most `p`?
pub fn is_p_small(sys: &LinearSystem, p: &Int) -> Result<SmallnessReport, Error> {
    if !p.is_positive() {
        return Err(Error::usage("smallness order p must be a positive integer"));
    }
    let vertices = match crate::polyhedron::minimal_faces(sys) {
        Ok(faces) => faces,
        Err(Error::InfeasibleSystem) => {
            return Ok(SmallnessReport {
                holds: true,
                reason: Some("empty polyhedron (vacuously small)".into()),
                max_slack: None,
            })
        }
        Err(e) => return Err(e),
    };
    if !recession_generators(sys)?.is_empty() {
        return Ok(SmallnessReport {
            holds: false,
            reason: Some("not a polytope (nonzero recession cone)".into()),
            max_slack: None,
        });
    }
    if !integrality_check(sys)?.0 {
        return Ok(SmallnessReport {
            holds: false,
            reason: Some("not an integral polytope".into()),
            max_slack: None,
        });
    }

    let mut max_slack = Int::zero();
    for v in &vertices {
        let x = v
            .feasible_point()?
            .ok_or_else(|| Error::internal("vertex without a feasible point"))?;
        for i in 0..sys.nrows() {
            let slack = int_to_rat(&sys.b[i]) - sys.row_value_at(i, &x);
            let slack = rat_to_int(&slack)
                .ok_or_else(|| Error::internal("integral vertex with fractional slack"))?;
            if slack > max_slack {
                max_slack = slack;
            }
        }
    }
    Ok(SmallnessReport { holds: &max_slack <= p, reason: None, max_slack: Some(max_slack) })
}
