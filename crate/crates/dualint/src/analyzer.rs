//! Top-level dual-integrality analysis: TD-in-L certification and
//! refutation, exact TDI decisions for non-degenerate systems, near-TDI
//! sampling, and the two-condition characterization scan.

use std::collections::BTreeMap;

use crate::arith::{int, int_to_rat, Int, Rat};
use crate::cone::{is_l_gsc_with, is_z_gsc_with, GscLimits, GscOutcome};
use crate::diophantine::solve_in_l;
use crate::error::Error;
use crate::lattice::{find_integer_point, PointSearch};
use crate::lp;
use crate::lspec::LSpec;
use crate::matrix::IntMat;
use crate::polyhedron::{
    down_faces, enumerate_faces, implicit_equalities, is_integral, is_non_degenerate, Face,
    LinearSystem,
};
use crate::scan::{find_first, WeightBox};
use crate::tilt::{resiliency_profile, tilt_constraint, tilt_solvable, ResiliencyProfile, TiltConstraint};
use num_traits::Signed;

/// Window cap handed to the lattice search when probing dual faces for
/// integer points; generous enough that desk-scale polytopes are decided
/// exactly, finite so unbounded faces terminate.
pub const DUAL_POINT_WINDOW: u64 = 10_000;

/// Window cap for the scaled-integer witness search inside
/// [`dual_has_l_point`].
const WITNESS_WINDOW: u64 = 4_096;

/// The property a verdict speaks about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    Tdi,
    NearTdi,
    Tdd,
    TdInL(LSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Certified,
    Refuted,
    Undecided,
}

/// Machine-checkable evidence attached to a verdict.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// Sufficient-condition evidence: the domain is closed under q-division
    /// for all q ≤ p, the implicit-equality rows pass the generating-set
    /// check, and the system is 1/p-resilient.
    DivisionResiliency {
        p: Int,
        gsc: GscOutcome,
        profile: ResiliencyProfile,
    },
    /// Exact two-condition TDI evidence for non-degenerate systems.
    NondegenerateTdi {
        gsc: GscOutcome,
        profile: ResiliencyProfile,
    },
    /// A weight whose optimal dual face misses the requested domain.
    BadWeight(BadWeight),
    /// Search bounds exhausted without a decision.
    Exhausted {
        weight_box: u64,
        primes: Vec<u64>,
        note: String,
    },
    /// The precondition of the exact TDI decision failed.
    Degenerate { reason: String },
    /// Clutter evidence: ideal, and every member–blocker intersection size
    /// minus one is zero or a power of two, which covers all weights.
    ClutterIntersection {
        max_sb: u64,
        all_in_p: bool,
        binary: bool,
        ideal: bool,
        weight_box: u64,
    },
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub property: Property,
    pub status: Status,
    pub certificate: Certificate,
}

/// Bounds for weight scans and witness searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Scan all admissible integer weights with `‖w‖∞ ≤ weight_box`.
    pub weight_box: u64,
    /// Primes sampled by the near-TDI scan.
    pub prime_sample: Vec<u64>,
    /// Largest denominator tried by the in-polyhedron witness search.
    pub denominator_cap: u64,
}

impl SearchBudget {
    pub fn new(weight_box: u64, prime_sample: Vec<u64>, denominator_cap: u64) -> Result<Self, Error> {
        if weight_box == 0 {
            return Err(Error::usage("weight box bound must be at least 1"));
        }
        if denominator_cap == 0 {
            return Err(Error::usage("denominator cap must be at least 1"));
        }
        for &p in &prime_sample {
            if !crate::arith::is_prime(p) {
                return Err(Error::usage(format!("prime sample contains the non-prime {p}")));
            }
        }
        let mut prime_sample = prime_sample;
        prime_sample.sort_unstable();
        prime_sample.dedup();
        Ok(SearchBudget { weight_box, prime_sample, denominator_cap })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { weight_box: 2, prime_sample: vec![2, 3], denominator_cap: 16 }
    }
}

/// A refutation witness: an admissible integer weight whose optimal dual
/// face contains no point over the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadWeight {
    pub w: Vec<Int>,
    pub lspec: LSpec,
    /// Tight rows of the optimal primal face; together with `w` they pin
    /// down the dual face `{y ≥ 0 : Mᵀy = w, yᵢ = 0 off the tight set}`.
    pub tight_rows: Vec<usize>,
}

fn require_feasible(sys: &LinearSystem) -> Result<(), Error> {
    match lp::Program::from_system(sys).feasible_point()? {
        Some(_) => Ok(()),
        None => Err(Error::InfeasibleSystem),
    }
}

fn property_for(l: &LSpec) -> Property {
    match l {
        LSpec::Integers => Property::Tdi,
        LSpec::Primes(s) if s.len() == 1 && s.contains(&2) => Property::Tdd,
        _ => Property::TdInL(l.clone()),
    }
}

/// Equality system of the dual optimal face's affine hull,
/// `{y : Mᵀy = w, yᵢ = 0 for i ∉ tight}`, over `y ∈ R^m`.
pub(crate) fn dual_hull_rows(sys: &LinearSystem, w: &[Int], tight: &[usize]) -> (IntMat, Vec<Int>) {
    let m = sys.nrows();
    let n = sys.nvars();
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(n + m);
    let mut rhs: Vec<Int> = Vec::with_capacity(n + m);
    for j in 0..n {
        rows.push((0..m).map(|i| sys.m.get(i, j).clone()).collect());
        rhs.push(w[j].clone());
    }
    for i in 0..m {
        if !tight.contains(&i) {
            let mut e = vec![Int::from(0); m];
            e[i] = Int::from(1);
            rows.push(e);
            rhs.push(Int::from(0));
        }
    }
    (IntMat::from_int_rows(&rows, m), rhs)
}

/// The dual optimal face itself as a program over `y ≥ 0`, scaled by `d`:
/// `{z ≥ 0 : Mᵀz = d·w, zᵢ = 0 off tight}`.
fn dual_face_program(sys: &LinearSystem, w: &[Int], tight: &[usize], d: u64) -> lp::Program {
    let m = sys.nrows();
    let (a, c) = dual_hull_rows(sys, w, tight);
    let mut prog = lp::Program { n: m, constraints: Vec::new(), nonneg: vec![true; m] };
    let scale = int(d as i64);
    for (i, rhs) in c.iter().enumerate() {
        prog.add_int_row(&a.row_vec(i), lp::Relation::Eq, int_to_rat(&(rhs * &scale)));
    }
    prog
}

pub(crate) fn optimal_face_opt(sys: &LinearSystem, w_rat: &[Rat]) -> Result<Option<Face>, Error> {
    match lp::optimal_face(sys, w_rat) {
        Ok(f) => Ok(Some(f)),
        Err(Error::InadmissibleWeight) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Result of [`dual_has_l_point`]. The decision is exact; the witness is a
/// best effort within the denominator cap.
#[derive(Clone, Debug)]
pub struct DualLPoint {
    /// Does the optimal dual face contain a point over the domain?
    pub has_point: bool,
    /// A point of the dual face (nonnegative, complementary) over the
    /// domain, when the bounded search found one.
    pub witness: Option<Vec<Rat>>,
    /// A domain point of the face's affine hull; kept when no in-face
    /// witness was found so the decision stays checkable.
    pub affine_point: Option<Vec<Rat>>,
    /// Tight rows of the optimal primal face.
    pub tight_rows: Vec<usize>,
    /// Set when `has_point` but the witness search exhausted its cap.
    pub note: Option<String>,
}

/// Decides whether the dual LP for weight `w` has an optimal solution with
/// all entries in `l`, by solving the affine-hull equality system over the
/// domain (dense domains meet a rational affine subspace iff they meet its
/// defining equations). Also attempts to produce an explicit optimal dual
/// solution over `l` by scanning scaled integer points of the dual face
/// with denominators up to `denominator_cap`.
pub fn dual_has_l_point(
    sys: &LinearSystem,
    w: &[Int],
    l: &LSpec,
    denominator_cap: u64,
) -> Result<DualLPoint, Error> {
    if !l.is_heavy() {
        return Err(Error::usage(
            "integer-domain duals need bounded enumeration; use the TDI-at-weight check",
        ));
    }
    if w.len() != sys.nvars() {
        return Err(Error::dim("weight length does not match the variable count"));
    }
    let w_rat: Vec<Rat> = w.iter().map(int_to_rat).collect();
    let face = lp::optimal_face(sys, &w_rat)?;
    let (a, c) = dual_hull_rows(sys, w, &face.tight_set);
    let affine = solve_in_l(&a, &c, l)?;
    let Some(affine_point) = affine else {
        return Ok(DualLPoint {
            has_point: false,
            witness: None,
            affine_point: None,
            tight_rows: face.tight_set,
            note: None,
        });
    };
    if affine_point.iter().all(|v| !v.is_negative()) {
        return Ok(DualLPoint {
            has_point: true,
            witness: Some(affine_point.clone()),
            affine_point: Some(affine_point),
            tight_rows: face.tight_set,
            note: None,
        });
    }
    for d in 1..=denominator_cap {
        if !l.admits_denominator(&int(d as i64)) {
            continue;
        }
        let prog = dual_face_program(sys, w, &face.tight_set, d);
        if let PointSearch::Found(z) = find_integer_point(&prog, WITNESS_WINDOW)? {
            let den = int(d as i64);
            let y: Vec<Rat> = z.iter().map(|zi| Rat::new(zi.clone(), den.clone())).collect();
            return Ok(DualLPoint {
                has_point: true,
                witness: Some(y),
                affine_point: Some(affine_point),
                tight_rows: face.tight_set,
                note: None,
            });
        }
    }
    Ok(DualLPoint {
        has_point: true,
        witness: None,
        affine_point: Some(affine_point),
        tight_rows: face.tight_set,
        note: Some("witness-in-polyhedron pending".into()),
    })
}

/// Outcome of the integer-domain dual check at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdiAt {
    /// An integer optimal dual solution.
    Integral(Vec<Int>),
    /// The dual optimal face provably contains no integer point.
    NoIntegerPoint,
    /// The face is unbounded (or very large) and the window cap ran out.
    BudgetExhausted,
}

impl TdiAt {
    /// Three-valued reading: `Some(true)`, `Some(false)`, or `None` when
    /// the search was budget-limited.
    pub fn holds(&self) -> Option<bool> {
        match self {
            TdiAt::Integral(_) => Some(true),
            TdiAt::NoIntegerPoint => Some(false),
            TdiAt::BudgetExhausted => None,
        }
    }
}

/// Does the dual LP for weight `w` have an integer optimal solution?
/// Exact whenever the dual optimal face is a polytope of window size below
/// [`DUAL_POINT_WINDOW`]; budget-limited (never guessing) otherwise.
pub fn check_tdi_at(sys: &LinearSystem, w: &[Int]) -> Result<TdiAt, Error> {
    check_tdi_at_with(sys, w, DUAL_POINT_WINDOW)
}

pub fn check_tdi_at_with(sys: &LinearSystem, w: &[Int], window_cap: u64) -> Result<TdiAt, Error> {
    if w.len() != sys.nvars() {
        return Err(Error::dim("weight length does not match the variable count"));
    }
    let w_rat: Vec<Rat> = w.iter().map(int_to_rat).collect();
    let face = lp::optimal_face(sys, &w_rat)?;
    let prog = dual_face_program(sys, w, &face.tight_set, 1);
    Ok(match find_integer_point(&prog, window_cap)? {
        PointSearch::Found(z) => TdiAt::Integral(z),
        PointSearch::Empty => TdiAt::NoIntegerPoint,
        PointSearch::BudgetExhausted => TdiAt::BudgetExhausted,
    })
}

/// Generating-set check of the implicit-equality rows over the domain.
fn equality_rows_gsc(sys: &LinearSystem, l: &LSpec) -> Result<GscOutcome, Error> {
    let eq = implicit_equalities(sys)?;
    let rows: Vec<Vec<Int>> = eq.iter().map(|&i| sys.m.row_vec(i)).collect();
    let a = IntMat::from_int_rows(&rows, sys.nvars());
    match l {
        LSpec::Integers => is_z_gsc_with(&a, &GscLimits::default()),
        LSpec::Primes(_) => is_l_gsc_with(&a, l, &GscLimits::default()),
    }
}

/// Sufficient-condition certification of TD in `l`: with `p` the largest
/// integer such that the domain is closed under division by every
/// `q ∈ {2..p}`, certify when the implicit-equality rows pass the
/// generating-set check and the system is 1/p-resilient. Never refutes.
pub fn certify_td_in_l(sys: &LinearSystem, l: &LSpec) -> Result<Verdict, Error> {
    require_feasible(sys)?;
    let p = l.division_closure_bound();
    let gsc = equality_rows_gsc(sys, l)?;
    let profile = resiliency_profile(sys, &int(p as i64))?;
    let holds = gsc.holds && profile.integral && profile.p_resilient;
    Ok(Verdict {
        property: property_for(l),
        status: if holds { Status::Certified } else { Status::Undecided },
        certificate: Certificate::DivisionResiliency { p: int(p as i64), gsc, profile },
    })
}

/// Exact TDI decision for non-degenerate systems: TDI holds iff the
/// implicit-equality rows generate their cone integrally and the system is
/// resilient. Degenerate input yields Undecided with the reason.
pub fn decide_tdi_nondegenerate(sys: &LinearSystem) -> Result<Verdict, Error> {
    require_feasible(sys)?;
    if !is_non_degenerate(sys)? {
        return Ok(Verdict {
            property: Property::Tdi,
            status: Status::Undecided,
            certificate: Certificate::Degenerate {
                reason: "system is degenerate; the exact TDI characterization needs \
                         linearly independent tight rows at minimal faces"
                    .into(),
            },
        });
    }
    let gsc = equality_rows_gsc(sys, &LSpec::Integers)?;
    let profile = resiliency_profile(sys, &int(1))?;
    let holds = gsc.holds && profile.resilient;
    Ok(Verdict {
        property: Property::Tdi,
        status: if holds { Status::Certified } else { Status::Refuted },
        certificate: Certificate::NondegenerateTdi { gsc, profile },
    })
}

/// Scans admissible integer weights in the box `‖w‖∞ ≤ budget.weight_box`
/// (lexicographic order) and returns the first one whose optimal dual face
/// has no point over the domain. Deterministic regardless of parallelism.
pub fn search_bad_weight(
    sys: &LinearSystem,
    l: &LSpec,
    budget: &SearchBudget,
) -> Result<Option<BadWeight>, Error> {
    require_feasible(sys)?;
    let bx = WeightBox::symmetric(sys.nvars(), budget.weight_box);
    let total = bx
        .count()
        .ok_or(Error::ResourceLimit { limit: "weight box point count", cap: u64::MAX })?;
    let probe = |idx: u64| -> Result<Option<BadWeight>, Error> {
        let w = bx.decode(idx);
        let w_rat: Vec<Rat> = w.iter().map(int_to_rat).collect();
        let Some(face) = optimal_face_opt(sys, &w_rat)? else {
            return Ok(None);
        };
        let bad = match l {
            LSpec::Integers => {
                let prog = dual_face_program(sys, &w, &face.tight_set, 1);
                matches!(find_integer_point(&prog, DUAL_POINT_WINDOW)?, PointSearch::Empty)
            }
            LSpec::Primes(_) => {
                let (a, c) = dual_hull_rows(sys, &w, &face.tight_set);
                solve_in_l(&a, &c, l)?.is_none()
            }
        };
        Ok(bad.then(|| BadWeight { w, lspec: l.clone(), tight_rows: face.tight_set }))
    };
    find_first(total, probe)
}

/// Single tilt-solvability instance inside a characterization report.
#[derive(Clone, Debug)]
pub struct TiltCase {
    pub face_tight: Vec<usize>,
    pub down_tight: Vec<usize>,
    pub w: Vec<Int>,
    /// True when `w` is the canonical face weight (the tight-row sum)
    /// rather than a box weight.
    pub canonical: bool,
    pub constraint: TiltConstraint,
    pub solvable: bool,
    pub witness: Option<Vec<Rat>>,
}

/// Whether condition (ii) requires every down-face to pass, or one
/// solvable down-face per (face, weight) suffices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DownFaceMode {
    All,
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MainCharStatus {
    /// Both conditions passed on everything tried; consistency within the
    /// budget, not a certificate.
    Consistent,
    /// Condition (i) failed: the implicit-equality rows are not a
    /// generating set over the domain.
    RefutedGsc,
    /// Condition (ii) failed: indices into `cases` of the refutation.
    RefutedTilt(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct MainCharReport {
    pub lspec: LSpec,
    pub mode: DownFaceMode,
    pub weight_box: u64,
    pub gsc: GscOutcome,
    pub cases: Vec<TiltCase>,
    pub status: MainCharStatus,
}

/// Runs both conditions of the TD-in-L characterization: (i) the
/// generating-set check of the implicit-equality rows, and (ii) tilt
/// solvability per face and down-face — at the canonical face weight (the
/// sum of its tight rows, whose optimal face is exactly that face) and at
/// every admissible box weight, grouped by optimal face.
pub fn check_main_char(
    sys: &LinearSystem,
    l: &LSpec,
    budget: &SearchBudget,
    mode: DownFaceMode,
) -> Result<MainCharReport, Error> {
    if !l.is_heavy() {
        return Err(Error::usage(
            "the characterization applies to dense domains; use the exact TDI paths for integers",
        ));
    }
    require_feasible(sys)?;
    let gsc = equality_rows_gsc(sys, l)?;

    // Group the admissible box weights by the tight set of their optimal face.
    let bx = WeightBox::symmetric(sys.nvars(), budget.weight_box);
    let total = bx
        .count()
        .ok_or(Error::ResourceLimit { limit: "weight box point count", cap: u64::MAX })?;
    let mut by_face: BTreeMap<Vec<usize>, Vec<Vec<Int>>> = BTreeMap::new();
    for idx in 0..total {
        let w = bx.decode(idx);
        let w_rat: Vec<Rat> = w.iter().map(int_to_rat).collect();
        if let Some(face) = optimal_face_opt(sys, &w_rat)? {
            by_face.entry(face.tight_set).or_default().push(w);
        }
    }

    let mut cases: Vec<TiltCase> = Vec::new();
    let mut failing: Vec<usize> = Vec::new();
    for face in enumerate_faces(sys)? {
        let downs = down_faces(&face)?;
        if downs.is_empty() {
            continue;
        }
        let canonical: Vec<Int> = (0..sys.nvars())
            .map(|j| face.tight_set.iter().map(|&i| sys.m.get(i, j)).sum())
            .collect();
        let canon_rat: Vec<Rat> = canonical.iter().map(int_to_rat).collect();
        let sel = lp::optimal_face(sys, &canon_rat)?;
        if sel.tight_set != face.tight_set {
            return Err(Error::internal("canonical face weight did not select its face"));
        }
        let mut weights: Vec<(Vec<Int>, bool)> = vec![(canonical, true)];
        if let Some(ws) = by_face.get(&face.tight_set) {
            weights.extend(ws.iter().map(|w| (w.clone(), false)));
        }
        for (w, is_canonical) in weights {
            let w_rat: Vec<Rat> = w.iter().map(int_to_rat).collect();
            let mut group: Vec<usize> = Vec::new();
            for fplus in &downs {
                let constraint = tilt_constraint(sys, &w_rat, &face, fplus)?;
                let (solvable, witness) = tilt_solvable(&constraint, l);
                group.push(cases.len());
                cases.push(TiltCase {
                    face_tight: face.tight_set.clone(),
                    down_tight: fplus.tight_set.clone(),
                    w: w.clone(),
                    canonical: is_canonical,
                    constraint,
                    solvable,
                    witness,
                });
            }
            match mode {
                DownFaceMode::All => {
                    failing.extend(group.iter().copied().filter(|&k| !cases[k].solvable));
                }
                DownFaceMode::Any => {
                    if group.iter().all(|&k| !cases[k].solvable) {
                        failing.extend(group);
                    }
                }
            }
        }
    }

    let status = if !gsc.holds {
        MainCharStatus::RefutedGsc
    } else if failing.is_empty() {
        MainCharStatus::Consistent
    } else {
        MainCharStatus::RefutedTilt(failing)
    };
    Ok(MainCharReport { lspec: l.clone(), mode, weight_box: budget.weight_box, gsc, cases, status })
}

/// Near-TDI sampling: scans for a bad weight over each sampled prime's
/// domain. Any hit refutes near-TDI; exhausting the sample leaves the
/// property undecided (it quantifies over all primes — certification goes
/// through resiliency instead).
pub fn near_tdi_sample(sys: &LinearSystem, budget: &SearchBudget) -> Result<Verdict, Error> {
    require_feasible(sys)?;
    if budget.prime_sample.is_empty() {
        return Err(Error::usage("near-TDI sampling needs at least one prime"));
    }
    for &p in &budget.prime_sample {
        let l = LSpec::primes([p])?;
        if let Some(bad) = search_bad_weight(sys, &l, budget)? {
            let tdi = decide_tdi_nondegenerate(sys)?;
            if tdi.status == Status::Certified {
                return Err(Error::internal(
                    "hierarchy violation: certified TDI system refuted by a near-TDI scan",
                ));
            }
            return Ok(Verdict {
                property: Property::NearTdi,
                status: Status::Refuted,
                certificate: Certificate::BadWeight(bad),
            });
        }
    }
    Ok(Verdict {
        property: Property::NearTdi,
        status: Status::Undecided,
        certificate: Certificate::Exhausted {
            weight_box: budget.weight_box,
            primes: budget.prime_sample.clone(),
            note: "no refutation in the sampled primes and weight box; \
                   near-TDI quantifies over all primes"
                .into(),
        },
    })
}

/// Cross-checks the property hierarchy on one system: certified TDI must
/// not coexist with a near-TDI refutation or a fractional polyhedron.
#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub tdi: Verdict,
    pub near: Verdict,
    pub integral: bool,
}

pub fn hierarchy_check(sys: &LinearSystem, budget: &SearchBudget) -> Result<HierarchyReport, Error> {
    let tdi = decide_tdi_nondegenerate(sys)?;
    let near = near_tdi_sample(sys, budget)?;
    let integral = is_integral(sys)?;
    if tdi.status == Status::Certified {
        if near.status == Status::Refuted {
            return Err(Error::internal("hierarchy violation: TDI certified but near-TDI refuted"));
        }
        if !integral {
            return Err(Error::internal("hierarchy violation: TDI certified on a fractional polyhedron"));
        }
    }
    Ok(HierarchyReport { tdi, near, integral })
}
