//! Clutters, blockers, idealness, and the covering-system reduction that
//! turns total dual dyadicness of a clutter into a weight scan plus an
//! intersection-size certificate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use crate::analyzer::{
    dual_hull_rows, optimal_face_opt, BadWeight, Certificate, Property, SearchBudget, Status,
    Verdict,
};
use crate::arith::{int, int_to_rat, Int, Rat};
use crate::diophantine::{solve_in_l, solve_integer, SmithSolver};
use crate::error::Error;
use crate::lattice::{find_integer_point, PointSearch};
use crate::lspec::LSpec;
use crate::matrix::IntMat;
use crate::polyhedron::{minimal_faces, Face, LinearSystem};
use crate::scan::{find_first, WeightBox};
use crate::tilt::{down_face_diff, find_brace, Brace};
use num_traits::{Signed, Zero};

/// Ground sets larger than this make exhaustive blocker enumeration
/// unreasonable on a desk machine.
pub const BLOCKER_GROUND_CAP: usize = 12;

/// An antichain of subsets of `{0, .., ground_size-1}`, members sorted
/// lexicographically. The degenerate clutters — no members, or the single
/// empty member — are representable; polyhedral operations reject them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clutter {
    ground_size: usize,
    members: Vec<BTreeSet<usize>>,
}

fn canonical_member_order(members: &mut Vec<BTreeSet<usize>>) {
    members.sort_by(|a, b| {
        let av: Vec<usize> = a.iter().copied().collect();
        let bv: Vec<usize> = b.iter().copied().collect();
        av.cmp(&bv)
    });
    members.dedup();
}

impl Clutter {
    pub fn new(ground_size: usize, members: Vec<BTreeSet<usize>>) -> Result<Self, Error> {
        let mut members = members;
        canonical_member_order(&mut members);
        for s in &members {
            if let Some(&e) = s.iter().find(|&&e| e >= ground_size) {
                return Err(Error::usage(format!(
                    "member element {} exceeds the ground set of size {ground_size}",
                    e + 1
                )));
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in members.iter().skip(i + 1) {
                if a.is_subset(b) || b.is_subset(a) {
                    return Err(Error::usage(format!(
                        "not an antichain: members {} and {} are nested",
                        format_set(a),
                        format_set(b)
                    )));
                }
            }
        }
        Ok(Clutter { ground_size, members })
    }

    /// Convenience constructor from 0-based element lists.
    pub fn from_sets(ground_size: usize, sets: &[Vec<usize>]) -> Result<Self, Error> {
        Self::new(ground_size, sets.iter().map(|s| s.iter().copied().collect()).collect())
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn members(&self) -> &[BTreeSet<usize>] {
        &self.members
    }

    pub fn has_empty_member(&self) -> bool {
        self.members.iter().any(BTreeSet::is_empty)
    }

    fn require_proper(&self, what: &'static str) -> Result<(), Error> {
        if self.members.is_empty() || self.has_empty_member() {
            return Err(Error::DegenerateClutter(what));
        }
        Ok(())
    }

    fn member_masks(&self) -> Vec<u32> {
        self.members
            .iter()
            .map(|s| s.iter().fold(0u32, |acc, &e| acc | (1 << e)))
            .collect()
    }

    /// Text format: first line the ground-set size, then one member per
    /// line as space-separated 1-based element indices.
    pub fn parse_text(input: &str) -> Result<Self, Error> {
        let mut lines = input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((_, first)) = lines.next() else {
            return Err(Error::Parse("empty clutter file".into()));
        };
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line 1: ground-set size, got {first:?}")))?;
        let mut members = Vec::new();
        for (idx, line) in lines {
            let mut set = BTreeSet::new();
            for tok in line.split_whitespace() {
                let e: usize = tok.parse().map_err(|_| {
                    Error::Parse(format!("line {}: element index, got {tok:?}", idx + 1))
                })?;
                if e == 0 || e > n {
                    return Err(Error::Parse(format!(
                        "line {}: element {e} outside 1..={n}",
                        idx + 1
                    )));
                }
                set.insert(e - 1);
            }
            members.push(set);
        }
        Self::new(n, members).map_err(|e| match e {
            Error::Usage(msg) => Error::Parse(msg),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.ground_size);
        for s in &self.members {
            let line = s.iter().map(|e| (e + 1).to_string()).join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Sorted member list under the relabeling that minimizes it; two
    /// clutters are isomorphic iff their keys agree.
    pub fn canonical_key(&self) -> Vec<Vec<usize>> {
        let base: Vec<Vec<usize>> =
            self.members.iter().map(|s| s.iter().copied().collect()).collect();
        (0..self.ground_size)
            .permutations(self.ground_size)
            .map(|perm| {
                let mut relabeled: Vec<Vec<usize>> = base
                    .iter()
                    .map(|s| {
                        let mut t: Vec<usize> = s.iter().map(|&e| perm[e]).collect();
                        t.sort_unstable();
                        t
                    })
                    .collect();
                relabeled.sort();
                relabeled
            })
            .min()
            .unwrap_or_default()
    }
}

fn format_set(s: &BTreeSet<usize>) -> String {
    format!("{{{}}}", s.iter().map(|e| (e + 1).to_string()).join(","))
}

impl fmt::Display for Clutter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.members.iter().map(format_set).join(", ");
        write!(f, "{{{body}}} on [{}]", self.ground_size)
    }
}

/// All inclusion-minimal covers of `c` (sets meeting every member), by
/// exhaustive subset enumeration. The memberless clutter has the unique
/// minimal cover `∅`.
pub fn blocker(c: &Clutter) -> Result<Clutter, Error> {
    if c.has_empty_member() {
        return Err(Error::DegenerateClutter("blocker of a clutter with an empty member"));
    }
    let n = c.ground_size;
    if n > BLOCKER_GROUND_CAP {
        return Err(Error::ResourceLimit {
            limit: "blocker ground-set enumeration",
            cap: BLOCKER_GROUND_CAP as u64,
        });
    }
    let masks = c.member_masks();
    let hits = |b: u32| masks.iter().all(|&s| s & b != 0);
    let mut covers: Vec<u32> = (0u32..(1 << n)).filter(|&b| hits(b)).collect();
    covers.retain(|&b| {
        (0..n).all(|e| {
            let without = b & !(1 << e);
            without == b || !hits(without)
        })
    });
    let members = covers
        .into_iter()
        .map(|b| (0..n).filter(|&e| b & (1 << e) != 0).collect())
        .collect();
    Clutter::new(n, members)
}

/// The covering polyhedron `{x ≥ 0 : Σ_{e∈S} x_e ≥ 1 for S ∈ C}` written
/// as a `≤`-system: member rows `-χ_S·x ≤ -1` followed by `-x_e ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSystem {
    pub system: LinearSystem,
    /// Leading rows of the system that encode members (the rest are
    /// nonnegativity rows, one per ground element).
    pub member_rows: usize,
}

pub fn covering_system(c: &Clutter) -> Result<CoveringSystem, Error> {
    c.require_proper("covering system of a degenerate clutter")?;
    let n = c.ground_size;
    let m = c.members.len();
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(m + n);
    let mut b: Vec<Int> = Vec::with_capacity(m + n);
    for s in &c.members {
        rows.push((0..n).map(|e| if s.contains(&e) { int(-1) } else { int(0) }).collect());
        b.push(int(-1));
    }
    for e in 0..n {
        let mut row = vec![int(0); n];
        row[e] = int(-1);
        rows.push(row);
        b.push(int(0));
    }
    Ok(CoveringSystem {
        system: LinearSystem::new(IntMat::from_int_rows(&rows, n), b)?,
        member_rows: m,
    })
}

/// Idealness decision with the fractional witness when refuted.
#[derive(Clone, Debug)]
pub struct IdealReport {
    pub ideal: bool,
    /// A point of a minimal face with no integer point (a fractional
    /// vertex when the covering polyhedron is pointed and refuted).
    pub fractional_vertex: Option<Vec<Rat>>,
}

/// Is the covering polyhedron integral? When it is, cross-validates that
/// its vertices are exactly the blocker's incidence vectors. One pass of
/// minimal-face enumeration serves both the integrality test and the
/// cross-check.
pub fn ideal_report(c: &Clutter) -> Result<IdealReport, Error> {
    let cov = covering_system(c)?;
    let faces = minimal_faces(&cov.system)?;
    for face in &faces {
        let (a, b) = face.equality_system();
        if solve_integer(&a, &b)?.is_none() {
            return Ok(IdealReport { ideal: false, fractional_vertex: face.feasible_point()? });
        }
    }
    let blk = blocker(c)?;
    let mut expected: BTreeSet<Vec<Int>> = BTreeSet::new();
    for s in blk.members() {
        expected.insert(indicator(s, c.ground_size));
    }
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    for face in &faces {
        let point = face
            .feasible_point()?
            .ok_or_else(|| Error::internal("nonempty minimal face without a point"))?;
        let as_int: Option<Vec<Int>> = point
            .iter()
            .map(|v| if v.is_integer() { Some(v.to_integer()) } else { None })
            .collect();
        let Some(z) = as_int else {
            return Err(Error::internal("integral covering polyhedron produced a fractional vertex"));
        };
        seen.insert(z);
    }
    if seen != expected {
        return Err(Error::internal(
            "vertices of an ideal covering polyhedron do not match the blocker incidence vectors",
        ));
    }
    Ok(IdealReport { ideal: true, fractional_vertex: None })
}

pub fn is_ideal(c: &Clutter) -> Result<bool, Error> {
    Ok(ideal_report(c)?.ideal)
}

fn indicator(s: &BTreeSet<usize>, n: usize) -> Vec<Int> {
    (0..n).map(|e| if s.contains(&e) { int(1) } else { int(0) }).collect()
}

/// Intersection sizes between members and blocker members.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntersectionProfile {
    /// max |S ∩ B| over S ∈ C, B ∈ b(C); 0 when there are no pairs.
    pub max_sb: u64,
    /// Every |S ∩ B| - 1 lies in {0} ∪ {1, 2, 4, 8, ...}.
    pub all_in_p: bool,
    /// Every |S ∩ B| is odd.
    pub binary: bool,
}

fn in_p(k: u64) -> bool {
    k == 0 || k.is_power_of_two()
}

pub fn intersection_profile(c: &Clutter) -> Result<IntersectionProfile, Error> {
    let blk = blocker(c)?;
    let mut profile = IntersectionProfile { max_sb: 0, all_in_p: true, binary: true };
    for s in c.members() {
        for b in blk.members() {
            let k = s.intersection(b).count() as u64;
            profile.max_sb = profile.max_sb.max(k);
            if k == 0 || !in_p(k - 1) {
                profile.all_in_p = false;
            }
            if k.is_multiple_of(2) {
                profile.binary = false;
            }
        }
    }
    Ok(profile)
}

/// Scans covering weights `w ∈ [0, W]^n` (lexicographic) for one whose
/// optimal dual misses the domain; the covering LP `min wᵀx` is the
/// system-side LP at weight `-w`.
pub fn tdd_scan(
    cov: &CoveringSystem,
    l: &LSpec,
    budget: &SearchBudget,
) -> Result<Option<BadWeight>, Error> {
    if !l.is_heavy() {
        return Err(Error::usage("clutter scans run over prime-denominator domains"));
    }
    let n = cov.system.nvars();
    let bx = WeightBox::nonnegative(n, budget.weight_box);
    let total = bx
        .count()
        .ok_or(Error::ResourceLimit { limit: "weight box point count", cap: u64::MAX })?;
    let probe = |idx: u64| -> Result<Option<BadWeight>, Error> {
        let w_cov = bx.decode(idx);
        let w_sys: Vec<Int> = w_cov.iter().map(|v| -v.clone()).collect();
        let w_rat: Vec<Rat> = w_sys.iter().map(int_to_rat).collect();
        let Some(face) = optimal_face_opt(&cov.system, &w_rat)? else {
            return Ok(None);
        };
        let (a, rhs) = dual_hull_rows(&cov.system, &w_sys, &face.tight_set);
        let bad = solve_in_l(&a, &rhs, l)?.is_none();
        Ok(bad.then(|| BadWeight { w: w_cov, lspec: l.clone(), tight_rows: face.tight_set }))
    };
    find_first(total, probe)
}

/// Closed tight set of the covering LP `min wᵀx`, `w ≥ 0`, over an
/// integral covering polyhedron, computed without an LP solve: such a
/// polyhedron is the convex hull of the blocker incidence vectors plus the
/// nonnegative orthant, so the optimal face is spanned by the
/// minimum-weight blocker members together with the zero-weight coordinate
/// directions. A member row is tight on all of it iff it meets every
/// optimal blocker member exactly once and avoids the zero-weight
/// coordinates; a nonnegativity row iff its coordinate is off every
/// optimal member and carries positive weight.
fn ideal_cover_tight_set(member_masks: &[u32], blocker_masks: &[u32], w: &[Int]) -> Vec<usize> {
    let n = w.len();
    let zero_mask =
        (0..n).filter(|&j| w[j].is_zero()).fold(0u32, |acc, j| acc | (1 << j));
    let weight =
        |mask: u32| -> Int { (0..n).filter(|&j| mask & (1 << j) != 0).map(|j| w[j].clone()).sum() };
    let mut tau: Option<Int> = None;
    let mut opt: Vec<u32> = Vec::new();
    for &b in blocker_masks {
        let wb = weight(b);
        match &tau {
            Some(t) if wb > *t => {}
            Some(t) if wb == *t => opt.push(b),
            _ => {
                tau = Some(wb);
                opt = vec![b];
            }
        }
    }
    let mut tight = Vec::new();
    for (i, &s) in member_masks.iter().enumerate() {
        if s & zero_mask == 0 && opt.iter().all(|&b| (s & b).count_ones() == 1) {
            tight.push(i);
        }
    }
    let union_opt = opt.iter().fold(0u32, |acc, &b| acc | b);
    for j in 0..n {
        if union_opt & (1 << j) == 0 && !w[j].is_zero() {
            tight.push(member_masks.len() + j);
        }
    }
    tight
}

/// [`tdd_scan`] specialized to clutters whose covering polyhedron has been
/// verified integral with the blocker incidence vectors as its vertex set:
/// tight sets come from [`ideal_cover_tight_set`] instead of an LP, and
/// each weight costs one prepared Smith-form query on the member columns
/// through its tight set (dual coordinates off the tight set are zero, so
/// only those columns of the transpose matter). Probes are microseconds,
/// so the scan runs sequentially.
fn tdd_scan_ideal(
    c: &Clutter,
    cov: &CoveringSystem,
    blk: &Clutter,
    l: &LSpec,
    budget: &SearchBudget,
) -> Result<Option<BadWeight>, Error> {
    if !l.is_heavy() {
        return Err(Error::usage("clutter scans run over prime-denominator domains"));
    }
    let n = cov.system.nvars();
    let member_masks = c.member_masks();
    let blocker_masks = blk.member_masks();
    let bx = WeightBox::nonnegative(n, budget.weight_box);
    let total = bx
        .count()
        .ok_or(Error::ResourceLimit { limit: "weight box point count", cap: u64::MAX })?;
    let mut solvers: BTreeMap<Vec<usize>, SmithSolver> = BTreeMap::new();
    for idx in 0..total {
        let w_cov = bx.decode(idx);
        let tight = ideal_cover_tight_set(&member_masks, &blocker_masks, &w_cov);
        let solver = solvers.entry(tight.clone()).or_insert_with(|| {
            let rows: Vec<Vec<Int>> = (0..n)
                .map(|j| tight.iter().map(|&i| cov.system.m.get(i, j).clone()).collect())
                .collect();
            SmithSolver::new(&IntMat::from_int_rows(&rows, tight.len()))
        });
        let w_sys: Vec<Int> = w_cov.iter().map(|v| -v.clone()).collect();
        if solver.solve_in_l(&w_sys, l)?.is_none() {
            return Ok(Some(BadWeight { w: w_cov, lspec: l.clone(), tight_rows: tight }));
        }
    }
    Ok(None)
}

/// Total dual dyadicness of the covering system: certified outright when
/// the clutter is ideal and every |S∩B| - 1 is 0 or a power of two (the
/// intersection theorem then covers all weights), refuted by a scanned bad
/// weight, undecided otherwise. A bad weight under the theorem's
/// hypothesis is an internal error.
pub fn verify_tdd(c: &Clutter, budget: &SearchBudget) -> Result<Verdict, Error> {
    let cov = covering_system(c)?;
    let ideal = is_ideal(c)?;
    let profile = intersection_profile(c)?;
    let hypothesis = ideal && profile.all_in_p;
    let l = LSpec::dyadic();
    let bad = if ideal {
        // ideal_report has just certified the vertex set, which is what
        // the combinatorial scan relies on.
        tdd_scan_ideal(c, &cov, &blocker(c)?, &l, budget)?
    } else {
        tdd_scan(&cov, &l, budget)?
    };
    if let Some(bad) = bad {
        if hypothesis {
            return Err(Error::internal(
                "intersection-size hypothesis holds yet the dyadic scan found a bad weight",
            ));
        }
        return Ok(Verdict {
            property: Property::Tdd,
            status: Status::Refuted,
            certificate: Certificate::BadWeight(bad),
        });
    }
    if hypothesis {
        Ok(Verdict {
            property: Property::Tdd,
            status: Status::Certified,
            certificate: Certificate::ClutterIntersection {
                max_sb: profile.max_sb,
                all_in_p: profile.all_in_p,
                binary: profile.binary,
                ideal,
                weight_box: budget.weight_box,
            },
        })
    } else {
        Ok(Verdict {
            property: Property::Tdd,
            status: Status::Undecided,
            certificate: Certificate::Exhausted {
                weight_box: budget.weight_box,
                primes: vec![2],
                note: if ideal {
                    "ideal, but an intersection size breaks the power-of-two pattern; \
                     scan found no bad weight"
                        .into()
                } else {
                    "not ideal, so the intersection theorem does not apply; \
                     scan found no bad weight"
                        .into()
                },
            },
        })
    }
}

/// Brace search specialized to covering systems. Candidates are the
/// blocker incidence vectors lying on the down-face but off the face
/// (vertex case), then integral face points pushed along new recession
/// directions (recession case); the generic search is the fallback.
pub fn clutter_brace_search(c: &Clutter, f: &Face, fplus: &Face) -> Result<Option<Brace>, Error> {
    let cov = covering_system(c)?;
    let diff = down_face_diff(&cov.system, f, fplus)?;
    let sys = &cov.system;
    let n = sys.nvars();

    let better = |best: &Option<Brace>, cand: &Brace| match best {
        None => true,
        Some(b) => (&cand.gap, cand.i_hat) < (&b.gap, b.i_hat),
    };

    // Vertex case: blocker incidence vectors on F⁺ \ aff(F).
    let blk = blocker(c)?;
    let mut best: Option<Brace> = None;
    for s in blk.members() {
        let rho = indicator(s, n);
        let rho_rat: Vec<Rat> = rho.iter().map(int_to_rat).collect();
        if !fplus.contains(&rho_rat) || f.affine_hull().contains(&rho_rat) {
            continue;
        }
        for &i in &diff {
            let gap = (&sys.b[i] - crate::matrix::dot_int(sys.m.row(i), &rho)).abs();
            if gap.is_zero() {
                continue;
            }
            let cand = Brace { i_hat: i, rho: rho.clone(), gap };
            if better(&best, &cand) {
                best = Some(cand);
            }
        }
    }
    if best.is_some() {
        return Ok(best);
    }

    // Recession case: v + e for an integral v ∈ F and a unit recession
    // direction e of F⁺ outside rec(F); such a step changes exactly the
    // slack of rows hitting that coordinate, by 1.
    if let PointSearch::Found(v) = find_integer_point(&f.program(), 64)? {
        for e in 0..n {
            let in_rec_fplus = fplus
                .tight_set
                .iter()
                .all(|&i| sys.m.get(i, e).is_zero());
            if !in_rec_fplus {
                continue;
            }
            let mut rho = v.clone();
            rho[e] += 1;
            for &i in &diff {
                let gap = sys.m.get(i, e).abs();
                if gap.is_zero() {
                    continue;
                }
                let cand = Brace { i_hat: i, rho: rho.clone(), gap };
                if better(&best, &cand) {
                    best = Some(cand);
                }
            }
        }
    }
    if best.is_some() {
        return Ok(best);
    }

    find_brace(sys, f, fplus, &int(n as i64 + 1))
}

/// Every antichain of nonempty subsets of `{0..n-1}` (the memberless
/// clutter included), members ascending in the subset-mask order.
pub fn enumerate_antichains(n: usize) -> Vec<Clutter> {
    assert!(n <= 6, "exhaustive antichain enumeration is desk-scale only");
    let full: u32 = 1 << n;
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::new();
    fn rec(n: usize, full: u32, start: u32, chosen: &mut Vec<u32>, out: &mut Vec<Clutter>) {
        let mut members: Vec<BTreeSet<usize>> = chosen
            .iter()
            .map(|&m| (0..n).filter(|&e| m & (1 << e) != 0).collect())
            .collect();
        canonical_member_order(&mut members);
        out.push(Clutter { ground_size: n, members });
        for m in start..full {
            if chosen.iter().any(|&c| c & m == c || c & m == m) {
                continue;
            }
            chosen.push(m);
            rec(n, full, m + 1, chosen, out);
            chosen.pop();
        }
    }
    rec(n, full, 1, &mut chosen, &mut out);
    out
}

/// One representative per isomorphism class of [`enumerate_antichains`].
pub fn enumerate_antichains_up_to_iso(n: usize) -> Vec<Clutter> {
    let mut seen: BTreeMap<Vec<Vec<usize>>, Clutter> = BTreeMap::new();
    for c in enumerate_antichains(n) {
        seen.entry(c.canonical_key()).or_insert(c);
    }
    seen.into_values().collect()
}
