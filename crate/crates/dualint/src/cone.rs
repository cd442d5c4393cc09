//! Generating-set tests for lattices and cones of integer vectors.
//!
//! `is_z_gss` asks whether a vector family generates, over the integers,
//! every integer vector of its linear span. `is_z_gsc` asks the conic
//! analogue: whether every integer vector of the generated cone is a
//! nonnegative-integer combination of the generators. `is_l_gsc` relaxes the
//! multipliers to a fractional ring L(S) whose denominators use only the
//! primes in S.
//!
//! The conic tests are exact. Every integer point of the cone differs from an
//! integer point of the generators' half-open zonotope by a nonnegative
//! integer combination, so scanning the zonotope's bounding box decides the
//! property; a failed box point is itself a counterexample. Cone membership
//! is LP-free: facet normals are recovered from kernels of (d-1)-subsets of
//! the generators, and their sum is strictly positive on the pointed cone,
//! which also bounds the multipliers searched. Non-pointed cones split into
//! their lineality space (a lattice saturation question, settled by Smith
//! divisors) and a pointed quotient cone handled recursively.

use crate::arith::{int_to_rat, rat_int, Int, Rat};
use crate::diophantine::{integer_kernel_basis, solve_in_l};
use crate::error::Error;
use crate::lp::{Program, RawOutcome, Relation};
use crate::lspec::LSpec;
use crate::matrix::{dot_int, invert_unimodular, IntMat};
use crate::normal_form::smith;
use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Which family of vectors a matrix contributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Rows,
    Columns,
}

/// Enumeration budgets for the conic generating-set tests.
#[derive(Clone, Debug)]
pub struct GscLimits {
    /// Maximum number of nonzero generators accepted.
    pub max_generators: usize,
    /// Maximum number of lattice points scanned in the zonotope bounding box.
    pub max_lattice_points: u64,
    /// Maximum number of generator subsets inspected for facet normals.
    pub max_facet_subsets: u64,
}

impl Default for GscLimits {
    fn default() -> Self {
        GscLimits { max_generators: 24, max_lattice_points: 1_000_000, max_facet_subsets: 100_000 }
    }
}

/// Result of a conic generating-set test.
#[derive(Clone, Debug)]
pub struct GscOutcome {
    pub holds: bool,
    /// Integer point of the cone that is not representable, when `!holds`.
    pub counterexample: Option<Vec<Int>>,
    /// Largest per-generator multiplier bound any representability search
    /// needed; `None` when no search ran.
    pub multiplier_bound: Option<Int>,
    /// Lattice points actually scanned.
    pub lattice_points_scanned: u64,
}

/// Do the chosen vectors of `a` generate every integer vector of their span
/// over the integers? Equivalent to all nonzero Smith divisors being 1.
pub fn is_z_gss(a: &IntMat, orientation: Orientation) -> bool {
    let nf = match orientation {
        Orientation::Rows => smith(a),
        Orientation::Columns => smith(&a.transpose()),
    };
    nf.diagonal().iter().take(nf.rank).all(|d| d.is_one())
}

/// Is every integer point of the cone generated by the rows of `a` a
/// nonnegative-integer combination of those rows?
pub fn is_z_gsc(a: &IntMat) -> Result<GscOutcome, Error> {
    is_z_gsc_with(a, &GscLimits::default())
}

pub fn is_z_gsc_with(a: &IntMat, limits: &GscLimits) -> Result<GscOutcome, Error> {
    gsc_core(a, Mode::Z, limits)
}

/// Is every integer point of the cone generated by the rows of `a` a
/// nonnegative combination with multipliers in `l`? Requires a fractional
/// ring: for plain integer multipliers call [`is_z_gsc`].
pub fn is_l_gsc(a: &IntMat, l: &LSpec) -> Result<GscOutcome, Error> {
    is_l_gsc_with(a, l, &GscLimits::default())
}

pub fn is_l_gsc_with(a: &IntMat, l: &LSpec, limits: &GscLimits) -> Result<GscOutcome, Error> {
    match l {
        LSpec::Integers => Err(Error::usage(
            "the fractional generating-set test needs a prime set; use the integer test for Z",
        )),
        LSpec::Primes(_) => gsc_core(a, Mode::L(l), limits),
    }
}

/// Does the cone generated by `gens` contain `target`? Membership with real
/// (equivalently rational) nonnegative multipliers, decided by one LP.
pub fn cone_contains(gens: &[Vec<Int>], target: &[Rat]) -> Result<bool, Error> {
    if gens.is_empty() {
        return Ok(target.iter().all(Zero::is_zero));
    }
    let k = gens.len();
    let mut prog = Program { n: k, constraints: Vec::new(), nonneg: vec![true; k] };
    for c in 0..target.len() {
        let row: Vec<Rat> = gens.iter().map(|g| int_to_rat(&g[c])).collect();
        prog.add_rat_row(row, Relation::Eq, target[c].clone());
    }
    Ok(prog.feasible_point()?.is_some())
}

#[derive(Clone, Copy)]
enum Mode<'a> {
    Z,
    L(&'a LSpec),
}

fn gsc_core(a: &IntMat, mode: Mode<'_>, limits: &GscLimits) -> Result<GscOutcome, Error> {
    let n = a.cols();
    let gens: Vec<Vec<Int>> =
        a.iter_rows().filter(|r| !r.iter().all(Zero::is_zero)).map(|r| r.to_vec()).collect();
    if gens.len() > limits.max_generators {
        return Err(Error::ResourceLimit {
            limit: "cone generator cap",
            cap: limits.max_generators as u64,
        });
    }

    // Lineality split: J holds the generators whose negations lie back in the
    // cone; their span is exactly the lineality space.
    let mut lineal = Vec::new();
    let mut strict = Vec::new();
    for g in &gens {
        let neg: Vec<Rat> = g.iter().map(|e| int_to_rat(&(-e))).collect();
        if cone_contains(&gens, &neg)? {
            lineal.push(g.clone());
        } else {
            strict.push(g.clone());
        }
    }

    if lineal.is_empty() {
        return pointed_gsc(&gens, n, mode, limits);
    }

    // Lineality part. The generators in J span their cone as a subspace, and
    // clearing denominators of a rational conic representation of -r shows
    // the monoid they generate is the full lattice they generate. So the
    // subspace condition reduces to that lattice being saturated: the Smith
    // divisors must be units (for Z) or the saturated basis must be
    // L-representable (for L).
    let gj = IntMat::from_int_rows(&lineal, n);
    let nf = smith(&gj);
    let rank = nf.rank;
    let divisors = nf.diagonal();
    let v_inv = invert_unimodular(&nf.v)?;
    match mode {
        Mode::Z => {
            for i in 0..rank {
                if !divisors[i].is_one() {
                    return Ok(GscOutcome {
                        holds: false,
                        counterexample: Some(v_inv.row_vec(i)),
                        multiplier_bound: None,
                        lattice_points_scanned: 0,
                    });
                }
            }
        }
        Mode::L(l) => {
            let cols = gj.transpose();
            for i in 0..rank {
                let basis_vec = v_inv.row_vec(i);
                if solve_in_l(&cols, &basis_vec, l)?.is_none() {
                    return Ok(GscOutcome {
                        holds: false,
                        counterexample: Some(basis_vec),
                        multiplier_bound: None,
                        lattice_points_scanned: 0,
                    });
                }
            }
        }
    }

    if strict.is_empty() {
        return Ok(GscOutcome {
            holds: true,
            counterexample: None,
            multiplier_bound: None,
            lattice_points_scanned: 0,
        });
    }

    // Pointed quotient modulo the lineality space. Coordinates with respect
    // to the saturated basis are x -> (V^T x); the trailing n - rank entries
    // descend to the quotient lattice, where the leftover generators stay
    // nonzero and generate a pointed cone.
    let vt = nf.v.transpose();
    let quot_dim = n - rank;
    let mut quot_gens = Vec::with_capacity(strict.len());
    for g in &strict {
        let full = vt.mul_int_vec(g);
        let tail = full[rank..].to_vec();
        if tail.iter().all(Zero::is_zero) {
            return Err(Error::internal("strict generator collapsed into the lineality space"));
        }
        quot_gens.push(tail);
    }
    let mut out = pointed_gsc(&quot_gens, quot_dim, mode, limits)?;
    if let Some(cex) = out.counterexample.take() {
        // Lift along the saturated basis: the preimage is an integer cone
        // point, and any representation of it would descend to one of the
        // quotient point.
        let mut lifted = vec![Int::zero(); n];
        for (j, coeff) in cex.iter().enumerate() {
            for c in 0..n {
                lifted[c] += coeff * v_inv.get(rank + j, c);
            }
        }
        out.counterexample = Some(lifted);
    }
    Ok(out)
}

/// Facet description of a pointed cone: span equations, valid facet normals,
/// and their sum, which is strictly positive on every nonzero cone point.
struct PointedCone<'a> {
    gens: &'a [Vec<Int>],
    span_eqs: Vec<Vec<Int>>,
    facets: Vec<Vec<Int>>,
    ell: Vec<Int>,
    ell_gen: Vec<Int>,
}

impl PointedCone<'_> {
    fn contains(&self, z: &[Int]) -> bool {
        self.span_eqs.iter().all(|c| dot_int(c, z).is_zero())
            && self.facets.iter().all(|h| !dot_int(h, z).is_negative())
    }
}

fn binomial_capped(k: usize, r: usize, cap: u64) -> Option<u64> {
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (k - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn build_pointed<'a>(
    gens: &'a [Vec<Int>],
    n: usize,
    limits: &GscLimits,
) -> Result<PointedCone<'a>, Error> {
    let mat = IntMat::from_int_rows(gens, n);
    let d = mat.rank();
    let span_eqs = integer_kernel_basis(&mat);

    if binomial_capped(gens.len(), d - 1, limits.max_facet_subsets).is_none() {
        return Err(Error::ResourceLimit {
            limit: "cone facet subset cap",
            cap: limits.max_facet_subsets,
        });
    }

    // Each facet of the d-dimensional cone is spanned by d-1 of the
    // generators, so the kernels of those subsets (within the span) run over
    // all facet normals, plus harmless valid inequalities.
    let mut facets: BTreeSet<Vec<Int>> = BTreeSet::new();
    for subset in (0..gens.len()).combinations(d - 1) {
        let mut rows: Vec<Vec<Int>> = subset.iter().map(|&i| gens[i].clone()).collect();
        rows.extend(span_eqs.iter().cloned());
        let kernel = integer_kernel_basis(&IntMat::from_int_rows(&rows, n));
        if kernel.len() != 1 {
            continue;
        }
        let h = kernel.into_iter().next().unwrap();
        let dots: Vec<Int> = gens.iter().map(|g| dot_int(&h, g)).collect();
        if dots.iter().all(|v| !v.is_negative()) {
            facets.insert(h);
        } else if dots.iter().all(|v| !v.is_positive()) {
            facets.insert(h.iter().map(|e| -e).collect());
        }
    }

    let facets: Vec<Vec<Int>> = facets.into_iter().collect();
    let mut ell = vec![Int::zero(); n];
    for h in &facets {
        for (acc, e) in ell.iter_mut().zip(h) {
            *acc += e;
        }
    }
    let ell_gen: Vec<Int> = gens.iter().map(|g| dot_int(&ell, g)).collect();
    if ell_gen.iter().any(|v| !v.is_positive()) {
        return Err(Error::internal("facet functional not strictly positive; cone not pointed"));
    }
    Ok(PointedCone { gens, span_eqs, facets, ell, ell_gen })
}

fn pointed_gsc(
    gens: &[Vec<Int>],
    n: usize,
    mode: Mode<'_>,
    limits: &GscLimits,
) -> Result<GscOutcome, Error> {
    if gens.is_empty() || n == 0 {
        return Ok(GscOutcome {
            holds: true,
            counterexample: None,
            multiplier_bound: None,
            lattice_points_scanned: 0,
        });
    }
    let cone = build_pointed(gens, n, limits)?;

    // Bounding box of the closed zonotope of the generators.
    let mut lo = vec![Int::zero(); n];
    let mut hi = vec![Int::zero(); n];
    for g in gens {
        for j in 0..n {
            if g[j].is_negative() {
                lo[j] += &g[j];
            } else {
                hi[j] += &g[j];
            }
        }
    }
    let mut count = Int::one();
    for j in 0..n {
        count *= &hi[j] - &lo[j] + Int::one();
    }
    if count > Int::from(limits.max_lattice_points) {
        return Err(Error::ResourceLimit {
            limit: "zonotope lattice point cap",
            cap: limits.max_lattice_points,
        });
    }

    let mut scanned = 0u64;
    let mut bound_seen: Option<Int> = None;
    let mut z = lo.clone();
    loop {
        scanned += 1;
        if !z.iter().all(Zero::is_zero) && cone.contains(&z) {
            let representable = match mode {
                Mode::Z => z_representable(&cone, &z, &mut bound_seen),
                Mode::L(l) => {
                    z_representable(&cone, &z, &mut bound_seen) || l_representable(gens, &z, l)?
                }
            };
            if !representable {
                return Ok(GscOutcome {
                    holds: false,
                    counterexample: Some(z),
                    multiplier_bound: bound_seen,
                    lattice_points_scanned: scanned,
                });
            }
        }
        // Lexicographic odometer over the box.
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(GscOutcome {
                    holds: true,
                    counterexample: None,
                    multiplier_bound: bound_seen,
                    lattice_points_scanned: scanned,
                });
            }
            j -= 1;
            z[j] += Int::one();
            if z[j] <= hi[j] {
                break;
            }
            z[j] = lo[j].clone();
        }
    }
}

/// Depth-first search for a nonnegative-integer representation of `z`. The
/// facet functional bounds each multiplier, and every partial remainder must
/// stay inside the cone.
fn z_representable(cone: &PointedCone<'_>, z: &[Int], bound_seen: &mut Option<Int>) -> bool {
    let lz = dot_int(&cone.ell, z);
    for lg in &cone.ell_gen {
        let b = lz.div_floor(lg);
        if bound_seen.as_ref().is_none_or(|seen| &b > seen) {
            *bound_seen = Some(b);
        }
    }
    rec_representable(cone, z.to_vec(), 0)
}

fn rec_representable(cone: &PointedCone<'_>, z: Vec<Int>, idx: usize) -> bool {
    if z.iter().all(Zero::is_zero) {
        return true;
    }
    if idx == cone.gens.len() {
        return false;
    }
    let g = &cone.gens[idx];
    let mut c = dot_int(&cone.ell, &z).div_floor(&cone.ell_gen[idx]);
    while !c.is_negative() {
        let child: Vec<Int> = z.iter().zip(g).map(|(a, b)| a - &c * b).collect();
        if cone.contains(&child) && rec_representable(cone, child, idx + 1) {
            return true;
        }
        c -= Int::one();
    }
    false
}

/// Can `z` be written with nonnegative multipliers from the fractional ring?
/// Because L-points are dense on affine subspaces, the multiplier polyhedron
/// contains an L-point exactly when its affine hull does, and the hull is the
/// equality system plus the coordinates pinned to zero.
fn l_representable(gens: &[Vec<Int>], z: &[Int], l: &LSpec) -> Result<bool, Error> {
    let k = gens.len();
    let n = z.len();
    let mut prog = Program { n: k, constraints: Vec::new(), nonneg: vec![true; k] };
    for c in 0..n {
        let row: Vec<Int> = gens.iter().map(|g| g[c].clone()).collect();
        prog.add_int_row(&row, Relation::Eq, int_to_rat(&z[c]));
    }

    let mut eq_rows: Vec<Vec<Int>> = Vec::new();
    let mut rhs: Vec<Int> = Vec::new();
    for c in 0..n {
        eq_rows.push(gens.iter().map(|g| g[c].clone()).collect());
        rhs.push(z[c].clone());
    }
    for i in 0..k {
        // A multiplier is implicitly zero when its capped maximum is zero;
        // the cap keeps the probe bounded on unbounded multiplier sets.
        let mut capped = prog.clone();
        let mut cap_row = vec![Int::zero(); k];
        cap_row[i] = Int::one();
        capped.add_int_row(&cap_row, Relation::Le, rat_int(1));
        let mut obj = vec![Rat::zero(); k];
        obj[i] = rat_int(1);
        match capped.maximize(&obj)? {
            RawOutcome::Optimal { value, .. } => {
                if value.is_zero() {
                    let mut unit = vec![Int::zero(); k];
                    unit[i] = Int::one();
                    eq_rows.push(unit);
                    rhs.push(Int::zero());
                }
            }
            RawOutcome::Unbounded { .. } | RawOutcome::Infeasible => {
                return Err(Error::internal("capped multiplier probe must have an optimum"));
            }
        }
    }
    let system = IntMat::from_int_rows(&eq_rows, k);
    Ok(solve_in_l(&system, &rhs, l)?.is_some())
}
