//! Integer-point search over rational polyhedra.
//!
//! The search fixes one coordinate at a time. For the current coordinate it
//! computes exact lower/upper bounds with two linear programs, walks the
//! integer values in that window, substitutes each value, and recurses on the
//! smaller program. Whenever a window is unbounded (or wider than the caller's
//! budget) it is clipped, and an exhausted clipped search reports
//! [`PointSearch::BudgetExhausted`] instead of claiming emptiness.

use crate::arith::{ceil_rat, floor_rat, int_to_rat, rat_int, Int, Rat};
use crate::error::Error;
use crate::lp::{Constraint, Program, RawOutcome, Relation};
use num_traits::{One, Signed, Zero};

/// Outcome of a bounded integer-point search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSearch {
    /// An integer point of the polyhedron.
    Found(Vec<Int>),
    /// The polyhedron provably contains no integer point.
    Empty,
    /// Some coordinate window had to be clipped to the budget and the clipped
    /// search found nothing, so emptiness is not certified.
    BudgetExhausted,
}

impl PointSearch {
    pub fn point(&self) -> Option<&[Int]> {
        match self {
            PointSearch::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// Searches `program` for an integer point. `window_cap` bounds the number of
/// integer values tried per coordinate; windows wider than the cap (including
/// unbounded ones) are clipped and taint the negative answer.
pub fn find_integer_point(program: &Program, window_cap: u64) -> Result<PointSearch, Error> {
    if window_cap == 0 {
        return Err(Error::usage("integer point search needs a positive window cap"));
    }
    search(program.clone(), window_cap)
}

fn search(program: Program, window_cap: u64) -> Result<PointSearch, Error> {
    if program.n == 0 {
        return Ok(if constant_rows_hold(&program) { PointSearch::Found(Vec::new()) } else { PointSearch::Empty });
    }
    if program.feasible_point()?.is_none() {
        return Ok(PointSearch::Empty);
    }

    let (lo, hi) = coordinate_window(&program, 0)?;
    let (lo, hi, clipped) = clip_window(lo, hi, window_cap);
    if lo > hi {
        return Ok(PointSearch::Empty);
    }

    let mut exhausted = clipped;
    let mut v = lo.clone();
    while v <= hi {
        match search(substitute_first(&program, &v), window_cap)? {
            PointSearch::Found(mut rest) => {
                rest.insert(0, v);
                return Ok(PointSearch::Found(rest));
            }
            PointSearch::Empty => {}
            PointSearch::BudgetExhausted => exhausted = true,
        }
        v += Int::one();
    }
    Ok(if exhausted { PointSearch::BudgetExhausted } else { PointSearch::Empty })
}

fn constant_rows_hold(program: &Program) -> bool {
    program.constraints.iter().all(|c| match c.rel {
        Relation::Le => !c.rhs.is_negative(),
        Relation::Eq => c.rhs.is_zero(),
    })
}

/// Exact integer bounds of coordinate `j` over the feasible region; `None`
/// means unbounded on that side. The program must be feasible.
fn coordinate_window(program: &Program, j: usize) -> Result<(Option<Int>, Option<Int>), Error> {
    let mut objective = vec![Rat::zero(); program.n];
    objective[j] = rat_int(1);
    let hi = match program.maximize(&objective)? {
        RawOutcome::Optimal { value, .. } => Some(floor_rat(&value)),
        RawOutcome::Unbounded { .. } => None,
        RawOutcome::Infeasible => return Err(Error::internal("window query on infeasible program")),
    };
    let lo = match program.minimize(&objective)? {
        RawOutcome::Optimal { value, .. } => Some(ceil_rat(&value)),
        RawOutcome::Unbounded { .. } => None,
        RawOutcome::Infeasible => return Err(Error::internal("window query on infeasible program")),
    };
    Ok((lo, hi))
}

/// Clips a possibly open window to at most `window_cap` integer values.
/// Returns the closed window plus whether clipping dropped anything.
fn clip_window(lo: Option<Int>, hi: Option<Int>, window_cap: u64) -> (Int, Int, bool) {
    let width = Int::from(window_cap) - Int::one();
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            if &hi - &lo > width {
                let capped = &lo + &width;
                (lo, capped, true)
            } else {
                (lo, hi, false)
            }
        }
        (Some(lo), None) => {
            let capped = &lo + &width;
            (lo, capped, true)
        }
        (None, Some(hi)) => {
            let capped = &hi - &width;
            (capped, hi, true)
        }
        (None, None) => {
            let half = Int::from(window_cap / 2);
            (-half.clone(), &Int::from(window_cap) - &half - Int::one(), true)
        }
    }
}

/// Substitutes `x_0 = v` and returns the program over the remaining variables.
fn substitute_first(program: &Program, v: &Int) -> Program {
    let vr = int_to_rat(v);
    let mut constraints = Vec::with_capacity(program.constraints.len());
    for c in &program.constraints {
        constraints.push(Constraint {
            coeffs: c.coeffs[1..].to_vec(),
            rel: c.rel,
            rhs: &c.rhs - &(&c.coeffs[0] * &vr),
        });
    }
    // The sign restriction on the fixed variable becomes a constant row so an
    // out-of-window value is rejected rather than silently forgotten.
    if program.nonneg[0] && v.is_negative() {
        constraints.push(Constraint {
            coeffs: vec![Rat::zero(); program.n - 1],
            rel: Relation::Le,
            rhs: -rat_int(1),
        });
    }
    Program { n: program.n - 1, constraints, nonneg: program.nonneg[1..].to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::matrix::IntMat;
    use crate::polyhedron::LinearSystem;

    fn ints(values: &[i64]) -> Vec<Int> {
        values.iter().map(|&v| int(v)).collect()
    }

    fn program_of(rows: &[&[i64]], rhs: &[i64]) -> Program {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let sys = LinearSystem::new(IntMat::from_rows(&rows), ints(rhs)).unwrap();
        Program::from_system(&sys)
    }

    #[test]
    fn finds_point_in_triangle() {
        // x + y <= 3, x >= 0, y >= 0 contains (0, 0).
        let prog = program_of(&[&[1, 1], &[-1, 0], &[0, -1]], &[3, 0, 0]);
        let found = find_integer_point(&prog, 64).unwrap();
        let p = found.point().expect("triangle has integer points").to_vec();
        assert_eq!(p.len(), 2);
        assert!(&p[0] + &p[1] <= int(3) && !p[0].is_negative() && !p[1].is_negative());
    }

    #[test]
    fn certifies_emptiness_of_thin_slab() {
        // 1/3 <= x <= 2/3 scaled: 3x >= 1, 3x <= 2 has no integer solution.
        let prog = program_of(&[&[-3], &[3]], &[-1, 2]);
        assert_eq!(find_integer_point(&prog, 64).unwrap(), PointSearch::Empty);
    }

    #[test]
    fn fractional_vertex_still_yields_interior_integer_point() {
        // 2x + y <= 2 with x, y >= 0: vertex (1, 0) is integral, (0, 2) too.
        let prog = program_of(&[&[2, 1], &[-1, 0], &[0, -1]], &[2, 0, 0]);
        let found = find_integer_point(&prog, 64).unwrap();
        assert!(found.point().is_some());
    }

    #[test]
    fn infeasible_program_is_empty() {
        let prog = program_of(&[&[1], &[-1]], &[0, -1]);
        assert_eq!(find_integer_point(&prog, 64).unwrap(), PointSearch::Empty);
    }

    #[test]
    fn unbounded_direction_reports_budget_when_nothing_found() {
        // x - y = 1/2 (scaled: 2x - 2y = 1) has no integer points, but both
        // coordinates are unbounded, so clipping taints the answer.
        let mut prog = Program { n: 2, constraints: Vec::new(), nonneg: vec![false, false] };
        prog.add_int_row(&[int(2), int(-2)], Relation::Eq, rat_int(1));
        assert_eq!(find_integer_point(&prog, 8).unwrap(), PointSearch::BudgetExhausted);
    }

    #[test]
    fn unbounded_direction_still_finds_points() {
        // x - y = 2 on the integer grid: clipped window still contains one.
        let mut prog = Program { n: 2, constraints: Vec::new(), nonneg: vec![false, false] };
        prog.add_int_row(&[int(1), int(-1)], Relation::Eq, rat_int(2));
        let found = find_integer_point(&prog, 8).unwrap();
        let p = found.point().expect("line has integer points");
        assert_eq!(&p[0] - &p[1], int(2));
    }

    #[test]
    fn equality_face_search_matches_hand_count() {
        // Edge of the triangle: x + y = 3, x >= 0, y >= 0 -> e.g. (0, 3).
        let mut prog = program_of(&[&[-1, 0], &[0, -1]], &[0, 0]);
        prog.add_int_row(&[int(1), int(1)], Relation::Eq, rat_int(3));
        let found = find_integer_point(&prog, 64).unwrap();
        let p = found.point().unwrap();
        assert_eq!(&p[0] + &p[1], int(3));
    }
}
