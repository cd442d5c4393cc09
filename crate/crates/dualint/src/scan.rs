//! Deterministic first-hit scans over finite index spaces.
//!
//! Weight-box scans are embarrassingly parallel over the index space, but the
//! result must not depend on the schedule: the probe at the smallest index
//! that yields either a hit or an error wins. [`find_first`] provides exactly
//! that contract, on top of rayon when the `parallel` feature is enabled and
//! on a plain loop otherwise.

use crate::arith::{int, Int};
use crate::error::Error;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// An axis-aligned box of integer vectors `lo ≤ w ≤ hi`, ordered
/// lexicographically with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBox {
    lo: Vec<Int>,
    hi: Vec<Int>,
}

impl WeightBox {
    /// Box with explicit per-coordinate bounds. Requires `lo.len() == hi.len()`
    /// and `lo ≤ hi` componentwise.
    pub fn new(lo: Vec<Int>, hi: Vec<Int>) -> Result<Self, Error> {
        if lo.len() != hi.len() {
            return Err(Error::dim("weight box bounds have mismatched lengths"));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if l > h {
                return Err(Error::usage("weight box has an empty coordinate range"));
            }
        }
        Ok(WeightBox { lo, hi })
    }

    /// The box `[-w, w]^n`.
    pub fn symmetric(n: usize, w: u64) -> Self {
        let w = int(w as i64);
        WeightBox {
            lo: vec![-w.clone(); n],
            hi: vec![w; n],
        }
    }

    /// The box `[0, w]^n`.
    pub fn nonnegative(n: usize, w: u64) -> Self {
        WeightBox {
            lo: vec![int(0); n],
            hi: vec![int(w as i64); n],
        }
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Number of lattice points in the box, or `None` if it does not fit in
    /// a `u64`.
    pub fn count(&self) -> Option<u64> {
        let mut total: u64 = 1;
        for (l, h) in self.lo.iter().zip(&self.hi) {
            let width = u64::try_from(h - l).ok()?.checked_add(1)?;
            total = total.checked_mul(width)?;
        }
        Some(total)
    }

    /// The `idx`-th point of the box in lexicographic order (mixed-radix
    /// decoding, last coordinate least significant).
    pub fn decode(&self, idx: u64) -> Vec<Int> {
        let mut rest = idx;
        let mut out = vec![int(0); self.dim()];
        for j in (0..self.dim()).rev() {
            let radix = u64::try_from(&self.hi[j] - &self.lo[j]).expect("box counted") + 1;
            out[j] = &self.lo[j] + int((rest % radix) as i64);
            rest /= radix;
        }
        out
    }
}

/// Scan `0..total` in order, returning the first hit. An error raised by the
/// probe at index `i` preempts any hit at an index `> i`.
pub fn find_first_sequential<T, F>(total: u64, probe: F) -> Result<Option<T>, Error>
where
    F: Fn(u64) -> Result<Option<T>, Error> + Sync + Send,
    T: Send,
{
    for i in 0..total {
        if let Some(found) = probe(i)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Parallel scan with the same first-hit semantics as
/// [`find_first_sequential`]: rayon's `find_map_first` keeps the outcome at
/// the smallest index, whether that outcome is a hit or an error.
#[cfg(feature = "parallel")]
pub fn find_first_parallel<T, F>(total: u64, probe: F) -> Result<Option<T>, Error>
where
    F: Fn(u64) -> Result<Option<T>, Error> + Sync + Send,
    T: Send,
{
    (0..total)
        .into_par_iter()
        .find_map_first(|i| probe(i).transpose())
        .transpose()
}

/// Scan `0..total` for the first index whose probe yields a value, parallel
/// when the `parallel` feature is on. The result is deterministic either way.
pub fn find_first<T, F>(total: u64, probe: F) -> Result<Option<T>, Error>
where
    F: Fn(u64) -> Result<Option<T>, Error> + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        find_first_parallel(total, probe)
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_first_sequential(total, probe)
    }
}
