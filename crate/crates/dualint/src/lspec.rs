//! Denominator domains: the integers, or the rationals whose denominators
//! only use a fixed finite set of primes.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{self, Int, Rat};
use crate::error::Error;
use num_traits::One;

/// A coefficient domain for dual solutions.
///
/// `Primes(S)` denotes the rationals expressible with a denominator whose
/// prime factors all lie in `S` (the dyadic rationals for `S = {2}`). Every
/// such domain is dense in the reals; `Integers` is not, and operations that
/// rely on density reject it explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LSpec {
    Integers,
    Primes(BTreeSet<u64>),
}

impl LSpec {
    /// Builds the `Primes` variant, validating that the set is a nonempty
    /// collection of primes.
    pub fn primes<I: IntoIterator<Item = u64>>(s: I) -> Result<Self, Error> {
        let set: BTreeSet<u64> = s.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyInput("prime set"));
        }
        for &p in &set {
            if !arith::is_prime(p) {
                return Err(Error::usage(format!("{p} is not prime")));
            }
        }
        Ok(LSpec::Primes(set))
    }

    pub fn dyadic() -> Self {
        LSpec::Primes(BTreeSet::from([2]))
    }

    /// Dense-in-the-reals domains; exactly the `Primes` variants.
    pub fn is_heavy(&self) -> bool {
        matches!(self, LSpec::Primes(_))
    }

    pub fn prime_list(&self) -> Vec<u64> {
        match self {
            LSpec::Integers => Vec::new(),
            LSpec::Primes(s) => s.iter().copied().collect(),
        }
    }

    /// True iff the integer `d` is a permissible denominator: `1` for
    /// `Integers`, otherwise a product of listed primes.
    pub fn admits_denominator(&self, d: &Int) -> bool {
        match self {
            LSpec::Integers => d.is_one(),
            LSpec::Primes(s) => {
                let primes: Vec<u64> = s.iter().copied().collect();
                arith::strip_primes(d, &primes).is_one()
            }
        }
    }

    /// Membership test for a rational (denominators are always reduced).
    pub fn contains(&self, x: &Rat) -> bool {
        self.admits_denominator(x.denom())
    }

    pub fn contains_all(&self, xs: &[Rat]) -> bool {
        xs.iter().all(|x| self.contains(x))
    }

    /// The largest `p` such that the domain is closed under division by every
    /// `q` in `{2, ..., p}`; equivalently, one less than the smallest prime
    /// outside the domain. `Integers` yields `1` (closed under nothing).
    pub fn division_closure_bound(&self) -> u64 {
        match self {
            LSpec::Integers => 1,
            LSpec::Primes(s) => {
                let mut p = 1u64;
                loop {
                    let q = p + 1;
                    let ok = (2..=q).filter(|&f| arith::is_prime(f) && q.is_multiple_of(f)).all(|f| s.contains(&f));
                    if ok {
                        p = q;
                    } else {
                        return p;
                    }
                }
            }
        }
    }
}

impl fmt::Display for LSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LSpec::Integers => write!(f, "Z"),
            LSpec::Primes(s) => {
                let list: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                write!(f, "L({{{}}})", list.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn membership() {
        let dyadic = LSpec::dyadic();
        assert!(dyadic.contains(&rat(3, 8)));
        assert!(dyadic.contains(&rat(5, 1)));
        assert!(!dyadic.contains(&rat(1, 3)));
        assert!(!dyadic.contains(&rat(1, 6)));

        let l23 = LSpec::primes([2, 3]).unwrap();
        assert!(l23.contains(&rat(1, 6)));
        assert!(l23.contains(&rat(-7, 12)));
        assert!(!l23.contains(&rat(1, 5)));

        assert!(LSpec::Integers.contains(&rat(4, 2)));
        assert!(!LSpec::Integers.contains(&rat(1, 2)));
    }

    #[test]
    fn validation() {
        assert!(LSpec::primes([4]).is_err());
        assert!(LSpec::primes([]).is_err());
        assert!(LSpec::primes([2, 3, 5]).is_ok());
    }

    #[test]
    fn closure_bounds() {
        assert_eq!(LSpec::Integers.division_closure_bound(), 1);
        assert_eq!(LSpec::dyadic().division_closure_bound(), 2);
        assert_eq!(LSpec::primes([2, 3]).unwrap().division_closure_bound(), 4);
        assert_eq!(LSpec::primes([2, 3, 5]).unwrap().division_closure_bound(), 6);
        assert_eq!(LSpec::primes([5]).unwrap().division_closure_bound(), 1);
        assert_eq!(LSpec::primes([2, 3, 5, 7]).unwrap().division_closure_bound(), 10);
    }

    #[test]
    fn heaviness() {
        assert!(!LSpec::Integers.is_heavy());
        assert!(LSpec::dyadic().is_heavy());
    }
}
