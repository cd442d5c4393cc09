//! Exact scalars and small number-theoretic helpers.
//!
//! `Rat` is always kept in lowest terms with a positive denominator (the
//! backing type reduces on construction), so equality is structural.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Convenience constructor for small integers.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Convenience constructor for small rationals; `d` must be nonzero.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn int_to_rat(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// gcd of a slice together with Bezout multipliers: returns `(g, c)` with
/// `g = gcd(a)` (nonnegative, `0` iff all entries are zero) and `c . a = g`.
pub fn gcd_bezout(a: &[Int]) -> (Int, Vec<Int>) {
    let mut g = Int::zero();
    let mut c: Vec<Int> = Vec::with_capacity(a.len());
    for ai in a {
        if ai.is_zero() {
            c.push(Int::zero());
            continue;
        }
        if g.is_zero() {
            g = ai.abs();
            c.push(int(if ai.is_negative() { -1 } else { 1 }));
            continue;
        }
        let e = g.extended_gcd(ai);
        for cj in c.iter_mut() {
            *cj *= &e.x;
        }
        c.push(e.y.clone());
        g = e.gcd;
    }
    (g, c)
}

pub fn gcd_all(a: &[Int]) -> Int {
    let mut g = Int::zero();
    for ai in a {
        g = g.gcd(ai);
    }
    g
}

/// q-adic valuation of a nonzero integer; `None` encodes the infinite
/// valuation of zero.
pub fn valuation(x: &Int, q: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let q = Int::from(q);
    let mut v = 0u64;
    let mut rest = x.abs();
    loop {
        let (quot, rem) = rest.div_rem(&q);
        if !rem.is_zero() {
            return Some(v);
        }
        v += 1;
        rest = quot;
    }
}

/// Deterministic primality test by trial division; intended for the small
/// primes that appear in denominator domains.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Strips all factors from `primes` out of `x`; the result is coprime to
/// every listed prime.
pub fn strip_primes(x: &Int, primes: &[u64]) -> Int {
    let mut rest = x.abs();
    if rest.is_zero() {
        return rest;
    }
    for &p in primes {
        let p = Int::from(p);
        loop {
            let (quot, rem) = rest.div_rem(&p);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
        }
    }
    rest
}

/// Renders a rational as `p/q`, or just `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_rat_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

/// Parses `p` or `p/q` back into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, crate::Error> {
    let bad = || crate::Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => {
            let n: Int = s.trim().parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn denominator_lcm(v: &[Rat]) -> Int {
    let mut l = Int::one();
    for r in v {
        l = l.lcm(r.denom());
    }
    l
}

/// True iff `x` is an integer rational.
pub fn is_integral_rat(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn rat_to_int(x: &Rat) -> Option<Int> {
    if is_integral_rat(x) {
        Some(x.numer().clone())
    } else {
        None
    }
}

pub fn floor_rat(x: &Rat) -> Int {
    x.floor().to_integer()
}

pub fn ceil_rat(x: &Rat) -> Int {
    x.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn dot(c: &[Int], a: &[Int]) -> Int {
        c.iter().zip(a).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn bezout_coprime_pair() {
        let a = ints(&[2, 3]);
        let (g, c) = gcd_bezout(&a);
        assert_eq!(g, int(1));
        assert_eq!(dot(&c, &a), g);
    }

    #[test]
    fn bezout_triple() {
        let a = ints(&[6, 10, 15]);
        let (g, c) = gcd_bezout(&a);
        assert_eq!(g, int(1));
        assert_eq!(dot(&c, &a), int(1));
    }

    #[test]
    fn bezout_all_zero() {
        let a = ints(&[0, 0]);
        let (g, c) = gcd_bezout(&a);
        assert_eq!(g, int(0));
        assert_eq!(c, ints(&[0, 0]));
    }

    #[test]
    fn bezout_with_zeros_and_negatives() {
        let a = ints(&[0, -4, 6]);
        let (g, c) = gcd_bezout(&a);
        assert_eq!(g, int(2));
        assert_eq!(dot(&c, &a), int(2));
        assert_eq!(c[0], int(0));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&int(12), 2), Some(2));
        assert_eq!(valuation(&int(12), 3), Some(1));
        assert_eq!(valuation(&int(12), 5), Some(0));
        assert_eq!(valuation(&int(0), 2), None);
        assert_eq!(valuation(&int(-8), 2), Some(3));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn rat_round_trip() {
        for s in ["3", "-7", "1/2", "-9/4", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
