//! Exact rational arithmetic. All closed-form constants in this crate are
//! carried as arbitrary-precision fractions; floating point only enters at
//! the Monte Carlo boundary.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision fraction, always stored reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `n/d` as a [`Rational`]. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as a big integer. `big_factorial(0) == 1`.
pub fn big_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Rising factorial `a (a+1) ... (a+count-1)`; the empty product is 1.
pub fn rising(a: u64, count: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..count {
        acc *= BigInt::from(a + i);
    }
    acc
}

/// Nearest `f64` to an exact fraction. Returns NaN only for a zero
/// denominator, which the type invariant excludes.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `-p`, or `p/q` into an exact fraction.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

/// `H(k) = 1 + 1/2 + ... + 1/k` by binary splitting, so exact sums stay
/// cheap even for k in the tens of thousands.
pub fn harmonic(k: u64) -> Rational {
    assert!(k >= 1, "harmonic sum needs k >= 1");
    fn split(lo: u64, hi: u64) -> Rational {
        if lo == hi {
            Rational::new(BigInt::one(), BigInt::from(lo))
        } else {
            let mid = lo + (hi - lo) / 2;
            split(lo, mid) + split(mid + 1, hi)
        }
    }
    split(1, k)
}

/// Exact power with a signed exponent; `pow_i(x, -n)` inverts. Panics on
/// `0^-n`.
pub fn pow_i(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        x.pow(e)
    } else {
        Rational::one() / x.pow(-e)
    }
}

/// True when the fraction is a (nonnegative) integer.
pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn fractions_stay_reduced_with_positive_denominator() {
        let x = rat(4, -6);
        assert_eq!(x, rat(-2, 3));
        assert_eq!(x.denom(), &BigInt::from(3));
    }

    #[test]
    fn sum_round_trips_through_printout() {
        let x = rat(1, 3) + rat(1, 6);
        let printed = x.to_string();
        assert_eq!(printed, "1/2");
        assert_eq!(Rational::from_str(&printed).unwrap(), x);
    }

    #[test]
    fn factorial_and_rising_small_values() {
        assert_eq!(big_factorial(0), BigInt::from(1));
        assert_eq!(big_factorial(5), BigInt::from(120));
        assert_eq!(rising(3, 0), BigInt::from(1));
        assert_eq!(rising(3, 4), BigInt::from(3 * 4 * 5 * 6));
    }

    #[test]
    fn harmonic_matches_direct_sum() {
        assert_eq!(harmonic(1), rat_int(1));
        assert_eq!(harmonic(4), rat(25, 12));
        let mut direct = Rational::zero();
        for j in 1..=97u64 {
            direct += Rational::new(BigInt::one(), BigInt::from(j));
        }
        assert_eq!(harmonic(97), direct);
    }

    #[test]
    fn parse_rational_accepts_plain_and_fraction_forms() {
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert_eq!(parse_rational("-3/9").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational(" 1 / 2 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn signed_powers_invert() {
        let x = rat(2, 3);
        assert_eq!(pow_i(&x, 3), rat(8, 27));
        assert_eq!(pow_i(&x, -2), rat(9, 4));
        assert_eq!(pow_i(&x, 0), rat_int(1));
    }
}
