//! Exact rational scalars.
//!
//! Every scalar carried by the algebraic machinery is an arbitrary
//! precision rational, kept reduced with a positive denominator. Exact
//! arithmetic is load-bearing: degenerate Gram determinants must come out
//! as literal zero and indefiniteness witnesses as exact negative values.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational; always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// True when the rational is an integer.
pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Integer value of an integral rational, when it fits in `i64`.
pub fn as_i64(x: &Rat) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

/// `(-1)^k` for an integral rational exponent `k` (possibly negative).
///
/// Panics if `k` is not an integer; callers use this for formal powers
/// whose exponents are integral by construction.
pub fn neg_one_pow(k: &Rat) -> Rat {
    assert!(is_integer(k), "(-1)^k needs an integer exponent");
    if (k.numer() % BigInt::from(2)).is_zero() {
        int(1)
    } else {
        int(-1)
    }
}

/// `k!` as a rational.
pub fn factorial(k: u32) -> Rat {
    let mut acc = BigInt::one();
    for j in 2..=k as u64 {
        acc *= BigInt::from(j);
    }
    Rat::from_integer(acc)
}

/// Generalized binomial `t(t-1)...(t-k+1)/k!` for integer (possibly
/// negative) top argument.
pub fn gen_binom(t: i64, k: u32) -> Rat {
    let mut num = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(t - j);
    }
    Rat::from_integer(num) / factorial(k)
}

/// `base^exp` for integer exponents of either sign. Panics on `0^-n`.
pub fn pow_i64(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        Rat::one() / base.pow((-exp) as i32)
    }
}

/// Bit length of the larger of numerator and denominator; used by the
/// CLI's arithmetic-size safety valve.
pub fn bit_size(x: &Rat) -> u64 {
    x.numer().bits().max(x.denom().bits())
}

/// Error for malformed rational literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError {
    text: String,
}

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid rational literal {:?}: expected p or p/q with integer p, q and q != 0",
            self.text
        )
    }
}

/// Parse `"p"` or `"p/q"` with optional leading sign. Decimal notation is
/// rejected: inputs must be exact.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError {
        text: String::from(s),
    };
    let parse_int = |t: &str| -> Result<BigInt, ParseRatError> {
        let t = t.trim();
        let (sign, digits) = match t.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut acc = BigInt::zero();
        for b in digits.bytes() {
            acc = acc * BigInt::from(10) + BigInt::from(b - b'0');
        }
        Ok(acc * BigInt::from(sign))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Canonical display form: `p/q` for non-integers, `p` for integers.
pub fn display(x: &Rat) -> String {
    use alloc::format;
    if is_integer(x) {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Lexicographic comparison of rational vectors.
pub fn lex_cmp(a: &[Rat], b: &[Rat]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            core::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Sum of `coeffs[i] * vecs[i]` for rational vectors of equal length.
pub fn vec_add_scaled(acc: &mut [Rat], v: &[Rat], s: &Rat) {
    for (a, x) in acc.iter_mut().zip(v.iter()) {
        *a += x * s;
    }
}

/// All-zero rational vector.
pub fn zero_vec(n: usize) -> Vec<Rat> {
    (0..n).map(|_| Rat::zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_reduce() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-3, -6), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert!(rat(3, -6).denom() > &BigInt::zero());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "5", "-7", "1/2", "-22/7", "+3/9"] {
            let v = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&display(&v)).unwrap(), v);
        }
        assert_eq!(parse_rat("+3/9").unwrap(), rat(1, 3));
        assert!(parse_rat("1.5").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
        assert!(parse_rat("a/2").is_err());
    }

    #[test]
    fn gen_binom_matches_small_cases() {
        assert_eq!(gen_binom(4, 2), int(6));
        assert_eq!(gen_binom(0, 0), int(1));
        assert_eq!(gen_binom(1, 3), int(0));
        // (-2 choose 1) = -2 and (-1 choose 2) = 1 in the generalized sense.
        assert_eq!(gen_binom(-2, 1), int(-2));
        assert_eq!(gen_binom(-1, 2), int(1));
    }

    #[test]
    fn neg_one_pow_parity() {
        assert_eq!(neg_one_pow(&int(0)), int(1));
        assert_eq!(neg_one_pow(&int(-3)), int(-1));
        assert_eq!(neg_one_pow(&int(4)), int(1));
    }

    #[test]
    fn pow_i64_signs() {
        assert_eq!(pow_i64(&rat(1, 2), -2), int(4));
        assert_eq!(pow_i64(&rat(-2, 1), 3), int(-8));
    }
}
