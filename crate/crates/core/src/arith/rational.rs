use num::bigint::BigInt;
use num::{BigRational, One, Zero};

use super::ArithError;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` (optional sign, surrounding whitespace allowed).
pub fn parse_rational(input: &str) -> Result<Rational, ArithError> {
    let err = || ArithError::Parse {
        what: "rational",
        input: input.to_string(),
    };
    let s = input.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p"` for integers and `"p/q"` otherwise; inverse of
/// [`parse_rational`].
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `C(n, k)` as an arbitrary-precision integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}
