//! Exact rational scalars.
//!
//! Every coefficient in this crate is a [`Rat`]: an arbitrary-precision
//! rational kept in canonical reduced form with a positive denominator.
//! There is no floating-point mode anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always reduced, denominator > 0.
pub type Rat = BigRational;

/// Shorthand for `num/den` from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Renders a rational as `num` or `num/den`.
pub fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num` or `num/den`, with an optional leading sign.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::BadScalar(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// `(-1)^k` as a rational sign.
pub fn sign_pow(k: usize) -> Rat {
    if k % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// True when `r` is negative; used by the renderers to pick `+`/`-` glue.
pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = rat(6, -4);
        assert_eq!(render_rat(&r), "-3/2");
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3", "-3", "1/2", "-7/3", "0"] {
            assert_eq!(render_rat(&parse_rat(s).unwrap()), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn exactness() {
        // (1/3)*3 == 1 with no rounding
        assert_eq!(rat(1, 3) * int(3), int(1));
    }
}
