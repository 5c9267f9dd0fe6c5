//! Exact arithmetic substrate for the coefficient pipeline.
//!
//! Three layers:
//! * [`ZetaExpr`] — elements of the constant ring Q[π², ζ(3), ζ(5), …] with an
//!   e^γ exponent tag. Even zeta values are eliminated eagerly (ζ(2k) is a
//!   rational multiple of π^{2k} via Bernoulli numbers), so equality is
//!   decidable by comparing term maps.
//! * [`FormalSeries`] — truncated power series in one formal small variable
//!   (read: 1/log z or 1/log y) with `ZetaExpr` coefficients, supporting
//!   multiply, exponentiate, compose, invert and revert.
//! * [`RationalFunc`] — rational functions of the summation index k over Q,
//!   reduced, with the partial-fraction hook the alternating sums need.

mod expr;
mod ratfunc;
mod series;

pub use expr::{eta_value, zeta_value, Monomial, ZetaExpr};
pub use ratfunc::{Poly, RationalFunc};
pub use series::FormalSeries;

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Parse a decimal string ("2", "1.5", "-0.25") into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::domain(format!("not a decimal number: {s:?}"));
    let (sign, digits) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    if digits.is_empty() {
        return Err(bad());
    }
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let mut denom = BigInt::one();
    for c in frac_part.chars() {
        numer = numer * 10 + (c as u8 - b'0');
        denom *= 10;
    }
    Ok(BigRational::new(numer * sign, denom))
}

/// Exact rational from an f64 (every finite f64 is a rational).
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::domain(format!("cannot represent {x} as a rational")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn parse_decimal_exact() {
        assert_eq!(parse_decimal("2").unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(
            parse_decimal("1.5").unwrap(),
            BigRational::new(3.into(), 2.into())
        );
        assert_eq!(
            parse_decimal("-0.25").unwrap(),
            BigRational::new((-1).into(), 4.into())
        );
        assert_eq!(
            parse_decimal("2.50").unwrap(),
            BigRational::new(5.into(), 2.into())
        );
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("1e3").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn rational_from_f64_roundtrip() {
        for &x in &[0.5, 1.5, 2.0, 0.1, 3.0739] {
            let r = rational_from_f64(x).unwrap();
            assert_eq!(r.to_f64().unwrap(), x);
        }
    }
}
