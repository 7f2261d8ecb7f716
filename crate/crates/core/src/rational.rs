use num_bigint::BigInt;
use num_traits::Zero;
use std::str::FromStr;

use crate::parse::ParseError;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p` or `p/q` (optional sign, surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let trimmed = text.trim();
    let malformed = |msg: &str| ParseError::new(0, format!("malformed rational {trimmed:?}: {msg}"));
    let (num, den) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (trimmed, None),
    };
    let numer = BigInt::from_str(num).map_err(|_| malformed("bad numerator"))?;
    let denom = match den {
        Some(q) => {
            if q.starts_with(['+', '-']) {
                return Err(malformed("signed denominator"));
            }
            BigInt::from_str(q).map_err(|_| malformed("bad denominator"))?
        }
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(malformed("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// `p/q` form, `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
