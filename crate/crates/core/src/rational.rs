//! Rational scalars and their canonical text form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?} (expected p or p/q)")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// `n / d` from machine integers. Panics on `d == 0`.
/// `(v, l)` with `xs[i] = v[i] / l` and `l` the lcm of the denominators.
pub(crate) fn clear_denominators(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    use num_integer::Integer;
    let l = xs.iter().fold(BigInt::one(), |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
    let v = xs
        .iter()
        .map(|c| if c.denom() == &l { c.numer().clone() } else { c.numer() * (&l / c.denom()) })
        .collect();
    (v, l)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Strict parser for `-?[0-9]+(/[0-9]+)?`. Floating-point literals, signs on
/// the denominator and whitespace inside the literal are all rejected.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let body = s.strip_prefix('-').unwrap_or(s);
    let negative = body.len() != s.len();
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if !all_digits(num) || den.is_some_and(|d| !all_digits(d)) {
        return Err(ParseRationalError::Malformed(s.to_string()));
    }
    let mut n = BigInt::from_str(num).map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    if negative {
        n = -n;
    }
    let d = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| ParseRationalError::Malformed(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign as -1, 0 or 1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Decimal rendering with `digits` significant digits (round half away from
/// zero). Annotation only; never feed the result back into a computation.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    let pow = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(BigInt::from(10).pow(k as u32))
        } else {
            Rational::one() / Rational::from_integer(BigInt::from(10).pow((-k) as u32))
        }
    };
    while a < pow(e) {
        e -= 1;
    }
    while a >= pow(e + 1) {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow(shift);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut m = (scaled + half).floor().to_integer();
    let mut shift = shift;
    if m == BigInt::from(10).pow(digits as u32) {
        m /= 10;
        shift -= 1;
    }
    let mut s = m.to_string();
    // place the decimal point: value = m * 10^(-shift)
    let out = if shift <= 0 {
        s.push_str(&"0".repeat((-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        if s.len() <= shift {
            let mut z = "0.".to_string();
            z.push_str(&"0".repeat(shift - s.len()));
            z.push_str(&s);
            z
        } else {
            let (i, f) = s.split_at(s.len() - shift);
            format!("{i}.{f}")
        }
    };
    let out = if out.contains('.') {
        out.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        out
    };
    if neg {
        format!("-{out}")
    } else {
        out
    }
}

/// Extended endpoint for root-counting intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl From<Rational> for Bound {
    fn from(r: Rational) -> Self {
        Bound::Finite(r)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Finite(r) => write!(f, "{}", format_rational(r)),
            Bound::PosInf => write!(f, "+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_canonical_forms() {
        assert_eq!(parse_rational("-5/16").unwrap(), rat(-5, 16));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("4/8").unwrap(), rat(1, 2));
    }

    #[test]
    fn parse_rejects_floats_and_zero_denominators() {
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("--1").is_err());
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format_rational(&rat(-10, 32)), "-5/16");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(format_rational(&rat(6, 3)), "2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&rat(-2, 3), 3), "-0.667");
        assert_eq!(to_decimal(&int(1234), 2), "1200");
        assert_eq!(to_decimal(&rat(999, 1000), 2), "1");
        assert_eq!(to_decimal(&rat(1, 200), 3), "0.005");
    }
}
