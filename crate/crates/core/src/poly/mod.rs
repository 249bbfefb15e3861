//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` multiplies `x^i`)
//! and trailing zeros are always trimmed, so the zero polynomial is the empty
//! vector and every other polynomial has a nonzero leading coefficient.

mod interlace;
mod intpoly;
mod roots;
mod wronskian;

pub use interlace::{interlace_decide, InterlaceVerdict, InterlaceWitness};
pub use roots::{
    count_real_roots, is_real_rooted, isolate_real_roots, real_roots_with_multiplicity,
    refine_interval, squarefree_decomposition, squarefree_part, IsolatingInterval, SturmChain,
};
pub use wronskian::wronskian;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{clear_denominators, format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial has no squarefree part")]
    ZeroSquarefree,
    #[error("{0}: zero polynomial input")]
    ZeroInput(&'static str),
    #[error("interlacing undefined: second polynomial is not real-rooted")]
    InterlacingUndefined,
    #[error("internal inconsistency: wronskian route says {wronskian}, direct route says {direct} for p = {p}, q = {q}")]
    RouteDisagreement {
        wronskian: bool,
        direct: bool,
        p: String,
        q: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Polynomial::new(v)
    }

    /// `x - a`.
    pub fn linear_factor(a: &Rational) -> Self {
        Polynomial::new(vec![-a.clone(), Rational::one()])
    }

    /// Monic polynomial with the given roots (repeated entries give
    /// repeated roots).
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Polynomial::one(), |acc, r| &acc * &Polynomial::linear_factor(r))
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| crate::rational::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // homogeneous Horner over the integers: sum c_i a^i b^(d-i) / (l b^d)
        let Some(d) = self.degree() else { return Rational::zero() };
        let (c, l) = clear_denominators(&self.coeffs);
        let (a, b) = (x.numer(), x.denom());
        let mut acc = c[d].clone();
        let mut bpow = BigInt::one();
        for ci in c[..d].iter().rev() {
            bpow *= b;
            acc = acc * a + ci * &bpow;
        }
        Rational::new(acc, l * bpow)
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// k-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Polynomial::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Positive rational multiple with coprime integer coefficients. Signs
    /// are preserved everywhere, so Sturm counts are unaffected; keeps
    /// coefficient growth in remainder sequences in check.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c)).abs();
        Polynomial::new(ints.into_iter().map(|c| Rational::from_integer(c / &content)).collect())
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Quotient of a division known to be exact. Panics on a nonzero
    /// remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        intpoly::IntPoly::from_poly(self).gcd(&intpoly::IntPoly::from_poly(other)).to_poly().monic()
    }

    pub fn pow(&self, k: usize) -> Polynomial {
        (0..k).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    /// Exact test for `self = c * other` with `c` a nonzero rational.
    pub fn proportional_to(&self, other: &Polynomial) -> Option<Rational> {
        if self.is_zero() || other.is_zero() || self.degree() != other.degree() {
            return None;
        }
        let c = self.leading().unwrap() / other.leading().unwrap();
        (other.scale(&c) == *self).then_some(c)
    }

    /// Coefficients as canonical rational strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a_str = format_rational(&a);
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a_str}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a_str}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a_str}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        // convolve over the integers, normalizing once per coefficient
        let (a, la) = clear_denominators(&self.coeffs);
        let (b, lb) = clear_denominators(&rhs.coeffs);
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let l = la * lb;
        Polynomial::new(out.into_iter().map(|c| Rational::new(c, l.clone())).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::new(vec![int(1), int(0), int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Polynomial::new(vec![int(0)]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2)
        let p = Polynomial::from_roots(&[int(1), int(1), int(-2)]);
        let (q, r) = p.div_rem(&Polynomial::linear_factor(&int(1)));
        assert!(r.is_zero());
        assert_eq!(q, Polynomial::from_roots(&[int(1), int(-2)]));
        let g = p.gcd(&p.derivative());
        assert_eq!(g, Polynomial::linear_factor(&int(1)));
    }

    #[test]
    fn evaluation_is_exact() {
        let p = Polynomial::new(vec![rat(-5, 16), int(0), int(1)]);
        assert_eq!(p.eval(&rat(1, 4)), rat(-1, 4));
    }

    #[test]
    fn display() {
        let p = Polynomial::new(vec![rat(-5, 16), int(0), int(1)]);
        assert_eq!(p.to_string(), "x^2 - 5/16");
        assert_eq!(Polynomial::from_i64(&[1, -2]).to_string(), "-2*x + 1");
    }

    #[test]
    fn proportionality() {
        let p = Polynomial::from_i64(&[2, 4]);
        let q = Polynomial::from_i64(&[1, 2]);
        assert_eq!(p.proportional_to(&q), Some(int(2)));
        assert_eq!(p.proportional_to(&Polynomial::from_i64(&[1, 3])), None);
    }
}
