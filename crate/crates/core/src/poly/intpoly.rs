//! Integer-coefficient working form for remainder sequences and sign
//! evaluation. Every transformation is by a positive factor, so signs at
//! any real point match the rational polynomial it came from.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Polynomial;
use crate::rational::{Bound, Rational};

/// Ascending coefficients, trimmed; primitive with positive content removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntPoly(Vec<BigInt>);

impl IntPoly {
    /// Positive multiple of `p` with coprime integer coefficients.
    pub fn from_poly(p: &Polynomial) -> IntPoly {
        let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::primitive(p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
    }

    fn primitive(mut c: Vec<BigInt>) -> IntPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        let content = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !content.is_zero() && !content.is_one() {
            for x in c.iter_mut() {
                *x /= &content;
            }
        }
        IntPoly(c)
    }

    pub fn to_poly(&self) -> Polynomial {
        Polynomial::new(self.0.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn leading(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::primitive(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Positive multiple of `self mod b`, made primitive.
    pub fn rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("division by the zero polynomial");
        let lb = b.leading().abs();
        let sb = b.leading().signum();
        let mut r = self.0.clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lead = r[dr].clone();
            let shift = dr - db;
            for x in r.iter_mut() {
                *x *= &lb;
            }
            let f = &lead * &sb;
            for (j, c) in b.0.iter().enumerate() {
                r[shift + j] -= &f * c;
            }
            debug_assert!(r[dr].is_zero());
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPoly::primitive(r)
    }

    /// Positive multiple of `self / b`, which must divide exactly.
    pub fn div_exact(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("division by the zero polynomial");
        let lb = b.leading().abs();
        let sb = b.leading().signum();
        let mut r = self.0.clone();
        if r.len() <= db {
            assert!(r.is_empty(), "inexact polynomial division");
            return IntPoly(Vec::new());
        }
        // invariant: lb^k * self = q * b + r
        let mut q = vec![BigInt::zero(); r.len() - db];
        while r.len() > db {
            let dr = r.len() - 1;
            let f = &r[dr] * &sb;
            for x in r.iter_mut().chain(q.iter_mut()) {
                *x *= &lb;
            }
            for (j, c) in b.0.iter().enumerate() {
                r[dr - db + j] -= &f * c;
            }
            q[dr - db] += f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        assert!(r.is_empty(), "inexact polynomial division");
        IntPoly::primitive(q)
    }

    /// Primitive greatest common divisor (up to sign).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Sign of the value at `x = a/b` from `sum c_i a^i b^(d-i)`, all in
    /// integers.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        let Some(d) = self.degree() else { return 0 };
        let (a, b) = (x.numer(), x.denom());
        let mut acc = self.0[d].clone();
        let mut bpow = BigInt::one();
        for i in (0..d).rev() {
            bpow *= b;
            acc = acc * a + &self.0[i] * &bpow;
        }
        sign_of(&acc)
    }

    pub fn sign_at_bound(&self, at: &Bound) -> i8 {
        match at {
            Bound::Finite(x) => self.sign_at(x),
            Bound::PosInf => sign_of(self.leading()),
            Bound::NegInf => {
                let s = sign_of(self.leading());
                if self.degree().unwrap() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-20i64..=20, 1i64..=7), 1..7).prop_map(|c| Polynomial::new(c.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn signs_match_rational_evaluation(p in arb_poly(), n in -30i64..=30, d in 1i64..=9) {
            let x = rat(n, d);
            let ip = IntPoly::from_poly(&p);
            prop_assert_eq!(ip.sign_at(&x), crate::rational::sign(&p.eval(&x)));
        }

        #[test]
        fn gcd_matches_rational_gcd(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let (x, y) = (&a * &c, &b * &c);
            prop_assume!(!x.is_zero());
            let g = IntPoly::from_poly(&x).gcd(&IntPoly::from_poly(&y)).to_poly();
            // c divides the gcd
            prop_assert!(g.div_rem(&c).1.is_zero());
        }

        #[test]
        fn exact_quotient_is_positive_multiple(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let prod = &a * &b;
            let q = IntPoly::from_poly(&prod).div_exact(&IntPoly::from_poly(&b)).to_poly();
            prop_assert!(q.proportional_to(&a).unwrap() > int(0));
        }

        #[test]
        fn remainder_is_positive_multiple(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (_, r) = a.div_rem(&b);
            let ir = IntPoly::from_poly(&a).rem(&IntPoly::from_poly(&b)).to_poly();
            if r.is_zero() {
                prop_assert!(ir.is_zero());
            } else {
                let c = ir.proportional_to(&r).unwrap();
                prop_assert!(c > int(0));
            }
        }
    }
}
