//! Fraction-free (Bareiss) elimination over exact rings.
//!
//! The same routine computes determinants of rational matrices and of
//! matrices with polynomial entries; in both rings every Bareiss division
//! is exact. Rational inputs are first scaled row by row to integers, so
//! the elimination itself never normalizes a fraction.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::Polynomial;
use crate::rational::{clear_denominators, Rational};

/// Commutative ring with exact division where the divisor is known to
/// divide the dividend.
pub trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, divisor: &Self) -> Self;
    /// Pivot preference; lower is better.
    fn size_hint(&self) -> usize {
        0
    }
}

impl ExactRing for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

impl ExactRing for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, divisor: &Self) -> Self {
        Polynomial::exact_div(self, divisor)
    }
    fn size_hint(&self) -> usize {
        self.degree().unwrap_or(0)
    }
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
    fn size_hint(&self) -> usize {
        self.bits() as usize
    }
}

/// Polynomial over the integers, ascending and trimmed; no content removal.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ZPoly(Vec<BigInt>);

impl ZPoly {
    fn trimmed(mut c: Vec<BigInt>) -> ZPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }
}

impl ExactRing for ZPoly {
    fn zero() -> Self {
        ZPoly(Vec::new())
    }
    fn one() -> Self {
        ZPoly(vec![<BigInt as One>::one()])
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return ZPoly(Vec::new());
        }
        let mut out = vec![<BigInt as Zero>::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::trimmed(out)
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = <BigInt as Zero>::zero();
        ZPoly::trimmed(
            (0..n).map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero)).collect(),
        )
    }
    fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }
    fn exact_div(&self, divisor: &Self) -> Self {
        let dd = divisor.0.len() - 1;
        let lead = &divisor.0[dd];
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            assert!(rem.is_empty(), "inexact polynomial division");
            return ZPoly(Vec::new());
        }
        let mut quot = vec![<BigInt as Zero>::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / lead;
            if !Zero::is_zero(&c) {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        ZPoly::trimmed(quot)
    }
    fn size_hint(&self) -> usize {
        self.0.len()
    }
}

/// Forward Bareiss elimination in place on the first `cols` columns. Returns
/// the sign of the row permutation, or `None` when a pivot column is empty
/// (the leading square block is singular).
fn bareiss_forward<R: ExactRing>(m: &mut [Vec<R>], cols: usize) -> Option<bool> {
    let n = m.len();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n.min(cols) {
        let pivot_row = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .min_by_key(|&i| m[i][k].size_hint())?;
        if pivot_row != k {
            m.swap(pivot_row, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..m[i].len() {
                let v = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_div(&prev);
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    Some(negate)
}

/// Determinant of a square matrix. The 0x0 determinant is 1.
pub fn determinant<R: ExactRing>(matrix: &[Vec<R>]) -> R {
    let n = matrix.len();
    if n == 0 {
        return R::one();
    }
    assert!(matrix.iter().all(|row| row.len() == n), "determinant of a non-square matrix");
    let mut m = matrix.to_vec();
    match bareiss_forward(&mut m, n) {
        None => R::zero(),
        Some(negate) => {
            let d = m[n - 1][n - 1].clone();
            if negate {
                d.neg()
            } else {
                d
            }
        }
    }
}

/// Determinant of a rational matrix, eliminating over the integers.
pub fn det_rational(matrix: &[Vec<Rational>]) -> Rational {
    let mut scale = <BigInt as One>::one();
    let rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            let (v, l) = clear_denominators(row);
            scale *= l;
            v
        })
        .collect();
    Rational::new(determinant(&rows), scale)
}

/// Determinant of a matrix of polynomials, eliminating over `Z[z]`.
pub fn det_polynomial(matrix: &[Vec<Polynomial>]) -> Polynomial {
    let mut scale = <BigInt as One>::one();
    let rows: Vec<Vec<ZPoly>> = matrix
        .iter()
        .map(|row| {
            let flat: Vec<Rational> = row.iter().flat_map(|p| p.coeffs().iter().cloned()).collect();
            let (_, l) = clear_denominators(&flat);
            scale *= &l;
            row.iter()
                .map(|p| ZPoly::trimmed(p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect()))
                .collect()
        })
        .collect();
    let d = determinant(&rows);
    Polynomial::new(d.0.into_iter().map(|c| Rational::new(c, scale.clone())).collect())
}

/// Solve `a x = b` for square nonsingular `a` by Bareiss elimination on the
/// augmented matrix followed by exact back-substitution. `None` if singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    // scaling a row of the augmented system leaves the solution unchanged
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(bi.clone());
            clear_denominators(&r).0
        })
        .collect();
    bareiss_forward(&mut m, n)?;
    let mut x = vec![<Rational as Zero>::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= &x[j] * &m[i][j];
        }
        x[i] = acc / &m[i][i];
    }
    Some(x)
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn naive_det(m: &[Vec<Rational>]) -> Rational {
        // Laplace expansion along the first row.
        let n = m.len();
        if n == 0 {
            return int(1);
        }
        let mut acc = int(0);
        for j in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * naive_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn small_determinants() {
        let m = vec![vec![int(1), rat(-1, 2)], vec![int(1), rat(1, 2)]];
        assert_eq!(determinant(&m), int(1));
        let s = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert_eq!(determinant(&s), int(0));
        let empty: Vec<Vec<Rational>> = vec![];
        assert_eq!(determinant(&empty), int(1));
    }

    #[test]
    fn needs_pivoting() {
        let m = vec![
            vec![int(0), int(2), int(1)],
            vec![int(3), int(0), int(1)],
            vec![int(1), int(1), int(0)],
        ];
        assert_eq!(determinant(&m), naive_det(&m));
    }

    #[test]
    fn polynomial_entries() {
        // [[x, 1], [1, x]] -> x^2 - 1
        let x = Polynomial::x();
        let one = Polynomial::one();
        let m = vec![vec![x.clone(), one.clone()], vec![one, x]];
        assert_eq!(determinant(&m), Polynomial::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn solve_matches_substitution() {
        let a = vec![
            vec![int(2), int(1), int(0)],
            vec![int(0), int(0), int(3)],
            vec![int(1), int(5), int(1)],
        ];
        let b = vec![int(1), int(2), int(3)];
        let x = solve(&a, &b).unwrap();
        for (row, bi) in a.iter().zip(&b) {
            let lhs: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, bi);
        }
        assert!(solve(&[vec![int(1), int(2)], vec![int(2), int(4)]], &[int(1), int(1)]).is_none());
    }

    proptest::proptest! {
        #[test]
        fn bareiss_agrees_with_laplace(entries in proptest::collection::vec(-9i64..10, 16), dim in 1usize..5) {
            let m: Vec<Vec<Rational>> = (0..dim)
                .map(|i| (0..dim).map(|j| rat(entries[i * 4 + j], 1 + (i + j) as i64)).collect())
                .collect();
            proptest::prop_assert_eq!(determinant(&m), naive_det(&m));
            proptest::prop_assert_eq!(det_rational(&m), naive_det(&m));
        }

        #[test]
        fn integer_elimination_matches_rational(
            entries in proptest::collection::vec((-9i64..10, 1i64..5, -9i64..10, 1i64..7), 9),
            dim in 1usize..4,
        ) {
            let m: Vec<Vec<Polynomial>> = (0..dim)
                .map(|i| (0..dim).map(|j| {
                    let (a, b, c, d) = entries[i * 3 + j];
                    Polynomial::new(vec![rat(a, b), rat(c, d)])
                }).collect())
                .collect();
            proptest::prop_assert_eq!(det_polynomial(&m), determinant(&m));
        }
    }
}
