use super::Polynomial;
use crate::linalg::det_polynomial;

/// `det [ f_j^{(k)} ]`, row `k` holding the k-th derivatives. Computed by
/// fraction-free elimination over the polynomial ring.
///
/// Panics on an empty input list.
pub fn wronskian(polys: &[Polynomial]) -> Polynomial {
    assert!(!polys.is_empty(), "wronskian of an empty list");
    let mut rows = Vec::with_capacity(polys.len());
    let mut row: Vec<Polynomial> = polys.to_vec();
    for _ in 0..polys.len() {
        let next = row.iter().map(Polynomial::derivative).collect();
        rows.push(std::mem::replace(&mut row, next));
    }
    det_polynomial(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let p = Polynomial::new(vec![rat(1, 2), int(1)]);
        assert_eq!(wronskian(&[p.clone(), Polynomial::one()]), Polynomial::from_i64(&[-1]));
        assert_eq!(wronskian(&[p.clone()]), p);
        let x2 = Polynomial::monomial(int(1), 2);
        assert!(wronskian(&[x2.clone(), x2]).is_zero());
    }

    #[test]
    fn pair_formula() {
        // W(P, Q) = P Q' - Q P'
        let p = Polynomial::from_i64(&[-2, 0, 3]);
        let q = Polynomial::from_i64(&[0, 1]);
        let direct = &(&p * &q.derivative()) - &(&q * &p.derivative());
        assert_eq!(wronskian(&[p, q]), direct);
    }

    #[test]
    fn monomials_give_nonzero_constant_multiple() {
        // W(1, x, x^2, x^3) = 0! 1! 2! 3! = 12
        let ms: Vec<_> = (0..4).map(|k| Polynomial::monomial(int(1), k)).collect();
        assert_eq!(wronskian(&ms), Polynomial::from_i64(&[12]));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((-6i64..7, 1i64..4), 0..5)
            .prop_map(|cs| Polynomial::new(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn swapping_negates(ps in proptest::collection::vec(small_poly(), 2..5), i in 0usize..4, j in 0usize..4) {
            let (i, j) = (i % ps.len(), j % ps.len());
            prop_assume!(i != j);
            let mut swapped = ps.clone();
            swapped.swap(i, j);
            prop_assert_eq!(wronskian(&swapped), -wronskian(&ps));
        }

        #[test]
        fn linear_in_first_argument(a in small_poly(), b in small_poly(), c in small_poly(), k in -5i64..6) {
            let combo = &a + &b.scale(&int(k));
            let lhs = wronskian(&[combo, c.clone()]);
            let rhs = &wronskian(&[a, c.clone()]) + &wronskian(&[b, c]).scale(&int(k));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
