//! Strict interlacing of real-rooted polynomials, decided twice: once from
//! the sign of the Wronskian on the real line and once by sorting isolated
//! roots. The two answers must agree.

use super::intpoly::IntPoly;
use super::roots::{count_real_roots, halve, isolate_real_roots, squarefree_part};
use super::{wronskian, IsolatingInterval, PolyError, Polynomial};
use crate::rational::{Bound, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterlaceVerdict {
    Interlace,
    NotInterlace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterlaceWitness {
    pub wronskian: Polynomial,
    /// Distinct real zeros of the Wronskian (0 when it is the zero polynomial
    /// is not meaningful; see `wronskian.is_zero()`).
    pub wronskian_real_zeros: usize,
    pub degree_condition: bool,
    /// Disjoint isolating intervals of `p` and `q` (only filled when both are
    /// real-rooted with simple roots and no common root).
    pub p_roots: Vec<IsolatingInterval>,
    pub q_roots: Vec<IsolatingInterval>,
}

/// Route (a): `deg p <= deg q + 1` and `W(p, q)` has no real zeros.
fn wronskian_route(p: &Polynomial, q: &Polynomial) -> Result<(bool, Polynomial, usize, bool), PolyError> {
    let w = wronskian(&[p.clone(), q.clone()]);
    let degree_condition = p.degree().unwrap_or(0) <= q.degree().unwrap_or(0) + 1;
    if w.is_zero() {
        return Ok((false, w, 0, degree_condition));
    }
    let zeros = count_real_roots(&squarefree_part(&w)?, &Bound::NegInf, &Bound::PosInf)?;
    Ok((degree_condition && zeros == 0, w, zeros, degree_condition))
}

/// Bisect overlapping intervals until no interval of one set meets one of
/// the other. Both polynomials are squarefree; terminates because the two
/// root sets are disjoint.
fn separate(
    p: &Polynomial,
    q: &Polynomial,
    mut a: Vec<IsolatingInterval>,
    mut b: Vec<IsolatingInterval>,
) -> (Vec<IsolatingInterval>, Vec<IsolatingInterval>) {
    let (sp, sq) = (IntPoly::from_poly(p), IntPoly::from_poly(q));
    loop {
        let clash = a
            .iter()
            .enumerate()
            .find_map(|(i, x)| b.iter().position(|y| !x.disjoint_from(y)).map(|k| (i, k)));
        let Some((i, k)) = clash else { break };
        if a[i].width() >= b[k].width() {
            halve(&sp, &mut a[i]);
        } else {
            halve(&sq, &mut b[k]);
        }
    }
    (a, b)
}

fn all_real_simple(roots: &[IsolatingInterval], p: &Polynomial) -> bool {
    roots.len() == p.degree().unwrap_or(0) && roots.iter().all(|iv| iv.root_multiplicity == 1)
}

/// Route (b): simple real roots on both sides, no common root, and strict
/// alternation in the merged order. `qr` are the isolated roots of `q`.
fn direct_route(
    p: &Polynomial,
    q: &Polynomial,
    qr: Vec<IsolatingInterval>,
) -> Result<(bool, Vec<IsolatingInterval>, Vec<IsolatingInterval>), PolyError> {
    let pr = isolate_real_roots(p)?;
    if !all_real_simple(&pr, p) || !all_real_simple(&qr, q) {
        return Ok((false, Vec::new(), Vec::new()));
    }
    let g = p.gcd(q);
    if !g.is_constant() && count_real_roots(&g, &Bound::NegInf, &Bound::PosInf)? > 0 {
        return Ok((false, Vec::new(), Vec::new()));
    }
    let (pr, qr) = separate(p, q, pr, qr);
    let mut merged: Vec<(&Rational, bool)> =
        pr.iter().map(|iv| (&iv.lo, true)).chain(qr.iter().map(|iv| (&iv.lo, false))).collect();
    merged.sort_by(|x, y| x.0.cmp(y.0));
    let alternating = merged.windows(2).all(|w| w[0].1 != w[1].1);
    Ok((alternating, pr, qr))
}

/// Decide whether the zeros of `p` and `q` strictly interlace.
///
/// `q` must be real-rooted. A pair of constants (or a zero `p`) is reported
/// as `NotInterlace`: its Wronskian vanishes identically.
pub fn interlace_decide(
    p: &Polynomial,
    q: &Polynomial,
) -> Result<(InterlaceVerdict, InterlaceWitness), PolyError> {
    if q.is_zero() {
        return Err(PolyError::InterlacingUndefined);
    }
    let qr = isolate_real_roots(q)?;
    if qr.iter().map(|iv| iv.root_multiplicity).sum::<usize>() != q.degree().unwrap() {
        return Err(PolyError::InterlacingUndefined);
    }
    let (a, w, zeros, degree_condition) = wronskian_route(p, q)?;
    let trivial = p.is_zero() || (p.is_constant() && q.is_constant());
    let (b, p_roots, q_roots) = if trivial {
        (false, Vec::new(), Vec::new())
    } else {
        direct_route(p, q, qr)?
    };
    if a != b {
        return Err(PolyError::RouteDisagreement {
            wronskian: a,
            direct: b,
            p: p.to_string(),
            q: q.to_string(),
        });
    }
    let verdict = if a { InterlaceVerdict::Interlace } else { InterlaceVerdict::NotInterlace };
    Ok((
        verdict,
        InterlaceWitness { wronskian: w, wronskian_real_zeros: zeros, degree_condition, p_roots, q_roots },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn decide(p: &Polynomial, q: &Polynomial) -> InterlaceVerdict {
        interlace_decide(p, q).unwrap().0
    }

    #[test]
    fn examples() {
        let p = Polynomial::new(vec![rat(1, 2), int(1)]);
        assert_eq!(decide(&p, &Polynomial::one()), InterlaceVerdict::Interlace);
        let x2m1 = Polynomial::from_i64(&[-1, 0, 1]);
        assert_eq!(decide(&x2m1, &Polynomial::x()), InterlaceVerdict::Interlace);
        // roots -2 < -1 < 1 < 2: two of q's roots are adjacent, and W = 6x
        // vanishes at 0, so both routes reject.
        let x2m4 = Polynomial::from_i64(&[-4, 0, 1]);
        let (v, w) = interlace_decide(&x2m1, &x2m4).unwrap();
        assert_eq!(v, InterlaceVerdict::NotInterlace);
        assert_eq!(w.wronskian, Polynomial::from_i64(&[0, 6]));
    }

    #[test]
    fn undefined_for_complex_q() {
        let q = Polynomial::from_i64(&[1, 0, 1]);
        assert_eq!(interlace_decide(&Polynomial::x(), &q), Err(PolyError::InterlacingUndefined));
    }

    #[test]
    fn self_pairs_never_interlace() {
        let p = Polynomial::from_roots(&[int(-1), rat(1, 3), int(2)]);
        assert_eq!(decide(&p, &p), InterlaceVerdict::NotInterlace);
    }

    #[test]
    fn degenerate_pairs() {
        assert_eq!(decide(&Polynomial::from_i64(&[3]), &Polynomial::from_i64(&[2])), InterlaceVerdict::NotInterlace);
        assert_eq!(decide(&Polynomial::zero(), &Polynomial::x()), InterlaceVerdict::NotInterlace);
        assert_eq!(decide(&Polynomial::one(), &Polynomial::x()), InterlaceVerdict::Interlace);
    }

    #[test]
    fn close_roots_are_separated() {
        let p = Polynomial::from_roots(&[rat(1, 1000), rat(3, 1000)]);
        let q = Polynomial::from_roots(&[rat(2, 1000)]);
        assert_eq!(decide(&p, &q), InterlaceVerdict::Interlace);
        let q2 = Polynomial::from_roots(&[rat(2, 1000), rat(5, 1000)]);
        assert_eq!(decide(&p, &q2), InterlaceVerdict::Interlace);
    }

    #[test]
    fn routes_agree_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let dq = rng.gen_range(0..4);
            let roots: Vec<Rational> = (0..dq).map(|_| rat(rng.gen_range(-8..9), rng.gen_range(1..4))).collect();
            let q = Polynomial::from_roots(&roots);
            let dp = rng.gen_range(0..=dq + 1);
            let p = Polynomial::new((0..=dp).map(|_| rat(rng.gen_range(-5..6), rng.gen_range(1..3))).collect());
            assert!(interlace_decide(&p, &q).is_ok(), "routes disagree on {p} / {q}");
        }
    }
}
