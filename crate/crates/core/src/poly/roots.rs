//! Squarefree decomposition, Sturm chains and certified real-root isolation.

use num_traits::{One, Signed, Zero};

use super::intpoly::IntPoly;
use super::{PolyError, Polynomial};
use crate::rational::{int, Bound, Rational};

/// Rational interval `(lo, hi)` containing exactly one distinct real root of
/// the polynomial it was computed for. Neither endpoint is a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub root_multiplicity: usize,
}

impl IsolatingInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    /// True when the open interval lies inside `[a, b]`.
    pub fn within(&self, a: &Rational, b: &Rational) -> bool {
        a <= &self.lo && &self.hi <= b
    }

    pub fn disjoint_from(&self, other: &IsolatingInterval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }
}

/// `p, p', -rem(p, p'), ...` down to a nonzero constant (or to the gcd when
/// `p` is not squarefree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &Polynomial) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroInput("sturm chain"));
        }
        let head = IntPoly::from_poly(p);
        let mut chain = vec![head.clone()];
        let d = head.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg());
            }
        }
        Ok(SturmChain { chain })
    }

    /// The chain, each member scaled by a positive constant.
    pub fn polys(&self) -> Vec<Polynomial> {
        self.chain.iter().map(IntPoly::to_poly).collect()
    }

    /// Sign changes of the chain at `at`, zeros skipped.
    pub fn variations(&self, at: &Bound) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at_bound(at);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`. For a squarefree chain head the
    /// variation count is right-continuous, so endpoints may be roots.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        if !bound_lt(lo, hi) {
            return 0;
        }
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

fn bound_lt(a: &Bound, b: &Bound) -> bool {
    match (a, b) {
        (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, _) => false,
        (Bound::NegInf, _) | (_, Bound::PosInf) => true,
        (Bound::Finite(_), Bound::NegInf) => false,
        (Bound::Finite(x), Bound::Finite(y)) => x < y,
    }
}

/// `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroSquarefree);
    }
    if p.is_constant() {
        return Ok(Polynomial::one());
    }
    let p = IntPoly::from_poly(p);
    let g = p.gcd(&p.derivative());
    Ok(p.div_exact(&g).to_poly().monic())
}

/// Yun's algorithm: monic pairwise-coprime squarefree factors `(f_i, i)` with
/// `p = lc(p) * prod f_i^i`. Trivial factors are omitted.
pub fn squarefree_decomposition(p: &Polynomial) -> Result<Vec<(Polynomial, usize)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("squarefree decomposition"));
    }
    let mut out = Vec::new();
    if p.is_constant() {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0);
    let c = dp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.exact_div(&a);
        let c = d.exact_div(&a);
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Distinct real roots of `p` in `(lo, hi]`.
pub fn count_real_roots(p: &Polynomial, lo: &Bound, hi: &Bound) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("count_real_roots"));
    }
    let s = squarefree_part(p)?;
    Ok(SturmChain::new(&s)?.count(lo, hi))
}

/// Cauchy bound: every root lies strictly inside `(-B, B)`.
fn cauchy_bound(p: &Polynomial) -> Rational {
    let lead = p.leading().unwrap().abs();
    let n = p.degree().unwrap();
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    Rational::one() + max
}

/// A point strictly inside `(lo, hi)` where `p` does not vanish.
fn split_point(p: &IntPoly, lo: &Rational, hi: &Rational) -> Rational {
    let mid = (lo + hi) / int(2);
    if p.sign_at(&mid) != 0 {
        return mid;
    }
    let mut den = 3i64;
    loop {
        for k in 1..den {
            let t = lo + (hi - lo) * Rational::new(k.into(), den.into());
            if p.sign_at(&t) != 0 {
                return t;
            }
        }
        den += 1;
    }
}

/// Disjoint isolating intervals, one per distinct real root, sorted
/// increasingly, with multiplicities. Constants give an empty list.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<IsolatingInterval>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("isolate_real_roots"));
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    // each isolated root is a simple root of exactly one squarefree factor,
    // which therefore changes sign across the interval
    let decomposition = squarefree_decomposition(p)?;
    let sqf = decomposition.iter().fold(Polynomial::one(), |acc, (f, _)| &acc * f);
    let factors: Vec<(IntPoly, usize)> = decomposition.iter().map(|(f, m)| (IntPoly::from_poly(f), *m)).collect();
    let chain = SturmChain::new(&sqf)?;
    let sqf = IntPoly::from_poly(&sqf);
    let b = cauchy_bound(p);
    let variations = |x: &Rational| chain.variations(&Bound::Finite(x.clone()));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), variations(&-b.clone()), b.clone(), variations(&b))];
    while let Some((lo, vlo, hi, vhi)) = stack.pop() {
        match vlo.saturating_sub(vhi) {
            0 => {}
            1 => {
                let root_multiplicity = factors
                    .iter()
                    .find(|(f, _)| f.sign_at(&lo) != f.sign_at(&hi))
                    .map(|(_, m)| *m)
                    .expect("isolated root belongs to one squarefree factor");
                out.push(IsolatingInterval { lo, hi, root_multiplicity });
            }
            _ => {
                let m = split_point(&sqf, &lo, &hi);
                let vm = variations(&m);
                stack.push((lo, vlo, m.clone(), vm));
                stack.push((m, vm, hi, vhi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Shrink an isolating interval of `p` below `width`, keeping non-root
/// endpoints.
pub fn refine_interval(
    p: &Polynomial,
    interval: &IsolatingInterval,
    width: &Rational,
) -> Result<IsolatingInterval, PolyError> {
    Ok(refine_squarefree(&squarefree_part(p)?, interval, width))
}

/// [`refine_interval`] with the squarefree part already computed.
pub(crate) fn refine_squarefree(sqf: &Polynomial, interval: &IsolatingInterval, width: &Rational) -> IsolatingInterval {
    let sqf = IntPoly::from_poly(sqf);
    let mut iv = interval.clone();
    while &iv.width() >= width {
        halve(&sqf, &mut iv);
    }
    iv
}

/// One bisection step on an isolating interval of the squarefree `sqf`. An
/// exact rational root at the midpoint gets the middle half instead.
pub(crate) fn halve(sqf: &IntPoly, iv: &mut IsolatingInterval) {
    let mid = (&iv.lo + &iv.hi) / int(2);
    let v = sqf.sign_at(&mid);
    if v == 0 {
        let quarter = iv.width() / int(4);
        iv.lo = &mid - &quarter;
        iv.hi = &mid + &quarter;
    } else if sqf.sign_at(&iv.lo) != v {
        iv.hi = mid;
    } else {
        iv.lo = mid;
    }
}

/// Real roots counted with multiplicity.
pub fn real_roots_with_multiplicity(p: &Polynomial) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("real root count"));
    }
    let mut total = 0;
    for (f, m) in squarefree_decomposition(p)? {
        total += m * SturmChain::new(&f)?.count(&Bound::NegInf, &Bound::PosInf);
    }
    Ok(total)
}

/// All roots real (counted with multiplicity). Nonzero constants are
/// vacuously real-rooted.
pub fn is_real_rooted(p: &Polynomial) -> Result<bool, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("is_real_rooted"));
    }
    Ok(real_roots_with_multiplicity(p)? == p.degree().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn x2_minus_5_16() -> Polynomial {
        Polynomial::new(vec![rat(-5, 16), int(0), int(1)])
    }

    #[test]
    fn squarefree_examples() {
        let p = Polynomial::from_roots(&[int(1), int(1), int(-2)]);
        assert_eq!(squarefree_part(&p).unwrap(), Polynomial::from_roots(&[int(1), int(-2)]));
        assert_eq!(squarefree_part(&x2_minus_5_16()).unwrap(), x2_minus_5_16());
        assert_eq!(squarefree_part(&Polynomial::from_i64(&[7])).unwrap(), Polynomial::one());
        assert_eq!(squarefree_part(&Polynomial::zero()), Err(PolyError::ZeroSquarefree));
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let p = Polynomial::from_roots(&[int(1), int(1), int(-2), int(3), int(3), int(3)]).scale(&int(5));
        let f = squarefree_decomposition(&p).unwrap();
        assert_eq!(
            f,
            vec![
                (Polynomial::linear_factor(&int(-2)), 1),
                (Polynomial::linear_factor(&int(1)), 2),
                (Polynomial::linear_factor(&int(3)), 3)
            ]
        );
    }

    #[test]
    fn counting_examples() {
        let p = x2_minus_5_16();
        let f = |a: i64, b: i64| count_real_roots(&p, &Bound::Finite(int(a)), &Bound::Finite(int(b))).unwrap();
        assert_eq!(f(0, 1), 1);
        assert_eq!(count_real_roots(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
        let q = Polynomial::from_i64(&[1, 0, 1]);
        assert_eq!(count_real_roots(&q, &Bound::NegInf, &Bound::PosInf).unwrap(), 0);
        assert!(count_real_roots(&Polynomial::zero(), &Bound::NegInf, &Bound::PosInf).is_err());
    }

    #[test]
    fn half_open_semantics_at_roots() {
        // roots -1, 0, 1
        let p = Polynomial::from_roots(&[int(-1), int(0), int(1)]);
        let c = |a: i64, b: i64| count_real_roots(&p, &Bound::Finite(int(a)), &Bound::Finite(int(b))).unwrap();
        assert_eq!(c(-1, 0), 1);
        assert_eq!(c(-1, 1), 2);
        assert_eq!(c(-2, -1), 1);
        assert_eq!(c(0, 0), 0);
    }

    #[test]
    fn isolation_examples() {
        let iv = isolate_real_roots(&x2_minus_5_16()).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].within(&int(-1), &int(0)) || iv[0].hi <= int(0));
        assert!(iv[0].hi <= int(0) && iv[0].lo >= int(-1) || {
            let r = refine_interval(&x2_minus_5_16(), &iv[0], &rat(1, 10)).unwrap();
            r.within(&int(-1), &int(0))
        });
        let r1 = refine_interval(&x2_minus_5_16(), &iv[1], &rat(1, 10)).unwrap();
        assert!(r1.within(&int(0), &int(1)));

        let cube = isolate_real_roots(&Polynomial::monomial(int(1), 3)).unwrap();
        assert_eq!(cube.len(), 1);
        assert_eq!(cube[0].root_multiplicity, 3);
        assert!(cube[0].lo < int(0) && int(0) < cube[0].hi);

        let sq = isolate_real_roots(&Polynomial::from_i64(&[1, -2, 1])).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!(sq[0].root_multiplicity, 2);
        assert!(sq[0].lo < int(1) && int(1) < sq[0].hi);

        assert!(isolate_real_roots(&Polynomial::from_i64(&[4])).unwrap().is_empty());
    }

    #[test]
    fn real_rootedness() {
        assert!(is_real_rooted(&x2_minus_5_16()).unwrap());
        assert!(!is_real_rooted(&Polynomial::from_i64(&[1, 0, 1])).unwrap());
        assert!(is_real_rooted(&Polynomial::from_i64(&[5])).unwrap());
        assert!(is_real_rooted(&Polynomial::zero()).is_err());
    }

    #[test]
    fn refine_centers_on_rational_root() {
        let p = Polynomial::from_roots(&[int(0), int(2)]);
        let iv = isolate_real_roots(&p).unwrap();
        for i in &iv {
            let r = refine_interval(&p, i, &rat(1, 1000)).unwrap();
            assert!(r.width() < rat(1, 1000));
            assert_eq!(count_real_roots(&p, &Bound::Finite(r.lo.clone()), &Bound::Finite(r.hi.clone())).unwrap(), 1);
        }
    }
}
