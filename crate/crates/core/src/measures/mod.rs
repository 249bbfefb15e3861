//! Finite atomic measures with rational atoms and (signed) rational weights.

mod system;

pub use system::{MeasureSystem, SystemKind};
pub(crate) use system::cauchy_vandermonde_rows;

use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::Polynomial;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("empty interval: lo = {0} must be below hi = {1}")]
    EmptyInterval(String, String),
    #[error("duplicate atom at {0}")]
    DuplicateAtom(String),
    #[error("zero weight at {0}")]
    ZeroWeight(String),
    #[error("atom {0} lies outside the support interval {1}")]
    AtomOutsideSupport(String, String),
    #[error("use christoffel2 for a real transform point (b = 0)")]
    UseChristoffel2,
    #[error("pole of m-function at {0}")]
    PoleOfMFunction(String),
    #[error("not a Nikishin pair: supports {0} and {1} have overlapping interiors")]
    NotNikishinPair(String, String),
    #[error("bracket undefined at common point {0}")]
    BracketUndefined(String),
    #[error("measure {0} needs a support interval")]
    MissingSupport(usize),
    #[error("intervals {0} and {1} have overlapping interiors")]
    OverlappingIntervals(String, String),
    #[error("measure {0} is not sign-definite")]
    SignIndefinite(usize),
    #[error("pole {0} lies in the support interval {1}")]
    PoleInsideSupport(String, String),
    #[error("duplicate pole {0}")]
    DuplicatePoles(String),
    #[error("poles lie on both sides of {0}")]
    StraddlingPoles(String),
    #[error("{0}: expected {1} measures, got {2}")]
    WrongSize(&'static str, String, usize),
    #[error("{0}")]
    Unsupported(String),
}

/// Closed interval `[lo, hi]` with `lo < hi`; its interior is `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, MeasureError> {
        if lo >= hi {
            return Err(MeasureError::EmptyInterval(format_rational(&lo), format_rational(&hi)));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_open(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// Interiors intersect (touching at one endpoint does not count).
    pub fn interiors_overlap(&self, other: &Interval) -> bool {
        self.lo.clone().max(other.lo.clone()) < self.hi.clone().min(other.hi.clone())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// `sum_i w_i delta_{t_i}`. Atoms are kept sorted by point, points are
/// distinct and weights nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: Vec<(Rational, Rational)>,
    support: Option<Interval>,
    moment_cache: MomentCache,
}

/// Longest moment sequence computed so far. Invisible to equality.
#[derive(Default)]
struct MomentCache(Mutex<Vec<Rational>>);

impl Clone for MomentCache {
    fn clone(&self) -> Self {
        MomentCache(Mutex::new(self.0.lock().expect("moment cache poisoned").clone()))
    }
}

impl PartialEq for MomentCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for MomentCache {}

impl fmt::Debug for MomentCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("..")
    }
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(Rational, Rational)>, support: Option<Interval>) -> Result<Self, MeasureError> {
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        for w in atoms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(MeasureError::DuplicateAtom(format_rational(&w[0].0)));
            }
        }
        for (t, w) in &atoms {
            if w.is_zero() {
                return Err(MeasureError::ZeroWeight(format_rational(t)));
            }
            if let Some(s) = &support {
                if !s.contains(t) {
                    return Err(MeasureError::AtomOutsideSupport(format_rational(t), s.to_string()));
                }
            }
        }
        Ok(DiscreteMeasure { atoms, support, moment_cache: MomentCache::default() })
    }

    /// Reweight atoms, dropping any that end up with weight zero.
    fn reweighted(&self, f: impl Fn(&Rational, &Rational) -> Rational) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|(t, w)| (t.clone(), f(t, w)))
                .filter(|(_, w)| !w.is_zero())
                .collect(),
            support: self.support.clone(),
            moment_cache: MomentCache::default(),
        }
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn points(&self) -> impl Iterator<Item = &Rational> {
        self.atoms.iter().map(|(t, _)| t)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn support(&self) -> Option<&Interval> {
        self.support.as_ref()
    }

    pub fn with_support(mut self, support: Interval) -> Result<Self, MeasureError> {
        if let Some((t, _)) = self.atoms.iter().find(|(t, _)| !support.contains(t)) {
            return Err(MeasureError::AtomOutsideSupport(format_rational(t), support.to_string()));
        }
        self.support = Some(support);
        Ok(self)
    }

    /// Declared support interval, or the convex hull of the atoms.
    pub fn hull(&self) -> Option<Interval> {
        if let Some(s) = &self.support {
            return Some(s.clone());
        }
        let lo = self.atoms.first()?.0.clone();
        let hi = self.atoms.last()?.0.clone();
        if lo == hi {
            // a single atom: pad so the interval is nondegenerate
            return Some(Interval { lo: &lo - Rational::one(), hi: &hi + Rational::one() });
        }
        Some(Interval { lo, hi })
    }

    /// `Some(1)` / `Some(-1)` when all weights share a sign; `None` for
    /// mixed signs or the empty measure.
    pub fn sign(&self) -> Option<i8> {
        if self.atoms.is_empty() {
            return None;
        }
        if self.atoms.iter().all(|(_, w)| w.is_positive()) {
            Some(1)
        } else if self.atoms.iter().all(|(_, w)| w.is_negative()) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn moment(&self, k: usize) -> Rational {
        self.atoms.iter().map(|(t, w)| w * num_traits::pow(t.clone(), k)).sum()
    }

    /// `c_0, ..., c_{count-1}`.
    pub fn moments(&self, count: usize) -> Vec<Rational> {
        let mut cache = self.moment_cache.0.lock().expect("moment cache poisoned");
        if cache.len() < count {
            let mut out = vec![Rational::zero(); count];
            for (t, w) in &self.atoms {
                let mut p = w.clone();
                for c in out.iter_mut() {
                    *c += &p;
                    p *= t;
                }
            }
            *cache = out;
        }
        cache[..count].to_vec()
    }

    /// `int f dmu` for a polynomial `f`.
    pub fn integrate(&self, f: &Polynomial) -> Rational {
        self.atoms.iter().map(|(t, w)| w * f.eval(t)).sum()
    }

    pub fn total_mass(&self) -> Rational {
        self.moment(0)
    }

    /// `(x - z0) dmu`.
    pub fn christoffel1(&self, z0: &Rational) -> DiscreteMeasure {
        self.reweighted(|t, w| w * (t - z0))
    }

    /// `(x - z0)^2 dmu`.
    pub fn christoffel2(&self, z0: &Rational) -> DiscreteMeasure {
        self.reweighted(|t, w| {
            let d = t - z0;
            w * &d * &d
        })
    }

    /// `(x - z0)^d dmu`.
    pub fn christoffel_pow(&self, z0: &Rational, d: usize) -> DiscreteMeasure {
        self.reweighted(|t, w| w * num_traits::pow(t - z0, d))
    }

    /// `|x - (a + ib)|^2 dmu` for `b != 0`.
    pub fn christoffel_abs2(&self, a: &Rational, b: &Rational) -> Result<DiscreteMeasure, MeasureError> {
        if b.is_zero() {
            return Err(MeasureError::UseChristoffel2);
        }
        Ok(self.reweighted(|t, w| {
            let d = t - a;
            w * (&d * &d + b * b)
        }))
    }

    /// `p(x) dmu`.
    pub fn times_polynomial(&self, p: &Polynomial) -> DiscreteMeasure {
        self.reweighted(|t, w| w * p.eval(t))
    }

    /// `m(x) = sum_i w_i / (t_i - x)`.
    pub fn m_function_eval(&self, x: &Rational) -> Result<Rational, MeasureError> {
        let mut acc = Rational::zero();
        for (t, w) in &self.atoms {
            if t == x {
                return Err(MeasureError::PoleOfMFunction(format_rational(x)));
            }
            acc += w / (t - x);
        }
        Ok(acc)
    }

    /// Atomwise sum; weights at shared points are added and cancelled atoms
    /// dropped. The support of `self` is kept when it covers the result.
    pub fn add(&self, other: &DiscreteMeasure) -> DiscreteMeasure {
        let mut atoms: Vec<(Rational, Rational)> = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.atoms.len() || j < other.atoms.len() {
            let take_left = j >= other.atoms.len() || (i < self.atoms.len() && self.atoms[i].0 <= other.atoms[j].0);
            if take_left {
                let (t, w) = &self.atoms[i];
                if j < other.atoms.len() && other.atoms[j].0 == *t {
                    atoms.push((t.clone(), w + &other.atoms[j].1));
                    j += 1;
                } else {
                    atoms.push((t.clone(), w.clone()));
                }
                i += 1;
            } else {
                atoms.push(other.atoms[j].clone());
                j += 1;
            }
        }
        atoms.retain(|(_, w)| !w.is_zero());
        let support = self
            .support
            .clone()
            .filter(|s| atoms.iter().all(|(t, _)| s.contains(t)));
        DiscreteMeasure { atoms, support, moment_cache: MomentCache::default() }
    }
}

impl fmt::Display for DiscreteMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (t, w)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", format_rational(t), format_rational(w))?;
        }
        write!(f, "}}")?;
        if let Some(s) = &self.support {
            write!(f, " on {s}")?;
        }
        Ok(())
    }
}

/// `<s1, s2> = m_{s2}(x) ds1(x)`.
pub fn nikishin_bracket(s1: &DiscreteMeasure, s2: &DiscreteMeasure) -> Result<DiscreteMeasure, MeasureError> {
    if let (Some(g1), Some(g2)) = (s1.hull(), s2.hull()) {
        if g1.interiors_overlap(&g2) {
            return Err(MeasureError::NotNikishinPair(g1.to_string(), g2.to_string()));
        }
    }
    let mut atoms = Vec::with_capacity(s1.len());
    for (t, w) in s1.atoms() {
        let m = s2
            .m_function_eval(t)
            .map_err(|_| MeasureError::BracketUndefined(format_rational(t)))?;
        atoms.push((t.clone(), w * m));
    }
    atoms.retain(|(_, w)| !w.is_zero());
    Ok(DiscreteMeasure { atoms, support: s1.support.clone(), moment_cache: MomentCache::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn sym3() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![(int(-1), rat(1, 3)), (int(0), rat(1, 3)), (int(1), rat(1, 3))], None).unwrap()
    }

    fn unit() -> Interval {
        Interval::new(int(0), int(1)).unwrap()
    }

    fn sigma1() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![(rat(1, 4), rat(1, 2)), (rat(3, 4), rat(1, 2))], Some(unit())).unwrap()
    }

    fn sigma2() -> DiscreteMeasure {
        DiscreteMeasure::new(
            vec![(int(2), rat(1, 2)), (int(3), rat(1, 2))],
            Some(Interval::new(int(2), int(3)).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn moments() {
        let m = sym3();
        assert_eq!(m.moment(2), rat(2, 3));
        assert_eq!(m.moment(0), int(1));
        assert_eq!(m.moment(3), int(0));
        assert_eq!(m.moments(4), vec![int(1), int(0), rat(2, 3), int(0)]);
    }

    #[test]
    fn christoffel_examples() {
        let c = sym3().christoffel1(&int(2));
        let w: Vec<_> = c.atoms().iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(w, vec![int(-1), rat(-2, 3), rat(-1, 3)]);
        assert_eq!(c.moment(0), int(-2));
        assert_eq!(sym3().christoffel1(&int(0)).len(), 2);

        let two = DiscreteMeasure::new(vec![(int(0), int(1)), (int(1), int(1))], None).unwrap();
        let w: Vec<_> = two.christoffel2(&int(2)).atoms().iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(w, vec![int(4), int(1)]);
        assert_eq!(two.christoffel2(&int(1)).len(), 1);
    }

    #[test]
    fn modulus_transform() {
        let m = DiscreteMeasure::new(vec![(int(0), int(1))], None).unwrap();
        assert_eq!(m.christoffel_abs2(&int(0), &int(1)).unwrap().atoms()[0].1, int(1));
        let m = DiscreteMeasure::new(vec![(int(1), rat(1, 2))], None).unwrap();
        assert_eq!(m.christoffel_abs2(&int(0), &int(1)).unwrap().atoms()[0].1, int(1));
        assert_eq!(m.christoffel_abs2(&int(0), &int(0)), Err(MeasureError::UseChristoffel2));
        assert_eq!(sym3().christoffel_abs2(&rat(1, 2), &rat(1, 3)).unwrap().sign(), Some(1));
    }

    #[test]
    fn m_function() {
        assert_eq!(sigma2().m_function_eval(&rat(1, 4)).unwrap(), rat(36, 77));
        assert_eq!(sigma2().m_function_eval(&rat(3, 4)).unwrap(), rat(28, 45));
        assert!(matches!(sigma2().m_function_eval(&int(2)), Err(MeasureError::PoleOfMFunction(_))));
        let single = DiscreteMeasure::new(vec![(int(5), int(3))], None).unwrap();
        assert_eq!(single.m_function_eval(&int(2)).unwrap(), int(1));
    }

    #[test]
    fn bracket() {
        let b = nikishin_bracket(&sigma1(), &sigma2()).unwrap();
        assert_eq!(b.atoms(), &[(rat(1, 4), rat(18, 77)), (rat(3, 4), rat(14, 45))]);
        let overlapping = DiscreteMeasure::new(vec![(rat(1, 2), int(1))], Some(Interval::new(rat(1, 2), int(2)).unwrap())).unwrap();
        assert!(matches!(nikishin_bracket(&sigma1(), &overlapping), Err(MeasureError::NotNikishinPair(..))));
        let shared = DiscreteMeasure::new(vec![(rat(1, 4), int(1))], Some(Interval::new(rat(1, 4), int(1)).unwrap())).unwrap();
        let s1 = DiscreteMeasure::new(vec![(rat(1, 4), int(1))], Some(Interval::new(int(0), rat(1, 4)).unwrap())).unwrap();
        assert!(matches!(nikishin_bracket(&s1, &shared), Err(MeasureError::BracketUndefined(_))));
    }

    #[test]
    fn constructor_validation() {
        assert!(DiscreteMeasure::new(vec![(int(0), int(1)), (int(0), int(2))], None).is_err());
        assert!(DiscreteMeasure::new(vec![(int(0), int(0))], None).is_err());
        assert!(DiscreteMeasure::new(vec![(int(2), int(1))], Some(unit())).is_err());
        assert!(Interval::new(int(1), int(1)).is_err());
    }

    #[test]
    fn atomwise_sum() {
        let a = sigma1();
        let b = DiscreteMeasure::new(vec![(rat(1, 4), rat(-1, 2)), (rat(1, 2), int(1))], None).unwrap();
        let s = a.add(&b);
        assert_eq!(s.atoms(), &[(rat(1, 2), int(1)), (rat(3, 4), rat(1, 2))]);
    }

    fn measure_strategy() -> impl Strategy<Value = DiscreteMeasure> {
        proptest::collection::btree_map(-20i64..21, (-9i64..10).prop_filter("nonzero", |w| *w != 0), 1..7)
            .prop_map(|m| DiscreteMeasure::new(m.into_iter().map(|(t, w)| (rat(t, 4), rat(w, 3))).collect(), None).unwrap())
    }

    proptest! {
        #[test]
        fn christoffel_moment_shift(m in measure_strategy(), zn in -30i64..31, zd in 1i64..5) {
            let z0 = rat(zn, zd);
            let c = m.christoffel1(&z0);
            for k in 0..=20 {
                prop_assert_eq!(c.moment(k), m.moment(k + 1) - &z0 * m.moment(k));
            }
        }

        #[test]
        fn christoffel2_is_twice_christoffel1(m in measure_strategy(), zn in -30i64..31, zd in 1i64..5) {
            let z0 = rat(zn, zd);
            prop_assert_eq!(m.christoffel2(&z0), m.christoffel1(&z0).christoffel1(&z0));
        }

        #[test]
        fn m_function_christoffel_identity(m in measure_strategy(), zn in -30i64..31, xn in -30i64..31) {
            let z0 = rat(zn, 3);
            let x = rat(2 * xn + 1, 7);
            prop_assume!(m.points().all(|t| t != &x));
            let lhs = m.christoffel1(&z0).m_function_eval(&x).unwrap_or_else(|_| Rational::zero());
            let rhs = m.moment(0) + (&x - &z0) * m.m_function_eval(&x).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bracket_is_sign_definite(ws in proptest::collection::vec(1i64..9, 1..6), vs in proptest::collection::vec(1i64..9, 1..6)) {
            let s1 = DiscreteMeasure::new(ws.iter().enumerate().map(|(i, w)| (rat(i as i64 + 1, 8), int(*w))).collect(), Some(unit())).unwrap();
            let s2 = DiscreteMeasure::new(
                vs.iter().enumerate().map(|(i, w)| (int(2) + rat(i as i64, 8), int(*w))).collect(),
                Some(Interval::new(int(2), int(3)).unwrap()),
            ).unwrap();
            prop_assert_eq!(nikishin_bracket(&s1, &s2).unwrap().sign(), Some(1));
        }
    }
}
