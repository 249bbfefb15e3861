use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{nikishin_bracket, DiscreteMeasure, Interval, MeasureError};
use crate::linalg::det_rational;
use crate::poly::Polynomial;
use crate::rational::{format_rational, Rational};
use crate::solver::MultiIndex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemKind {
    Explicit,
    Angelesco,
    /// `mu_j = dbase(x) / (b_j - x)`.
    AtCauchy { poles: Vec<Rational>, base: DiscreteMeasure },
    /// `mu_1 = s_1`, `mu_2 = <s_1, s_2>`, `mu_3 = <s_1, <s_2, s_3>>`.
    Nikishin { sigmas: Vec<DiscreteMeasure> },
}

impl SystemKind {
    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Explicit => "explicit",
            SystemKind::Angelesco => "angelesco",
            SystemKind::AtCauchy { .. } => "at",
            SystemKind::Nikishin { .. } => "nikishin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSystem {
    measures: Vec<DiscreteMeasure>,
    intervals: Option<Vec<Interval>>,
    kind: SystemKind,
}

fn require_sign_definite(ms: &[DiscreteMeasure]) -> Result<(), MeasureError> {
    match ms.iter().position(|m| m.sign().is_none()) {
        Some(j) => Err(MeasureError::SignIndefinite(j)),
        None => Ok(()),
    }
}

impl MeasureSystem {
    /// A system with no structural guarantees.
    pub fn explicit(measures: Vec<DiscreteMeasure>) -> Result<Self, MeasureError> {
        if measures.is_empty() {
            return Err(MeasureError::WrongSize("system", "at least 1".into(), 0));
        }
        let intervals = measures.iter().map(|m| m.support().cloned()).collect::<Option<Vec<_>>>();
        Ok(MeasureSystem { measures, intervals, kind: SystemKind::Explicit })
    }

    /// Measures on intervals whose interiors are pairwise disjoint, stored
    /// in increasing interval order.
    pub fn angelesco(measures: Vec<DiscreteMeasure>) -> Result<Self, MeasureError> {
        if measures.is_empty() {
            return Err(MeasureError::WrongSize("angelesco", "at least 1".into(), 0));
        }
        if let Some(j) = measures.iter().position(|m| m.support().is_none()) {
            return Err(MeasureError::MissingSupport(j));
        }
        require_sign_definite(&measures)?;
        let mut measures = measures;
        measures.sort_by(|a, b| a.support().unwrap().lo.cmp(&b.support().unwrap().lo));
        let intervals: Vec<Interval> = measures.iter().map(|m| m.support().unwrap().clone()).collect();
        for i in 0..intervals.len() {
            for k in i + 1..intervals.len() {
                if intervals[i].interiors_overlap(&intervals[k]) {
                    return Err(MeasureError::OverlappingIntervals(intervals[i].to_string(), intervals[k].to_string()));
                }
            }
        }
        Ok(MeasureSystem { measures, intervals: Some(intervals), kind: SystemKind::Angelesco })
    }

    /// Cauchy-Vandermonde system `dbase(x) / (b_j - x)` with all poles on one
    /// side of the base support.
    pub fn at_cauchy(base: DiscreteMeasure, poles: Vec<Rational>) -> Result<Self, MeasureError> {
        if poles.is_empty() {
            return Err(MeasureError::WrongSize("at", "at least 1 pole".into(), 0));
        }
        if base.sign().is_none() {
            return Err(MeasureError::SignIndefinite(0));
        }
        let gamma = base.hull().ok_or(MeasureError::WrongSize("at base", "at least 1 atom".into(), 0))?;
        let mut seen = BTreeSet::new();
        for b in &poles {
            if !seen.insert(b.clone()) {
                return Err(MeasureError::DuplicatePoles(format_rational(b)));
            }
            if gamma.contains(b) {
                return Err(MeasureError::PoleInsideSupport(format_rational(b), gamma.to_string()));
            }
        }
        let above = poles.iter().filter(|b| **b > gamma.hi).count();
        if above != 0 && above != poles.len() {
            return Err(MeasureError::StraddlingPoles(gamma.to_string()));
        }
        let measures = poles
            .iter()
            .map(|b| {
                let atoms = base.atoms().iter().map(|(t, w)| (t.clone(), w / (b - t))).collect();
                DiscreteMeasure::new(atoms, Some(gamma.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let r = poles.len();
        Ok(MeasureSystem {
            measures,
            intervals: Some(vec![gamma; r]),
            kind: SystemKind::AtCauchy { poles, base },
        })
    }

    /// Nikishin system generated by two or three measures on consecutive
    /// intervals with disjoint interiors.
    pub fn nikishin(sigmas: Vec<DiscreteMeasure>) -> Result<Self, MeasureError> {
        if !(2..=3).contains(&sigmas.len()) {
            return Err(MeasureError::WrongSize("nikishin", "2 or 3".into(), sigmas.len()));
        }
        if let Some(j) = sigmas.iter().position(|m| m.support().is_none()) {
            return Err(MeasureError::MissingSupport(j));
        }
        require_sign_definite(&sigmas)?;
        let mut measures = vec![sigmas[0].clone(), nikishin_bracket(&sigmas[0], &sigmas[1])?];
        if sigmas.len() == 3 {
            let inner = nikishin_bracket(&sigmas[1], &sigmas[2])?;
            measures.push(nikishin_bracket(&sigmas[0], &inner)?);
        }
        let intervals = sigmas.iter().map(|s| s.support().unwrap().clone()).collect();
        Ok(MeasureSystem { measures, intervals: Some(intervals), kind: SystemKind::Nikishin { sigmas } })
    }

    pub fn measures(&self) -> &[DiscreteMeasure] {
        &self.measures
    }

    pub fn measure(&self, j: usize) -> &DiscreteMeasure {
        &self.measures[j]
    }

    pub fn r(&self) -> usize {
        self.measures.len()
    }

    pub fn intervals(&self) -> Option<&[Interval]> {
        self.intervals.as_deref()
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    /// Distinct atom points across all measures.
    pub fn distinct_atoms(&self) -> usize {
        self.measures.iter().flat_map(|m| m.points()).collect::<BTreeSet<_>>().len()
    }

    /// One-line description for reports.
    pub fn summary(&self) -> String {
        let sizes: Vec<String> = match &self.kind {
            SystemKind::Nikishin { sigmas } => sigmas.iter().map(|s| s.len().to_string()).collect(),
            _ => self.measures.iter().map(|m| m.len().to_string()).collect(),
        };
        let label = if matches!(self.kind, SystemKind::Nikishin { .. }) { "sigma atoms" } else { "atoms" };
        format!("{} r={} {}=({})", self.kind.name(), self.r(), label, sizes.join(","))
    }

    /// Same system type-tagged `Explicit`, with every measure replaced.
    pub fn map_measures(&self, f: impl Fn(usize, &DiscreteMeasure) -> DiscreteMeasure) -> MeasureSystem {
        MeasureSystem {
            measures: self.measures.iter().enumerate().map(|(j, m)| f(j, m)).collect(),
            intervals: self.intervals.clone(),
            kind: SystemKind::Explicit,
        }
    }

    /// Finite-support budget: can index `n` be treated as if the measures had
    /// infinite support, when measure `j` additionally carries a polynomial
    /// factor of degree `extra[j]`?
    ///
    /// Each active measure needs `n_j + d_j` atoms and the system as a whole
    /// needs `|n| + max d` distinct atoms. Cauchy-Vandermonde systems span
    /// `|n|` independent functions only when at most one `n_j` exceeds 1;
    /// Nikishin systems additionally need every later generator to carry
    /// `max n_j + d` atoms, since a finite `sigma_2` makes the m-function
    /// rational.
    pub fn admits(&self, n: &MultiIndex, extra: &[usize]) -> bool {
        if n.r() != self.r() || extra.len() != self.r() {
            return false;
        }
        let active = |j: usize| n[j] > 0;
        let dmax = (0..self.r()).filter(|&j| active(j)).map(|j| extra[j]).max().unwrap_or(0);
        if (0..self.r()).any(|j| active(j) && self.measures[j].len() < n[j] + extra[j]) {
            return false;
        }
        if n.total() > 0 && self.distinct_atoms() < n.total() + dmax {
            return false;
        }
        match &self.kind {
            SystemKind::AtCauchy { .. } => n.parts().iter().filter(|&&k| k >= 2).count() <= 1,
            SystemKind::Nikishin { sigmas } => {
                let top = n.parts().iter().copied().max().unwrap_or(0);
                sigmas[1..].iter().all(|s| top + dmax <= s.len())
            }
            _ => true,
        }
    }

    /// Sampled sign check of the generalized Vandermonde determinant
    /// `det[u_i(x_k)]` for the Cauchy-Vandermonde functions
    /// `x^k / (b_j - x)`, `k < n_j`, at random ordered points inside the
    /// base interval. Returns true iff every sample has the same strict sign.
    pub fn chebyshev_sample_check(&self, n: &MultiIndex, trials: usize, seed: u64) -> Result<bool, MeasureError> {
        let SystemKind::AtCauchy { poles, .. } = &self.kind else {
            return Err(MeasureError::Unsupported("chebyshev check needs a Cauchy-Vandermonde system".into()));
        };
        let gamma = &self.intervals.as_ref().unwrap()[0];
        let size = n.total();
        if size == 0 {
            return Ok(true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = 4096i64;
        let mut sign = 0i8;
        for _ in 0..trials {
            let mut ticks = BTreeSet::new();
            while ticks.len() < size {
                ticks.insert(rng.gen_range(1..grid));
            }
            let xs = ticks
                .into_iter()
                .map(|t| &gamma.lo + (&gamma.hi - &gamma.lo) * Rational::new(t.into(), grid.into()));
            let xs: Vec<Rational> = xs.collect();
            let rows = cauchy_vandermonde_rows(poles, n, &xs);
            let d = det_rational(&rows);
            let s = crate::rational::sign(&d);
            if s == 0 || (sign != 0 && s != sign) {
                return Ok(false);
            }
            sign = s;
        }
        Ok(true)
    }

    /// `(mu_1, mu_2 + q mu_1)`.
    pub fn perturb_second_measure(&self, q: &Polynomial) -> Result<MeasureSystem, MeasureError> {
        if self.r() != 2 {
            return Err(MeasureError::WrongSize("perturbation", "2".into(), self.r()));
        }
        let mu1 = self.measures[0].clone();
        let mu2 = self.measures[1].add(&mu1.times_polynomial(q));
        Ok(MeasureSystem { measures: vec![mu1, mu2], intervals: None, kind: SystemKind::Explicit })
    }
}

/// Rows `x_k^i / (b_j - x_k)` for `j` in order and `i < n_j`.
pub(crate) fn cauchy_vandermonde_rows(poles: &[Rational], n: &MultiIndex, xs: &[Rational]) -> Vec<Vec<Rational>> {
    let mut rows = Vec::with_capacity(n.total());
    for (j, b) in poles.iter().enumerate() {
        for i in 0..n[j] {
            rows.push(xs.iter().map(|x| num_traits::pow(x.clone(), i) / (b - x)).collect());
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn iv(a: Rational, b: Rational) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn angelesco_example() -> Vec<DiscreteMeasure> {
        vec![
            DiscreteMeasure::new(vec![(rat(-3, 4), rat(1, 2)), (rat(-1, 4), rat(1, 2))], Some(iv(int(-1), int(0)))).unwrap(),
            DiscreteMeasure::new(vec![(rat(1, 4), rat(1, 2)), (rat(3, 4), rat(1, 2))], Some(iv(int(0), int(1)))).unwrap(),
        ]
    }

    fn at_base() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![(int(0), rat(1, 2)), (rat(1, 2), rat(1, 4)), (int(1), rat(1, 4))], Some(iv(int(0), int(1))))
            .unwrap()
    }

    #[test]
    fn angelesco_constructor() {
        let mut ms = angelesco_example();
        ms.reverse();
        let s = MeasureSystem::angelesco(ms).unwrap();
        assert_eq!(s.intervals().unwrap()[0], iv(int(-1), int(0)));
        assert!(MeasureSystem::angelesco(vec![angelesco_example()[1].clone()]).is_ok());
        let both = vec![angelesco_example()[1].clone(), angelesco_example()[1].clone()];
        assert!(matches!(MeasureSystem::angelesco(both), Err(MeasureError::OverlappingIntervals(..))));
        let signed = DiscreteMeasure::new(vec![(rat(1, 4), int(1)), (rat(3, 4), int(-1))], Some(iv(int(0), int(1)))).unwrap();
        assert!(matches!(MeasureSystem::angelesco(vec![signed]), Err(MeasureError::SignIndefinite(0))));
    }

    #[test]
    fn angelesco_rejects_exactly_overlapping_interiors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let mut e: Vec<i64> = (0..4).map(|_| rng.gen_range(-6..7)).collect();
            if e[0] == e[1] || e[2] == e[3] {
                continue;
            }
            e[..2].sort();
            e[2..].sort();
            let (a, b) = (iv(int(e[0]), int(e[1])), iv(int(e[2]), int(e[3])));
            let mk = |i: &Interval| DiscreteMeasure::new(vec![(i.lo.clone(), int(1))], Some(i.clone())).unwrap();
            let overlap = e[0].max(e[2]) < e[1].min(e[3]);
            assert_eq!(MeasureSystem::angelesco(vec![mk(&a), mk(&b)]).is_err(), overlap);
        }
    }

    #[test]
    fn at_constructor() {
        let s = MeasureSystem::at_cauchy(at_base(), vec![int(2), int(3)]).unwrap();
        let w = |j: usize| s.measure(j).atoms().iter().map(|(_, w)| w.clone()).collect::<Vec<_>>();
        assert_eq!(w(0), vec![rat(1, 4), rat(1, 6), rat(1, 4)]);
        assert_eq!(w(1), vec![rat(1, 6), rat(1, 10), rat(1, 8)]);
        assert_eq!(MeasureSystem::at_cauchy(at_base(), vec![int(2)]).unwrap().measure(0).sign(), Some(1));
        assert!(MeasureSystem::at_cauchy(at_base(), vec![rat(1, 2)]).is_err());
        assert!(MeasureSystem::at_cauchy(at_base(), vec![int(2), int(2)]).is_err());
        assert!(matches!(
            MeasureSystem::at_cauchy(at_base(), vec![int(-1), int(2)]),
            Err(MeasureError::StraddlingPoles(_))
        ));
    }

    #[test]
    fn chebyshev_samples() {
        let s = MeasureSystem::at_cauchy(at_base(), vec![int(2), int(3)]).unwrap();
        assert!(s.chebyshev_sample_check(&MultiIndex::new(vec![1, 1]), 100, 1).unwrap());
        assert!(s.chebyshev_sample_check(&MultiIndex::new(vec![3, 1]), 50, 2).unwrap());
        let one = MeasureSystem::at_cauchy(at_base(), vec![int(2)]).unwrap();
        assert!(one.chebyshev_sample_check(&MultiIndex::new(vec![4]), 50, 3).unwrap());
        // two exponents on both poles: x/(b-x) = b/(b-x) - 1 makes the
        // functions dependent
        assert!(!s.chebyshev_sample_check(&MultiIndex::new(vec![2, 2]), 5, 4).unwrap());
    }

    #[test]
    fn nikishin_constructor() {
        let s1 = DiscreteMeasure::new(vec![(rat(1, 4), rat(1, 2)), (rat(3, 4), rat(1, 2))], Some(iv(int(0), int(1)))).unwrap();
        let s2 = DiscreteMeasure::new(vec![(int(2), rat(1, 2)), (int(3), rat(1, 2))], Some(iv(int(2), int(3)))).unwrap();
        let s = MeasureSystem::nikishin(vec![s1.clone(), s2]).unwrap();
        assert_eq!(s.measure(1).atoms(), &[(rat(1, 4), rat(18, 77)), (rat(3, 4), rat(14, 45))]);

        let far = DiscreteMeasure::new(vec![(int(100), int(1))], Some(iv(int(99), int(101)))).unwrap();
        let s = MeasureSystem::nikishin(vec![s1.clone(), far]).unwrap();
        assert_eq!(s.measure(1).sign(), Some(1));

        let bad = DiscreteMeasure::new(vec![(rat(1, 2), int(1))], Some(iv(rat(1, 2), int(2)))).unwrap();
        assert!(MeasureSystem::nikishin(vec![s1, bad]).is_err());
    }

    #[test]
    fn perturbation() {
        let m1 = angelesco_example()[0].clone();
        let s = MeasureSystem::explicit(vec![m1.clone(), m1.clone()]).unwrap();
        let p = s.perturb_second_measure(&Polynomial::x()).unwrap();
        assert_eq!(p.measure(1).atoms()[0], (rat(-3, 4), rat(1, 8)));
        assert_eq!(s.perturb_second_measure(&Polynomial::zero()).unwrap().measures(), s.measures());
        let c = s.perturb_second_measure(&Polynomial::constant(int(2))).unwrap();
        assert_eq!(c.measure(1).atoms()[0].1, rat(3, 2));
        let one = MeasureSystem::explicit(vec![m1]).unwrap();
        assert!(one.perturb_second_measure(&Polynomial::x()).is_err());
    }
}
