//! Block moment matrices, normality, and the type I / type II solvers.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{det_polynomial, det_rational, solve, transpose};
use crate::measures::{DiscreteMeasure, MeasureSystem};
use crate::poly::Polynomial;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("insufficient support for index {0}")]
    InsufficientSupport(MultiIndex),
    #[error("index not normal: {0}")]
    NotNormal(MultiIndex),
    #[error("type I polynomials are undefined for the zero index")]
    ZeroTypeI,
    #[error("index {index} has {got} components but the system has {expected} measures")]
    WrongLength { index: MultiIndex, expected: usize, got: usize },
    #[error("transform slot {0} out of range")]
    BadSlot(usize),
    #[error("internal error: solution for {0} fails substitution")]
    Verification(MultiIndex),
}

/// `(n_1, ..., n_r)`. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    parts: Vec<usize>,
}

impl MultiIndex {
    pub fn new(parts: Vec<usize>) -> Self {
        MultiIndex { parts }
    }

    pub fn zeros(r: usize) -> Self {
        MultiIndex { parts: vec![0; r] }
    }

    pub fn unit(r: usize, j: usize) -> Self {
        Self::zeros(r).plus_e(j)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn plus_e(&self, j: usize) -> Self {
        let mut p = self.parts.clone();
        p[j] += 1;
        MultiIndex { parts: p }
    }

    /// `n - e_j`, or `None` when `n_j = 0`.
    pub fn minus_e(&self, j: usize) -> Option<Self> {
        let mut p = self.parts.clone();
        p[j] = p[j].checked_sub(1)?;
        Some(MultiIndex { parts: p })
    }

    /// `n - k e_j`, or `None` when `n_j < k`.
    pub fn minus_ke(&self, j: usize, k: usize) -> Option<Self> {
        let mut p = self.parts.clone();
        p[j] = p[j].checked_sub(k)?;
        Some(MultiIndex { parts: p })
    }

    /// All indices with `0 <= n_j <= bounds[j]`, in lexicographic order.
    pub fn grid(bounds: &[usize]) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zeros(bounds.len())];
        for (j, &b) in bounds.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|n| {
                    (0..=b).map(move |k| {
                        let mut p = n.parts.clone();
                        p[j] = k;
                        MultiIndex { parts: p }
                    })
                })
                .collect();
        }
        out.sort();
        out
    }
}

impl Index<usize> for MultiIndex {
    type Output = usize;
    fn index(&self, j: usize) -> &usize {
        &self.parts[j]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", p.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err("empty multi-index".into());
        }
        s.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad index component {p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(MultiIndex::new)
    }
}

/// The square block moment matrix: block `j` has `n_j` rows, row `k` column
/// `l` holding `c^{(j)}_{k+l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentMatrix {
    pub entries: Vec<Vec<Rational>>,
}

/// Christoffel transform applied inside a symbolic determinant: the
/// designated measures are multiplied by `(x - z)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Deg1All,
    Deg2All,
    DegLAll(usize),
    Deg1Single(usize),
    Deg2Single(usize),
    DegLSingle(usize, usize),
}

impl Transform {
    /// Degree carried by each of the `r` measures.
    pub fn degrees(&self, r: usize) -> Vec<usize> {
        let (slot, d) = match *self {
            Transform::Deg1All => (None, 1),
            Transform::Deg2All => (None, 2),
            Transform::DegLAll(l) => (None, l),
            Transform::Deg1Single(j) => (Some(j), 1),
            Transform::Deg2Single(j) => (Some(j), 2),
            Transform::DegLSingle(j, l) => (Some(j), l),
        };
        (0..r).map(|k| if slot.is_none_or(|j| j == k) { d } else { 0 }).collect()
    }

    fn slot(&self) -> Option<usize> {
        match *self {
            Transform::Deg1Single(j) | Transform::Deg2Single(j) | Transform::DegLSingle(j, _) => Some(j),
            _ => None,
        }
    }

    /// The transformed system at a concrete point.
    pub fn apply(&self, system: &MeasureSystem, z0: &Rational) -> MeasureSystem {
        let d = self.degrees(system.r());
        system.map_measures(|j, m| m.christoffel_pow(z0, d[j]))
    }
}

fn check_length(system: &MeasureSystem, n: &MultiIndex) -> Result<(), SolverError> {
    if n.r() != system.r() {
        return Err(SolverError::WrongLength { index: n.clone(), expected: system.r(), got: n.r() });
    }
    Ok(())
}

fn check_support(system: &MeasureSystem, n: &MultiIndex, extra: &[usize]) -> Result<(), SolverError> {
    check_length(system, n)?;
    if !system.admits(n, extra) {
        return Err(SolverError::InsufficientSupport(n.clone()));
    }
    Ok(())
}

/// Moment matrix without any support check.
pub fn moment_matrix(measures: &[DiscreteMeasure], n: &MultiIndex) -> MomentMatrix {
    let size = n.total();
    let mut entries = Vec::with_capacity(size);
    for (m, &nj) in measures.iter().zip(n.parts()) {
        if nj == 0 {
            continue;
        }
        let c = m.moments(nj + size);
        for k in 0..nj {
            entries.push(c[k..k + size].to_vec());
        }
    }
    MomentMatrix { entries }
}

pub fn build_h(system: &MeasureSystem, n: &MultiIndex) -> Result<MomentMatrix, SolverError> {
    check_support(system, n, &vec![0; system.r()])?;
    Ok(moment_matrix(system.measures(), n))
}

pub fn det_exact(m: &MomentMatrix) -> Rational {
    det_rational(&m.entries)
}

pub fn is_normal(system: &MeasureSystem, n: &MultiIndex) -> Result<bool, SolverError> {
    Ok(!det_exact(&build_h(system, n)?).is_zero())
}

/// `int P x^k dmu_j` for every orthogonality condition of index `n`.
fn type_ii_residuals<'a>(
    measures: &'a [DiscreteMeasure],
    n: &'a MultiIndex,
    p: &'a Polynomial,
) -> impl Iterator<Item = Rational> + 'a {
    measures.iter().zip(n.parts()).flat_map(move |(m, &nj)| {
        (0..nj).map(move |k| m.integrate(&(p * &Polynomial::monomial(Rational::one(), k))))
    })
}

/// Monic type II polynomial of degree `|n|`, without support checks.
pub fn type_ii_unchecked(measures: &[DiscreteMeasure], n: &MultiIndex) -> Result<Polynomial, SolverError> {
    let size = n.total();
    if size == 0 {
        return Ok(Polynomial::one());
    }
    let h = moment_matrix(measures, n);
    let mut rhs = Vec::with_capacity(size);
    for (m, &nj) in measures.iter().zip(n.parts()) {
        if nj > 0 {
            let c = m.moments(nj + size);
            rhs.extend((0..nj).map(|k| -c[k + size].clone()));
        }
    }
    let a = solve(&h.entries, &rhs).ok_or_else(|| SolverError::NotNormal(n.clone()))?;
    let mut coeffs = a;
    coeffs.push(Rational::one());
    let p = Polynomial::new(coeffs);
    if type_ii_residuals(measures, n, &p).any(|v| !v.is_zero()) {
        return Err(SolverError::Verification(n.clone()));
    }
    Ok(p)
}

pub fn solve_type_ii(system: &MeasureSystem, n: &MultiIndex) -> Result<Polynomial, SolverError> {
    check_support(system, n, &vec![0; system.r()])?;
    type_ii_unchecked(system.measures(), n)
}

/// `(A^{(1)}, ..., A^{(r)})` with `deg A^{(j)} <= n_j - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeIVector {
    pub polys: Vec<Polynomial>,
}

impl TypeIVector {
    /// `sum_j int A^{(j)}(x) f(x) dmu_j(x)`.
    pub fn pair(&self, measures: &[DiscreteMeasure], f: &Polynomial) -> Rational {
        self.polys.iter().zip(measures).map(|(a, m)| m.integrate(&(a * f))).sum()
    }

    /// The linear form `sum_j A^{(j)} dmu_j` as a single atomic measure.
    pub fn form(&self, measures: &[DiscreteMeasure]) -> DiscreteMeasure {
        self.polys
            .iter()
            .zip(measures)
            .map(|(a, m)| m.times_polynomial(a))
            .fold(DiscreteMeasure::new(Vec::new(), None).unwrap(), |acc, m| acc.add(&m))
    }
}

/// Type I vector without support checks.
pub fn type_i_unchecked(measures: &[DiscreteMeasure], n: &MultiIndex) -> Result<TypeIVector, SolverError> {
    let size = n.total();
    if size == 0 {
        return Err(SolverError::ZeroTypeI);
    }
    let h = moment_matrix(measures, n);
    let mut rhs = vec![Rational::zero(); size];
    rhs[size - 1] = Rational::one();
    let alpha = solve(&transpose(&h.entries), &rhs).ok_or_else(|| SolverError::NotNormal(n.clone()))?;
    let mut polys = Vec::with_capacity(n.r());
    let mut offset = 0;
    for &nj in n.parts() {
        polys.push(Polynomial::new(alpha[offset..offset + nj].to_vec()));
        offset += nj;
    }
    let v = TypeIVector { polys };
    for l in 0..size {
        let expected = if l + 1 == size { Rational::one() } else { Rational::zero() };
        if v.pair(measures, &Polynomial::monomial(Rational::one(), l)) != expected {
            return Err(SolverError::Verification(n.clone()));
        }
    }
    Ok(v)
}

pub fn solve_type_i(system: &MeasureSystem, n: &MultiIndex) -> Result<TypeIVector, SolverError> {
    check_support(system, n, &vec![0; system.r()])?;
    type_i_unchecked(system.measures(), n)
}

fn binomial(n: usize, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * int((n - i) as i64) / int((i + 1) as i64))
}

/// Moments of `(x - z)^d dmu` as polynomials in `z`:
/// `c'_k(z) = sum_m C(d, m) (-z)^{d-m} c_{k+m}`.
fn transformed_moments(m: &DiscreteMeasure, d: usize, count: usize) -> Vec<Polynomial> {
    let c = m.moments(count + d);
    (0..count)
        .map(|k| {
            let mut coeffs = vec![Rational::zero(); d + 1];
            for mm in 0..=d {
                let e = d - mm;
                let s = if e % 2 == 0 { int(1) } else { int(-1) };
                coeffs[e] += s * binomial(d, mm) * &c[k + mm];
            }
            Polynomial::new(coeffs)
        })
        .collect()
}

/// `D(z) = det H_n` of the system with the designated measures multiplied
/// by `(x - z)^d`, expanded exactly as a polynomial in `z`.
pub fn det_h_in_z(system: &MeasureSystem, n: &MultiIndex, transform: Transform) -> Result<Polynomial, SolverError> {
    check_length(system, n)?;
    if let Some(j) = transform.slot() {
        if j >= system.r() {
            return Err(SolverError::BadSlot(j));
        }
    }
    let d = transform.degrees(system.r());
    check_support(system, n, &d)?;
    let size = n.total();
    let mut rows = Vec::with_capacity(size);
    for ((m, &nj), &dj) in system.measures().iter().zip(n.parts()).zip(&d) {
        if nj == 0 {
            continue;
        }
        let c = transformed_moments(m, dj, nj + size);
        for k in 0..nj {
            rows.push(c[k..k + size].to_vec());
        }
    }
    Ok(det_polynomial(&rows))
}
