//! Mechanical checks of the zero-location and interlacing criteria.
//!
//! Every check produces a [`CriterionReport`]; a `Fail` is an ordinary
//! outcome carrying a counterexample, while violated hypotheses are errors.
//! Statements quantified over all real transform points are decided
//! symbolically (Sturm counts of a squarefree polynomial), never by sampling.

mod registry;
pub mod suites;

pub use registry::{Criterion, CriterionParams, CriterionRegistry, PolyType};

use std::fmt;

use num_traits::{One, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg::determinant;
use crate::measures::{DiscreteMeasure, Interval, MeasureError, MeasureSystem, SystemKind};
use crate::poly::{
    count_real_roots, interlace_decide, is_real_rooted, isolate_real_roots, squarefree_part, wronskian,
    InterlaceVerdict, IsolatingInterval, PolyError, Polynomial,
};
use crate::rational::{format_rational, int, Bound, Rational};
use crate::solver::{
    det_exact, det_h_in_z, moment_matrix, solve_type_i, solve_type_ii, type_i_unchecked, type_ii_unchecked,
    MultiIndex, SolverError, Transform,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Both sides of a zero-set identity vanish identically.
    Degenerate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessValue {
    Poly(Polynomial),
    Rational(Rational),
    Intervals(Vec<IsolatingInterval>),
    Count(usize),
    Flag(bool),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub value: WitnessValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub name: String,
    pub system_summary: String,
    pub index: Option<MultiIndex>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub seed: Option<u64>,
}

impl CriterionReport {
    fn new(name: &str, system_summary: String, index: Option<&MultiIndex>) -> Self {
        CriterionReport {
            name: name.to_string(),
            system_summary,
            index: index.cloned(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            seed: None,
        }
    }

    fn with(mut self, label: &str, value: WitnessValue) -> Self {
        self.witnesses.push(Witness { label: label.to_string(), value });
        self
    }

    fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn witness(&self, label: &str) -> Option<&WitnessValue> {
        self.witnesses.iter().find(|w| w.label == label).map(|w| &w.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("transformed system degenerate for all z: {0}")]
    DegenerateTransform(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CriterionError {
    /// Failures of preconditions rather than of the code.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            CriterionError::Hypothesis(_)
                | CriterionError::Solver(SolverError::InsufficientSupport(_))
                | CriterionError::Solver(SolverError::NotNormal(_))
                | CriterionError::Solver(SolverError::ZeroTypeI)
                | CriterionError::Solver(SolverError::WrongLength { .. })
                | CriterionError::Solver(SolverError::BadSlot(_))
                | CriterionError::Measure(_)
        )
    }

    pub fn is_insufficient_support(&self) -> bool {
        matches!(self, CriterionError::Solver(SolverError::InsufficientSupport(_)))
    }
}

fn hyp(msg: impl Into<String>) -> CriterionError {
    CriterionError::Hypothesis(msg.into())
}

/// `n` must be normal; reported as a hypothesis violation otherwise.
fn require_normal(system: &MeasureSystem, n: &MultiIndex) -> Result<(), CriterionError> {
    let h = crate::solver::build_h(system, n)?;
    if det_exact(&h).is_zero() {
        return Err(hyp(format!("index {n} is not normal")));
    }
    Ok(())
}

fn require_slot(system: &MeasureSystem, j: usize) -> Result<(), CriterionError> {
    if j >= system.r() {
        return Err(hyp(format!("slot {} out of range for r = {}", j + 1, system.r())));
    }
    Ok(())
}

/// `Z[a] = Z[b]` over the complex numbers, as exact proportionality of the
/// squarefree parts. Returns the constant `c` with `sqf(a) = c sqf(b)`.
pub fn same_zero_set(a: &Polynomial, b: &Polynomial) -> Result<Option<Rational>, PolyError> {
    let sa = squarefree_part(a)?;
    let sb = squarefree_part(b)?;
    Ok(sa.proportional_to(&sb))
}

fn real_zero_count(p: &Polynomial) -> Result<usize, PolyError> {
    if p.is_constant() {
        return Ok(0);
    }
    count_real_roots(p, &Bound::NegInf, &Bound::PosInf)
}

/// Distinct roots in the open interval.
pub fn roots_in_open(p: &Polynomial, iv: &Interval) -> Result<usize, PolyError> {
    if p.is_constant() {
        return Ok(0);
    }
    let c = count_real_roots(p, &Bound::Finite(iv.lo.clone()), &Bound::Finite(iv.hi.clone()))?;
    Ok(if p.eval(&iv.hi).is_zero() { c - 1 } else { c })
}

fn is_squarefree(p: &Polynomial) -> Result<bool, PolyError> {
    Ok(p.is_constant() || squarefree_part(p)?.degree() == p.degree())
}

/// Shared tail of the zero-set comparisons between a Wronskian-type
/// polynomial `w` and a transformed determinant `d`.
fn compare_zero_sets(
    report: CriterionReport,
    w_label: &str,
    w: &Polynomial,
    d: &Polynomial,
    allow_degenerate: bool,
) -> Result<CriterionReport, CriterionError> {
    let report = report.with(w_label, WitnessValue::Poly(w.clone())).with("D", WitnessValue::Poly(d.clone()));
    match (w.is_zero(), d.is_zero()) {
        (true, true) if allow_degenerate => return Ok(report.verdict(Verdict::Degenerate)),
        (_, true) if !allow_degenerate => {
            return Err(CriterionError::DegenerateTransform(report.system_summary.clone()));
        }
        (true, _) | (_, true) => {
            return Ok(report
                .with("mismatch", WitnessValue::Text(format!("{w_label} zero: {}, D zero: {}", w.is_zero(), d.is_zero())))
                .verdict(Verdict::Fail))
        }
        _ => {}
    }
    match same_zero_set(d, w)? {
        Some(c) => Ok(report.with("c", WitnessValue::Rational(c))),
        None => Ok(report
            .with("sqf_D", WitnessValue::Poly(squarefree_part(d)?))
            .with(&format!("sqf_{w_label}"), WitnessValue::Poly(squarefree_part(w)?))
            .verdict(Verdict::Fail)),
    }
}

/// When one member of the pair is real-rooted, strict interlacing must
/// coincide with `D` having no real zeros.
fn interlace_cross_check(
    report: CriterionReport,
    a: &Polynomial,
    b: &Polynomial,
    d: &Polynomial,
) -> Result<CriterionReport, CriterionError> {
    if report.verdict != Verdict::Pass || a.is_zero() || b.is_zero() {
        return Ok(report);
    }
    let (p, q) = if is_real_rooted(b)? {
        (a, b)
    } else if is_real_rooted(a)? {
        (b, a)
    } else {
        return Ok(report.with("interlace_check", WitnessValue::Text("skipped: neither polynomial real-rooted".into())));
    };
    let (verdict, _) = interlace_decide(p, q)?;
    let d_real = real_zero_count(&squarefree_part(d)?)?;
    let interlace = verdict == InterlaceVerdict::Interlace;
    let report = report
        .with("interlace", WitnessValue::Flag(interlace))
        .with("D_real_zeros", WitnessValue::Count(d_real));
    if interlace != (d_real == 0) {
        return Ok(report.verdict(Verdict::Fail));
    }
    Ok(report)
}

/// Zeros of `P_n` are exactly the points `z` where `n` is not normal for
/// `(x - z) mu`.
pub fn verify_zero_criterion_type_ii(system: &MeasureSystem, n: &MultiIndex) -> Result<CriterionReport, CriterionError> {
    require_normal(system, n)?;
    let d = det_h_in_z(system, n, Transform::Deg1All)?;
    let p = solve_type_ii(system, n)?;
    let report = CriterionReport::new("zero-ii", system.summary(), Some(n));
    let mut report = compare_zero_sets(report, "P", &p, &d, false)?;
    // D = kappa P is observed, not asserted.
    if let Some(kappa) = d.proportional_to(&p) {
        report = report.with("kappa", WitnessValue::Rational(kappa));
    }
    Ok(report)
}

/// Zeros of `A_n^{(j)}` are the points `z` where `n - e_j` is not normal
/// after multiplying `mu_j` by `(x - z)`.
pub fn verify_zero_criterion_type_i(
    system: &MeasureSystem,
    n: &MultiIndex,
    j: usize,
) -> Result<CriterionReport, CriterionError> {
    require_slot(system, j)?;
    let m = n.minus_e(j).ok_or_else(|| hyp(format!("component {} of {n} must be at least 1", j + 1)))?;
    require_normal(system, n)?;
    require_normal(system, &m)?;
    let d = det_h_in_z(system, &m, Transform::Deg1Single(j))?;
    let a = solve_type_i(system, n)?.polys.swap_remove(j);
    let report = CriterionReport::new("zero-i", system.summary(), Some(n)).with("j", WitnessValue::Count(j + 1));
    compare_zero_sets(report, "A", &a, &d, false)
}

/// `Z[W(P_{n+e_j}, P_n)]` equals the set of `z` where `n` is not normal for
/// `(x - z)^2 mu`.
pub fn verify_interlace_criterion_type_ii(
    system: &MeasureSystem,
    n: &MultiIndex,
    j: usize,
) -> Result<CriterionReport, CriterionError> {
    require_slot(system, j)?;
    let up = n.plus_e(j);
    require_normal(system, n)?;
    require_normal(system, &up)?;
    let d = det_h_in_z(system, n, Transform::Deg2All)?;
    let p_up = solve_type_ii(system, &up)?;
    let p = solve_type_ii(system, n)?;
    let w = wronskian(&[p_up.clone(), p.clone()]);
    let report = CriterionReport::new("interlace-ii", system.summary(), Some(n)).with("j", WitnessValue::Count(j + 1));
    let report = compare_zero_sets(report, "W", &w, &d, false)?;
    interlace_cross_check(report, &p_up, &p, &d)
}

/// `W(P_{n+e_j}, P_{n+e_k})` against the same quadratic transform at `n`.
pub fn verify_interlace_criterion_neighbors(
    system: &MeasureSystem,
    n: &MultiIndex,
    j: usize,
    k: usize,
) -> Result<CriterionReport, CriterionError> {
    require_slot(system, j)?;
    require_slot(system, k)?;
    if j == k {
        return Err(hyp("neighbour directions must differ"));
    }
    let (nj, nk) = (n.plus_e(j), n.plus_e(k));
    let top = nj.plus_e(k);
    require_normal(system, &nj)?;
    require_normal(system, &nk)?;
    require_normal(system, &top)?;
    let d = det_h_in_z(system, n, Transform::Deg2All)?;
    let pj = solve_type_ii(system, &nj)?;
    let pk = solve_type_ii(system, &nk)?;
    let w = wronskian(&[pj.clone(), pk.clone()]);
    if w.is_zero() {
        // proportional neighbours contradict normality of n + e_j + e_k
        return Err(CriterionError::Internal(format!("P{nj} and P{nk} are linearly dependent although {top} is normal")));
    }
    let report = CriterionReport::new("interlace-neighbors", system.summary(), Some(n))
        .with("j", WitnessValue::Count(j + 1))
        .with("k", WitnessValue::Count(k + 1));
    let report = compare_zero_sets(report, "W", &w, &d, false)?;
    interlace_cross_check(report, &pj, &pk, &d)
}

/// `Z[W(A_n^{(j)}, A_{n-e_l}^{(j)})]` equals the set of `z` where `n - 2e_j`
/// is not normal after multiplying `mu_j` by `(x - z)^2`.
pub fn verify_interlace_criterion_type_i(
    system: &MeasureSystem,
    n: &MultiIndex,
    l: usize,
    j: usize,
) -> Result<CriterionReport, CriterionError> {
    require_slot(system, j)?;
    require_slot(system, l)?;
    let low = n
        .minus_ke(j, 2)
        .ok_or_else(|| hyp(format!("component {} of {n} must be at least 2", j + 1)))?;
    let nl = n.minus_e(l).ok_or_else(|| hyp(format!("component {} of {n} must be at least 1", l + 1)))?;
    let nj = n.minus_e(j).unwrap();
    require_normal(system, n)?;
    require_normal(system, &nj)?;
    require_normal(system, &nl)?;
    let d = det_h_in_z(system, &low, Transform::Deg2Single(j))?;
    let an = solve_type_i(system, n)?;
    let al = solve_type_i(system, &nl)?;
    if an.polys == al.polys {
        return Err(CriterionError::Internal("type I vectors at n and n - e_l coincide".into()));
    }
    let (a, b) = (an.polys[j].clone(), al.polys[j].clone());
    let w = wronskian(&[a.clone(), b.clone()]);
    let report = CriterionReport::new("interlace-i", system.summary(), Some(n))
        .with("j", WitnessValue::Count(j + 1))
        .with("l", WitnessValue::Count(l + 1));
    let report = compare_zero_sets(report, "W", &w, &d, true)?;
    interlace_cross_check(report, &a, &b, &d)
}

/// Matrix input for the generalized Andreief identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AndreiefInput {
    pub measure: DiscreteMeasure,
    pub phis: Vec<Polynomial>,
    pub psis: Vec<Polynomial>,
    /// `(N - M) x N`.
    pub matrix: Vec<Vec<Rational>>,
}

/// `det[A; (int phi_j psi_k dmu)] = 1/M! sum det[A; psi_k(x_j)] det[phi_l(x_j)] prod w`
/// with the M-fold integral evaluated as an exact sum over atom tuples.
pub fn verify_andreief(input: &AndreiefInput) -> Result<CriterionReport, CriterionError> {
    let (m, n) = (input.phis.len(), input.psis.len());
    if m == 0 || n < m {
        return Err(hyp(format!("need N >= M >= 1, got M = {m}, N = {n}")));
    }
    if input.matrix.len() != n - m || input.matrix.iter().any(|row| row.len() != n) {
        return Err(hyp(format!("matrix must be {} x {n}", n - m)));
    }
    let mu = &input.measure;
    let mut lhs_rows = input.matrix.clone();
    for phi in &input.phis {
        lhs_rows.push(input.psis.iter().map(|psi| mu.integrate(&(phi * psi))).collect());
    }
    let lhs = determinant(&lhs_rows);

    // ordered M-tuples of atoms; tuples with a repeated atom contribute 0
    // (two equal columns in the phi determinant) and are skipped
    let atoms = mu.atoms();
    let mut rhs = Rational::zero();
    let mut tuple = vec![0usize; m];
    let mut used = vec![false; atoms.len()];
    fn walk(
        depth: usize,
        tuple: &mut Vec<usize>,
        used: &mut Vec<bool>,
        atoms: &[(Rational, Rational)],
        input: &AndreiefInput,
        acc: &mut Rational,
    ) {
        let m = tuple.len();
        if depth == m {
            let xs: Vec<&Rational> = tuple.iter().map(|&i| &atoms[i].0).collect();
            let mut rows = input.matrix.clone();
            for x in &xs {
                rows.push(input.psis.iter().map(|psi| psi.eval(x)).collect());
            }
            let phi_rows: Vec<Vec<Rational>> =
                input.phis.iter().map(|phi| xs.iter().map(|x| phi.eval(x)).collect()).collect();
            let w: Rational = tuple.iter().map(|&i| atoms[i].1.clone()).product();
            *acc += determinant(&rows) * determinant(&phi_rows) * w;
            return;
        }
        for i in 0..atoms.len() {
            if !used[i] {
                used[i] = true;
                tuple[depth] = i;
                walk(depth + 1, tuple, used, atoms, input, acc);
                used[i] = false;
            }
        }
    }
    walk(0, &mut tuple, &mut used, atoms, input, &mut rhs);
    let factorial: Rational = (1..=m as i64).map(int).product();
    let rhs = rhs / factorial;
    let verdict = if lhs == rhs { Verdict::Pass } else { Verdict::Fail };
    Ok(CriterionReport::new("andreief", format!("measure with {} atoms, M={m}, N={n}", atoms.len()), None)
        .with("lhs", WitnessValue::Rational(lhs))
        .with("rhs", WitnessValue::Rational(rhs))
        .verdict(verdict))
}

/// Replacing `mu_2` by `mu_2 + q mu_1` leaves `P_n` and `A_n^{(2)}` unchanged
/// and shifts `A_n^{(1)}` by `-q A_n^{(2)}` when `n_2 <= n_1 - deg q`.
pub fn verify_perturbation_lemma(
    system: &MeasureSystem,
    q: &Polynomial,
    n: &MultiIndex,
) -> Result<CriterionReport, CriterionError> {
    if system.r() != 2 || n.r() != 2 {
        return Err(hyp("perturbation needs a system of two measures"));
    }
    let s = q.degree().unwrap_or(0);
    if n[0] < s || n[1] > n[0] - s || n.total() == 0 {
        return Err(hyp(format!("lemma hypotheses not met: need n_2 <= n_1 - deg q for {n}, deg q = {s}")));
    }
    require_normal(system, n)?;
    let tilde = system.perturb_second_measure(q)?;
    let det = det_exact(&moment_matrix(system.measures(), n));
    let det_t = det_exact(&moment_matrix(tilde.measures(), n));
    let mut report = CriterionReport::new("perturbation", system.summary(), Some(n))
        .with("q", WitnessValue::Poly(q.clone()))
        .with("det", WitnessValue::Rational(det.clone()))
        .with("det_perturbed", WitnessValue::Rational(det_t.clone()));
    if det_t.is_zero() {
        return Ok(report.with("failed", WitnessValue::Text("perturbed index not normal".into())).verdict(Verdict::Fail));
    }
    let p = solve_type_ii(system, n)?;
    let pt = type_ii_unchecked(tilde.measures(), n)?;
    let a = solve_type_i(system, n)?;
    let at = type_i_unchecked(tilde.measures(), n)?;
    let a1_expected = &a.polys[0] - &(q * &a.polys[1]);
    let checks = [
        ("P unchanged", pt == p),
        ("A1 shifted", at.polys[0] == a1_expected),
        ("A2 unchanged", at.polys[1] == a.polys[1]),
    ];
    for (label, ok) in checks {
        report = report.with(label, WitnessValue::Flag(ok));
    }
    if checks.iter().any(|(_, ok)| !ok) {
        report = report
            .with("P_perturbed", WitnessValue::Poly(pt))
            .with("A1_perturbed", WitnessValue::Poly(at.polys[0].clone()))
            .verdict(Verdict::Fail);
    }
    Ok(report)
}

/// Exactly `n_j` simple zeros of `P_n` inside each open interval.
pub fn verify_angelesco_zero_count(system: &MeasureSystem, n: &MultiIndex) -> Result<CriterionReport, CriterionError> {
    if !matches!(system.kind(), SystemKind::Angelesco) {
        return Err(hyp("angelesco-count needs an Angelesco system"));
    }
    let p = solve_type_ii(system, n)?;
    let ivs = system.intervals().expect("angelesco systems record intervals");
    let mut report = CriterionReport::new("angelesco-count", system.summary(), Some(n)).with("P", WitnessValue::Poly(p.clone()));
    let mut ok = is_squarefree(&p)?;
    for (j, iv) in ivs.iter().enumerate() {
        let c = roots_in_open(&p, iv)?;
        report = report.with(&format!("zeros_in_{}", j + 1), WitnessValue::Count(c));
        ok &= c == n[j];
    }
    ok &= real_zero_count(&p)? == n.total();
    if !ok {
        let roots = if p.is_constant() { Vec::new() } else { isolate_real_roots(&p)? };
        report = report.with("roots", WitnessValue::Intervals(roots)).verdict(Verdict::Fail);
    }
    Ok(report)
}

/// All `|n|` zeros of `P_n` simple and inside the open base interval.
pub fn verify_at_zero_location(system: &MeasureSystem, n: &MultiIndex) -> Result<CriterionReport, CriterionError> {
    if !matches!(system.kind(), SystemKind::AtCauchy { .. }) {
        return Err(hyp("at-location needs a Cauchy-Vandermonde system"));
    }
    let p = solve_type_ii(system, n)?;
    let gamma = &system.intervals().expect("at systems record intervals")[0];
    let inside = roots_in_open(&p, gamma)?;
    let ok = is_squarefree(&p)? && inside == n.total();
    let report = CriterionReport::new("at-location", system.summary(), Some(n))
        .with("P", WitnessValue::Poly(p.clone()))
        .with("zeros_inside", WitnessValue::Count(inside));
    if ok {
        Ok(report)
    } else {
        let roots = if p.is_constant() { Vec::new() } else { isolate_real_roots(&p)? };
        Ok(report.with("roots", WitnessValue::Intervals(roots)).verdict(Verdict::Fail))
    }
}

fn require_nikishin_pair(system: &MeasureSystem) -> Result<Interval, CriterionError> {
    match system.kind() {
        SystemKind::Nikishin { sigmas } if sigmas.len() == 2 => Ok(system.intervals().unwrap()[1].clone()),
        _ => Err(hyp("needs a Nikishin system generated by two measures")),
    }
}

/// Theorem regime: `n_1 + 1 <= n_2` for the first component, `n_1 + 1 >= n_2`
/// for the second.
pub fn nikishin_in_regime(n: &MultiIndex, j: usize) -> bool {
    match j {
        0 => n[0] >= 1 && n[0] < n[1],
        1 => n[1] >= 1 && n[0] + 1 >= n[1],
        _ => false,
    }
}

/// The location conclusion evaluated without the regime check: `A_n^{(j)}`
/// real-rooted with simple zeros, all in the interior of the second
/// generator's interval. Used for negative controls.
pub fn nikishin_location_unchecked(
    system: &MeasureSystem,
    n: &MultiIndex,
    j: usize,
) -> Result<CriterionReport, CriterionError> {
    let gamma2 = require_nikishin_pair(system)?;
    require_slot(system, j)?;
    let a = solve_type_i(system, n)?.polys.swap_remove(j);
    let report = CriterionReport::new("nikishin-location", system.summary(), Some(n))
        .with("j", WitnessValue::Count(j + 1))
        .with("A", WitnessValue::Poly(a.clone()));
    if a.is_zero() {
        return Ok(report.verdict(Verdict::Degenerate));
    }
    let deg = a.degree().unwrap();
    let inside = roots_in_open(&a, &gamma2)?;
    let ok = is_squarefree(&a)? && inside == deg;
    let report = report.with("zeros_inside", WitnessValue::Count(inside));
    if ok {
        Ok(report)
    } else {
        let roots = isolate_real_roots(&a)?;
        Ok(report.with("roots", WitnessValue::Intervals(roots)).verdict(Verdict::Fail))
    }
}

pub fn verify_nikishin_type_i_location(
    system: &MeasureSystem,
    n: &MultiIndex,
    j: usize,
) -> Result<CriterionReport, CriterionError> {
    require_nikishin_pair(system)?;
    if !nikishin_in_regime(n, j) {
        return Err(hyp(format!("outside theorem hypotheses: {n}, j = {}", j + 1)));
    }
    nikishin_location_unchecked(system, n, j)
}

/// Pairwise strict interlacing of the `j`-th type I components at `n`,
/// `n - e_1`, `n - e_2`. Pairs with a constant (or vanishing) member hold
/// vacuously.
pub fn verify_nikishin_type_i_interlacing(
    system: &MeasureSystem,
    n: &MultiIndex,
    j: usize,
) -> Result<CriterionReport, CriterionError> {
    require_nikishin_pair(system)?;
    if !nikishin_in_regime(n, j) {
        return Err(hyp(format!("outside theorem hypotheses: {n}, j = {}", j + 1)));
    }
    let mut members = vec![(n.clone(), solve_type_i(system, n)?.polys.swap_remove(j))];
    for k in 0..2 {
        if let Some(m) = n.minus_e(k) {
            if m.total() > 0 {
                members.push((m.clone(), solve_type_i(system, &m)?.polys.swap_remove(j)));
            }
        }
    }
    let mut report = CriterionReport::new("nikishin-interlacing", system.summary(), Some(n)).with("j", WitnessValue::Count(j + 1));
    for (m, a) in &members {
        report = report.with(&format!("A{m}"), WitnessValue::Poly(a.clone()));
    }
    let mut failed = Vec::new();
    let mut checked = 0;
    for x in 0..members.len() {
        for y in x + 1..members.len() {
            let (a, b) = (&members[x].1, &members[y].1);
            if a.is_constant() || b.is_constant() {
                continue;
            }
            checked += 1;
            let ok = is_real_rooted(a)?
                && is_real_rooted(b)?
                && interlace_decide(a, b)?.0 == InterlaceVerdict::Interlace;
            if !ok {
                failed.push(format!("{} / {}", members[x].0, members[y].0));
            }
        }
    }
    report = report.with("pairs_checked", WitnessValue::Count(checked));
    if !failed.is_empty() {
        report = report.with("failed_pairs", WitnessValue::Text(failed.join(", "))).verdict(Verdict::Fail);
    }
    Ok(report)
}

/// `n_1, n_1 + e_{j_1}, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncreasingPath {
    pub start: MultiIndex,
    pub steps: Vec<usize>,
}

impl IncreasingPath {
    pub fn new(start: MultiIndex, steps: Vec<usize>) -> Self {
        IncreasingPath { start, steps }
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![self.start.clone()];
        for &j in &self.steps {
            let next = out.last().unwrap().plus_e(j);
            out.push(next);
        }
        out
    }

    /// Number of indices on the path.
    pub fn len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for IncreasingPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(MultiIndex::to_string).collect();
        f.write_str(&idx.join("->"))
    }
}

fn path_polys(
    system: &MeasureSystem,
    path: &IncreasingPath,
    ty: PolyType,
    j: Option<usize>,
) -> Result<Vec<Polynomial>, CriterionError> {
    let mut out = Vec::with_capacity(path.len());
    for n in path.indices() {
        require_normal(system, &n)?;
        out.push(match ty {
            PolyType::II => solve_type_ii(system, &n)?,
            PolyType::I => solve_type_i(system, &n)?.polys.swap_remove(j.unwrap()),
        });
    }
    Ok(out)
}

/// `Z[W]` along an increasing path equals the set of `z` where the
/// degree-`l` Christoffel transform loses normality: at the path start for
/// type II, and at `n_l - l e_j` (transforming `mu_j` only) for type I.
pub fn verify_higher_wronskian(
    system: &MeasureSystem,
    path: &IncreasingPath,
    ty: PolyType,
    j: Option<usize>,
) -> Result<CriterionReport, CriterionError> {
    let l = path.len();
    let indices = path.indices();
    if path.steps.iter().any(|&s| s >= system.r()) {
        return Err(hyp("path step out of range"));
    }
    let (d, at, allow_degenerate) = match ty {
        PolyType::II => (det_h_in_z(system, &path.start, Transform::DegLAll(l)), path.start.clone(), false),
        PolyType::I => {
            let j = j.ok_or_else(|| hyp("type I needs a component j"))?;
            require_slot(system, j)?;
            let last = indices.last().unwrap();
            let at = last
                .minus_ke(j, l)
                .ok_or_else(|| hyp(format!("component {} of {last} must be at least {l}", j + 1)))?;
            (det_h_in_z(system, &at, Transform::DegLSingle(j, l)), at, true)
        }
    };
    let polys = path_polys(system, path, ty, j)?;
    let d = d?;
    let w = wronskian(&polys);
    let report = CriterionReport::new("higher-wronskian", system.summary(), Some(&path.start))
        .with("path", WitnessValue::Text(path.to_string()))
        .with("type", WitnessValue::Text(ty.as_str().into()))
        .with("transform_index", WitnessValue::Text(at.to_string()));
    compare_zero_sets(report, "W", &w, &d, allow_degenerate)
}

/// For even path length the Wronskian has no real zeros.
pub fn verify_even_wronskian_nonvanishing(
    system: &MeasureSystem,
    path: &IncreasingPath,
    ty: PolyType,
    j: Option<usize>,
) -> Result<CriterionReport, CriterionError> {
    let l = path.len();
    if l % 2 != 0 {
        return Err(hyp(format!("path length {l} is odd")));
    }
    let family_ok = match ty {
        PolyType::II => matches!(
            system.kind(),
            SystemKind::Angelesco | SystemKind::AtCauchy { .. } | SystemKind::Nikishin { .. }
        ),
        PolyType::I => matches!(system.kind(), SystemKind::Angelesco),
    };
    if !family_ok {
        return Err(hyp(format!("even-wronskian type {} does not apply to {} systems", ty.as_str(), system.kind().name())));
    }
    if path.steps.iter().any(|&s| s >= system.r()) {
        return Err(hyp("path step out of range"));
    }
    if ty == PolyType::I {
        require_slot(system, j.ok_or_else(|| hyp("type I needs a component j"))?)?;
    }
    let w = wronskian(&path_polys(system, path, ty, j)?);
    let report = CriterionReport::new("even-wronskian", system.summary(), Some(&path.start))
        .with("path", WitnessValue::Text(path.to_string()))
        .with("W", WitnessValue::Poly(w.clone()));
    if w.is_zero() {
        return Ok(report.verdict(Verdict::Fail));
    }
    let zeros = real_zero_count(&squarefree_part(&w)?)?;
    let report = report.with("real_zeros", WitnessValue::Count(zeros));
    Ok(if zeros == 0 { report } else { report.verdict(Verdict::Fail) })
}

/// A polynomial orthogonal to `x^k`, `k < n`, against a sign-definite
/// measure has at least `n` zeros inside its interval.
pub fn verify_quasiorthogonality(
    measure: &DiscreteMeasure,
    p: &Polynomial,
    n_conditions: usize,
) -> Result<CriterionReport, CriterionError> {
    let iv = measure.support().ok_or_else(|| hyp("measure needs a support interval"))?;
    for k in 0..n_conditions {
        if !measure.integrate(&(p * &Polynomial::monomial(Rational::one(), k))).is_zero() {
            return Err(hyp(format!("p is not quasi-orthogonal: moment {k} does not vanish")));
        }
    }
    if p.is_zero() {
        return Err(hyp("p is the zero polynomial"));
    }
    let inside = roots_in_open(p, iv)?;
    let report = CriterionReport::new("quasiorthogonality", measure.to_string(), None)
        .with("p", WitnessValue::Poly(p.clone()))
        .with("zeros_inside", WitnessValue::Count(inside));
    Ok(if inside >= n_conditions { report } else { report.verdict(Verdict::Fail) })
}

// ---- serialization: rationals as canonical strings ----

struct Coeffs<'a>(&'a Polynomial);

impl Serialize for Coeffs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.to_strings())
    }
}

struct Intervals<'a>(&'a [IsolatingInterval]);

impl Serialize for Intervals<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|iv| {
            let mut m = std::collections::BTreeMap::new();
            m.insert("lo", format_rational(&iv.lo));
            m.insert("hi", format_rational(&iv.hi));
            m.insert("multiplicity", iv.root_multiplicity.to_string());
            m
        }))
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("label", &self.label)?;
        match &self.value {
            WitnessValue::Poly(p) => {
                m.serialize_entry("kind", "polynomial")?;
                m.serialize_entry("value", &Coeffs(p))?;
            }
            WitnessValue::Rational(r) => {
                m.serialize_entry("kind", "rational")?;
                m.serialize_entry("value", &format_rational(r))?;
            }
            WitnessValue::Intervals(v) => {
                m.serialize_entry("kind", "intervals")?;
                m.serialize_entry("value", &Intervals(v))?;
            }
            WitnessValue::Count(c) => {
                m.serialize_entry("kind", "count")?;
                m.serialize_entry("value", c)?;
            }
            WitnessValue::Flag(b) => {
                m.serialize_entry("kind", "flag")?;
                m.serialize_entry("value", b)?;
            }
            WitnessValue::Text(t) => {
                m.serialize_entry("kind", "text")?;
                m.serialize_entry("value", t)?;
            }
        }
        m.end()
    }
}

impl Serialize for CriterionReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CriterionReport", 6)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("system", &self.system_summary)?;
        st.serialize_field("index", &self.index.as_ref().map(|n| n.parts().to_vec()))?;
        st.serialize_field("verdict", self.verdict.as_str())?;
        st.serialize_field("witnesses", &self.witnesses)?;
        st.serialize_field("seed", &self.seed)?;
        st.end()
    }
}
