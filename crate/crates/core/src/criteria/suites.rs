//! Seeded randomized suites over the generated families. Systems are
//! processed in parallel and merged back in seed order, so outcomes are
//! reproducible.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::*;
use crate::families::{AngelescoFamily, AtCauchyFamily, NikishinFamily, SystemFamily};
use crate::linalg::det_rational;
use crate::rational::rat;

/// Tally of one suite: every check either passes or is listed in
/// `failures`. Checks skipped for lack of support are counted separately.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub checks: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.checks
    }

    fn merge(&mut self, other: SuiteOutcome) {
        self.checks += other.checks;
        self.passed += other.passed;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    fn pass_if(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.checks += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(context());
        }
    }

    /// Record a criterion outcome; insufficient support is a skip.
    fn record(&mut self, seed: u64, result: Result<CriterionReport, CriterionError>, what: impl FnOnce() -> String) {
        match result {
            Err(e) if e.is_insufficient_support() => self.skipped += 1,
            Ok(r) => {
                let v = r.verdict;
                self.pass_if(v == Verdict::Pass, || format!("seed {seed}: {} -> {v} {:?}", what(), r.witnesses));
            }
            Err(e) => self.pass_if(false, || format!("seed {seed}: {} -> error {e}", what())),
        }
    }

    pub fn summary(&self) -> String {
        format!("{}/{} passed, {} skipped (support)", self.passed, self.checks, self.skipped)
    }
}

fn merge_all(parts: Vec<SuiteOutcome>) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for p in parts {
        out.merge(p);
    }
    out
}

/// All multi-indices with `r` components and `|n| <= max_total`, in
/// lexicographic order.
pub fn indices_up_to(r: usize, max_total: usize) -> Vec<MultiIndex> {
    MultiIndex::grid(&vec![max_total; r]).into_iter().filter(|n| n.total() <= max_total).collect()
}

/// Outcomes of the Angelesco suite, split by theorem.
#[derive(Debug, Clone, Default)]
pub struct AngelescoSuite {
    pub zero: SuiteOutcome,
    pub interlace: SuiteOutcome,
    pub count: SuiteOutcome,
    /// Indices where `D` is a constant multiple of `P_n`, out of all
    /// zero-criterion checks. Observed, not asserted.
    pub kappa_hits: usize,
    pub kappa_total: usize,
}

/// Zero-location, interlacing and zero-count checks on `systems` seeded
/// Angelesco systems, seeds `base_seed..base_seed + systems`, indices with
/// `|n| <= max_total`.
pub fn angelesco_suite(systems: u64, base_seed: u64, max_total: usize) -> AngelescoSuite {
    let parts: Vec<AngelescoSuite> = (base_seed..base_seed + systems)
        .into_par_iter()
        .map(|seed| {
            let s = AngelescoFamily.generate(seed);
            let r = s.r();
            let mut out = AngelescoSuite::default();
            for n in indices_up_to(r, max_total) {
                let zr = verify_zero_criterion_type_ii(&s, &n);
                if let Ok(rep) = &zr {
                    out.kappa_total += 1;
                    out.kappa_hits += rep.witness("kappa").is_some() as usize;
                }
                out.zero.record(seed, zr, || format!("zero-ii {n}"));
                for j in 0..r {
                    if n[j] >= 1 {
                        out.zero.record(seed, verify_zero_criterion_type_i(&s, &n, j), || format!("zero-i {n} j={}", j + 1));
                    }
                    if n.total() < max_total {
                        out.interlace
                            .record(seed, verify_interlace_criterion_type_ii(&s, &n, j), || format!("interlace-ii {n} j={}", j + 1));
                    }
                    for k in j + 1..r {
                        if n.total() + 2 <= max_total {
                            out.interlace.record(seed, verify_interlace_criterion_neighbors(&s, &n, j, k), || {
                                format!("neighbors {n} j={} k={}", j + 1, k + 1)
                            });
                        }
                    }
                    if n[j] >= 2 {
                        for l in (0..r).filter(|&l| n[l] >= 1) {
                            out.interlace.record(seed, verify_interlace_criterion_type_i(&s, &n, l, j), || {
                                format!("interlace-i {n} j={} l={}", j + 1, l + 1)
                            });
                        }
                    }
                }
                out.count.record(seed, verify_angelesco_zero_count(&s, &n), || format!("angelesco-count {n}"));
            }
            out
        })
        .collect();
    let mut total = AngelescoSuite::default();
    for p in parts {
        total.zero.merge(p.zero);
        total.interlace.merge(p.interlace);
        total.count.merge(p.count);
        total.kappa_hits += p.kappa_hits;
        total.kappa_total += p.kappa_total;
    }
    total
}

#[derive(Debug, Clone, Default)]
pub struct NikishinSuite {
    pub in_regime: SuiteOutcome,
    /// Out-of-regime indices evaluated with the unchecked location check.
    pub controls_run: usize,
    pub controls_failed: usize,
    pub control_examples: Vec<String>,
}

/// Type I location and interlacing on in-regime indices, plus negative
/// controls outside the regime (recorded only).
pub fn nikishin_suite(systems: u64, base_seed: u64, max_total: usize) -> NikishinSuite {
    let parts: Vec<NikishinSuite> = (base_seed..base_seed + systems)
        .into_par_iter()
        .map(|seed| {
            let s = NikishinFamily.generate(seed);
            let mut out = NikishinSuite::default();
            for n in indices_up_to(2, max_total) {
                for j in 0..2 {
                    if nikishin_in_regime(&n, j) {
                        out.in_regime
                            .record(seed, verify_nikishin_type_i_location(&s, &n, j), || format!("nikishin-location {n} j={}", j + 1));
                        out.in_regime.record(seed, verify_nikishin_type_i_interlacing(&s, &n, j), || {
                            format!("nikishin-interlacing {n} j={}", j + 1)
                        });
                    } else if n[j] >= 3 {
                        match nikishin_location_unchecked(&s, &n, j) {
                            Ok(r) => {
                                out.controls_run += 1;
                                if r.verdict != Verdict::Pass {
                                    out.controls_failed += 1;
                                    if out.control_examples.is_empty() {
                                        out.control_examples.push(format!("seed {seed} {n} j={}: {}", j + 1, r.verdict));
                                    }
                                }
                            }
                            Err(e) if e.is_insufficient_support() => {}
                            Err(e) => out.in_regime.pass_if(false, || format!("seed {seed}: control {n} -> {e}")),
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut total = NikishinSuite::default();
    for p in parts {
        total.in_regime.merge(p.in_regime);
        total.controls_run += p.controls_run;
        total.controls_failed += p.controls_failed;
        if total.control_examples.len() < 3 {
            total.control_examples.extend(p.control_examples);
        }
    }
    total
}

/// Every admitted index normal, across all three families; Angelesco
/// determinants strictly positive.
pub fn perfectness_suite(systems: u64, base_seed: u64, max_total: usize) -> SuiteOutcome {
    let families: [&dyn SystemFamily; 3] = [&AngelescoFamily, &AtCauchyFamily, &NikishinFamily];
    let parts: Vec<SuiteOutcome> = families
        .iter()
        .flat_map(|f| (base_seed..base_seed + systems).map(move |seed| (*f, seed)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(f, seed)| {
            let s = f.generate(seed);
            let mut out = SuiteOutcome::default();
            for n in indices_up_to(s.r(), max_total) {
                match crate::solver::build_h(&s, &n) {
                    Err(_) => out.skipped += 1,
                    Ok(h) => {
                        let d = det_exact(&h);
                        out.pass_if(!d.is_zero(), || format!("{} seed {seed}: {n} not normal", f.name()));
                        if matches!(s.kind(), SystemKind::Angelesco) {
                            out.pass_if(d > Rational::zero(), || format!("angelesco seed {seed}: det H{n} = {d} not positive"));
                        }
                    }
                }
            }
            out
        })
        .collect();
    merge_all(parts)
}

/// Cauchy-Vandermonde systems: sampled Chebyshev property, zero location
/// and type II interlacing. Also probes whether `sgn det H_n` agrees with
/// the sign of the sampled generalized Vandermonde determinant.
pub fn at_suite(systems: u64, base_seed: u64, max_total: usize) -> SuiteOutcome {
    let parts: Vec<SuiteOutcome> = (base_seed..base_seed + systems)
        .into_par_iter()
        .map(|seed| {
            let s = AtCauchyFamily.generate(seed);
            let mut out = SuiteOutcome::default();
            let (mut agree, mut probed) = (0, 0);
            for n in indices_up_to(s.r(), max_total) {
                if !s.admits(&n, &vec![0; s.r()]) {
                    out.skipped += 1;
                    continue;
                }
                let cheb = s.chebyshev_sample_check(&n, 20, seed);
                out.pass_if(cheb == Ok(true), || format!("at seed {seed}: chebyshev check {n} -> {cheb:?}"));
                out.record(seed, verify_at_zero_location(&s, &n), || format!("at-location {n}"));
                for j in 0..s.r() {
                    if n.total() < max_total {
                        out.record(seed, verify_interlace_criterion_type_ii(&s, &n, j), || format!("interlace-ii {n} j={}", j + 1));
                    }
                }
                if n.total() > 0 {
                    if let (Ok(h), SystemKind::AtCauchy { poles, .. }) = (crate::solver::build_h(&s, &n), s.kind()) {
                        let gamma = &s.intervals().unwrap()[0];
                        let xs: Vec<Rational> =
                            (1..=n.total()).map(|i| &gamma.lo + (&gamma.hi - &gamma.lo) * rat(i as i64, n.total() as i64 + 1)).collect();
                        let u = det_rational(&crate::measures::cauchy_vandermonde_rows(poles, &n, &xs));
                        probed += 1;
                        agree += (crate::rational::sign(&det_exact(&h)) == crate::rational::sign(&u)) as usize;
                    }
                }
            }
            out.notes.push(format!("seed {seed}: sign(det H) = sign(U) at {agree}/{probed} indices"));
            out
        })
        .collect();
    merge_all(parts)
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> Polynomial {
    let mut c: Vec<Rational> = (0..=deg).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
    if c[deg].is_zero() {
        c[deg] = Rational::one();
    }
    Polynomial::new(c)
}

/// Random Andreief instances with `N <= 5`.
pub fn andreief_suite(instances: u64, base_seed: u64) -> SuiteOutcome {
    let parts: Vec<SuiteOutcome> = (base_seed..base_seed + instances)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=n);
            let atoms = rng.gen_range(m..=6.max(m));
            let mut pts: Vec<i64> = (-12..=12).collect();
            pts.shuffle(&mut rng);
            let measure = DiscreteMeasure::new(
                pts[..atoms].iter().map(|&t| (rat(t, 4), rat(rng.gen_range(-6..=6).max(1), rng.gen_range(1..=3)))).collect(),
                None,
            )
            .unwrap();
            let phis = (0..m).map(|_| { let d = rng.gen_range(0..=3); random_poly(&mut rng, d) }).collect();
            let psis = (0..n).map(|_| { let d = rng.gen_range(0..=3); random_poly(&mut rng, d) }).collect();
            let matrix = (0..n - m).map(|_| (0..n).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=2))).collect()).collect();
            let input = AndreiefInput { measure, phis, psis, matrix };
            let mut out = SuiteOutcome::default();
            out.record(seed, verify_andreief(&input), || format!("andreief M={m} N={n}"));
            out
        })
        .collect();
    merge_all(parts)
}

/// Random perturbation-lemma instances on generated two-measure systems.
pub fn perturbation_suite(instances: u64, base_seed: u64) -> SuiteOutcome {
    let parts: Vec<SuiteOutcome> = (base_seed..base_seed + instances)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = SuiteOutcome::default();
            // nikishin or two-interval angelesco
            let s = loop {
                let sys_seed = rng.gen::<u64>();
                let s = if rng.gen_bool(0.5) { NikishinFamily.generate(sys_seed) } else { AngelescoFamily.generate(sys_seed) };
                if s.r() == 2 {
                    break s;
                }
            };
            for _ in 0..100 {
                let n1 = rng.gen_range(1..=4);
                let deg_q = rng.gen_range(0..=n1);
                let n2 = rng.gen_range(0..=n1 - deg_q);
                let n = MultiIndex::new(vec![n1, n2]);
                if !s.admits(&n, &[0, 0]) {
                    continue;
                }
                let q = random_poly(&mut rng, deg_q);
                out.record(seed, verify_perturbation_lemma(&s, &q, &n), || format!("perturbation {n} q = {q}"));
                return out;
            }
            out.pass_if(false, || format!("seed {seed}: no admissible perturbation instance"));
            out
        })
        .collect();
    merge_all(parts)
}

fn random_path(rng: &mut ChaCha8Rng, r: usize, len: usize, max_start: usize) -> IncreasingPath {
    let mut start = vec![0; r];
    for _ in 0..rng.gen_range(0..=max_start) {
        start[rng.gen_range(0..r)] += 1;
    }
    let steps = (0..len - 1).map(|_| rng.gen_range(0..r)).collect();
    IncreasingPath::new(MultiIndex::new(start), steps)
}

/// Even-length paths in all three families (type II) and Angelesco
/// (type I): no real Wronskian zeros, and the degree-`l` transform zero-set
/// identity.
pub fn higher_wronskian_suite(systems: u64, base_seed: u64) -> SuiteOutcome {
    let families: [&dyn SystemFamily; 3] = [&AngelescoFamily, &AtCauchyFamily, &NikishinFamily];
    let jobs: Vec<(&dyn SystemFamily, u64)> =
        families.iter().flat_map(|f| (base_seed..base_seed + systems).map(move |s| (*f, s))).collect();
    let parts: Vec<SuiteOutcome> = jobs
        .into_par_iter()
        .map(|(f, seed)| {
            let s = f.generate(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
            let mut out = SuiteOutcome::default();
            for l in [2usize, 4] {
                let types: &[PolyType] =
                    if matches!(s.kind(), SystemKind::Angelesco) { &[PolyType::II, PolyType::I] } else { &[PolyType::II] };
                for &ty in types {
                    // draw paths until one fits the support budget
                    let found = (0..200).find_map(|_| {
                        let path = random_path(&mut rng, s.r(), l, 3);
                        let j = rng.gen_range(0..s.r());
                        let indices = path.indices();
                        let zero = vec![0; s.r()];
                        if !indices.iter().all(|n| s.admits(n, &zero)) {
                            return None;
                        }
                        let ok = match ty {
                            PolyType::II => s.admits(&path.start, &Transform::DegLAll(l).degrees(s.r())),
                            PolyType::I => indices
                                .last()
                                .unwrap()
                                .minus_ke(j, l)
                                .is_some_and(|at| s.admits(&at, &Transform::DegLSingle(j, l).degrees(s.r()))),
                        };
                        ok.then_some((path, j))
                    });
                    let Some((path, j)) = found else {
                        out.notes.push(format!("{} seed {seed}: no admissible path for l={l} type {}", f.name(), ty.as_str()));
                        continue;
                    };
                    let jj = (ty == PolyType::I).then_some(j);
                    out.record(seed, verify_even_wronskian_nonvanishing(&s, &path, ty, jj), || {
                        format!("{} even-wronskian {path} type {} j={:?}", f.name(), ty.as_str(), jj.map(|j| j + 1))
                    });
                    out.record(seed, verify_higher_wronskian(&s, &path, ty, jj), || {
                        format!("{} higher-wronskian {path} type {} j={:?}", f.name(), ty.as_str(), jj.map(|j| j + 1))
                    });
                }
            }
            out
        })
        .collect();
    merge_all(parts)
}

/// Random pair for the interlacing route cross-check: `q` with rational
/// roots (repeats allowed), `p` of degree at most `deg q + 1`, half of them
/// built to interlace.
pub fn random_interlace_pair(rng: &mut ChaCha8Rng) -> (Polynomial, Polynomial) {
    let dq = rng.gen_range(0..=5);
    let mut roots: Vec<Rational> = (0..dq).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=4))).collect();
    roots.sort();
    let q = Polynomial::from_roots(&roots).scale(&rat(rng.gen_range(1..=5), 1));
    let p = if rng.gen_bool(0.5) {
        // roots in the gaps, plus optionally one outside on each end
        let mut pr = Vec::new();
        for w in roots.windows(2) {
            if w[0] != w[1] {
                pr.push((&w[0] + &w[1]) / int(2));
            }
        }
        if rng.gen_bool(0.5) {
            pr.push(roots.first().cloned().unwrap_or_else(Rational::zero) - int(1));
        }
        if rng.gen_bool(0.5) && pr.len() < dq + 1 {
            pr.push(roots.last().cloned().unwrap_or_else(Rational::zero) + int(1));
        }
        Polynomial::from_roots(&pr).scale(&rat(rng.gen_range(-3..=3).max(1), 1))
    } else {
        let dp = rng.gen_range(0..=dq + 1);
        random_poly(rng, dp)
    };
    (p, q)
}

/// Route agreement of the interlacing decision on random pairs, and the
/// `l = 1, 2` reductions of the higher Wronskian check to the dedicated
/// criteria on Angelesco systems.
pub fn consistency_suite(pairs: u64, systems: u64, base_seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    let pair_list: Vec<(Polynomial, Polynomial)> = (0..pairs).map(|_| random_interlace_pair(&mut rng)).collect();
    let results: Vec<Result<InterlaceVerdict, PolyError>> =
        pair_list.par_iter().map(|(p, q)| interlace_decide(p, q).map(|r| r.0)).collect();
    let interlacing = results.iter().filter(|r| matches!(r, Ok(InterlaceVerdict::Interlace))).count();
    for ((p, q), r) in pair_list.iter().zip(&results) {
        out.pass_if(r.is_ok(), || format!("interlace routes on p = {p}, q = {q}: {r:?}"));
    }
    out.notes.push(format!("{interlacing}/{pairs} random pairs interlace"));

    let parts: Vec<SuiteOutcome> = (base_seed..base_seed + systems)
        .into_par_iter()
        .map(|seed| {
            let s = AngelescoFamily.generate(seed);
            let r = s.r();
            let mut out = SuiteOutcome::default();
            for n in indices_up_to(r, 4) {
                let same = |a: &Result<CriterionReport, CriterionError>, b: &Result<CriterionReport, CriterionError>, flip: bool| match (a, b) {
                    (Ok(a), Ok(b)) => {
                        let wa = a.witness("W").or(a.witness("P")).or(a.witness("A"));
                        let wb = b.witness("W").or(b.witness("P")).or(b.witness("A"));
                        let w_match = match (wa, wb) {
                            (Some(WitnessValue::Poly(x)), Some(WitnessValue::Poly(y))) => {
                                if flip { *x == -y } else { x == y }
                            }
                            _ => false,
                        };
                        Some(a.verdict == b.verdict && a.witness("D") == b.witness("D") && w_match)
                    }
                    (Err(a), Err(b)) if a.is_insufficient_support() && b.is_insufficient_support() => None,
                    _ => Some(false),
                };
                let path1 = IncreasingPath::new(n.clone(), vec![]);
                let mut check = |a, b, flip, what: String| match same(&a, &b, flip) {
                    None => out.skipped += 1,
                    Some(ok) => out.pass_if(ok, || format!("seed {seed}: {what}: {a:?} vs {b:?}")),
                };
                check(
                    verify_higher_wronskian(&s, &path1, PolyType::II, None),
                    verify_zero_criterion_type_ii(&s, &n),
                    false,
                    format!("l=1 type ii {n}"),
                );
                for j in 0..r {
                    if n[j] >= 1 {
                        check(
                            verify_higher_wronskian(&s, &path1, PolyType::I, Some(j)),
                            verify_zero_criterion_type_i(&s, &n, j),
                            false,
                            format!("l=1 type i {n} j={}", j + 1),
                        );
                    }
                    check(
                        verify_higher_wronskian(&s, &IncreasingPath::new(n.clone(), vec![j]), PolyType::II, None),
                        verify_interlace_criterion_type_ii(&s, &n, j),
                        true,
                        format!("l=2 type ii {n} j={}", j + 1),
                    );
                    if n[j] >= 2 {
                        for l in (0..r).filter(|&l| n[l] >= 1) {
                            let lower = n.minus_e(l).unwrap();
                            check(
                                verify_higher_wronskian(&s, &IncreasingPath::new(lower, vec![l]), PolyType::I, Some(j)),
                                verify_interlace_criterion_type_i(&s, &n, l, j),
                                true,
                                format!("l=2 type i {n} j={} l={}", j + 1, l + 1),
                            );
                        }
                    }
                }
            }
            out
        })
        .collect();
    out.merge(merge_all(parts));
    out
}
