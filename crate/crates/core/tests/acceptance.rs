//! Acceptance run: ten criteria, each checked exactly, one PASS/FAIL line
//! apiece. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use moprl::criteria::suites::*;
use moprl::criteria::{verify_andreief, AndreiefInput, WitnessValue};
use moprl::measures::{DiscreteMeasure, Interval, MeasureSystem};
use moprl::rational::{int, rat};
use moprl::solver::{det_h_in_z, solve_type_i, solve_type_ii, Transform};
use moprl::{MultiIndex, Polynomial};

struct Line {
    id: usize,
    title: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: usize, title: &'static str, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (ok, detail) = f();
    let line = Line { id, title, ok, detail, elapsed: start.elapsed() };
    println!(
        "{} {:>2} {:<28} {} [{:.1?}]",
        if line.ok { "PASS" } else { "FAIL" },
        line.id,
        line.title,
        line.detail,
        line.elapsed
    );
    line
}

fn outcome(o: &SuiteOutcome) -> (bool, String) {
    let mut detail = o.summary();
    if let Some(f) = o.failures.first() {
        detail += &format!("; first failure: {f}");
    }
    (o.all_passed() && o.passed > 0, detail)
}

fn fixtures() -> (bool, String) {
    let iv = |a, b| Interval::new(int(a), int(b)).unwrap();
    let ang = MeasureSystem::angelesco(vec![
        DiscreteMeasure::new(vec![(rat(-3, 4), rat(1, 2)), (rat(-1, 4), rat(1, 2))], Some(iv(-1, 0))).unwrap(),
        DiscreteMeasure::new(vec![(rat(1, 4), rat(1, 2)), (rat(3, 4), rat(1, 2))], Some(iv(0, 1))).unwrap(),
    ])
    .unwrap();
    let n11 = MultiIndex::new(vec![1, 1]);
    let x2_5_16 = Polynomial::new(vec![rat(-5, 16), int(0), int(1)]);
    let sym = MeasureSystem::angelesco(vec![DiscreteMeasure::new(
        vec![(int(-1), rat(1, 3)), (int(0), rat(1, 3)), (int(1), rat(1, 3))],
        Some(iv(-1, 1)),
    )
    .unwrap()])
    .unwrap();
    let two_point = DiscreteMeasure::new(vec![(int(0), rat(1, 2)), (int(1), rat(1, 2))], None).unwrap();
    let basis = vec![Polynomial::one(), Polynomial::x()];
    let andreief =
        verify_andreief(&AndreiefInput { measure: two_point, phis: basis.clone(), psis: basis, matrix: vec![] }).unwrap();
    let checks = [
        ("P_(1,1)", solve_type_ii(&ang, &n11).unwrap() == x2_5_16),
        (
            "A_(1,1)",
            solve_type_i(&ang, &n11).unwrap().polys == vec![Polynomial::from_i64(&[-1]), Polynomial::from_i64(&[1])],
        ),
        ("P_2", solve_type_ii(&sym, &MultiIndex::new(vec![2])).unwrap() == Polynomial::new(vec![rat(-2, 3), int(0), int(1)])),
        ("det_H(z)", det_h_in_z(&ang, &n11, Transform::Deg1All).unwrap() == x2_5_16),
        (
            "andreief",
            andreief.passed()
                && andreief.witness("lhs") == Some(&WitnessValue::Rational(rat(1, 4)))
                && andreief.witness("rhs") == Some(&WitnessValue::Rational(rat(1, 4))),
        ),
    ];
    let bad: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    (bad.is_empty(), if bad.is_empty() { "5/5 fixtures exact".into() } else { format!("mismatched: {}", bad.join(", ")) })
}

fn main() {
    let mut lines = Vec::new();
    lines.push(run(1, "fixture exactness", fixtures));

    let start = Instant::now();
    let ang = angelesco_suite(200, 0, 6);
    let ang_time = start.elapsed();
    println!("     angelesco suite: 200 systems, |n| <= 6, {ang_time:.1?}");
    lines.push(run(2, "zero-location criterion", || outcome(&ang.zero)));
    lines.push(run(3, "interlacing criterion", || outcome(&ang.interlace)));
    lines.push(run(4, "angelesco zero counts", || outcome(&ang.count)));

    lines.push(run(5, "nikishin type I", || {
        let s = nikishin_suite(100, 0, 7);
        let (ok, detail) = outcome(&s.in_regime);
        let controls = format!(
            "; negative controls: {}/{} out-of-regime indices fail or degenerate (e.g. {})",
            s.controls_failed,
            s.controls_run,
            s.control_examples.first().map(String::as_str).unwrap_or("none")
        );
        (ok && s.controls_run > 0, detail + &controls)
    }));
    lines.push(run(6, "perfectness evidence", || outcome(&perfectness_suite(100, 0, 7))));
    lines.push(run(7, "andreief identity", || outcome(&andreief_suite(100, 0))));
    lines.push(run(8, "perturbation lemma", || outcome(&perturbation_suite(50, 0))));
    lines.push(run(9, "higher wronskians", || outcome(&higher_wronskian_suite(60, 0))));
    lines.push(run(10, "internal consistency", || outcome(&consistency_suite(1000, 30, 0))));

    let failed: Vec<usize> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    if failed.is_empty() {
        println!("acceptance: 10/10 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
