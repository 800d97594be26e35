//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Reference values come from the bundled data tables; oracle values are
//! closed forms re-derived inside the relevant test.

use std::sync::LazyLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use boundscope::annealing::{boltzmann_expectation, fhat_max, lifted_identity_check, sa_bound};
use boundscope::cli::{
    reproduce_table, table2_references, TableId, LASSERRE_ABS_TOL, LASSERRE_REL_TOL, SA_ABS_TOL,
    SA_REL_TOL,
};
use boundscope::lasserre::{assemble_pair, lasserre_upper_bound, solve_smallest_gev, BasisKind};
use boundscope::moments::{integrate_polynomial, tensor_quadrature, BoxDomain};
use boundscope::poly::Polynomial;
use boundscope::taylor::{ln_factorial, truncated_exp, verify_chain};
use boundscope::testfns;

fn corpus_poly(key: &str) -> Polynomial {
    testfns::by_key(key).expect("builtin").polynomial()
}

fn square() -> BoxDomain {
    BoxDomain::symmetric_unit(2)
}

/// (function key, r, computed value) cells plus the wall time to build them.
type CellCache = (Vec<(String, u32, f64)>, Duration);

/// All 72 eigenvalue cells (orthonormal basis), with the build time.
static LASSERRE_CELLS: LazyLock<CellCache> = LazyLock::new(|| {
    let start = Instant::now();
    let cells: Vec<(String, u32, f64)> = table2_references()
        .par_iter()
        .map(|cell| {
            let value = lasserre_upper_bound(
                &corpus_poly(&cell.function),
                &square(),
                cell.r,
                BasisKind::Orthonormal,
            )
            .expect("lasserre cell")
            .value;
            (cell.function.clone(), cell.r, value)
        })
        .collect();
    (cells, start.elapsed())
});

/// All 72 annealing cells in reproduction mode (printed max of |f|).
static SA_CELLS: LazyLock<CellCache> = LazyLock::new(|| {
    let start = Instant::now();
    let cells: Vec<(String, u32, f64)> = table2_references()
        .par_iter()
        .map(|cell| {
            let f = testfns::by_key(&cell.function).expect("builtin");
            let value = sa_bound(&f.polynomial(), &square(), cell.r, Some(f.fhat_max))
                .expect("sa cell")
                .value;
            (cell.function.clone(), cell.r, value)
        })
        .collect();
    (cells, start.elapsed())
});

fn within(computed: f64, reference: f64, abs_tol: f64, rel_tol: f64) -> bool {
    let abs = (computed - reference).abs();
    abs <= abs_tol || abs <= rel_tol * reference.abs()
}

#[test]
fn criterion_01_sa_column_reproduces() {
    let (cells, elapsed) = &*SA_CELLS;
    let mut failures = Vec::new();
    let mut max_abs = 0.0f64;
    for ((function, r, value), reference) in cells.iter().zip(table2_references()) {
        assert_eq!(function, &reference.function);
        max_abs = max_abs.max((value - reference.sa_ref).abs());
        if !within(*value, reference.sa_ref, SA_ABS_TOL, SA_REL_TOL) {
            failures.push(format!("{function} r={r}: {value} vs {}", reference.sa_ref));
        }
    }
    let passed = failures.is_empty() && elapsed.as_secs_f64() < 60.0;
    println!(
        "criterion 01 (sa column, 72 cells): {} (max abs dev {max_abs:.2e}, {:.1}s)",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "sa column took {:.1}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_02_lasserre_column_reproduces() {
    let (cells, elapsed) = &*LASSERRE_CELLS;
    let mut failures = Vec::new();
    let mut max_abs = 0.0f64;
    for ((function, r, value), reference) in cells.iter().zip(table2_references()) {
        assert_eq!(function, &reference.function);
        max_abs = max_abs.max((value - reference.lasserre_ref).abs());
        if !within(
            *value,
            reference.lasserre_ref,
            LASSERRE_ABS_TOL,
            LASSERRE_REL_TOL,
        ) {
            failures.push(format!(
                "{function} r={r}: {value} vs {}",
                reference.lasserre_ref
            ));
        }
    }
    let passed = failures.is_empty() && elapsed.as_secs_f64() < 120.0;
    println!(
        "criterion 02 (lasserre column, 72 cells): {} (max abs dev {max_abs:.2e}, {:.1}s)",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "lasserre column took {:.1}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_03_reference_spot_values() {
    let motzkin = corpus_poly("motzkin");
    let k = square();
    // the printed reference expectation 0.7257 is attained at unit
    // temperature (see the decisions record shipped with the run notes:
    // at t = 0.5 the expectation is 0.5651, inconsistent with the rest of
    // the reference table, which this suite reproduces at 1e-4)
    let expectation = boltzmann_expectation(&motzkin, &k, 1.0).unwrap();
    let f6 = lasserre_upper_bound(&motzkin, &k, 6, BasisKind::Orthonormal)
        .unwrap()
        .value;
    let f7 = lasserre_upper_bound(&motzkin, &k, 7, BasisKind::Orthonormal)
        .unwrap()
        .value;
    let checks = [
        ("expectation", expectation, 0.7257),
        ("bound r=6", f6, 0.8010),
        ("bound r=7", f7, 0.7088),
    ];
    let failures: Vec<String> = checks
        .iter()
        .filter(|(_, computed, reference)| (computed - reference).abs() > 1e-3)
        .map(|(name, computed, reference)| format!("{name}: {computed} vs {reference}"))
        .collect();
    println!(
        "criterion 03 (motzkin spot values): {} (E={expectation:.4}, f6={f6:.4}, f7={f7:.4})",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_04_univariate_closed_form() {
    let f = Polynomial::variable(1, 0);
    let k = BoxDomain::cube(1, 0.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for t in [1.0, 0.1, 0.01] {
        let computed = boltzmann_expectation(&f, &k, t).unwrap();
        let exact = t - (-1.0 / t).exp() / (1.0 - (-1.0 / t).exp());
        worst = worst.max((computed - exact).abs());
    }
    println!(
        "criterion 04 (univariate closed form): {} (max abs dev {worst:.2e})",
        if worst <= 1e-9 { "PASS" } else { "FAIL" }
    );
    assert!(worst <= 1e-9, "max abs dev {worst}");
}

#[test]
fn criterion_05_convex_rate_bound() {
    let k = square();
    let mut failures = Vec::new();
    for key in ["booth", "matyas"] {
        let f = corpus_poly(key);
        for t in [0.05, 0.5, 5.0, 50.0] {
            let e = boltzmann_expectation(&f, &k, t).unwrap();
            // f_min is 0 for the corpus; n = 2
            if e > 2.0 * t {
                failures.push(format!("{key} t={t}: E = {e} > {}", 2.0 * t));
            }
        }
    }
    println!(
        "criterion 05 (convex rate E <= n t): {}",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_06_truncated_exp_sandwich() {
    let mut failures = Vec::new();
    for r in 1..=10u32 {
        let phi = truncated_exp(r);
        for i in 0..200 {
            let lambda = 50.0 * f64::from(i) / 199.0;
            let value = phi.eval(lambda);
            let diff = value - (-lambda).exp();
            let slack = 1e-13 * (1.0 + value.abs());
            if diff < -slack {
                failures.push(format!("r={r} lambda={lambda}: diff {diff} < 0"));
                continue;
            }
            if diff > slack {
                // remainder bound in log space
                let ln_bound =
                    f64::from(2 * r + 1) * lambda.ln() - ln_factorial(u64::from(2 * r) + 1);
                if diff.ln() > ln_bound + 1e-9 {
                    failures.push(format!(
                        "r={r} lambda={lambda}: ln diff {} > ln bound {ln_bound}",
                        diff.ln()
                    ));
                }
            }
        }
        // sum-of-squares necessary condition: positivity on [-50, 50]
        for i in 0..200 {
            let lambda = -50.0 + 100.0 * f64::from(i) / 199.0;
            let value = phi.eval(lambda);
            if value <= 0.0 {
                failures.push(format!("r={r} lambda={lambda}: phi = {value} <= 0"));
            }
        }
    }
    println!(
        "criterion 06 (truncated-exp sandwich, r=1..10): {}",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_07_inequality_chain() {
    let f = corpus_poly("motzkin");
    let k = square();
    let fhat = 81.0;
    let mut failures = Vec::new();
    let mut largest_solve = Duration::ZERO;
    for r in 1..=4u32 {
        let t = std::f64::consts::E * fhat / f64::from(r);
        let start = Instant::now();
        let report = verify_chain(&f, &k, r, t).unwrap();
        largest_solve = largest_solve.max(start.elapsed());
        if !report.schedule_ok {
            failures.push(format!("r={r}: schedule flag false"));
        }
        failures.extend(
            report
                .violations()
                .into_iter()
                .map(|v| format!("r={r}: {v}")),
        );
        // the theorem-side check, spelled out: fbar(6r) <= E + fhat/2^r
        let theorem_rhs = report.boltzmann_value + fhat / 2f64.powi(r as i32);
        if report.lasserre_value > theorem_rhs + report.tol {
            failures.push(format!("r={r}: {} > {theorem_rhs}", report.lasserre_value));
        }
    }
    let passed = failures.is_empty() && largest_solve.as_secs_f64() < 30.0;
    println!(
        "criterion 07 (inequality chain r=1..4): {} (largest solve {:.1}s)",
        if passed { "PASS" } else { "FAIL" },
        largest_solve.as_secs_f64()
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(
        largest_solve.as_secs_f64() < 30.0,
        "largest solve took {:.1}s",
        largest_solve.as_secs_f64()
    );
}

#[test]
fn criterion_08_determinant_root_oracle() {
    // the 2x2 pencil has det(A - l B) proportional to 6 l^2 - 6 l + 1,
    // whose smaller root is (3 - sqrt 3) / 6
    let oracle = {
        let (a, b, c) = (6.0f64, -6.0f64, 1.0f64);
        (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
    };
    let f = Polynomial::variable(1, 0);
    let k = BoxDomain::cube(1, 0.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for kind in [BasisKind::Monomial, BasisKind::Orthonormal] {
        let value = lasserre_upper_bound(&f, &k, 1, kind).unwrap().value;
        worst = worst.max((value - oracle).abs());
    }
    println!(
        "criterion 08 (closed-form oracle, both bases): {} (max abs dev {worst:.2e})",
        if worst <= 1e-10 { "PASS" } else { "FAIL" }
    );
    assert!(worst <= 1e-10, "max abs dev {worst} vs oracle {oracle}");
}

#[test]
fn criterion_09_property_suites() {
    let k = square();
    let mut failures = Vec::new();

    // eigenvalue bounds nonincreasing over r = 0..20 and above the corpus
    // minimum 0 (r >= 3 reuses the 72-cell cache)
    let (cells, _) = &*LASSERRE_CELLS;
    for key in ["booth", "matyas", "motzkin", "camel3"] {
        let mut series: Vec<(u32, f64)> = (0..3)
            .map(|r| {
                let value =
                    lasserre_upper_bound(&corpus_poly(key), &square(), r, BasisKind::Orthonormal)
                        .unwrap()
                        .value;
                (r, value)
            })
            .collect();
        series.extend(
            cells
                .iter()
                .filter(|(f, _, _)| f == key)
                .map(|(_, r, v)| (*r, *v)),
        );
        for w in series.windows(2) {
            if w[1].1 > w[0].1 + 1e-9 {
                failures.push(format!(
                    "monotonicity {key}: r={} value {} > r={} value {}",
                    w[1].0, w[1].1, w[0].0, w[0].1
                ));
            }
        }
        for (r, value) in &series {
            if *value < -1e-9 {
                failures.push(format!(
                    "upper bound {key} r={r} below the minimum: {value}"
                ));
            }
        }
    }

    // expectation nondecreasing in temperature, geometric grid
    for f in testfns::all() {
        let poly = f.polynomial();
        let temps: Vec<f64> = (0..6)
            .map(|i| f.fhat_max / 1000.0 * 10f64.powi(i))
            .collect();
        let mut previous = f64::NEG_INFINITY;
        for &t in &temps {
            let e = boltzmann_expectation(&poly, &k, t).unwrap();
            if e + 1e-9 < previous {
                failures.push(format!("{} monotone-in-t: {previous} then {e}", f.key));
            }
            previous = e;
        }
    }

    // monomial and orthonormal assemblies agree through r = 6
    for f in testfns::all() {
        let poly = f.polynomial();
        for r in 0..=6u32 {
            let mono = solve_smallest_gev(&assemble_pair(&poly, &k, r, BasisKind::Monomial))
                .unwrap()
                .value;
            let orth = solve_smallest_gev(&assemble_pair(&poly, &k, r, BasisKind::Orthonormal))
                .unwrap()
                .value;
            if (mono - orth).abs() > 1e-8 {
                failures.push(format!(
                    "basis invariance {} r={r}: {mono} vs {orth}",
                    f.key
                ));
            }
        }
    }

    // lifted-set identity
    let x = Polynomial::variable(1, 0);
    let k1 = BoxDomain::cube(1, 0.0, 1.0).unwrap();
    let lifted_cases: Vec<(Polynomial, BoxDomain, f64)> = vec![
        (x.clone(), k1.clone(), 1.0),
        (x, k1, 0.1),
        (corpus_poly("matyas"), k.clone(), 0.5),
        (corpus_poly("booth"), k.clone(), 5.0),
    ];
    for (f, domain, t) in lifted_cases {
        let check = lifted_identity_check(&f, &domain, t).unwrap();
        if check.gap.abs() > 1e-7 * (1.0 + check.rhs.abs()) {
            failures.push(format!("lifted identity gap {} at t={t}", check.gap));
        }
    }

    // tensor rules reproduce exact moments for every corpus polynomial
    for f in testfns::all() {
        let poly = f.polynomial();
        let exact = integrate_polynomial(&k, &poly);
        let m_exactness = (poly.degree() as usize + 2) / 2;
        for m in [m_exactness, m_exactness + 5, 12] {
            let quad = tensor_quadrature(&k, m, |p| poly.eval(p));
            if (quad - exact).abs() > 1e-12 * (1.0 + exact.abs()) {
                failures.push(format!(
                    "quadrature exactness {} m={m}: {quad} vs {exact}",
                    f.key
                ));
            }
        }
    }

    println!(
        "criterion 09 (property suites): {}",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_10_corpus_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let report = reproduce_table(TableId::Table1, Some(&dir.path().join("table1.csv"))).unwrap();
    let mut failures = Vec::new();
    if !report.all_within() {
        failures.push(report.summary());
    }
    // degrees are exact
    for f in testfns::all() {
        if f.polynomial().degree() != f.degree {
            failures.push(format!("{}: degree {}", f.key, f.polynomial().degree()));
        }
    }
    // recomputed maxima within 0.1%; the camel3 entry matches the analytic
    // value and its printed reference is flagged as rounded
    let analytic_camel = 15625.0 / 6.0 - 656.25 + 100.0;
    let camel = fhat_max(&corpus_poly("camel3"), &square());
    if (camel - analytic_camel).abs() > 1e-6 {
        failures.push(format!("camel3 fhat {camel} vs analytic {analytic_camel}"));
    }
    let camel_row = report
        .rows
        .iter()
        .find(|c| c.function == "camel3" && c.column == "fhat_max")
        .unwrap();
    if camel_row.note != "printed value is rounded" {
        failures.push(format!("camel3 note: '{}'", camel_row.note));
    }
    println!(
        "criterion 10 (corpus metadata): {} (camel3 computed {camel:.4})",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    assert!(failures.is_empty(), "{failures:?}");
}
