//! Acceptance criteria, one line each. Runs without the test harness so the
//! lines come out in order; exits nonzero if any criterion fails.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qconic::classes::{just_membership, sharp_function, ClassParams, GridSpec};
use qconic::conic::{extremal_coeffs, ConicParams, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use qconic::qcore::{q_derivative_series, QContext};
use qconic::qoperator::{apply_operator, apply_operator_integral_form, weights, OperatorParams};
use qconic::series::TruncatedSeries;
use qconic::tolerances;
use qconic::verify::covering::{covers_disc, BOUNDARY_RADIUS};
use qconic::verify::{
    default_matrix, derived_seed, extremal_member, random_sufficient_polynomial, sample_members,
    verify_covering_radius, verify_fekete_szego_complex, verify_fekete_szego_real,
    verify_product_bound, verify_rogosinski, verify_sufficient_condition, CoefficientBounds,
    ParameterSet,
};

const SEED: u64 = 42;
const MEMBERS: usize = 50;
const ETAS: usize = 20;
const DEGREE: usize = 32;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

struct SetData {
    set: ParameterSet,
    params: ClassParams,
    bounds: CoefficientBounds,
    extremal: qconic::conic::ConicCoefficients,
    members: Vec<qconic::verify::MemberSample>,
}

fn set_data(i: usize, set: ParameterSet) -> SetData {
    let params = set.class_params().unwrap();
    let extremal = extremal_coeffs(&params.conic, DEGREE, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
    let bounds = CoefficientBounds::new(&params, &extremal, DEGREE).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(SEED, i));
    let members = sample_members(&params, &extremal, MEMBERS, DEGREE, &mut rng).unwrap();
    SetData {
        set,
        params,
        bounds,
        extremal,
        members,
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut e1, mut e2): (f64, f64) = (0.0, 0.0);
    let mut points = 0;
    for k in [0.0, 0.3, 0.7, 1.0, 1.5, 3.0] {
        for gamma in [0.0, 0.25, 0.5, 0.9] {
            let conic = ConicParams::new(k, gamma).unwrap();
            let p = extremal_coeffs(&conic, DEGREE, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
            e1 = e1.max((p.p(1) - conic.p1_closed()).abs());
            e2 = e2.max((p.p(2) - conic.p2_closed()).abs());
            points += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        points == 24
            && e1 < tolerances::P1_AGREEMENT
            && e2 < tolerances::P2_AGREEMENT
            && within(t, 30.0),
        format!("{points} (k, gamma) points, max |dP1| = {e1:.2e}, max |dP2| = {e2:.2e}, {t:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut evaluations = 0;
    for alpha in [1.0, 2.0, 3.0] {
        for _ in 0..20 {
            let q = rng.gen_range(0.2..0.9);
            let beta = rng.gen_range(-0.5..2.0);
            let op = OperatorParams::new(alpha, beta, QContext::new(q).unwrap()).unwrap();
            let degree = rng.gen_range(2..=10);
            let mut c: Vec<Complex64> = (0..=degree)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            c[0] = Complex64::new(0.0, 0.0);
            c[1] = Complex64::new(1.0, 0.0);
            let f = TruncatedSeries::new(c);
            let image = apply_operator(&f, &op).unwrap();
            for _ in 0..10 {
                let z = Complex64::from_polar(
                    0.5 * rng.gen::<f64>().sqrt(),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                let integral = apply_operator_integral_form(&f, &op, z).unwrap();
                worst = worst.max((image.evaluate(z) - integral).norm());
                evaluations += 1;
            }
        }
    }
    let t = start.elapsed();
    outcome(
        worst < 1e-9 && within(t, 10.0),
        format!("{evaluations} evaluations, max discrepancy {worst:.2e}, {t:.2?}"),
    )
}

fn criterion_3() -> Outcome {
    let op = OperatorParams::new(1.0, 0.0, QContext::new(0.9999).unwrap()).unwrap();
    let psi = weights(&op, 10).unwrap();
    let worst = (1..=10)
        .map(|n| (psi.psi(n) - 1.0 / n as f64).abs())
        .fold(0.0, f64::max);
    outcome(
        worst < 5e-4,
        format!("max |psi_n - 1/n| = {worst:.2e} for n <= 10"),
    )
}

fn criterion_4(sets: &[ParameterSet]) -> Outcome {
    let start = Instant::now();
    let (mut violations, mut trials) = (0, 0);
    let mut equality: f64 = 0.0;
    let mut sharp_members = 0;
    for (i, set) in sets.iter().enumerate() {
        let params = set.class_params().unwrap();
        let r =
            verify_sufficient_condition(&params, 200, derived_seed(SEED, i), &set.label()).unwrap();
        violations += r.violations;
        trials += r.trials;
        equality = equality.max(r.details["sharp_equality_max_error"]);
        for n in 2..=6 {
            let f = sharp_function(n, &params).unwrap();
            if just_membership(&f, &params, &GridSpec::standard())
                .unwrap()
                .member
            {
                sharp_members += 1;
            }
        }
    }
    let t = start.elapsed();
    let expected_sharp = 5 * sets.len();
    outcome(
        violations == 0
            && equality < tolerances::SHARP_EQUALITY
            && sharp_members == expected_sharp
            && within(t, 60.0),
        format!(
            "{trials} trials over {} sets, {violations} violations, sharp equality error {equality:.2e}, \
             {sharp_members}/{expected_sharp} sharp functions members, {t:.2?}",
            sets.len()
        ),
    )
}

fn criterion_5(data: &[SetData]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut violations, mut trials) = (0, 0);
    let mut continuity: f64 = 0.0;
    let mut a2_gap: f64 = 0.0;
    for d in data {
        let complex_etas: Vec<Complex64> = (0..ETAS)
            .map(|_| {
                Complex64::from_polar(
                    3.0 * rng.gen::<f64>().sqrt(),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let (s1, s2) = (d.bounds.sigma1(), d.bounds.sigma2());
        let real_etas: Vec<f64> = (0..ETAS)
            .map(|j| match j {
                0 => s1,
                1 => s2,
                _ => match j % 3 {
                    0 => s1 - rng.gen_range(0.0..3.0),
                    1 => rng.gen_range(s1..=s2),
                    _ => s2 + rng.gen_range(0.0..3.0),
                },
            })
            .collect();
        let label = d.set.label();
        let c = verify_fekete_szego_complex(&d.bounds, &complex_etas, &d.members, &label);
        let r = verify_fekete_szego_real(&d.bounds, &real_etas, &d.members, &label);
        violations += c.violations + r.violations;
        trials += c.trials + r.trials;
        continuity = continuity
            .max(r.details["continuity_gap_sigma1"])
            .max(r.details["continuity_gap_sigma2"]);
        let first = extremal_member(&d.params, &d.extremal, 1, DEGREE).unwrap();
        a2_gap = a2_gap.max((d.bounds.a2_bound() - first.f.coeff(2).norm()).abs());
    }
    outcome(
        violations == 0 && continuity < 1e-10 && a2_gap < 1e-8,
        format!(
            "{trials} (member, eta) trials, {violations} violations, continuity gap {continuity:.2e}, \
             |a2| attainment gap {a2_gap:.2e}"
        ),
    )
}

fn criterion_6(data: &[SetData]) -> Outcome {
    let (mut violations, mut trials) = (0, 0);
    let mut worst = f64::INFINITY;
    for d in data {
        let r = verify_product_bound(&d.bounds, &d.members, 12, &d.set.label());
        violations += r.violations;
        trials += r.trials;
        worst = worst.min(r.worst_slack);
    }
    outcome(
        violations == 0,
        format!("{trials} coefficient checks for n <= 12, {violations} violations, worst slack {worst:.2e}"),
    )
}

fn criterion_7(sets: &[ParameterSet]) -> Outcome {
    let (mut violations, mut trials, mut uncovered) = (0, 0, 0);
    let mut worst = f64::INFINITY;
    let mut worst_at = String::new();
    for (i, set) in sets.iter().enumerate() {
        let params = set.class_params().unwrap();
        let extremal = extremal_coeffs(&params.conic, 4, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
        let bounds = CoefficientBounds::new(&params, &extremal, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(SEED, i));
        let mut members: Vec<(String, TruncatedSeries)> = (2..=6)
            .map(|n| (format!("sharp f_{n}"), sharp_function(n, &params).unwrap()))
            .collect();
        for j in 0..MEMBERS {
            members.push((
                format!("random polynomial {j}"),
                random_sufficient_polynomial(&params, &mut rng).unwrap(),
            ));
        }
        let r = verify_covering_radius(&bounds, &members, &set.label()).unwrap();
        violations += r.violations;
        trials += r.trials;
        if r.worst_slack < worst {
            worst = r.worst_slack;
            worst_at = format!(
                "{} [{}]",
                r.witness.as_ref().map_or("", |w| w.description.as_str()),
                set.label()
            );
        }
        let radius = bounds.covering_radius();
        for (_, f) in &members {
            if !covers_disc(f, BOUNDARY_RADIUS, radius).unwrap() {
                uncovered += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!(
            "{trials} polynomial members, {violations} with boundary minimum modulus below the radius, \
             worst slack {worst:.3e} at {worst_at}; {uncovered} fail the winding-number covering certificate"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let q = rng.gen_range(0.1..0.95);
        let ctx = QContext::new(q).unwrap();
        let degree = 16;
        let mut c: Vec<Complex64> = (0..=degree)
            .map(|n| {
                Complex64::from_polar(
                    rng.gen::<f64>() * 0.5f64.powi(n) / (n.max(1) as f64),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        c[0] = Complex64::new(0.0, 0.0);
        c[1] = Complex64::new(1.0, 0.0);
        let g = TruncatedSeries::new(c);
        let dg = q_derivative_series(&g, &ctx);
        let d2g = q_derivative_series(&dg, &ctx);
        let h = g.map_indexed(|n, a| a * ctx.bracket_int(n));
        let dh = q_derivative_series(&h, &ctx);
        for _ in 0..200 {
            let z = Complex64::from_polar(
                rng.gen_range(0.05..0.95),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let lhs = 1.0 + z * d2g.evaluate(z) * q / dg.evaluate(z);
            let rhs = z * dh.evaluate(z) / h.evaluate(z);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    outcome(
        worst < 1e-12,
        format!("100 series x 200 points, max discrepancy {worst:.2e}"),
    )
}

fn criterion_9(data: &[SetData]) -> Outcome {
    let (mut violations, mut trials) = (0, 0);
    let mut worst = f64::INFINITY;
    for d in data {
        let r = verify_rogosinski(&d.extremal, &d.members, &d.set.label());
        violations += r.violations;
        trials += r.trials;
        worst = worst.min(r.worst_slack);
    }
    outcome(
        violations == 0,
        format!(
            "{trials} subordinate sequences c_1..c_{DEGREE}, {violations} exceed P1 + 1e-9, worst P1 - max|c_n| = {worst:.2e}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut codes = Vec::new();
    for d in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_qconic"))
            .args([
                "verify",
                "--suite",
                "default",
                "--seed",
                "42",
                "--output-dir",
            ])
            .arg(d.path())
            .output()
            .unwrap()
            .status;
        codes.push(status.code());
    }
    let read =
        |i: usize| fs::read(dirs[i].path().join(qconic_cli::SUMMARY_FILE)).unwrap_or_default();
    let (a, b) = (read(0), read(1));
    outcome(
        !a.is_empty() && a == b,
        format!(
            "summary CSVs of {} and {} bytes, identical: {}, exit codes {codes:?}",
            a.len(),
            b.len(),
            a == b
        ),
    )
}

fn main() -> ExitCode {
    let sets = default_matrix();
    let start = Instant::now();
    let data: Vec<SetData> = sets
        .iter()
        .enumerate()
        .map(|(i, &s)| set_data(i, s))
        .collect();
    println!(
        "generated {} members for {} parameter sets in {:.2?}",
        MEMBERS * sets.len(),
        sets.len(),
        start.elapsed()
    );

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(usize, &str, Check)> = vec![
        (1, "conic coefficient agreement", Box::new(criterion_1)),
        (2, "operator identity", Box::new(criterion_2)),
        (3, "limit consistency", Box::new(criterion_3)),
        (4, "coefficient condition", Box::new(|| criterion_4(&sets))),
        (5, "Fekete-Szego", Box::new(|| criterion_5(&data))),
        (6, "product bound", Box::new(|| criterion_6(&data))),
        (7, "covering radius", Box::new(|| criterion_7(&sets))),
        (8, "Alexander identity", Box::new(criterion_8)),
        (9, "Rogosinski", Box::new(|| criterion_9(&data))),
        (10, "determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (n, name, check) in &criteria {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {:<28} {}  {}",
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
