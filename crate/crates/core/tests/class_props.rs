use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qconic::classes::{
    alexander_transform, generate_member, jucv_membership, just_membership, make_subordinate,
    ClassParams, GridSpec, SchwarzSpec, DEFAULT_TAIL_TOLERANCE,
};
use qconic::qcore::q_derivative_series;
use qconic::qoperator::apply_operator;
use qconic::series::TruncatedSeries;
use qconic::tolerances;
use qconic::verify::{random_sufficient_polynomial, sufficient_condition_lhs};

const PARAMS: [(f64, f64, f64, f64, f64); 6] = [
    (0.5, 1.0, 0.0, 0.0, 0.0),
    (0.9, 1.0, 1.0, 0.5, 0.3),
    (0.3, 2.0, 0.5, 1.0, 0.0),
    (0.7, 0.5, -0.5, 2.0, 0.6),
    (0.9, 3.0, 2.0, 1.0, 0.6),
    (0.5, 2.0, 0.5, 0.3, 0.9),
];

fn params(i: usize) -> ClassParams {
    let (q, a, b, k, g) = PARAMS[i];
    ClassParams::new(q, a, b, k, g).unwrap()
}

#[test]
fn coefficient_condition_implies_membership() {
    for (i, case) in PARAMS.iter().enumerate() {
        let p = params(i);
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..20 {
            let f = random_sufficient_polynomial(&p, &mut rng).unwrap();
            assert!(sufficient_condition_lhs(&f, &p).unwrap() <= 1.0 - p.gamma() + 1e-12);
            let v = just_membership(&f, &p, &GridSpec::standard()).unwrap();
            assert!(v.member, "{:?}: {v:?}", case);
        }
    }
}

#[test]
fn generated_members_pass_membership() {
    let recipes = [
        SchwarzSpec::Rotation {
            lambda: Complex64::from_polar(1.0, 0.7),
        },
        SchwarzSpec::Power {
            lambda: Complex64::new(0.6, 0.0),
            m: 2,
        },
        SchwarzSpec::Mobius { lambda: 0.4 },
    ];
    for (i, case) in PARAMS.iter().enumerate() {
        let p = params(i);
        for recipe in recipes.iter().cloned() {
            let sub = make_subordinate(recipe, &p.conic, 48).unwrap();
            let f = generate_member(&sub, &p, 48).unwrap();
            let grid = GridSpec::for_truncation(&f, DEFAULT_TAIL_TOLERANCE);
            let v = just_membership(&f, &p, &grid).unwrap();
            assert!(
                v.worst_margin >= -tolerances::MEMBERSHIP - 10.0 * v.tail_estimate,
                "{:?} {:?}: {v:?}",
                case,
                sub.recipe
            );
        }
    }
}

#[test]
fn recursion_reproduces_subordinate() {
    // z D_q(χf) / χf must equal p(w(z)) coefficientwise
    for (i, case) in PARAMS.iter().enumerate() {
        let p = params(i);
        let sub = make_subordinate(
            SchwarzSpec::Blaschke {
                lambda: Complex64::from_polar(1.0, 0.3),
                zeros: vec![Complex64::new(0.3, 0.2)],
            },
            &p.conic,
            24,
        )
        .unwrap();
        let f = generate_member(&sub, &p, 24).unwrap();
        let big_f = apply_operator(&f, &p.op).unwrap();
        let ratio = alexander_transform(&big_f, p.ctx()).divide(&big_f).unwrap();
        let want = sub.as_series();
        let scale = big_f.max_abs().max(1.0);
        for n in 0..=23 {
            let d = (ratio.coeff(n) - want.coeff(n)).norm();
            assert!(d < 1e-10 * scale, "{:?} n={n}: {d}", case);
        }
    }
}

#[test]
fn alexander_relation_between_classes() {
    // f in the convex-type class exactly when z D_q f is in the starlike-type class
    for i in 0..PARAMS.len() {
        let p = params(i);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        for _ in 0..5 {
            let g = random_sufficient_polynomial(&p, &mut rng).unwrap();
            let h = alexander_transform(&g, p.ctx());
            let grid = GridSpec::standard();
            let a = jucv_membership(&g, &p, &grid).unwrap();
            let b = just_membership(&h, &p, &grid).unwrap();
            assert_eq!(a.member, b.member);
            assert!((a.worst_margin - b.worst_margin).abs() < 1e-9);
        }
    }
}

#[test]
fn alexander_identity_on_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for q in [0.2, 0.5, 0.9] {
        let p = ClassParams::new(q, 1.0, 0.0, 0.0, 0.0).unwrap();
        let ctx = p.ctx();
        for _ in 0..10 {
            let g = random_sufficient_polynomial(&p, &mut rng).unwrap();
            let dg = q_derivative_series(&g, ctx);
            let d2g = q_derivative_series(&dg, ctx);
            let h = alexander_transform(&g, ctx);
            let dh = q_derivative_series(&h, ctx);
            for j in 0..50 {
                let z = Complex64::from_polar(0.9 * (j as f64 + 1.0) / 50.0, 0.37 * j as f64);
                let lhs = 1.0 + z * d2g.evaluate(z) * q / dg.evaluate(z);
                let rhs = z * dh.evaluate(z) / h.evaluate(z);
                assert!((lhs - rhs).norm() < 1e-12, "{lhs} {rhs}");
            }
        }
    }
}

#[test]
fn truncation_grid_follows_convergence_radius() {
    // z / (1 - z/2): radius 2, tail negligible on the standard grid
    let wide: Vec<f64> = (0..=40)
        .map(|n| if n == 0 { 0.0 } else { 0.5f64.powi(n - 1) })
        .collect();
    let g = GridSpec::for_truncation(&TruncatedSeries::from_real(&wide), DEFAULT_TAIL_TOLERANCE);
    assert_eq!(g.max_radius(), 0.95);
    // odd coefficients only, radius 0.8
    let odd: Vec<f64> = (0..=40)
        .map(|n| {
            if n % 2 == 1 {
                0.8f64.powi(-(n - 1))
            } else {
                0.0
            }
        })
        .collect();
    let g = GridSpec::for_truncation(&TruncatedSeries::from_real(&odd), DEFAULT_TAIL_TOLERANCE);
    assert!(g.max_radius() < 0.8 && g.max_radius() > 0.1, "{g:?}");
}
