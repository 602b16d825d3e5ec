//! Trinomial solvers and fixed-point iteration.

use confcomp_core::criteria::DifferentiableMapSpec;
use confcomp_core::solver::{
    astrand_transform, hoffmann_solve, iterate_fixed_point, Approach, HoffmannAlgorithm, Trinomial,
};
use rug::Float;

fn tol(prec: u32, exp: i32) -> Float {
    Float::with_val(prec, Float::parse(format!("1e{exp}")).unwrap())
}

fn assert_close(v: &Float, expect: &str, eps: f64) {
    let prec = v.prec();
    let e = Float::with_val(prec, Float::parse(expect).unwrap());
    let err = Float::with_val(prec, v - &e).abs();
    assert!(err < eps, "got {v}, expected {expect}, error {err}");
}

#[test]
fn hoffmann_a_finds_the_inner_root_of_the_cubic() {
    let t = Trinomial::new(3, 1, -7.0, 7.0).unwrap();
    let s = hoffmann_solve(&t, HoffmannAlgorithm::A, None, 500, &tol(192, -30), 192).unwrap();
    assert_close(&s.root, "1.35689586789220944389", 1e-18);
    assert!(s.inside_bound, "Algorithm A root should sit inside the bound");
    assert!(s.residual.clone().abs() < 1e-25);
}

#[test]
fn hoffmann_b_finds_the_outer_root_of_the_cubic() {
    let t = Trinomial::new(3, 1, -7.0, 7.0).unwrap();
    let s = hoffmann_solve(&t, HoffmannAlgorithm::B, None, 500, &tol(192, -30), 192).unwrap();
    assert_close(&s.root, "1.69202147163009586963", 1e-18);
    assert!(!s.inside_bound, "Algorithm B root should sit outside the bound");
    assert!(s.residual.clone().abs() < 1e-25);
}

#[test]
fn hoffmann_on_the_realis_quadratic() {
    // x² − x − 2 = (x − 2)(x + 1).
    let t = Trinomial::new(2, 1, -1.0, -2.0).unwrap();
    let a = hoffmann_solve(&t, HoffmannAlgorithm::A, None, 500, &tol(128, -25), 128).unwrap();
    assert_close(&a.root, "-1", 1e-20);
    let b = hoffmann_solve(&t, HoffmannAlgorithm::B, None, 500, &tol(128, -25), 128).unwrap();
    assert_close(&b.root, "2", 1e-20);
}

#[test]
fn hoffmann_bound_separates_the_two_algorithms() {
    let t = Trinomial::new(3, 1, -7.0, 7.0).unwrap();
    let bound = t.hoffmann_bound(128);
    // (n|p|/m)^{1/(m−n)} = (7/3)^{1/2}.
    assert_close(&bound, "1.52752523165194666886", 1e-15);
}

#[test]
fn trinomial_rejects_bad_exponents() {
    assert!(Trinomial::new(2, 2, 1.0, 1.0).is_err());
    assert!(Trinomial::new(3, 0, 1.0, 1.0).is_err());
}

#[test]
fn residual_certificate_scales_with_coefficients() {
    let t = Trinomial::new(3, 1, -7.0, 7.0).unwrap();
    let s = hoffmann_solve(&t, HoffmannAlgorithm::A, None, 500, &tol(192, -40), 192).unwrap();
    let check = t.residual(&s.root);
    let budget = tol(192, -40) * (1.0 + t.coefficient_scale());
    assert!(check.abs() <= budget, "residual exceeds scaled tolerance");
}

#[test]
fn astrand_transform_on_the_cubic() {
    let s = astrand_transform(3, 7.0, 7.0, 1, 500, &tol(192, -30), 192).unwrap();
    assert_close(&s.c, "0.37796447300922722721", 1e-15);
    assert_close(&s.root, "1.35689586789220944389", 1e-18);
    assert!(s.residual.clone().abs() < 1e-20);
}

#[test]
fn astrand_transform_on_the_realis_quadratic() {
    let s = astrand_transform(2, 1.0, 2.0, -1, 500, &tol(128, -25), 128).unwrap();
    assert_close(&s.root, "2", 1e-18);
}

#[test]
fn astrand_rejects_degenerate_input() {
    let t = tol(64, -10);
    assert!(astrand_transform(1, 1.0, 1.0, 1, 100, &t, 64).is_err());
    assert!(astrand_transform(3, -1.0, 1.0, 1, 100, &t, 64).is_err());
    assert!(astrand_transform(3, 1.0, 1.0, 0, 100, &t, 64).is_err());
}

#[test]
fn kepler_equation_by_fixed_point() {
    // E = M + e·sin E with M = 1, e = 0.3.
    let prec = 256;
    let map = DifferentiableMapSpec {
        f: Box::new(move |x: &Float| {
            Float::with_val(x.prec(), 1) + Float::with_val(x.prec(), 0.3) * x.clone().sin()
        }),
        df: None,
        description: "Kepler E = 1 + 0.3 sin E".into(),
    };
    let r = iterate_fixed_point(&map, &Float::with_val(prec, 1), 400, &tol(prec, -20), false)
        .unwrap();
    let residual =
        Float::with_val(prec, 1) + Float::with_val(prec, 0.3) * r.root.clone().sin() - &r.root;
    assert!(residual.abs() < 1e-12, "Kepler residual too large");
}

#[test]
fn monotone_approach_for_an_increasing_map() {
    // x ← √(6 + x) approaches 3 from one side.
    let map = DifferentiableMapSpec {
        f: Box::new(|x: &Float| (Float::with_val(x.prec(), 6) + x).sqrt()),
        df: None,
        description: "sqrt(6 + x)".into(),
    };
    let r = iterate_fixed_point(&map, &Float::with_val(128, 1), 300, &tol(128, -25), false)
        .unwrap();
    assert_close(&r.root, "3", 1e-20);
    assert_eq!(r.approach, Approach::Monotone);
}

#[test]
fn oscillating_approach_for_a_decreasing_map() {
    // x ← 3 − x/2 alternates around 2.
    let map = DifferentiableMapSpec {
        f: Box::new(|x: &Float| Float::with_val(x.prec(), 3) - x.clone() / 2u32),
        df: Some(Box::new(|x: &Float| Float::with_val(x.prec(), -0.5))),
        description: "3 - x/2".into(),
    };
    let r = iterate_fixed_point(&map, &Float::with_val(128, 0), 300, &tol(128, -25), false)
        .unwrap();
    assert_close(&r.root, "2", 1e-20);
    assert_eq!(r.approach, Approach::Oscillating);
}

#[test]
fn newton_mode_needs_an_analytic_derivative() {
    let map = DifferentiableMapSpec {
        f: Box::new(|x: &Float| x.clone()),
        df: None,
        description: "identity".into(),
    };
    let err = iterate_fixed_point(&map, &Float::with_val(64, 1), 10, &tol(64, -10), true);
    assert!(matches!(
        err,
        Err(confcomp_core::Error::DerivativeUnavailable(_))
    ));
}

#[test]
fn newton_mode_converges_quadratically() {
    // Fixed point of x ← √(6 + x); Newton on g(x) = f(x) − x.
    let map = DifferentiableMapSpec {
        f: Box::new(|x: &Float| (Float::with_val(x.prec(), 6) + x).sqrt()),
        df: Some(Box::new(|x: &Float| {
            let s = (Float::with_val(x.prec(), 6) + x).sqrt();
            Float::with_val(x.prec(), 0.5) / s
        })),
        description: "sqrt(6 + x)".into(),
    };
    let r = iterate_fixed_point(&map, &Float::with_val(256, 1), 100, &tol(256, -40), true)
        .unwrap();
    assert_close(&r.root, "3", 1e-35);
    assert!(r.iterations <= 12, "Newton took {} iterations", r.iterations);
}
