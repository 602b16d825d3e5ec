//! Viète-type product oracles: π routes, polygon bounds, lemniscate, log.

use confcomp_core::products::{
    candido_ratio, catalan_pi, euler_secant_product, levin_lemniscate_product, osler_log_product,
    osler_union_product, pi_estimate, polygon_bounds_pi, viete_product,
};
use rug::Float;

fn f(v: &str) -> Float {
    Float::with_val(192, Float::parse(v).unwrap())
}

fn close(got: &Float, expected: &Float, tol: f64) -> bool {
    Float::with_val(got.prec(), got - expected).abs() < tol
}

#[test]
fn viete_twenty_factors() {
    let p = viete_product(20, 192);
    assert!(close(&p, &f("0.63661977236781944823"), 1e-13), "got {p}");
    let pi = Float::with_val(192, 2) / p;
    assert!(close(&pi, &f("3.14159265358979323846"), 1e-10));
}

#[test]
fn catalan_route_to_pi() {
    let c2 = catalan_pi(2, 192).unwrap();
    assert!(close(&c2, &f("3.06146745892071817383"), 1e-15), "got {c2}");
    let c20 = catalan_pi(20, 192).unwrap();
    assert!(close(&c20, &f("3.14159265358979323846"), 1e-10), "got {c20}");
    assert!(catalan_pi(0, 64).is_err());
}

#[test]
fn candido_semiperimeter_ratio() {
    let v = candido_ratio(10, 192).unwrap();
    assert!(close(&v, &f("1.57080125512840447338"), 1e-15), "got {v}");
    assert!(candido_ratio(1, 64).is_err());
}

#[test]
fn polygon_bounds_bracket_pi() {
    let (lo, hi) = polygon_bounds_pi(1, 192).unwrap();
    assert!(close(&lo, &f("3"), 1e-40), "hexagon lower {lo}");
    assert!(close(&hi, &f("3.46410161513775458705"), 1e-15), "triangle upper {hi}");
    let pi = f("3.14159265358979323846264338327950288");
    let archimedes_lo = Float::with_val(192, 223) / 71u32;
    let archimedes_hi = Float::with_val(192, 22) / 7u32;
    let (lo, hi) = polygon_bounds_pi(5, 192).unwrap();
    assert!(lo < pi && pi < hi, "q=5 must bracket pi");
    assert!(lo > archimedes_lo && hi < archimedes_hi, "q=5 inside Archimedes");
    let (lo, hi) = polygon_bounds_pi(20, 192).unwrap();
    assert!(lo < pi && pi < hi);
    assert!(close(&lo, &pi, 1e-12) && close(&hi, &pi, 1e-11));
    assert!(polygon_bounds_pi(0, 64).is_err());
}

#[test]
fn euler_secant_route_to_pi() {
    let pi = Float::with_val(192, 2) * euler_secant_product(20, 192);
    assert!(close(&pi, &f("3.14159265358979323846"), 1e-10), "got {pi}");
}

#[test]
fn osler_union_interpolates_viete_and_wallis() {
    // p = 3 radical rows + 10000 Wallis factors.
    let v = osler_union_product(3, 10000, 192);
    assert!(close(&v, &f("0.63662002103479492570"), 1e-15), "got {v}");
    // Pure Wallis (p = 0) converges much more slowly.
    let w = osler_union_product(0, 10000, 192);
    assert!(close(&w, &f("0.63663568726507441688"), 1e-15), "got {w}");
    // p = 20 rows and no Wallis tail is plain Viète.
    let pv = osler_union_product(20, 0, 192);
    assert!(close(&pv, &viete_product(20, 192), 1e-40));
}

#[test]
fn levin_product_for_the_lemniscate_constant() {
    let p24 = levin_lemniscate_product(24, 192);
    assert!(close(&p24, &f("0.76275976350181398863"), 1e-15), "got {p24}");
    // Within 1e−8 of 2/L.
    let target = Float::with_val(192, 2) / f("2.6220575542921198104619");
    assert!(close(&p24, &target, 1e-8));
}

#[test]
fn osler_log_product_recovers_logarithms() {
    // The truncation error after n factors is about (log x)^2 / 2^(n+1),
    // so 60 factors put it near 1e-18.
    let e = Float::with_val(192, 1).exp();
    let p = osler_log_product(&e, 60).unwrap();
    let log_e = (Float::with_val(192, &e) - 1u32) / p;
    assert!(close(&log_e, &f("1"), 1e-15), "got {log_e}");
    let four = Float::with_val(192, 4);
    let p = osler_log_product(&four, 60).unwrap();
    let log4 = Float::with_val(192, 3) / p;
    assert!(close(&log4, &Float::with_val(192, 4).ln(), 1e-15), "got {log4}");
    assert!(osler_log_product(&Float::with_val(64, 1), 5).is_err());
    assert!(osler_log_product(&Float::with_val(64, -2), 5).is_err());
}

#[test]
fn pi_estimate_dispatch() {
    let pi = f("3.14159265358979323846");
    for method in ["viete", "catalan", "euler"] {
        let v = pi_estimate(method, 25, 192).unwrap();
        assert!(close(&v, &pi, 1e-12), "{method} gave {v}");
    }
    assert!(pi_estimate("nonsense", 5, 64).is_err());
}
