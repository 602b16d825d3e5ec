//! Viète-type infinite products built from continued square roots: π, log,
//! and lemniscate-constant approximations, with stable division-form
//! recurrences throughout.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Classic Viète product: `2/π = ∏ c_q/2` with `c_1 = √2`,
/// `c_{q+1} = √(2+c_q)`. Returns the partial product with `n` factors.
pub fn viete_product(n: u32, prec: u32) -> Float {
    let mut c = Float::with_val(prec, 2).sqrt();
    let mut prod = Float::with_val(prec, &c / 2u32);
    for _ in 1..n {
        c = (Float::with_val(prec, 2) + c).sqrt();
        prod *= Float::with_val(prec, &c / 2u32);
    }
    prod
}

/// Catalan's 1842 arithmetic–geometric route to π: with `C_1 = √2`,
/// `C_q = √(2+C_{q−1})`, `M_1 = √2`, `M_q = M_{q−1}/C_q`, the value
/// `2^n·M_n → π`. The division recurrence avoids the catastrophic
/// cancellation of the printed `√(2−c)` forms.
pub fn catalan_pi(n: u32, prec: u32) -> Result<Float> {
    if n == 0 {
        return Err(Error::Domain("catalan_pi needs n >= 1".into()));
    }
    let mut c = Float::with_val(prec, 2).sqrt();
    let mut m = c.clone();
    for _ in 1..n {
        c = (Float::with_val(prec, 2) + c).sqrt();
        m /= &c;
    }
    Ok(m * Float::with_val(prec, 2).pow(n))
}

/// Candido's semiperimeter ratio: `2^{n−1}·M_{n−1}/C_{n−1} → π/2` in the
/// notation of [`catalan_pi`], i.e. the Catalan partial value divided by
/// one extra cosine factor.
pub fn candido_ratio(n: u32, prec: u32) -> Result<Float> {
    if n < 2 {
        return Err(Error::Domain("candido_ratio needs n >= 2".into()));
    }
    let mut c = Float::with_val(prec, 2).sqrt();
    let mut m = c.clone();
    for _ in 1..(n - 1) {
        c = (Float::with_val(prec, 2) + c).sqrt();
        m /= &c;
    }
    Ok(m / &c * Float::with_val(prec, 2).pow(n - 1))
}

/// Archimedean perimeter bounds from `3·2^q`-gons via continued square
/// roots. Returns `(lower, upper)` with `lower < π < upper`; `q = 1` gives
/// the hexagon/triangle pair `(3, 2√3)`.
pub fn polygon_bounds_pi(q: u32, prec: u32) -> Result<(Float, Float)> {
    if q == 0 {
        return Err(Error::Domain("polygon_bounds_pi needs q >= 1".into()));
    }
    // plus(k) = 2·cos(π/(3·2^k)) as a depth-k nest with innermost term 3.
    let plus = |k: u32| -> Float {
        if k == 0 {
            return Float::with_val(prec, 1);
        }
        let mut v = Float::with_val(prec, 3).sqrt();
        for _ in 1..k {
            v = (Float::with_val(prec, 2) + v).sqrt();
        }
        v
    };
    let p_prev = plus(q - 1);
    let p_cur = plus(q);
    let minus = (Float::with_val(prec, 2) - p_prev).sqrt();
    let lower = Float::with_val(prec, 3) * Float::with_val(prec, 2).pow(q - 1) * &minus;
    let upper = Float::with_val(prec, 3) * Float::with_val(prec, 2).pow(q) * minus / p_cur;
    Ok((lower, upper))
}

/// Euler's 1763 secant product: `π/2 = ∏ sec(π/2^{k+1})` truncated to `n`
/// factors, each secant obtained from the cosine half-angle nest
/// `2·cos(π/2^{k+1}) = √(2+√(2+⋯))`. Returns the partial product.
pub fn euler_secant_product(n: u32, prec: u32) -> Float {
    let mut c = Float::new(prec); // 2·cos(π/2) = 0
    let mut prod = Float::with_val(prec, 1);
    for _ in 0..n {
        c = (Float::with_val(prec, 2) + c).sqrt(); // successive halvings
        prod *= Float::with_val(prec, 2) / &c;
    }
    prod
}

/// Osler's unified product interpolating between Viète's product (`p = 0`
/// rows of radicals, all Wallis) and the Wallis product: `p` rows of
/// Viète-type factors followed by `n` Wallis factors starting at index
/// `2^p`. Converges to `2/π`.
pub fn osler_union_product(p: u32, n: u64, prec: u32) -> Float {
    let mut prod = Float::with_val(prec, 1);
    let mut c = Float::new(prec);
    for _ in 0..p {
        c = (Float::with_val(prec, 2) + c).sqrt();
        prod *= Float::with_val(prec, &c / 2u32);
    }
    // Wallis tail: ∏_{k≥1} ((2^p k)² − 1)/(2^p k)² ... written with
    // m = 2^p: ∏ (2mk−1)(2mk+1)/(2mk)².
    let m = Float::with_val(prec, 2).pow(p);
    for k in 1..=n {
        let base = Float::with_val(prec, &m) * Float::with_val(prec, 2 * k);
        let num = (Float::with_val(prec, &base) - 1u32) * (Float::with_val(prec, &base) + 1u32);
        prod *= num / (Float::with_val(prec, &base) * base);
    }
    prod
}

/// Levin's Viète-like product for the lemniscate constant: returns the
/// partial product with `n` factors, converging to `2/L` where
/// `L = 2∫₀¹ dt/√(1−t⁴)` is the lemniscate constant.
pub fn levin_lemniscate_product(n: u32, prec: u32) -> Float {
    // Levin's half-argument recurrence for the lemniscatic cosine:
    // x_1 = √(1/2), x_{k+1} = √(1/2 + 1/(2·x_k)), and ∏ x_k → 2/L.
    let half = Float::with_val(prec, 0.5);
    let mut x = half.clone().sqrt();
    let mut prod = x.clone();
    for _ in 1..n {
        x = (Float::with_val(prec, &half) + Float::with_val(prec, &half) / &x).sqrt();
        prod *= &x;
    }
    prod
}

/// Osler's Viète-type product for the logarithm:
/// `(x−1)/log x = ∏_{k≥1} (1+x^{1/2^k})/2`, each factor built by repeated
/// square roots. `x = 1` is a removable singularity of the left side but the
/// identity is refused there; `x ≤ 0` is a domain error. Returns the partial
/// product with `n` factors, converging to `(x−1)/log x`.
pub fn osler_log_product(x: &Float, n: u32) -> Result<Float> {
    let prec = x.prec();
    if *x <= 0 {
        return Err(Error::Domain(format!("osler_log_product needs x > 0, got {x}")));
    }
    if *x == 1 {
        return Err(Error::Domain(
            "osler_log_product is singular at x = 1 (the target (x-1)/log x is a limit there)"
                .into(),
        ));
    }
    let mut r = Float::with_val(prec, x);
    let mut prod = Float::with_val(prec, 1);
    for _ in 0..n {
        r = r.sqrt();
        prod *= (Float::with_val(prec, 1) + &r) / 2u32;
    }
    Ok(prod)
}

/// Convenience: π estimate from `n` factors of the requested product route.
pub fn pi_estimate(method: &str, n: u32, prec: u32) -> Result<Float> {
    match method {
        "viete" => Ok(Float::with_val(prec, 2) / viete_product(n, prec)),
        "catalan" => catalan_pi(n, prec),
        "euler" => Ok(Float::with_val(prec, 2) * euler_secant_product(n, prec)),
        "osler" => Ok(Float::with_val(prec, 2) / osler_union_product(3, n as u64, prec)),
        other => Err(Error::Parse(format!("unknown pi method {other:?}"))),
    }
}
