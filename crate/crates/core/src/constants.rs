//! Registry of named constants arising from continued compositions, each
//! computed by its defining procedure (nest evaluation, root finding, or
//! asymptotic extraction) rather than by pasting decimals.

use rug::ops::Pow;
use rug::Float;

use crate::cotangent;
use crate::error::{Error, Result};
use crate::products;

/// A registry entry: the computation procedure plus independently computed
/// reference digits used by the self-tests.
pub struct NamedConstant {
    pub name: &'static str,
    pub citation: &'static str,
    /// High-precision reference digits (decimal string).
    pub reference_digits: &'static str,
    compute: fn(u32) -> Float,
}

impl NamedConstant {
    pub fn compute(&self, prec: u32) -> Float {
        (self.compute)(prec)
    }
}

/// Derivative-free bisection on a sign change, run to full precision.
fn bisect(f: impl Fn(&Float) -> Float, lo: f64, hi: f64, prec: u32) -> Float {
    let work = prec + 16;
    let mut lo = Float::with_val(work, lo);
    let mut hi = Float::with_val(work, hi);
    let flo = f(&lo);
    assert!(
        (flo.is_sign_negative()) != (f(&hi).is_sign_negative()),
        "bisection bracket must straddle a sign change"
    );
    let lo_negative = flo.is_sign_negative();
    for _ in 0..(work + 8) {
        let mid = Float::with_val(work, &lo + &hi) / 2u32;
        if f(&mid).is_sign_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Float::with_val(prec, (lo + hi) / 2u32)
}

fn golden(prec: u32) -> Float {
    // Closed form of the constant nest √(1+√(1+⋯)).
    (Float::with_val(prec, 5).sqrt() + 1u32) / 2u32
}

fn kasner(prec: u32) -> Float {
    // √(1+√(2+√(3+⋯))): deltas shrink super-exponentially, so a depth of
    // `prec` levels is comfortably past full precision.
    let work = prec + 16;
    let depth = prec.max(64);
    let mut v = Float::new(work);
    for j in (1..=depth).rev() {
        v = (Float::with_val(work, j) + v).sqrt();
    }
    Float::with_val(prec, v)
}

fn plastic(prec: u32) -> Float {
    // Continued cube root of 1: x = ∛(1+∛(1+⋯)), the real root of x³=x+1.
    let work = prec + 16;
    let tol = Float::with_val(work, 2).pow(-(prec as i32) - 8);
    let mut x = Float::with_val(work, 1);
    loop {
        let next = (Float::with_val(work, 1) + &x).root(3);
        let delta = Float::with_val(work, &next - &x).abs();
        x = next;
        if delta < tol {
            return Float::with_val(prec, x);
        }
    }
}

fn paris(prec: u32) -> Float {
    // K = lim (θ−u_n)(2θ)^n/2 with u_1 = 1, u_{n+1} = √(1+u_n), θ golden.
    // The correction ratio is 1/(2θ) ≈ 0.31 per step and each step cancels
    // log₂(2θ) bits, so the working precision carries the full run.
    let steps = ((prec as f64 + 16.0) / 1.69).ceil() as u32 + 8;
    let work = prec + 32 + (steps as f64 * 1.70) as u32;
    let theta = golden(work);
    let two_theta = Float::with_val(work, &theta) * 2u32;
    let mut u = Float::with_val(work, 1);
    let mut k = Float::new(work);
    let mut power = Float::with_val(work, 1);
    for _ in 1..=steps {
        power *= &two_theta;
        k = Float::with_val(work, &theta - &u) * &power / 2u32;
        u = (Float::with_val(work, 1) + u).sqrt();
    }
    Float::with_val(prec, k)
}

fn lehmer(prec: u32) -> Float {
    cotangent::lehmer_constant(prec)
}

fn dence_k0(prec: u32) -> Float {
    bisect(
        |k| {
            let p = k.prec();
            Float::with_val(p, k).pow(3) - 2u32 * Float::with_val(p, k).pow(2) + k - 1u32
        },
        1.0,
        2.0,
        prec,
    )
}

fn dence_a0(prec: u32) -> Float {
    // A₀ = √(k₀ − 3/4) − 1/2, the limit of the alternating k₀ nest.
    let k0 = dence_k0(prec + 16);
    Float::with_val(
        prec,
        (k0 - Float::with_val(prec + 16, 0.75)).sqrt() - Float::with_val(prec + 16, 0.5),
    )
}

fn lim_residual(x: &Float) -> Float {
    // x^x − x − 1 = 0 (2007 constant).
    let p = x.prec();
    Float::with_val(p, x).pow(x) - x - 1u32
}

fn lim2007(prec: u32) -> Float {
    bisect(lim_residual, 1.0, 2.0, prec)
}

fn lim2008_residual(x: &Float) -> Float {
    // x^x − x − x² = 0 (2008 pair m < 1 < n).
    let p = x.prec();
    Float::with_val(p, x).pow(x) - x - Float::with_val(p, x).pow(2)
}

fn lim2008_m(prec: u32) -> Float {
    bisect(lim2008_residual, 0.1, 1.0, prec)
}

fn lim2008_n(prec: u32) -> Float {
    bisect(lim2008_residual, 1.0, 3.0, prec)
}

fn somos(prec: u32) -> Float {
    // σ₂ = exp(Σ_{n≥2} log(n)/2ⁿ), the log-sum form of √(1√(2√(3⋯))).
    let work = prec + 32;
    let tol = Float::with_val(work, 2).pow(-(prec as i32) - 8);
    let mut sum = Float::new(work);
    let mut n = 2u64;
    loop {
        let term = Float::with_val(work, n).ln() / Float::with_val(work, 2).pow(n as u32);
        let done = term < tol;
        sum += term;
        if done {
            break;
        }
        n += 1;
    }
    Float::with_val(prec, sum.exp())
}

fn lemniscate(prec: u32) -> Float {
    // L = 2/∏ x_k via Levin's product; each factor gains about two bits.
    let factors = prec / 2 + 48;
    let p = products::levin_lemniscate_product(factors, prec + 32);
    Float::with_val(prec, Float::with_val(prec + 32, 2) / p)
}

/// The full registry.
pub const REGISTRY: &[NamedConstant] = &[
    NamedConstant {
        name: "golden",
        citation: "limit of the constant nest sqrt(1+sqrt(1+...)); Paris 1987 notation theta",
        reference_digits: "1.6180339887498948482045868343656",
        compute: golden,
    },
    NamedConstant {
        name: "kasner",
        citation: "Herschfeld 1935, the Kasner number sqrt(1+sqrt(2+sqrt(3+...)))",
        reference_digits: "1.7579327566180045327088196382181",
        compute: kasner,
    },
    NamedConstant {
        name: "plastic",
        citation: "continued cube root of 1 (Finch 2003); real root of x^3 = x + 1",
        reference_digits: "1.3247179572447460259609088544781",
        compute: plastic,
    },
    NamedConstant {
        name: "paris",
        citation: "Paris 1987, rate constant of u_{n+1} = sqrt(1+u_n) toward the golden ratio",
        reference_digits: "1.0986419643941564857",
        compute: paris,
    },
    NamedConstant {
        name: "lehmer",
        citation: "Lehmer 1938, minimal-digit continued cotangent constant xi",
        reference_digits: "0.5926327182016361971040786049957",
        compute: lehmer,
    },
    NamedConstant {
        name: "dence_k0",
        citation: "Dence 1983, real root of k^3 - 2k^2 + k - 1",
        reference_digits: "1.7548776662466927600495088963585",
        compute: dence_k0,
    },
    NamedConstant {
        name: "dence_a0",
        citation: "Dence 1983, alternating-nest limit sqrt(k0 - 3/4) - 1/2",
        reference_digits: "0.5024358664007851430412008849032",
        compute: dence_a0,
    },
    NamedConstant {
        name: "lim_2007a",
        citation: "Lim 2007, root of n^n = n + 1",
        reference_digits: "1.7767750400970546974797307440387",
        compute: lim2007,
    },
    NamedConstant {
        name: "lim_2008_m",
        citation: "Lim 2008, smaller root of x^x = x + x^2",
        reference_digits: "0.4758608123924527847931174601546",
        compute: lim2008_m,
    },
    NamedConstant {
        name: "lim_2008_n",
        citation: "Lim 2008, larger root of x^x = x + x^2",
        reference_digits: "2.3983843827816114293938768475238",
        compute: lim2008_n,
    },
    NamedConstant {
        name: "somos",
        citation: "Sondow-Hadjicostas, Somos's quadratic recurrence constant sigma_2",
        reference_digits: "1.6616879496335941212958189227499",
        compute: somos,
    },
    NamedConstant {
        name: "lemniscate",
        citation: "lemniscate constant L = 2 * integral_0^1 dt/sqrt(1-t^4), via Levin's product",
        reference_digits: "2.6220575542921198104",
        compute: lemniscate,
    },
];

/// Look up a registry entry by name.
pub fn lookup(name: &str) -> Result<&'static NamedConstant> {
    REGISTRY
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownConstant(name.to_string()))
}

/// Compute a named constant at the given precision.
pub fn compute_constant(name: &str, prec: u32) -> Result<Float> {
    Ok(lookup(name)?.compute(prec))
}

/// All registered names, in registry order.
pub fn constant_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}
