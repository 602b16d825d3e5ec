//! Lehmer continued cotangent expansions: digit extraction, two independent
//! reconstruction routes, and the regularity test.

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};

/// Digits of a Lehmer continued cotangent expansion
/// `x = cot(arccot a_0 − arccot a_1 + arccot a_2 − ⋯)`. Digits grow at
/// least quadratically, so they are kept as big integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotangentDigits {
    pub digits: Vec<Integer>,
    /// True when the expansion terminated exactly (rational input).
    pub terminated: bool,
}

/// Working precision for a target digit count: digit bit-lengths roughly
/// double per step, so the budget doubles per requested digit.
pub fn cot_working_precision(max_digits: usize) -> u32 {
    let doubling = 16u64.saturating_mul(1u64 << max_digits.min(40));
    doubling.clamp(256, u32::MAX as u64) as u32
}

/// Extract up to `max_digits` Lehmer digits of `x ≥ 0` by the recurrence
/// `a_k = ⌊x_k⌋`, `x_{k+1} = (a_k·x_k + 1)/(x_k − a_k)`.
///
/// The iterate loses about as many bits per step as the next digit has, so
/// extraction stops with a `PrecisionExhausted` error once the remaining
/// significand can no longer certify the floor.
pub fn cot_encode(x: &Float, max_digits: usize) -> Result<CotangentDigits> {
    if x.is_sign_negative() && !x.is_zero() {
        return Err(Error::Domain(format!(
            "continued cotangent expansion needs x >= 0, got {x}"
        )));
    }
    let prec = cot_working_precision(max_digits).max(x.prec());
    let mut cur = Float::with_val(prec, x);
    let mut digits = Vec::with_capacity(max_digits);
    let mut terminated = false;
    for _ in 0..max_digits {
        let floor = cur.clone().floor();
        let a = floor.to_integer().expect("floor of finite float");
        // Guard: if the fractional part is smaller than the accumulated
        // rounding error the floor is no longer trustworthy.
        let frac = Float::with_val(prec, &cur - &floor);
        let guard = Float::with_val(prec, 2).pow(-(prec as i32) / 2);
        if frac.is_zero() {
            digits.push(a);
            terminated = true;
            break;
        }
        if frac < guard || cur.clone().abs() > Float::with_val(prec, 2).pow((prec / 2) as i32) {
            return Err(Error::PrecisionExhausted(format!(
                "floor of iterate no longer certified after {} digits",
                digits.len()
            )));
        }
        let num = Float::with_val(prec, &cur) * Float::with_val(prec, &a) + 1u32;
        cur = num / frac;
        digits.push(a);
    }
    Ok(CotangentDigits { digits, terminated })
}

/// Reconstruct `x` from its digits by the backward Möbius recurrence:
/// innermost value `a_{n−1}` (the image of the point at infinity), then
/// `v ← (a_k·v + 1)/(v − a_k)`.
pub fn cot_decode_moebius(d: &CotangentDigits, prec: u32) -> Result<Float> {
    let digits = &d.digits;
    if digits.is_empty() {
        return Err(Error::Domain("empty digit list".into()));
    }
    let mut v = Float::with_val(prec, digits.last().unwrap());
    for a in digits.iter().rev().skip(1) {
        let af = Float::with_val(prec, a);
        let den = Float::with_val(prec, &v - &af);
        if den.is_zero() {
            return Err(Error::Domain(
                "cotangent pole encountered during decoding".into(),
            ));
        }
        v = (Float::with_val(prec, &af) * v + 1u32) / den;
    }
    Ok(v)
}

/// Reconstruct `x` from its digits by the trigonometric route
/// `x = cot(Σ (−1)^k arccot a_k)`.
pub fn cot_decode_trig(d: &CotangentDigits, prec: u32) -> Result<Float> {
    if d.digits.is_empty() {
        return Err(Error::Domain("empty digit list".into()));
    }
    let mut angle = Float::new(prec);
    for (k, a) in d.digits.iter().enumerate() {
        // arccot a = atan(1/a) for a > 0; arccot 0 = π/2.
        let ac = if a.is_zero() {
            Float::with_val(prec, rug::float::Constant::Pi) / 2u32
        } else {
            Float::with_val(prec, 1u32).atan2(&Float::with_val(prec, a))
        };
        if k % 2 == 0 {
            angle += ac;
        } else {
            angle -= ac;
        }
    }
    let t = angle.tan();
    if t.is_zero() {
        return Err(Error::Domain("cotangent pole in trigonometric decode".into()));
    }
    Ok(t.recip())
}

/// Decode with both routes and cross-check; disagreement beyond a few ulps
/// of the stated precision means the digit list or precision is bad.
pub fn cot_decode(d: &CotangentDigits, prec: u32) -> Result<Float> {
    let work = prec + 64;
    let a = cot_decode_moebius(d, work)?;
    let b = cot_decode_trig(d, work)?;
    let diff = Float::with_val(work, &a - &b).abs();
    let scale = Float::with_val(work, &a).abs().max(&Float::with_val(work, 1));
    if diff > scale * Float::with_val(work, 2).pow(-(prec as i32)) {
        return Err(Error::PrecisionExhausted(
            "Moebius and trigonometric decodes disagree at the stated precision".into(),
        ));
    }
    Ok(Float::with_val(prec, a))
}

/// Lehmer regularity: after the leading digit, every digit must satisfy
/// `a_{k+1} ≥ a_k² + a_k + 1`. Regular expansions are unique.
pub fn check_regular(d: &CotangentDigits) -> bool {
    if d.digits.is_empty() || d.digits[0] < 0 {
        return false;
    }
    d.digits.windows(2).all(|w| {
        let bound = Integer::from(&w[0] * &w[0]) + &w[0] + 1u32;
        w[1] >= bound
    })
}

/// The digit sequence obtained when every regularity inequality holds with
/// equality: `0, 1, 3, 13, 183, 33673, …` (each term `a² + a + 1`).
pub fn regularity_equality_digits(n: usize) -> Vec<Integer> {
    let mut digits = vec![Integer::from(0)];
    while digits.len() < n {
        let a = digits.last().unwrap();
        digits.push(Integer::from(a * a) + a + 1u32);
    }
    digits
}

/// Lehmer's constant `ξ ≈ 0.59263271820…`, the smallest positive real with
/// digit `0` in first place: its regular expansion takes every regularity
/// inequality with equality (`0, 1, 3, 13, 183, 33673, …`).
///
/// Digit bit-lengths double per step, so the truncation error is roughly
/// `1/a_N²` and a handful of digits reach any requested precision.
pub fn lehmer_constant(prec: u32) -> Float {
    let mut digits = regularity_equality_digits(3);
    while 2 * digits.last().unwrap().significant_bits() < prec + 16 {
        let a = digits.last().unwrap();
        let next = Integer::from(a * a) + a + 1u32;
        digits.push(next);
    }
    let d = CotangentDigits {
        digits,
        terminated: false,
    };
    let v = cot_decode_moebius(&d, prec + 64).expect("equality digits decode cleanly");
    Float::with_val(prec, v)
}
