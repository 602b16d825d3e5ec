//! Evaluation, convergence analysis, and number-representation algorithms
//! for continued function compositions: continued square roots and r-th
//! roots, continued powers and reciprocal roots, Lehmer continued
//! cotangents, f-expansions and β-expansions, together with the Viète-type
//! products and named constants they generate.
//!
//! The central object is the backward recurrence
//! `K_j = t_j(K_{j+1})` over a stream of term maps `t_i`: truncating at
//! depth `n` with a seed value gives the n-th approximant, and the limit
//! (when it exists) is the value of the continued composition.

pub mod constants;
pub mod cotangent;
pub mod criteria;
pub mod engine;
pub mod error;
pub mod fexp;
pub mod parse;
pub mod products;
pub mod radicals;
pub mod solver;

pub use engine::{
    estimate_limit, eval_backward, eval_forward, ApproximantTrace, CompositionKind, EvalRequest,
    Seed, TermRecord, TermStream,
};
pub use error::{Error, Result};

use rug::Float;

/// Render a float as a decimal string with enough digits to round-trip the
/// significand, trimming the trailing zero noise MPFR emits.
pub fn float_to_decimal(x: &Float) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x.is_sign_negative() {
            "-inf".into()
        } else {
            "inf".into()
        };
    }
    if x.is_zero() {
        return "0".into();
    }
    // prec bits carry about prec·log10(2) decimal digits.
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let (sign, mantissa, exp) = split_string(&x.to_string_radix(10, Some(digits)));
    format_decimal(sign, &mantissa, exp)
}

fn split_string(raw: &str) -> (bool, String, i64) {
    // MPFR renders as [-]d.ddd...e±EE or a plain decimal.
    let (body, exp) = match raw.split_once(['e', 'E']) {
        Some((b, e)) => (b, e.parse::<i64>().unwrap_or(0)),
        None => (raw, 0),
    };
    let negative = body.starts_with('-');
    let body = body.trim_start_matches('-');
    let mantissa: String = body.chars().filter(|c| *c != '.').collect();
    let point = body.find('.').map(|i| i as i64).unwrap_or(body.len() as i64);
    // Digits before the point plus the exponent give the decimal position.
    (negative, mantissa, exp + point)
}

fn format_decimal(negative: bool, mantissa: &str, point: i64) -> String {
    let digits = mantissa.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

/// Parse a decimal string into a float at the given precision.
pub fn decimal_to_float(s: &str, prec: u32) -> Result<Float> {
    let v = Float::parse(s).map_err(|e| Error::Parse(format!("bad decimal {s:?}: {e}")))?;
    Ok(Float::with_val(prec, v))
}
