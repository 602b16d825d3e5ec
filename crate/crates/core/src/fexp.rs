//! f-expansions of real numbers after Bissinger (decreasing `f`,
//! generalizing continued fractions) and Everett (increasing `f`,
//! generalizing radix expansions), plus Rényi's greedy β-expansion.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Orientation of the expansion map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `f` strictly decreasing on `(1, ∞)` with `f(1) = 1`, `f(∞) = 0`.
    Decreasing,
    /// `f` strictly increasing on `[0, p]` with `f(0) = 0`, `f(p) = 1`.
    Increasing,
}

type RealMap = std::sync::Arc<dyn Fn(&Float) -> Float + Send + Sync>;

/// A digit system `x = f(a_1 + f(a_2 + f(⋯)))`.
///
/// The admissibility conditions (Bissinger's chord-slope bound, Kakeya's
/// derivative bound) are the caller's responsibility; only the monotonicity
/// direction is declared.
#[derive(Clone)]
pub struct FExpansionSystem {
    pub direction: Direction,
    pub f: RealMap,
    pub f_inverse: RealMap,
    /// Everett radix `p`; digits then lie in `{0, …, p−1}`. `None` means an
    /// unbounded digit set (Bissinger case).
    pub radix: Option<u32>,
    pub description: String,
}

impl std::fmt::Debug for FExpansionSystem {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.debug_struct("FExpansionSystem")
            .field("direction", &self.direction)
            .field("radix", &self.radix)
            .field("description", &self.description)
            .finish()
    }
}

impl FExpansionSystem {
    /// `f(t) = 1/t`: simple continued fractions.
    pub fn reciprocal() -> Self {
        FExpansionSystem {
            direction: Direction::Decreasing,
            f: std::sync::Arc::new(|t| Float::with_val(t.prec(), t).recip()),
            f_inverse: std::sync::Arc::new(|t| Float::with_val(t.prec(), t).recip()),
            radix: None,
            description: "f(t) = 1/t (continued fractions)".into(),
        }
    }

    /// `f(x) = x/p`: base-`p` radix expansion.
    pub fn radix(p: u32) -> Self {
        assert!(p >= 2, "radix needs p >= 2");
        FExpansionSystem {
            direction: Direction::Increasing,
            f: std::sync::Arc::new(move |t| Float::with_val(t.prec(), t) / p),
            f_inverse: std::sync::Arc::new(move |t| Float::with_val(t.prec(), t) * p),
            radix: Some(p),
            description: format!("f(x) = x/{p} (base-{p} digits)"),
        }
    }
}

/// Digit string plus the final residual, so decoding can round-trip exactly.
#[derive(Debug, Clone)]
pub struct FDigits {
    pub digits: Vec<Integer>,
    pub residual: Float,
}

/// Extract `n` digits of `x`: repeatedly set `y = f⁻¹(x)`, split off the
/// integer digit, and recurse on the remainder. Terminating expansions
/// (rationals under `f(t) = 1/t`, exact radix fractions) are detected with
/// an integer snap at `2^(−precision/2)`.
pub fn f_encode(system: &FExpansionSystem, x: &Float, n: usize) -> Result<FDigits> {
    if n == 0 {
        return Err(Error::Domain("f_encode needs n >= 1".into()));
    }
    let prec = x.prec();
    let snap = Float::with_val(prec, 2).pow(-(prec as i32) / 2);
    match system.direction {
        Direction::Decreasing => {
            if !(*x > 0 && *x <= 1) {
                return Err(Error::Domain(format!(
                    "decreasing-system encoding needs x in (0,1], got {x}"
                )));
            }
        }
        Direction::Increasing => {
            if x.is_sign_negative() && !x.is_zero() || *x >= 1 {
                return Err(Error::Domain(format!(
                    "increasing-system encoding needs x in [0,1), got {x}"
                )));
            }
        }
    }
    let digit_cap = Float::with_val(prec, 2).pow((prec / 2) as i32);
    let mut cur = Float::with_val(prec, x);
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let y = (system.f_inverse)(&cur);
        if y.clone().abs() > digit_cap {
            return Err(Error::DigitOverflow(format!(
                "digit magnitude exceeds 2^{} at working precision",
                prec / 2
            )));
        }
        let floor = y.clone().floor();
        let mut frac = Float::with_val(prec, &y - &floor);
        let mut digit = floor.to_integer().expect("finite digit");
        // Integer snap: treat a vanishing remainder as exact termination.
        if Float::with_val(prec, 1u32) - &frac < snap && system.direction == Direction::Decreasing {
            // y is within snap below the next integer; under 1/t the digit
            // is the ceiling and the expansion terminates.
            digit += 1u32;
            frac = Float::new(prec);
        }
        digits.push(digit);
        if frac < snap {
            cur = Float::new(prec);
            digits.extend(std::iter::repeat(Integer::new()).take(n - digits.len()));
            break;
        }
        // x = f(a + r) gives f⁻¹(x) = a + r, so the fractional remainder is
        // the next-level value directly.
        cur = frac;
    }
    Ok(FDigits {
        digits,
        residual: cur,
    })
}

/// Backward reconstruction `f(a_1 + f(a_2 + ⋯ + f(a_depth + residual)))`.
pub fn f_decode(system: &FExpansionSystem, digits: &FDigits, depth: usize) -> Float {
    let prec = digits.residual.prec();
    let depth = depth.min(digits.digits.len());
    let mut v = Float::with_val(prec, &digits.residual);
    for a in digits.digits[..depth].iter().rev() {
        let inner = Float::with_val(prec, a) + v;
        v = if inner.is_zero() && system.direction == Direction::Decreasing {
            // A zero interior value only arises from an all-zero padded
            // tail after termination; treat f(0) as the vacuous tail 0.
            Float::new(prec)
        } else {
            (system.f)(&inner)
        };
    }
    v
}

/// Exact continued-fraction digits of a rational in `(0, 1]` under
/// `f(t) = 1/t`, by the Euclidean algorithm (integer oracle for the
/// floating encoder).
pub fn continued_fraction_digits(x: &Rational, max: usize) -> Result<Vec<Integer>> {
    if !(*x > 0u32 && *x <= 1u32) {
        return Err(Error::Domain(format!("needs a rational in (0,1], got {x}")));
    }
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut digits = Vec::new();
    while !num.is_zero() && digits.len() < max {
        // 1/(num/den) = den/num; digit = floor, remainder = den mod num.
        let (q, r) = den.div_rem(num.clone());
        digits.push(q);
        den = num;
        num = r;
    }
    Ok(digits)
}

/// Rényi's greedy β-expansion: `d_i = ⌊β·x_i⌋`, `x_{i+1} = β·x_i − d_i`,
/// producing digits in `{0, …, ⌈β⌉−1}` with
/// `Σ d_i β^{−i} ≤ x < Σ d_i β^{−i} + β^{−n}`.
pub fn beta_encode(beta: &Float, x: &Float, n: usize) -> Result<FDigits> {
    let prec = x.prec().max(beta.prec());
    if !(*beta > 1) {
        return Err(Error::Domain(format!("beta_encode needs beta > 1, got {beta}")));
    }
    if x.is_sign_negative() && !x.is_zero() || *x >= 1 {
        return Err(Error::Domain(format!("beta_encode needs x in [0,1), got {x}")));
    }
    let mut cur = Float::with_val(prec, x);
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let scaled = Float::with_val(prec, beta) * &cur;
        let d = scaled.clone().floor();
        digits.push(d.to_integer().expect("finite digit"));
        cur = scaled - d;
    }
    Ok(FDigits {
        digits,
        residual: cur,
    })
}

/// Value of a β-digit string: `Σ d_i β^{−i}` (digits indexed from 1).
pub fn beta_decode(beta: &Float, digits: &FDigits) -> Float {
    let prec = digits.residual.prec().max(beta.prec());
    let mut v = Float::with_val(prec, &digits.residual);
    for d in digits.digits.iter().rev() {
        v = (Float::with_val(prec, d) + v) / Float::with_val(prec, beta);
    }
    v
}
