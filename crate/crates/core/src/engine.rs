//! Core types and backward/forward evaluation for continued function
//! compositions.
//!
//! A continued composition is the right-to-left limit `t_0∘t_1∘…∘t_n(c)`;
//! its finite truncation is the *n-th approximant*. The backward recurrence
//! builds approximants right to left (`K_j = t_j ∘ K_{j+1}`); the forward
//! (iterated) composition `t_n∘…∘t_0(c)` is a different object with its own
//! convergence theory and is exposed separately.

use std::fmt;
use std::sync::Arc;

use rug::float::Special;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// The map family of a composition, with its fixed parameters.
///
/// Term-by-term shapes (`a` addend, `b` multiplier, `ε` sign, `x` the inner
/// value):
///
/// * `SquareRoot` / `RthRoot(r)` — `t(x) = ε·(a + b·x)^e`, `e = 1/r`
///   (overridable per term);
/// * `Power(p)` — `t(x) = a + ε·b·x^p`;
/// * `ReciprocalRoot(r)` — `t(x) = a + ε·b·x^(−1/r)`, seed `+∞` maps to `a`;
/// * `Cotangent` — `t(x) = (a·x + 1)/(x − a)`, seed `+∞` maps to `a`;
/// * `Logarithm(base)` — `t(x) = a + ε·b·log_base(x)`;
/// * `Fraction` — `t(x) = a + b/x`, the degenerate `p = −1` case, kept for
///   cross-checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompositionKind {
    SquareRoot,
    RthRoot(f64),
    Power(f64),
    ReciprocalRoot(f64),
    Cotangent,
    Logarithm(f64),
    Fraction,
}

impl CompositionKind {
    /// Default per-term exponent for root-like families, computed at the
    /// working precision (1/r is not exactly representable in general).
    fn default_exponent(&self, prec: u32) -> Option<Float> {
        match self {
            CompositionKind::SquareRoot => Some(Float::with_val(prec, 0.5)),
            CompositionKind::RthRoot(r) => {
                Some(Float::with_val(prec, 1) / Float::with_val(prec, *r))
            }
            _ => None,
        }
    }

    /// Default tail seed: `+∞` for families whose map sends `∞` to a finite
    /// value, `0` otherwise.
    pub fn default_seed(&self) -> Seed {
        match self {
            CompositionKind::ReciprocalRoot(_)
            | CompositionKind::Cotangent
            | CompositionKind::Fraction => Seed::Infinity,
            _ => Seed::zero(),
        }
    }
}

impl fmt::Display for CompositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompositionKind::SquareRoot => write!(f, "sqrt"),
            CompositionKind::RthRoot(r) => write!(f, "root:{r}"),
            CompositionKind::Power(p) => write!(f, "power:{p}"),
            CompositionKind::ReciprocalRoot(r) => write!(f, "recroot:{r}"),
            CompositionKind::Cotangent => write!(f, "cot"),
            CompositionKind::Logarithm(b) => write!(f, "log:{b}"),
            CompositionKind::Fraction => write!(f, "fraction"),
        }
    }
}

/// One term `t_i` of a composition.
#[derive(Debug, Clone)]
pub struct TermRecord {
    pub index: u64,
    pub addend: Float,
    pub multiplier: Float,
    /// `+1` or `−1`.
    pub sign: i8,
    /// Per-term exponent override (`p_i` or `1/r_i`); `None` inherits the
    /// family default.
    pub exponent: Option<Float>,
}

impl TermRecord {
    pub fn new(index: u64, addend: Float) -> Self {
        let prec = addend.prec();
        TermRecord {
            index,
            addend,
            multiplier: Float::with_val(prec, 1),
            sign: 1,
            exponent: None,
        }
    }
}

/// Generator signature: `(index, precision) → TermRecord`. Must be a pure
/// function of the index so evaluation is deterministic and thread-safe.
pub type TermGen = Arc<dyn Fn(u64, u32) -> TermRecord + Send + Sync>;

/// A deterministic indexed source of terms.
#[derive(Clone)]
pub struct TermStream {
    generator: TermGen,
    pub period: Option<u64>,
    pub description: String,
}

impl fmt::Debug for TermStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TermStream")
            .field("period", &self.period)
            .field("description", &self.description)
            .finish()
    }
}

impl TermStream {
    pub fn new(description: impl Into<String>, generator: TermGen) -> Self {
        TermStream {
            generator,
            period: None,
            description: description.into(),
        }
    }

    pub fn with_period(mut self, period: u64) -> Self {
        self.period = Some(period);
        self
    }

    pub fn term(&self, index: u64, prec: u32) -> TermRecord {
        (self.generator)(index, prec)
    }

    /// Constant addends `a_i = a`.
    pub fn constant(a: f64) -> Self {
        TermStream::new(
            format!("const a={a}"),
            Arc::new(move |i, prec| TermRecord::new(i, Float::with_val(prec, a))),
        )
        .with_period(1)
    }

    /// Arithmetic addends `a_i = start + i·step`.
    pub fn arithmetic(start: f64, step: f64) -> Self {
        TermStream::new(
            format!("arith start={start} step={step}"),
            Arc::new(move |i, prec| {
                let a = Float::with_val(prec, step) * i + Float::with_val(prec, start);
                TermRecord::new(i, a)
            }),
        )
    }

    /// `3 = √(1+2√(1+3√(1+⋯)))` (Ramanujan 1911): `a_i = 1`, `b_i = i+2`.
    pub fn ramanujan1() -> Self {
        TermStream::new(
            "ramanujan1",
            Arc::new(|i, prec| {
                let mut t = TermRecord::new(i, Float::with_val(prec, 1));
                t.multiplier = Float::with_val(prec, i + 2);
                t
            }),
        )
    }

    /// `4 = √(6+2√(7+3√(8+⋯)))` (Ramanujan 1911): `a_i = 6+i`, `b_i = i+2`.
    pub fn ramanujan2() -> Self {
        TermStream::new(
            "ramanujan2",
            Arc::new(|i, prec| {
                let mut t = TermRecord::new(i, Float::with_val(prec, 6 + i));
                t.multiplier = Float::with_val(prec, i + 2);
                t
            }),
        )
    }

    /// Explicit addend list; indices past the end repeat the last entry.
    pub fn from_list(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "term list must be nonempty");
        TermStream::new(
            format!("list {values:?}"),
            Arc::new(move |i, prec| {
                let v = values[(i as usize).min(values.len() - 1)];
                TermRecord::new(i, Float::with_val(prec, v))
            }),
        )
    }

    /// Replace every multiplier with the constant `b`.
    pub fn with_multiplier(self, b: f64) -> Self {
        let inner = self.generator.clone();
        let description = format!("{} b={b}", self.description);
        TermStream {
            generator: Arc::new(move |i, prec| {
                let mut t = (inner)(i, prec);
                t.multiplier = Float::with_val(prec, b);
                t
            }),
            period: self.period,
            description,
        }
    }

    /// Apply a sign pattern: an explicit prefix followed by a repeating
    /// cycle. Indices below `prefix.len()` take the prefix sign; the rest
    /// cycle through `cycle`.
    pub fn with_signs(self, prefix: Vec<i8>, cycle: Vec<i8>) -> Self {
        assert!(!cycle.is_empty() || !prefix.is_empty(), "empty sign pattern");
        let inner = self.generator.clone();
        let description = format!("{} signs", self.description);
        TermStream {
            generator: Arc::new(move |i, prec| {
                let mut t = (inner)(i, prec);
                let i = i as usize;
                t.sign = if i < prefix.len() {
                    prefix[i]
                } else if cycle.is_empty() {
                    *prefix.last().unwrap()
                } else {
                    cycle[(i - prefix.len()) % cycle.len()]
                };
                t
            }),
            period: None,
            description,
        }
    }

    /// Replace every per-term exponent with the constant `e`.
    pub fn with_exponent(self, e: f64) -> Self {
        let inner = self.generator.clone();
        let description = format!("{} e={e}", self.description);
        TermStream {
            generator: Arc::new(move |i, prec| {
                let mut t = (inner)(i, prec);
                t.exponent = Some(Float::with_val(prec, e));
                t
            }),
            period: self.period,
            description,
        }
    }

    /// View of the same stream starting at `offset` (term `i` of the result
    /// is term `offset + i` of `self`).
    pub fn offset(&self, offset: u64) -> Self {
        let inner = self.generator.clone();
        TermStream {
            generator: Arc::new(move |i, prec| {
                let mut t = (inner)(offset + i, prec);
                t.index = i;
                t
            }),
            period: self.period,
            description: format!("{} offset {offset}", self.description),
        }
    }
}

/// Tail seed `c`: a finite value, or the distinguished `+∞` sentinel whose
/// image under each reciprocal-family map is taken analytically.
#[derive(Debug, Clone)]
pub enum Seed {
    Finite(Float),
    Infinity,
}

impl Seed {
    pub fn zero() -> Self {
        Seed::Finite(Float::new(53))
    }

    pub fn value(v: f64) -> Self {
        Seed::Finite(Float::with_val(53, v))
    }
}

/// A full evaluation request.
#[derive(Debug, Clone)]
pub struct EvalRequest {
    pub kind: CompositionKind,
    pub terms: TermStream,
    pub depth: u64,
    pub seed: Seed,
    /// Significand bits; must be ≥ 53.
    pub precision: u32,
}

impl EvalRequest {
    pub fn new(kind: CompositionKind, terms: TermStream, depth: u64) -> Self {
        let seed = kind.default_seed();
        EvalRequest {
            kind,
            terms,
            depth,
            seed,
            precision: 128,
        }
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        assert!(precision >= 53, "precision must be at least 53 bits");
        self.precision = precision;
        self
    }

    pub fn with_seed(mut self, seed: Seed) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_depth(mut self, depth: u64) -> Self {
        self.depth = depth;
        self
    }
}

/// Depth-indexed approximant values with per-depth deltas.
#[derive(Debug, Clone)]
pub struct ApproximantTrace {
    pub values: Vec<Float>,
    /// `deltas[d] = |values[d] − values[d−1]|`; `deltas[0] = 0`.
    pub deltas: Vec<Float>,
    /// Least depth at which two consecutive deltas were ≤ tolerance.
    pub converged_at: Option<u64>,
    pub tolerance_used: Float,
}

/// Intermediate evaluation state: a finite value or the `∞` sentinel.
#[derive(Debug, Clone)]
enum Val {
    Finite(Float),
    Infinity,
}

impl From<&Seed> for Val {
    fn from(seed: &Seed) -> Val {
        match seed {
            Seed::Finite(v) => Val::Finite(v.clone()),
            Seed::Infinity => Val::Infinity,
        }
    }
}

/// Real root with the requested exponent; the base must be nonnegative.
fn checked_pow(base: Float, e: &Float, index: u64) -> Result<Float> {
    if base.is_sign_negative() && !base.is_zero() {
        return Err(Error::Domain(format!(
            "negative radicand {base} at term {index}"
        )));
    }
    Ok(base.pow(e))
}

/// Apply one term map to the running value.
fn apply(kind: &CompositionKind, term: &TermRecord, x: Val, prec: u32) -> Result<Val> {
    if !term.addend.is_finite() || !term.multiplier.is_finite() {
        return Err(Error::Overflow(format!(
            "term {} has a non-finite addend or multiplier",
            term.index
        )));
    }
    let a = Float::with_val(prec, &term.addend);
    let b = Float::with_val(prec, &term.multiplier);
    let sign = Float::with_val(prec, term.sign);
    let out = match kind {
        CompositionKind::SquareRoot | CompositionKind::RthRoot(_) => {
            let x = expect_finite(x, term.index)?;
            let e = match &term.exponent {
                Some(e) => Float::with_val(prec, e),
                None => kind.default_exponent(prec).unwrap(),
            };
            let radicand = a + b * x;
            sign * checked_pow(radicand, &e, term.index)?
        }
        CompositionKind::Power(p) => {
            let x = expect_finite(x, term.index)?;
            let e = match &term.exponent {
                Some(e) => Float::with_val(prec, e),
                None => Float::with_val(prec, *p),
            };
            if x.is_sign_negative() && !x.is_zero() && !e.is_integer() {
                return Err(Error::Domain(format!(
                    "negative base with fractional power at term {}",
                    term.index
                )));
            }
            a + sign * b * x.pow(&e)
        }
        CompositionKind::ReciprocalRoot(r) => match x {
            Val::Infinity => a,
            Val::Finite(x) => {
                if x <= 0 {
                    return Err(Error::Domain(format!(
                        "nonpositive argument {x} to reciprocal root at term {}",
                        term.index
                    )));
                }
                let e = match &term.exponent {
                    Some(e) => -Float::with_val(prec, e),
                    None => Float::with_val(prec, -1) / Float::with_val(prec, *r),
                };
                a + sign * b * x.pow(&e)
            }
        },
        CompositionKind::Cotangent => match x {
            Val::Infinity => a,
            Val::Finite(x) => {
                let den = Float::with_val(prec, &x) - &a;
                if den.is_zero() {
                    return Err(Error::Domain(format!(
                        "cotangent map pole: x equals digit {a} at term {}",
                        term.index
                    )));
                }
                (a * x + 1u32) / den
            }
        },
        CompositionKind::Logarithm(base) => {
            let x = expect_finite(x, term.index)?;
            if x <= 0 {
                return Err(Error::Domain(format!(
                    "nonpositive argument {x} to logarithm at term {}",
                    term.index
                )));
            }
            let lb = Float::with_val(prec, *base).ln();
            a + sign * b * x.ln() / lb
        }
        CompositionKind::Fraction => match x {
            Val::Infinity => a,
            Val::Finite(x) => {
                if x.is_zero() {
                    return Err(Error::Domain(format!(
                        "division by zero in fraction map at term {}",
                        term.index
                    )));
                }
                a + sign * b / x
            }
        },
    };
    if !out.is_finite() {
        return Err(Error::Overflow(format!(
            "non-finite intermediate at term {}",
            term.index
        )));
    }
    Ok(Val::Finite(out))
}

fn expect_finite(x: Val, index: u64) -> Result<Float> {
    match x {
        Val::Finite(v) => Ok(v),
        Val::Infinity => Err(Error::Overflow(format!(
            "infinite argument to a non-reciprocal map at term {index}"
        ))),
    }
}

fn seed_val(seed: &Seed, prec: u32) -> Val {
    match seed {
        Seed::Finite(v) => Val::Finite(Float::with_val(prec, v)),
        Seed::Infinity => Val::Infinity,
    }
}

/// Backward recurrence: `t_0∘t_1∘…∘t_depth(seed)`, evaluated right to left.
pub fn eval_backward(req: &EvalRequest) -> Result<Float> {
    let prec = req.precision;
    let mut x = seed_val(&req.seed, prec);
    for j in (0..=req.depth).rev() {
        let term = req.terms.term(j, prec);
        x = apply(&req.kind, &term, x, prec)?;
    }
    match x {
        Val::Finite(v) => Ok(v),
        Val::Infinity => Err(Error::Overflow(
            "evaluation ended on the infinite sentinel".into(),
        )),
    }
}

/// Forward (iterated) composition: `t_depth∘…∘t_1∘t_0(seed)`.
pub fn eval_forward(req: &EvalRequest) -> Result<Float> {
    let prec = req.precision;
    let mut x = seed_val(&req.seed, prec);
    for j in 0..=req.depth {
        let term = req.terms.term(j, prec);
        x = apply(&req.kind, &term, x, prec)?;
    }
    match x {
        Val::Finite(v) => Ok(v),
        Val::Infinity => Err(Error::Overflow(
            "evaluation ended on the infinite sentinel".into(),
        )),
    }
}

/// Deepen the backward evaluation until two consecutive deltas fall below
/// `tolerance` (one small delta alone is not accepted, to defeat period-2
/// oscillations) or `max_depth` is reached.
///
/// Each deeper approximant is recomputed from scratch: the maps do not
/// commute, so no incremental shortcut exists; the trace costs O(n²).
pub fn estimate_limit(
    req: &EvalRequest,
    tolerance: &Float,
    max_depth: u64,
) -> Result<(Float, ApproximantTrace)> {
    assert!(tolerance.is_sign_positive(), "tolerance must be positive");
    assert!(max_depth >= 2, "max_depth must be at least 2");
    let prec = req.precision;
    let mut trace = ApproximantTrace {
        values: Vec::new(),
        deltas: Vec::new(),
        converged_at: None,
        tolerance_used: Float::with_val(prec, tolerance),
    };
    let mut overflow_note = None;
    for d in 0..=max_depth {
        let v = match eval_backward(&req.clone().with_depth(d)) {
            Ok(v) => v,
            Err(Error::Overflow(msg)) => {
                // Unbounded growth in depth: report as non-convergence with
                // the trace gathered so far available in the message.
                overflow_note = Some(msg);
                break;
            }
            Err(e) => return Err(e),
        };
        let delta = match trace.values.last() {
            Some(prev) => Float::with_val(prec, &v - prev).abs(),
            None => Float::with_val(prec, Special::Zero),
        };
        trace.values.push(v);
        trace.deltas.push(delta);
        let n = trace.deltas.len();
        if n >= 3
            && trace.deltas[n - 1] <= *tolerance
            && trace.deltas[n - 2] <= *tolerance
        {
            trace.converged_at = Some(d);
            break;
        }
    }
    match trace.converged_at {
        Some(_) => {
            let v = trace.values.last().unwrap().clone();
            Ok((v, trace))
        }
        None => {
            let last = trace
                .deltas
                .last()
                .map(|d| d.to_string())
                .unwrap_or_else(|| "n/a".into());
            let mut msg = format!(
                "{} depths evaluated, last delta {last} above tolerance {tolerance}",
                trace.values.len()
            );
            if let Some(note) = overflow_note {
                msg.push_str(&format!(" ({note})"));
            }
            Err(Error::NoConvergence(msg))
        }
    }
}

/// Closed form `(1+√(1+4a))/2` for the constant continued square root
/// `√(a+√(a+⋯))` (Doppler 1832).
pub fn closed_form_constant_sqrt(a: &Float) -> Result<Float> {
    let prec = a.prec().max(53);
    let disc = Float::with_val(prec, 4) * a + 1u32;
    if disc.is_sign_negative() {
        return Err(Error::Domain(
            "1+4a negative: real closed form undefined (use the complex variant)".into(),
        ));
    }
    Ok((disc.sqrt() + 1u32) / 2u32)
}

/// Complex extension of [`closed_form_constant_sqrt`] under the principal
/// branch (real part of the square root nonnegative, positive imaginary
/// axis for negative real radicands).
pub fn closed_form_constant_sqrt_complex(a: &rug::Complex) -> rug::Complex {
    let prec = a.prec().0.max(53);
    let mut disc = rug::Complex::with_val(prec, (4, 0));
    disc *= a;
    disc += 1u32;
    let root = disc.sqrt();
    (root + 1u32) / 2u32
}
