//! Closed forms, trigonometric sign codecs, digit representations, and the
//! verified identity corpus for continued square roots.

use rug::ops::Pow;
use rug::Float;

use crate::engine::{eval_backward, CompositionKind, EvalRequest, Seed};
use crate::error::{Error, Result};
use crate::parse::{parse_kind, parse_seed, parse_terms};

/// A `±1` sequence, optionally with a declared eventually-periodic tail.
#[derive(Debug, Clone)]
pub struct SignSequence {
    pub signs: Vec<i8>,
    /// `(preperiod length, period length)` when known.
    pub periodic_tail: Option<(usize, usize)>,
}

impl SignSequence {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(!signs.is_empty(), "sign sequence must be nonempty");
        assert!(signs.iter().all(|s| *s == 1 || *s == -1));
        SignSequence {
            signs,
            periodic_tail: None,
        }
    }

    /// Sign at `i`, extending periodically when a periodic tail is declared.
    pub fn at(&self, i: usize) -> i8 {
        if i < self.signs.len() {
            return self.signs[i];
        }
        match self.periodic_tail {
            Some((pre, period)) => {
                let k = pre + (i - pre) % period;
                self.signs[k]
            }
            None => panic!("sign index {i} beyond sequence of length {}", self.signs.len()),
        }
    }
}

/// Sizer digit representation `x = √(a_0 + √(a_1 + √(a_2 + ⋯)))` with all
/// tail digits in `{0, 1, 2}`.
#[derive(Debug, Clone)]
pub struct SizerDigits {
    pub head: u64,
    pub tail: Vec<u8>,
    /// Final residual `x_{depth+1} ∈ [0, 2]`, used as the decode seed.
    pub residual: Float,
}

/// Nyblom's closed form for the finite constant nest of depth `k`:
/// `R_k(x) = φ^(1/2^k) + φ^(−1/2^k)` (plus variant) or
/// `φ^(1/2^k) − φ^(−1/2^k)` (minus variant) with `φ = (x+√(x²−4))/2`,
/// valid for `x ≥ 2`.
pub fn nyblom_closed_form(x: &Float, k: u32, variant_plus: bool) -> Result<Float> {
    let prec = x.prec();
    if *x < 2 {
        return Err(Error::Domain(format!("nyblom closed form needs x >= 2, got {x}")));
    }
    let disc = Float::with_val(prec, x * x) - 4u32;
    let phi = (Float::with_val(prec, x) + disc.sqrt()) / 2u32;
    // φ^(1/2^k) by k successive square roots — exact for the needs here and
    // free of exp/log rounding.
    let mut s = phi;
    for _ in 0..k {
        s = s.sqrt();
    }
    let inv = Float::with_val(prec, 1) / &s;
    Ok(if variant_plus { s + inv } else { s - inv })
}

/// Direct nest for the Nyblom forms: `√(2+√(2+⋯+√(2+x)))` (plus) or
/// `√(−2+√(2+⋯+√(2+x)))` (minus), with `k` radicals and innermost
/// argument `x`.
pub fn nyblom_direct_nest(x: &Float, k: u32, variant_plus: bool) -> Result<Float> {
    let prec = x.prec();
    let mut v = Float::with_val(prec, x);
    for j in (0..k).rev() {
        let inner = if j == 0 && !variant_plus {
            Float::with_val(prec, &v) - 2u32
        } else {
            Float::with_val(prec, 2) + &v
        };
        if inner.is_sign_negative() {
            return Err(Error::Domain("negative radicand in Nyblom nest".into()));
        }
        v = inner.sqrt();
    }
    Ok(v)
}

/// Finite sign nest `ε_0·√(2+ε_1·√(2+⋯+ε_N·√2))` together with its exact
/// trigonometric form `2·sin(π/4 · Σ ε_0ε_1⋯ε_n/2^n)` (Pólya–Szegő
/// Problem 183). The two routes agree at finite depth; both are returned so
/// callers can use the agreement as a self-check.
pub fn sign_nest_value(signs: &SignSequence, depth: usize, prec: u32) -> Result<(Float, Float)> {
    let n = depth.min(match signs.periodic_tail {
        Some(_) => depth,
        None => signs.signs.len() - 1,
    });
    // Direct nest, innermost √2 outward.
    let mut v = Float::with_val(prec, 2).sqrt();
    for j in (1..=n).rev() {
        let radicand = Float::with_val(prec, 2) + Float::with_val(prec, signs.at(j)) * &v;
        if radicand.is_sign_negative() {
            return Err(Error::Domain("negative radicand in sign nest".into()));
        }
        v = radicand.sqrt();
    }
    let nest = Float::with_val(prec, signs.at(0)) * v;
    // Series form.
    let mut sum = Float::new(prec);
    let mut prod = 1i8;
    for k in 0..=n {
        prod *= signs.at(k);
        let term = Float::with_val(prec, prod) / Float::with_val(prec, 2).pow(k as u32);
        sum += term;
    }
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let series = Float::with_val(prec, 2) * (pi / 4u32 * sum).sin();
    Ok((nest, series))
}

/// Encode `x ∈ [−2, 2]` as a sign nest by signed-binary digit extraction on
/// `S = (4/π)·arcsin(x/2)` (numerically stable near `±2`, unlike nested
/// root isolation).
pub fn encode_sign_nest(x: &Float, depth: usize) -> SignSequence {
    let prec = x.prec().max(64) + depth as u32 + 32;
    let xs = Float::with_val(prec, x);
    assert!(xs.clone().abs() <= 2, "encode_sign_nest needs |x| <= 2");
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let mut t = Float::with_val(prec, &xs / 2u32).asin() * 4u32 / pi;
    // Signed binary digits c_n with S = Σ c_n 2^{-n}; then ε_0 = c_0,
    // ε_n = c_n·c_{n−1}.
    let mut c = Vec::with_capacity(depth + 1);
    for _ in 0..=depth {
        let d: i8 = if t.is_sign_negative() { -1 } else { 1 };
        c.push(d);
        t = (t - Float::with_val(prec, d)) * 2u32;
    }
    let mut signs = Vec::with_capacity(depth + 1);
    signs.push(c[0]);
    for k in 1..=depth {
        signs.push(c[k] * c[k - 1]);
    }
    SignSequence::new(signs)
}

/// Least `(preperiod, period)` consistent with the observed window (needs at
/// least two full periods of evidence), if any.
pub fn detect_sign_periodicity(
    signs: &SignSequence,
    max_period: usize,
) -> Option<(usize, usize)> {
    let s = &signs.signs;
    for period in 1..=max_period {
        for pre in 0..s.len() {
            if s.len() < pre + 2 * period {
                break;
            }
            if (pre..s.len() - period).all(|i| s[i] == s[i + period]) {
                return Some((pre, period));
            }
        }
    }
    None
}

/// Greedy Sizer encoding: head digit `a_0 = ⌊x²⌋` (zero when `x ≤ √2`),
/// then tail digits `a_i = clamp(⌊x_i²⌋, 0, 2)`, `x_{i+1} = x_i² − a_i`,
/// which keeps every residual in `[0, 2]`.
pub fn sizer_encode(x: &Float, depth: usize) -> Result<SizerDigits> {
    let prec = x.prec();
    if x.is_sign_negative() && !x.is_zero() {
        return Err(Error::Domain(format!("sizer encoding needs x >= 0, got {x}")));
    }
    let sqrt2 = Float::with_val(prec, 2).sqrt();
    let x2 = Float::with_val(prec, x * x);
    let head = if *x <= sqrt2 {
        0u64
    } else {
        x2.clone().floor().to_f64() as u64
    };
    let mut r = x2 - Float::with_val(prec, head);
    let mut tail = Vec::with_capacity(depth);
    for _ in 0..depth {
        let r2 = Float::with_val(prec, &r * &r);
        let d = (r2.clone().floor().to_f64() as i64).clamp(0, 2) as u8;
        tail.push(d);
        r = r2 - Float::with_val(prec, d);
    }
    Ok(SizerDigits {
        head,
        tail,
        residual: r,
    })
}

/// Reconstruct a real from its Sizer digits by the backward recurrence,
/// seeding the innermost level with the stored residual.
pub fn sizer_decode(d: &SizerDigits) -> Float {
    let prec = d.residual.prec();
    let mut v = Float::with_val(prec, &d.residual);
    for digit in d.tail.iter().rev() {
        v = (v + Float::with_val(prec, *digit)).sqrt();
    }
    (v + Float::with_val(prec, d.head)).sqrt()
}

/// Wollan–Mesner signed nest driven by the nonterminating binary digits of
/// `x ∈ (0, 1]`: `f_n(x) = √(k+α_1√(k+α_2√(k+⋯+α_n√k)))` with
/// `α_m = (−1)^{a_m}`. The limit exists for `k > 2+√2`; smaller `k` is
/// refused rather than guessed.
pub fn binary_signed_nest(x: &Float, k: f64, depth: usize, prec: u32) -> Result<Float> {
    if !(*x > 0 && *x <= 1) {
        return Err(Error::Domain(format!("binary nest needs x in (0,1], got {x}")));
    }
    if k <= 2.0 + std::f64::consts::SQRT_2 {
        return Err(Error::Domain(format!(
            "binary nest convergence requires k > 2+sqrt(2), got {k}"
        )));
    }
    // Nonterminating binary digits: dyadic rationals take the …0111 form.
    let digit_prec = prec.max(64) + depth as u32 + 16;
    let mut t = Float::with_val(digit_prec, x);
    let mut alphas: Vec<i8> = Vec::with_capacity(depth);
    for _ in 0..depth {
        t *= 2u32;
        let fl = t.clone().floor();
        let digit = if t == fl {
            // Exact dyadic point: emit digit−1 and carry the all-ones tail.
            let d = fl.to_f64() as i64 - 1;
            t = Float::with_val(digit_prec, 1);
            d
        } else {
            let d = fl.to_f64() as i64;
            t -= fl;
            d
        };
        alphas.push(if digit % 2 == 0 { 1 } else { -1 });
    }
    let kf = Float::with_val(prec, k);
    let mut v = Float::with_val(prec, &kf).sqrt();
    for m in (0..depth).rev() {
        let radicand = Float::with_val(prec, &kf) + Float::with_val(prec, alphas[m]) * &v;
        if radicand.is_sign_negative() {
            return Err(Error::Domain("negative radicand in binary signed nest".into()));
        }
        v = radicand.sqrt();
    }
    Ok(v)
}

/// One verifiable identity: a left-hand evaluation recipe, a frozen
/// right-hand reference value, and a tolerance.
#[derive(Debug, Clone)]
pub struct IdentityRecord {
    pub id: String,
    pub kind: CompositionKind,
    pub terms: String,
    pub depth: u64,
    pub seed: Option<String>,
    /// Optional decimal factor applied to the evaluated value.
    pub scale: Option<String>,
    /// Optional second evaluation; when present the record checks the ratio
    /// `lhs₁ / lhs₂`.
    pub ratio_terms: Option<String>,
    pub ratio_depth: Option<u64>,
    pub ratio_seed: Option<String>,
    pub rhs: String,
    pub tol: String,
    pub source: String,
}

/// Outcome for one corpus record.
#[derive(Debug, Clone)]
pub struct RecordResult {
    pub id: String,
    pub value: Float,
    pub expected: Float,
    pub error: Float,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub results: Vec<RecordResult>,
}

impl CorpusReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

/// Parse the corpus text format: one record per nonempty non-`#` line,
/// `key=value` fields separated by `;`. Required fields: `id`, `kind`,
/// `terms`, `depth`, `rhs`, `tol`, `source`; optional: `seed`, `scale`,
/// `ratio_terms`, `ratio_depth`, `ratio_seed`.
pub fn parse_corpus(text: &str) -> Result<Vec<IdentityRecord>> {
    let mut records = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = std::collections::HashMap::new();
        for piece in line.split(';') {
            let (k, v) = piece.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key=value, got {piece:?}", lineno + 1))
            })?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| -> Result<String> {
            fields
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("line {}: missing field {k:?}", lineno + 1)))
        };
        let depth: u64 = get("depth")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad depth: {e}")))?;
        records.push(IdentityRecord {
            id: get("id")?,
            kind: parse_kind(&get("kind")?)?,
            terms: get("terms")?,
            depth,
            seed: fields.get("seed").cloned(),
            scale: fields.get("scale").cloned(),
            ratio_terms: fields.get("ratio_terms").cloned(),
            ratio_depth: match fields.get("ratio_depth") {
                Some(d) => Some(
                    d.parse()
                        .map_err(|e| Error::Parse(format!("bad ratio_depth: {e}")))?,
                ),
                None => None,
            },
            ratio_seed: fields.get("ratio_seed").cloned(),
            rhs: get("rhs")?,
            tol: get("tol")?,
            source: get("source")?,
        });
    }
    Ok(records)
}

fn eval_record_side(
    kind: CompositionKind,
    terms: &str,
    depth: u64,
    seed: &Option<String>,
    prec: u32,
) -> Result<Float> {
    let stream = parse_terms(terms)?;
    let mut req = EvalRequest::new(kind, stream, depth).with_precision(prec);
    if let Some(seed) = seed {
        req = req.with_seed(parse_seed(seed, prec)?);
    } else {
        req = req.with_seed(kind.default_seed());
    }
    eval_backward(&req)
}

fn parse_decimal(s: &str, prec: u32) -> Result<Float> {
    let v = Float::parse(s).map_err(|e| Error::Parse(format!("bad decimal {s:?}: {e}")))?;
    Ok(Float::with_val(prec, v))
}

/// Evaluate one identity record at the given precision.
pub fn run_identity_record(record: &IdentityRecord, prec: u32) -> Result<RecordResult> {
    let mut value = eval_record_side(record.kind, &record.terms, record.depth, &record.seed, prec)?;
    if let Some(terms2) = &record.ratio_terms {
        let depth2 = record.ratio_depth.unwrap_or(record.depth);
        let v2 = eval_record_side(record.kind, terms2, depth2, &record.ratio_seed, prec)?;
        value /= v2;
    }
    if let Some(scale) = &record.scale {
        value *= parse_decimal(scale, prec)?;
    }
    let expected = parse_decimal(&record.rhs, prec)?;
    let tol = parse_decimal(&record.tol, prec)?;
    let error = Float::with_val(prec, &value - &expected).abs();
    let passed = error <= tol;
    Ok(RecordResult {
        id: record.id.clone(),
        value,
        expected,
        error,
        passed,
    })
}

/// Evaluate every record; individual failures are reported, not raised.
pub fn run_identity_corpus(records: &[IdentityRecord], prec: u32) -> CorpusReport {
    let results = records
        .iter()
        .map(|r| {
            run_identity_record(r, prec).unwrap_or_else(|_e| RecordResult {
                id: r.id.clone(),
                value: Float::with_val(prec, rug::float::Special::Nan),
                expected: Float::with_val(prec, rug::float::Special::Nan),
                error: Float::with_val(prec, rug::float::Special::Infinity),
                passed: false,
            })
        })
        .collect();
    CorpusReport { results }
}

/// The corpus shipped with the crate.
pub fn builtin_corpus_text() -> &'static str {
    include_str!("../data/identities.corpus")
}

/// Parsed form of [`builtin_corpus_text`].
pub fn builtin_corpus() -> Vec<IdentityRecord> {
    parse_corpus(builtin_corpus_text()).expect("shipped corpus must parse")
}

/// Seed helper used by tests that need an explicit finite seed.
pub fn finite_seed(v: f64) -> Seed {
    Seed::value(v)
}
