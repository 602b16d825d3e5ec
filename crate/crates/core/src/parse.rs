//! Text mini-language for composition kinds, term streams, and seeds.
//!
//! Shared by the CLI and the identity-corpus loader. Grammar:
//!
//! * kind — `sqrt`, `root:R`, `power:P`, `recroot:R`, `cot`, `log:B`,
//!   `fraction`;
//! * terms — a base generator, optionally followed by `/`-separated
//!   modifiers:
//!   - `const:a=V[,b=V]` — constant addend (and multiplier),
//!   - `arith:start=V,step=V` — arithmetic addends,
//!   - `periodic:signs=P[|C][,a=V]` — constant addend (default 2) with a
//!     periodic sign pattern,
//!   - `ramanujan1`, `ramanujan2` — the 1911 multiplier streams,
//!   - `list:v1,v2,…` — explicit addends, last entry repeating,
//!   - `doubling:c=V,r=V` — `a_i = c·r^(2^i)`,
//!   - `geomexp:c=V,base=V` — `a_i = c^(base^i)`,
//!   - `doubleexp:beta=V` — `a_i = exp(exp(β·i))`,
//!   - `powmult:base=V,x=V` — `a_i = base^(i+1)` with multiplier `x`,
//!   - `mcg:x=V,n=V,a=V` — addends `a(x+jn)+(n+a)²`, multipliers `x+jn`,
//!   - modifiers: `b=V` (constant multiplier), `e=V` (constant exponent),
//!     `signs=P` or `signs=P|C` (sign prefix `P`, repeating cycle `C`,
//!     written with `+`/`-` characters);
//! * seed — `inf`, a decimal literal, or `sqrt:V`.
use std::collections::HashMap;
use std::sync::Arc;

use rug::ops::Pow;
use rug::Float;

use crate::engine::{CompositionKind, Seed, TermRecord, TermStream};
use crate::error::{Error, Result};

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parse a composition-kind tag.
pub fn parse_kind(s: &str) -> Result<CompositionKind> {
    let (head, param) = match s.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (s, None),
    };
    let num = |p: Option<&str>| -> Result<f64> {
        p.ok_or_else(|| err(format!("kind {head:?} needs a parameter")))?
            .parse::<f64>()
            .map_err(|e| err(format!("bad kind parameter: {e}")))
    };
    match head {
        "sqrt" => Ok(CompositionKind::SquareRoot),
        "root" => Ok(CompositionKind::RthRoot(num(param)?)),
        "power" => Ok(CompositionKind::Power(num(param)?)),
        "recroot" => Ok(CompositionKind::ReciprocalRoot(num(param)?)),
        "cot" => Ok(CompositionKind::Cotangent),
        "log" => Ok(CompositionKind::Logarithm(num(param)?)),
        "fraction" => Ok(CompositionKind::Fraction),
        other => Err(err(format!("unknown composition kind {other:?}"))),
    }
}

fn parse_kv(body: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for piece in body.split(',') {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {piece:?}")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn get_num(map: &HashMap<String, String>, key: &str) -> Result<f64> {
    map.get(key)
        .ok_or_else(|| err(format!("missing parameter {key:?}")))?
        .parse::<f64>()
        .map_err(|e| err(format!("bad value for {key:?}: {e}")))
}

fn parse_sign_chars(s: &str) -> Result<Vec<i8>> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(err(format!("bad sign character {other:?}"))),
        })
        .collect()
}

/// Parse a sign pattern `PREFIX|CYCLE` (or a bare cycle).
pub fn parse_signs(s: &str) -> Result<(Vec<i8>, Vec<i8>)> {
    match s.split_once('|') {
        Some((p, c)) => Ok((parse_sign_chars(p)?, parse_sign_chars(c)?)),
        None => Ok((Vec::new(), parse_sign_chars(s)?)),
    }
}

fn base_stream(spec: &str) -> Result<TermStream> {
    let (head, body) = match spec.split_once(':') {
        Some((h, b)) => (h, b),
        None => (spec, ""),
    };
    match head {
        "const" => {
            let kv = parse_kv(body)?;
            let a = get_num(&kv, "a")?;
            let mut stream = TermStream::constant(a);
            if kv.contains_key("b") {
                stream = stream.with_multiplier(get_num(&kv, "b")?);
            }
            Ok(stream)
        }
        "arith" => {
            let kv = parse_kv(body)?;
            Ok(TermStream::arithmetic(
                get_num(&kv, "start")?,
                get_num(&kv, "step")?,
            ))
        }
        "periodic" => {
            let kv = parse_kv(body)?;
            let a = if kv.contains_key("a") { get_num(&kv, "a")? } else { 2.0 };
            let pattern = kv
                .get("signs")
                .ok_or_else(|| err("periodic needs signs=…"))?;
            let (prefix, cycle) = parse_signs(pattern)?;
            Ok(TermStream::constant(a).with_signs(prefix, cycle))
        }
        "ramanujan1" => Ok(TermStream::ramanujan1()),
        "ramanujan2" => Ok(TermStream::ramanujan2()),
        "list" => {
            let values: std::result::Result<Vec<f64>, _> =
                body.split(',').map(|v| v.trim().parse::<f64>()).collect();
            Ok(TermStream::from_list(values.map_err(|e| {
                err(format!("bad list entry: {e}"))
            })?))
        }
        "doubling" => {
            let kv = parse_kv(body)?;
            let c = get_num(&kv, "c")?;
            let r = get_num(&kv, "r")?;
            Ok(TermStream::new(
                format!("doubling c={c} r={r}"),
                Arc::new(move |i, prec| {
                    let e = Float::with_val(prec, 2).pow(Float::with_val(prec, i));
                    let a = Float::with_val(prec, c) * Float::with_val(prec, r).pow(e);
                    TermRecord::new(i, a)
                }),
            ))
        }
        "geomexp" => {
            let kv = parse_kv(body)?;
            let c = get_num(&kv, "c")?;
            let base = get_num(&kv, "base")?;
            Ok(TermStream::new(
                format!("geomexp c={c} base={base}"),
                Arc::new(move |i, prec| {
                    let e = Float::with_val(prec, base).pow(Float::with_val(prec, i));
                    TermRecord::new(i, Float::with_val(prec, c).pow(e))
                }),
            ))
        }
        "doubleexp" => {
            let kv = parse_kv(body)?;
            let beta = get_num(&kv, "beta")?;
            Ok(TermStream::new(
                format!("doubleexp beta={beta}"),
                Arc::new(move |i, prec| {
                    let inner = Float::with_val(prec, beta * i as f64).exp();
                    TermRecord::new(i, inner.exp())
                }),
            ))
        }
        "powmult" => {
            let kv = parse_kv(body)?;
            let base = get_num(&kv, "base")?;
            let x = get_num(&kv, "x")?;
            Ok(TermStream::new(
                format!("powmult base={base} x={x}"),
                Arc::new(move |i, prec| {
                    let a = Float::with_val(prec, base).pow(Float::with_val(prec, i + 1));
                    let mut t = TermRecord::new(i, a);
                    t.multiplier = Float::with_val(prec, x);
                    t
                }),
            ))
        }
        "mcg" => {
            let kv = parse_kv(body)?;
            let x = get_num(&kv, "x")?;
            let n = get_num(&kv, "n")?;
            let a = get_num(&kv, "a")?;
            Ok(TermStream::new(
                format!("mcg x={x} n={n} a={a}"),
                Arc::new(move |j, prec| {
                    let xjn = Float::with_val(prec, x + j as f64 * n);
                    let addend = Float::with_val(prec, a) * &xjn
                        + Float::with_val(prec, (n + a) * (n + a));
                    let mut t = TermRecord::new(j, addend);
                    t.multiplier = xjn;
                    t
                }),
            ))
        }
        other => Err(err(format!("unknown term generator {other:?}"))),
    }
}

/// Parse a full term-stream specification (base generator plus modifiers).
pub fn parse_terms(spec: &str) -> Result<TermStream> {
    let mut pieces = spec.split('/');
    let mut stream = base_stream(pieces.next().unwrap_or(""))?;
    for modifier in pieces {
        let (k, v) = modifier
            .split_once('=')
            .ok_or_else(|| err(format!("bad modifier {modifier:?}")))?;
        match k {
            "b" => {
                let b = v
                    .parse::<f64>()
                    .map_err(|e| err(format!("bad multiplier: {e}")))?;
                stream = stream.with_multiplier(b);
            }
            "e" => {
                let e = v
                    .parse::<f64>()
                    .map_err(|e| err(format!("bad exponent: {e}")))?;
                stream = stream.with_exponent(e);
            }
            "signs" => {
                let (prefix, cycle) = parse_signs(v)?;
                stream = stream.with_signs(prefix, cycle);
            }
            other => return Err(err(format!("unknown modifier {other:?}"))),
        }
    }
    Ok(stream)
}

/// Parse a seed specification at the given precision.
pub fn parse_seed(spec: &str, prec: u32) -> Result<Seed> {
    if spec == "inf" {
        return Ok(Seed::Infinity);
    }
    if let Some(v) = spec.strip_prefix("sqrt:") {
        let v = Float::parse(v).map_err(|e| err(format!("bad seed: {e}")))?;
        return Ok(Seed::Finite(Float::with_val(prec, v).sqrt()));
    }
    let v = Float::parse(spec).map_err(|e| err(format!("bad seed: {e}")))?;
    Ok(Seed::Finite(Float::with_val(prec, v)))
}
