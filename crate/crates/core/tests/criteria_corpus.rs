//! Randomized cross-check: every decisive classifier verdict must agree
//! with ground truth obtained by deep numerical evaluation of the nest.

use confcomp_core::criteria::{herschfeld_vijayaraghavan, polya_loglog, Verdict};
use confcomp_core::engine::{estimate_limit, CompositionKind, EvalRequest, TermRecord, TermStream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;
use std::sync::Arc;

/// `a_i = (i+1)^k`.
fn polynomial(k: u32) -> TermStream {
    TermStream::new(
        format!("(i+1)^{k}"),
        Arc::new(move |i, prec| TermRecord::new(i, Float::with_val(prec, i + 1).pow(k))),
    )
}

/// `a_i = exp(exp(β·i))`.
fn doubleexp(beta: f64) -> TermStream {
    TermStream::new(
        format!("exp(exp({beta}·i))"),
        Arc::new(move |i, prec| {
            let inner = Float::with_val(prec, beta * i as f64).exp();
            TermRecord::new(i, inner.exp())
        }),
    )
}

/// `a_i = c^(base^i)`.
fn geomexp(c: f64, base: f64) -> TermStream {
    TermStream::new(
        format!("{c}^({base}^i)"),
        Arc::new(move |i, prec| {
            let e = Float::with_val(prec, base).pow(Float::with_val(prec, i));
            TermRecord::new(i, Float::with_val(prec, c).pow(e))
        }),
    )
}

/// Ground truth by deepening the backward evaluation: converged when the
/// trace settles below tolerance, divergent when it never does (including
/// overflow during deepening).
fn truth_converges(stream: &TermStream) -> bool {
    let req = EvalRequest::new(CompositionKind::SquareRoot, stream.clone(), 2)
        .with_precision(192);
    let tol = Float::with_val(192, 1e-8);
    match estimate_limit(&req, &tol, 60) {
        Ok((_, trace)) => trace.converged_at.is_some(),
        Err(_) => false,
    }
}

#[test]
fn decisive_verdicts_agree_with_deep_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut decisive = 0u32;
    for case in 0..200 {
        let (name, stream) = match case % 5 {
            0 => {
                let a = rng.gen_range(0.1..10.0);
                (format!("const {a}"), TermStream::constant(a))
            }
            1 => {
                let k = rng.gen_range(1..=5u32);
                (format!("poly {k}"), polynomial(k))
            }
            2 => {
                let beta = rng.gen_range(0.2..0.6);
                (format!("doubleexp {beta}"), doubleexp(beta))
            }
            3 => {
                let beta = rng.gen_range(0.75..1.2);
                (format!("doubleexp {beta}"), doubleexp(beta))
            }
            _ => {
                let c = rng.gen_range(1.1..4.0);
                (format!("geomexp {c}"), geomexp(c, 3.0))
            }
        };
        let truth = truth_converges(&stream);
        for report in [
            herschfeld_vijayaraghavan(&stream, 28).unwrap(),
            polya_loglog(&stream, 28).unwrap(),
        ] {
            match report.verdict {
                Verdict::Converges => {
                    decisive += 1;
                    assert!(
                        truth,
                        "{name}: {} claims convergence but deep evaluation diverges",
                        report.criterion
                    );
                }
                Verdict::Diverges => {
                    decisive += 1;
                    assert!(
                        !truth,
                        "{name}: {} claims divergence but deep evaluation converges",
                        report.criterion
                    );
                }
                Verdict::Inconclusive => {}
            }
        }
    }
    assert!(decisive >= 300, "only {decisive} decisive verdicts out of 400");
}
