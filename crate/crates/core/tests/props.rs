//! Property tests for structural invariants of the evaluation engine and
//! the trinomial solver.

use confcomp_core::engine::{
    eval_backward, eval_forward, CompositionKind, EvalRequest, Seed, TermStream,
};
use confcomp_core::solver::{hoffmann_solve, classify_approach, Approach, HoffmannAlgorithm, Trinomial};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Backward and forward evaluation agree for constant streams.
    #[test]
    fn backward_equals_forward_for_constant_streams(
        a in 0.1f64..50.0,
        depth in 4u64..40,
    ) {
        let req = EvalRequest::new(
            CompositionKind::SquareRoot,
            TermStream::constant(a),
            depth,
        )
        .with_precision(192);
        let b = eval_backward(&req).unwrap();
        let f = eval_forward(&req).unwrap();
        let err = Float::with_val(192, &b - &f).abs();
        prop_assert!(err < 1e-40, "backward {b} != forward {f}");
    }

    /// For nonnegative terms the approximants increase with depth and stay
    /// below the limit.
    #[test]
    fn approximants_increase_and_bracket_the_limit(
        a in 0.1f64..20.0,
        depth in 4u64..30,
    ) {
        let value = |d: u64| {
            let req = EvalRequest::new(
                CompositionKind::SquareRoot,
                TermStream::constant(a),
                d,
            )
            .with_precision(192);
            eval_backward(&req).unwrap()
        };
        let shallow = value(depth);
        let deeper = value(depth + 1);
        // Closed-form limit of √(a+√(a+⋯)).
        let limit = ((Float::with_val(192, a) * 4u32 + 1u32).sqrt() + 1u32) / 2u32;
        // Allow rounding slack once the approximant has saturated 192 bits.
        let slack = Float::with_val(192, 2).pow(-150i32);
        prop_assert!(shallow <= Float::with_val(192, &deeper + &slack));
        prop_assert!(deeper <= limit + slack);
    }

    /// Seeding with the separately evaluated tail reproduces the full nest.
    #[test]
    fn tail_seeding_splits_the_evaluation(
        a in 0.5f64..10.0,
        step in 0.1f64..2.0,
        head in 2u64..10,
        tail in 2u64..10,
    ) {
        let stream = TermStream::arithmetic(a, step);
        let full = eval_backward(
            &EvalRequest::new(CompositionKind::SquareRoot, stream.clone(), head + tail + 1)
                .with_precision(192),
        )
        .unwrap();
        let tail_value = eval_backward(
            &EvalRequest::new(CompositionKind::SquareRoot, stream.offset(head + 1), tail)
                .with_precision(192),
        )
        .unwrap();
        let split = eval_backward(
            &EvalRequest::new(CompositionKind::SquareRoot, stream, head)
                .with_precision(192)
                .with_seed(Seed::Finite(tail_value)),
        )
        .unwrap();
        let err = Float::with_val(192, &full - &split).abs();
        prop_assert!(err < 1e-40, "full {full} != split {split}");
    }

    /// Raising the working precision does not move the value beyond the
    /// coarser precision's resolution.
    #[test]
    fn precision_scaling_is_consistent(
        a in 0.1f64..30.0,
        depth in 4u64..40,
    ) {
        let at = |prec: u32| {
            eval_backward(
                &EvalRequest::new(CompositionKind::SquareRoot, TermStream::constant(a), depth)
                    .with_precision(prec),
            )
            .unwrap()
        };
        let coarse = at(128);
        let fine = at(256);
        let err = Float::with_val(256, &coarse - &fine).abs();
        prop_assert!(err < 1e-30, "coarse {coarse} vs fine {fine}");
    }

    /// Hoffmann's interval rule: with p < 0 < q and two positive real roots,
    /// Algorithm A's root lands inside the bound and Algorithm B's outside.
    #[test]
    fn hoffmann_interval_rule(
        // x³ + p·x + q with p < 0, q > 0 has two positive roots when
        // 4|p|³ > 27q²; sample p and scale q under that discriminant.
        p_abs in 1.0f64..20.0,
        q_frac in 0.05f64..0.95,
    ) {
        let q_max = (4.0 * p_abs.powi(3) / 27.0).sqrt();
        let q = q_frac * q_max;
        let t = Trinomial::new(3, 1, -p_abs, q).unwrap();
        let tol = Float::with_val(192, 1e-25);
        let a = hoffmann_solve(&t, HoffmannAlgorithm::A, None, 2000, &tol, 192).unwrap();
        let b = hoffmann_solve(&t, HoffmannAlgorithm::B, None, 2000, &tol, 192).unwrap();
        prop_assert!(a.inside_bound, "A root {} outside bound", a.root);
        prop_assert!(!b.inside_bound, "B root {} inside bound", b.root);
        prop_assert!(a.root < b.root);
        prop_assert!(a.residual.clone().abs() < 1e-20);
        prop_assert!(b.residual.clone().abs() < 1e-20);
    }

    /// Sancery's sign law: iterating x ← c + s·x with |s| < 1 approaches the
    /// fixed point monotonically for s > 0 and alternately for s < 0.
    #[test]
    fn sancery_sign_law_for_linear_maps(
        c in -5.0f64..5.0,
        s_mag in 0.1f64..0.9,
        negative in any::<bool>(),
        x0 in -10.0f64..10.0,
    ) {
        let s = if negative { -s_mag } else { s_mag };
        let fixed = c / (1.0 - s);
        prop_assume!((x0 - fixed).abs() > 1e-3);
        let mut x = Float::with_val(128, x0);
        let mut trace = vec![x.clone()];
        for _ in 0..24 {
            x = Float::with_val(128, c) + Float::with_val(128, s) * &x;
            trace.push(x.clone());
        }
        let expected = if s > 0.0 { Approach::Monotone } else { Approach::Oscillating };
        prop_assert_eq!(classify_approach(&trace), expected);
    }
}
