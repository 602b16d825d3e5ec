//! `confcomp`: evaluate continued function compositions, expand numbers in
//! composition-based digit systems, classify convergence, estimate π, and
//! solve trinomials by composition iterations.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;

use confcomp_core::criteria::DifferentiableMapSpec;
use confcomp_core::engine::{estimate_limit, eval_backward, EvalRequest};
use confcomp_core::parse::{parse_kind, parse_seed, parse_terms};
use confcomp_core::radicals::{builtin_corpus, parse_corpus, run_identity_corpus};
use confcomp_core::solver::{
    astrand_transform, hoffmann_solve, iterate_fixed_point, HoffmannAlgorithm, Trinomial,
};
use confcomp_core::{decimal_to_float, float_to_decimal, Error};
use rug::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "confcomp", version, about)]
struct Cli {
    /// Working precision in significand bits.
    #[arg(long, global = true, env = "CONFCOMP_PRECISION", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(53..))]
    precision: u32,
    /// Convergence tolerance (decimal).
    #[arg(long, global = true, default_value = "1e-12")]
    tolerance: String,
    /// Maximum depth for limit estimation.
    #[arg(long, global = true, default_value_t = 64,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_depth: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a composition at a fixed depth and print the approximant trace.
    Eval(EvalArgs),
    /// Deepen the evaluation until the approximants settle below tolerance.
    Limit(LimitArgs),
    /// Run convergence criteria against a term stream.
    Classify(ClassifyArgs),
    /// Expand a real number in a composition-based digit system.
    #[command(subcommand)]
    Expand(ExpandCommand),
    /// Estimate π by a product route, or bracket it with polygon bounds.
    Pi(PiArgs),
    /// Evaluate Osler's product for (x−1)/log x.
    Log(LogArgs),
    /// The lemniscate constant via Levin's product.
    Lemniscate(LemniscateArgs),
    /// Root finding through composition iterations.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// The registry of named constants.
    #[command(subcommand)]
    Constants(ConstantsCommand),
    /// Identity corpus operations.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Composition kind: sqrt, root:R, power:P, recroot:R, cot, log:B, fraction.
    #[arg(long, default_value = "sqrt")]
    kind: String,
    /// Term stream spec, e.g. `const:a=2`, `arith:start=1,step=1`, `ramanujan1`.
    #[arg(long)]
    terms: String,
    #[arg(long, default_value_t = 32)]
    depth: u64,
    /// Seed: `inf`, a decimal, or `sqrt:V` (defaults per kind).
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, default_value = "sqrt")]
    kind: String,
    #[arg(long)]
    terms: String,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Criterion name or `all`.
    #[arg(long, default_value = "all")]
    criterion: String,
    #[arg(long)]
    terms: String,
    /// Number of terms to sample.
    #[arg(long, default_value_t = 28)]
    n: u64,
}

#[derive(Debug, Subcommand)]
enum ExpandCommand {
    /// Lehmer's continued cotangent digits.
    Cot {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        digits: usize,
    },
    /// f-expansion digits (`reciprocal` or `radix:P`).
    Fexp {
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "reciprocal")]
        system: String,
        #[arg(long, default_value_t = 16)]
        digits: usize,
    },
    /// Greedy β-expansion digits.
    Beta {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 16)]
        digits: usize,
    },
    /// Signed √(2±√(2±⋯)) representation.
    Signs {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 32)]
        depth: usize,
    },
    /// Sizer's continued-root digits.
    Sizer {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 24)]
        depth: usize,
    },
}

#[derive(Debug, Args)]
struct PiArgs {
    /// catalan, viete, euler, osler, or bounds.
    #[arg(long)]
    method: String,
    /// Number of product factors (or polygon doublings for bounds).
    #[arg(long, default_value_t = 20)]
    n: u32,
}

#[derive(Debug, Args)]
struct LogArgs {
    #[arg(long)]
    x: String,
    #[arg(long, default_value_t = 64)]
    n: u32,
}

#[derive(Debug, Args)]
struct LemniscateArgs {
    /// Number of Levin product factors.
    #[arg(long, default_value_t = 24)]
    n: u32,
}

#[derive(Debug, Subcommand)]
enum SolveCommand {
    /// Hoffmann's iterations for x^m + p·x^n + q = 0.
    Trinomial {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n_exp: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        /// `a` (inner root), `b` (outer root), or `astrand`.
        #[arg(long, default_value = "a")]
        algorithm: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
    },
    /// Fixed-point iteration of a named map.
    FixedPoint {
        /// Map spec: `sqrt:a=V`, `linear:c=V,s=V`, `kepler:m=V,e=V`, or `cos`.
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        x0: f64,
        /// Accelerate with Newton's method (needs an analytic derivative).
        #[arg(long)]
        newton: bool,
    },
}

#[derive(Debug, Subcommand)]
enum ConstantsCommand {
    /// List registered constants.
    List,
    /// Compute one constant to the working precision.
    Get { name: String },
}

#[derive(Debug, Subcommand)]
enum CorpusCommand {
    /// Verify identity records (the built-in corpus, or a corpus file).
    Run { file: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let prec = cli.precision;
    let tolerance = decimal_to_float(&cli.tolerance, prec)?;
    match &cli.command {
        Command::Eval(args) => eval_command(cli, args),
        Command::Limit(args) => limit_command(cli, args),
        Command::Classify(args) => classify_command(cli, args),
        Command::Expand(cmd) => expand_command(cli, cmd),
        Command::Pi(args) => pi_command(cli, args),
        Command::Log(args) => {
            let x = decimal_to_float(&args.x, prec)?;
            let v = confcomp_core::products::osler_log_product(&x, args.n)?;
            print_value(cli, "log-product", &v);
            Ok(())
        }
        Command::Lemniscate(args) => {
            let l = Float::with_val(prec, 2)
                / confcomp_core::products::levin_lemniscate_product(args.n, prec);
            print_value(cli, "lemniscate", &l);
            Ok(())
        }
        Command::Solve(cmd) => solve_command(cli, cmd, &tolerance),
        Command::Constants(cmd) => constants_command(cli, cmd),
        Command::Corpus(cmd) => corpus_command(cli, cmd),
    }
}

fn build_request(
    kind: &str,
    terms: &str,
    seed: &Option<String>,
    depth: u64,
    prec: u32,
) -> Result<EvalRequest, Error> {
    let kind = parse_kind(kind)?;
    let stream = parse_terms(terms)?;
    let mut req = EvalRequest::new(kind, stream, depth).with_precision(prec);
    if let Some(s) = seed {
        req = req.with_seed(parse_seed(s, prec)?);
    }
    Ok(req)
}

fn trace_rows(values: &[Float], deltas: &[Float]) -> Vec<Value> {
    values
        .iter()
        .zip(deltas)
        .enumerate()
        .map(|(d, (v, delta))| {
            json!({
                "depth": d,
                "value": float_to_decimal(v),
                "delta": float_to_decimal(delta),
            })
        })
        .collect()
}

fn print_trace_table(values: &[Float], deltas: &[Float]) {
    println!("depth,value,delta");
    for (d, (v, delta)) in values.iter().zip(deltas).enumerate() {
        println!("{d},{},{}", float_to_decimal(v), float_to_decimal(delta));
    }
}

fn eval_command(cli: &Cli, args: &EvalArgs) -> Result<(), Error> {
    let prec = cli.precision;
    let mut values = Vec::new();
    let mut deltas = Vec::new();
    for d in 0..=args.depth {
        let req = build_request(&args.kind, &args.terms, &args.seed, d, prec)?;
        let v = eval_backward(&req)?;
        deltas.push(if let Some(prev) = values.last() {
            Float::with_val(prec, &v - prev).abs()
        } else {
            Float::new(prec)
        });
        values.push(v);
    }
    let value = values.last().expect("depth is nonnegative");
    match cli.output {
        Output::Text => println!("value = {}", float_to_decimal(value)),
        Output::Csv => print_trace_table(&values, &deltas),
        Output::Json => {
            let doc = json!({
                "command": "eval",
                "kind": args.kind,
                "terms": args.terms,
                "depth": args.depth,
                "value": float_to_decimal(value),
                "trace": trace_rows(&values, &deltas),
            });
            println!("{doc}");
        }
    }
    Ok(())
}

fn limit_command(cli: &Cli, args: &LimitArgs) -> Result<(), Error> {
    let prec = cli.precision;
    let tolerance = decimal_to_float(&cli.tolerance, prec)?;
    let req = build_request(&args.kind, &args.terms, &args.seed, 2, prec)?;
    let (value, trace) = estimate_limit(&req, &tolerance, cli.max_depth)?;
    match cli.output {
        Output::Text => {
            match trace.converged_at {
                Some(d) => println!("limit = {} (converged at depth {d})", float_to_decimal(&value)),
                None => println!(
                    "limit estimate = {} (not converged within depth {})",
                    float_to_decimal(&value),
                    cli.max_depth
                ),
            }
        }
        Output::Csv => print_trace_table(&trace.values, &trace.deltas),
        Output::Json => {
            let doc = json!({
                "command": "limit",
                "kind": args.kind,
                "terms": args.terms,
                "value": float_to_decimal(&value),
                "converged_at": trace.converged_at,
                "tolerance": float_to_decimal(&trace.tolerance_used),
                "trace": trace_rows(&trace.values, &trace.deltas),
            });
            println!("{doc}");
        }
    }
    Ok(())
}

fn classify_command(cli: &Cli, args: &ClassifyArgs) -> Result<(), Error> {
    let stream = parse_terms(&args.terms)?;
    let reports = confcomp_core::criteria::classify(&args.criterion, &stream, args.n)?;
    match cli.output {
        Output::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "criterion": r.criterion,
                        "verdict": r.verdict.to_string(),
                        "statistic": r.statistic.to_string(),
                        "sample_depth": r.sample_depth,
                        "notes": r.notes,
                    })
                })
                .collect();
            println!("{}", json!({ "command": "classify", "reports": rows }));
        }
        _ => {
            for r in &reports {
                println!("{}: {} ({})", r.criterion, r.verdict, r.notes);
            }
        }
    }
    Ok(())
}

fn expand_command(cli: &Cli, cmd: &ExpandCommand) -> Result<(), Error> {
    let prec = cli.precision;
    match cmd {
        ExpandCommand::Cot { x, digits } => {
            let work = confcomp_core::cotangent::cot_working_precision(*digits).max(prec);
            let xv = decimal_to_float(x, work)?;
            let d = confcomp_core::cotangent::cot_encode(&xv, *digits)?;
            let list: Vec<String> = d.digits.iter().map(|a| a.to_string()).collect();
            emit_digits(cli, "cot", &list, d.terminated)
        }
        ExpandCommand::Fexp { x, system, digits } => {
            let sys = match system.as_str() {
                "reciprocal" => confcomp_core::fexp::FExpansionSystem::reciprocal(),
                s => match s.strip_prefix("radix:") {
                    Some(p) => {
                        let p: u32 = p
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad radix {s:?}")))?;
                        confcomp_core::fexp::FExpansionSystem::radix(p)
                    }
                    None => return Err(Error::Parse(format!("unknown f-system {s:?}"))),
                },
            };
            let xv = decimal_to_float(x, prec)?;
            let d = confcomp_core::fexp::f_encode(&sys, &xv, *digits)?;
            let list: Vec<String> = d.digits.iter().map(|a| a.to_string()).collect();
            emit_digits(cli, "fexp", &list, false)
        }
        ExpandCommand::Beta { beta, x, digits } => {
            let b = decimal_to_float(beta, prec)?;
            let xv = decimal_to_float(x, prec)?;
            let d = confcomp_core::fexp::beta_encode(&b, &xv, *digits)?;
            let list: Vec<String> = d.digits.iter().map(|a| a.to_string()).collect();
            emit_digits(cli, "beta", &list, false)
        }
        ExpandCommand::Signs { x, depth } => {
            let xv = decimal_to_float(x, prec)?;
            let seq = confcomp_core::radicals::encode_sign_nest(&xv, *depth);
            let pattern: String = seq
                .signs
                .iter()
                .map(|s| if *s >= 0 { '+' } else { '-' })
                .collect();
            emit_digits(cli, "signs", &[pattern], false)
        }
        ExpandCommand::Sizer { x, depth } => {
            let xv = decimal_to_float(x, prec)?;
            let d = confcomp_core::radicals::sizer_encode(&xv, *depth)?;
            let mut list = vec![d.head.to_string()];
            list.extend(d.tail.iter().map(|t| t.to_string()));
            emit_digits(cli, "sizer", &list, false)
        }
    }
}

fn emit_digits(cli: &Cli, system: &str, digits: &[String], terminated: bool) -> Result<(), Error> {
    match cli.output {
        Output::Json => {
            let doc = json!({
                "command": "expand",
                "system": system,
                "digits": digits,
                "terminated": terminated,
            });
            println!("{doc}");
        }
        _ => {
            let mut line = digits.join(",");
            if terminated {
                line.push_str(" (terminated)");
            }
            println!("{line}");
        }
    }
    Ok(())
}

fn pi_command(cli: &Cli, args: &PiArgs) -> Result<(), Error> {
    let prec = cli.precision;
    if args.method == "bounds" {
        let (lo, hi) = confcomp_core::products::polygon_bounds_pi(args.n, prec)?;
        match cli.output {
            Output::Json => {
                let doc = json!({
                    "command": "pi",
                    "method": "bounds",
                    "n": args.n,
                    "lower": float_to_decimal(&lo),
                    "upper": float_to_decimal(&hi),
                });
                println!("{doc}");
            }
            _ => println!(
                "{} < pi < {}",
                float_to_decimal(&lo),
                float_to_decimal(&hi)
            ),
        }
        return Ok(());
    }
    let v = confcomp_core::products::pi_estimate(&args.method, args.n, prec)?;
    print_value(cli, &format!("pi-{}", args.method), &v);
    Ok(())
}

fn solve_command(cli: &Cli, cmd: &SolveCommand, tolerance: &Float) -> Result<(), Error> {
    let prec = cli.precision;
    match cmd {
        SolveCommand::Trinomial {
            m,
            n_exp,
            p,
            q,
            algorithm,
            x0,
        } => {
            let t = Trinomial::new(*m, *n_exp, *p, *q)?;
            let (root, residual, extra) = match algorithm.as_str() {
                "a" | "b" => {
                    let alg = if algorithm == "a" {
                        HoffmannAlgorithm::A
                    } else {
                        HoffmannAlgorithm::B
                    };
                    let s = hoffmann_solve(&t, alg, *x0, 10 * cli.max_depth, tolerance, prec)?;
                    let extra = json!({
                        "iterations": s.iterations,
                        "inside_bound": s.inside_bound,
                    });
                    (s.root, s.residual, extra)
                }
                "astrand" => {
                    if *n_exp != 1 {
                        return Err(Error::Domain(
                            "astrand needs the x^1 middle term".into(),
                        ));
                    }
                    let (a, sign) = (-p, if *q >= 0.0 { 1 } else { -1 });
                    let s = astrand_transform(
                        *m,
                        a,
                        q.abs(),
                        sign,
                        10 * cli.max_depth,
                        tolerance,
                        prec,
                    )?;
                    let extra = json!({
                        "c": float_to_decimal(&s.c),
                        "nest_limit": float_to_decimal(&s.nest_limit),
                    });
                    (s.root, s.residual, extra)
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown trinomial algorithm {other:?}"
                    )))
                }
            };
            match cli.output {
                Output::Json => {
                    let doc = json!({
                        "command": "solve-trinomial",
                        "root": float_to_decimal(&root),
                        "residual": float_to_decimal(&residual),
                        "details": extra,
                    });
                    println!("{doc}");
                }
                _ => println!(
                    "root = {} (residual {})",
                    float_to_decimal(&root),
                    float_to_decimal(&residual)
                ),
            }
            Ok(())
        }
        SolveCommand::FixedPoint { map, x0, newton } => {
            let spec = parse_map(map)?;
            let r = iterate_fixed_point(
                &spec,
                &Float::with_val(prec, *x0),
                10 * cli.max_depth,
                tolerance,
                *newton,
            )?;
            match cli.output {
                Output::Json => {
                    let doc = json!({
                        "command": "solve-fixed-point",
                        "root": float_to_decimal(&r.root),
                        "iterations": r.iterations,
                        "approach": format!("{:?}", r.approach),
                    });
                    println!("{doc}");
                }
                _ => println!(
                    "root = {} ({:?} approach, {} iterations)",
                    float_to_decimal(&r.root),
                    r.approach,
                    r.iterations
                ),
            }
            Ok(())
        }
    }
}

fn parse_map(spec: &str) -> Result<DifferentiableMapSpec, Error> {
    fn kv(body: &str) -> Result<Vec<(String, f64)>, Error> {
        body.split(',')
            .map(|pair| {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad map parameter {pair:?}")))?;
                let v: f64 = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number {v:?}")))?;
                Ok((k.to_string(), v))
            })
            .collect()
    }
    fn get(params: &[(String, f64)], key: &str) -> Result<f64, Error> {
        params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Parse(format!("missing map parameter {key:?}")))
    }
    if spec == "cos" {
        return Ok(DifferentiableMapSpec {
            f: Box::new(|x: &Float| x.clone().cos()),
            df: Some(Box::new(|x: &Float| -x.clone().sin())),
            description: "cos x".into(),
        });
    }
    let (head, body) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("unknown map {spec:?}")))?;
    let params = kv(body)?;
    match head {
        "sqrt" => {
            let a = get(&params, "a")?;
            Ok(DifferentiableMapSpec {
                f: Box::new(move |x: &Float| (Float::with_val(x.prec(), a) + x).sqrt()),
                df: Some(Box::new(move |x: &Float| {
                    let s = (Float::with_val(x.prec(), a) + x).sqrt();
                    Float::with_val(x.prec(), 0.5) / s
                })),
                description: format!("sqrt({a} + x)"),
            })
        }
        "linear" => {
            let c = get(&params, "c")?;
            let s = get(&params, "s")?;
            Ok(DifferentiableMapSpec {
                f: Box::new(move |x: &Float| {
                    Float::with_val(x.prec(), c) + Float::with_val(x.prec(), s) * x
                }),
                df: Some(Box::new(move |x: &Float| Float::with_val(x.prec(), s))),
                description: format!("{c} + {s}·x"),
            })
        }
        "kepler" => {
            let m = get(&params, "m")?;
            let e = get(&params, "e")?;
            Ok(DifferentiableMapSpec {
                f: Box::new(move |x: &Float| {
                    Float::with_val(x.prec(), m) + Float::with_val(x.prec(), e) * x.clone().sin()
                }),
                df: Some(Box::new(move |x: &Float| {
                    Float::with_val(x.prec(), e) * x.clone().cos()
                })),
                description: format!("{m} + {e}·sin x"),
            })
        }
        other => Err(Error::Parse(format!("unknown map {other:?}"))),
    }
}

fn constants_command(cli: &Cli, cmd: &ConstantsCommand) -> Result<(), Error> {
    match cmd {
        ConstantsCommand::List => {
            match cli.output {
                Output::Json => {
                    let rows: Vec<Value> = confcomp_core::constants::REGISTRY
                        .iter()
                        .map(|c| {
                            json!({
                                "name": c.name,
                                "reference_digits": c.reference_digits,
                                "citation": c.citation,
                            })
                        })
                        .collect();
                    println!("{}", json!({ "command": "constants-list", "constants": rows }));
                }
                _ => {
                    for c in confcomp_core::constants::REGISTRY {
                        println!("{:12} {}  ({})", c.name, c.reference_digits, c.citation);
                    }
                }
            }
            Ok(())
        }
        ConstantsCommand::Get { name } => {
            let v = confcomp_core::constants::compute_constant(name, cli.precision)?;
            print_value(cli, name, &v);
            Ok(())
        }
    }
}

fn corpus_command(cli: &Cli, cmd: &CorpusCommand) -> Result<(), Error> {
    match cmd {
        CorpusCommand::Run { file } => {
            let records = match file {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Parse(format!("cannot read {path:?}: {e}")))?;
                    parse_corpus(&text)?
                }
                None => builtin_corpus(),
            };
            let report = run_identity_corpus(&records, cli.precision.max(192));
            match cli.output {
                Output::Json => {
                    let rows: Vec<Value> = report
                        .results
                        .iter()
                        .map(|r| {
                            json!({
                                "id": r.id,
                                "passed": r.passed,
                                "value": float_to_decimal(&r.value),
                                "expected": float_to_decimal(&r.expected),
                                "error": float_to_decimal(&r.error),
                            })
                        })
                        .collect();
                    let doc = json!({
                        "command": "corpus-run",
                        "passed": report.passed(),
                        "total": report.results.len(),
                        "records": rows,
                    });
                    println!("{doc}");
                }
                _ => {
                    for r in &report.results {
                        println!(
                            "{} {} (error {})",
                            if r.passed { "pass" } else { "FAIL" },
                            r.id,
                            float_to_decimal(&r.error)
                        );
                    }
                    println!("passed {}/{}", report.passed(), report.results.len());
                }
            }
            if report.all_passed() {
                Ok(())
            } else {
                Err(Error::NoConvergence(format!(
                    "{} of {} corpus records failed",
                    report.results.len() - report.passed(),
                    report.results.len()
                )))
            }
        }
    }
}

fn print_value(cli: &Cli, label: &str, v: &Float) {
    match cli.output {
        Output::Json => {
            println!(
                "{}",
                json!({ "command": label, "value": float_to_decimal(v) })
            );
        }
        _ => println!("{}", float_to_decimal(v)),
    }
}
