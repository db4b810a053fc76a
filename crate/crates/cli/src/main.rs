use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fpalg::corpus::{Corpus, GeneratorSpec};
use fpalg::ideals::{coset_of, ideal_contains, quotient_seminorm_bounds, IdealHandle, DEFAULT_K_BUDGET};
use fpalg::membership::{classify, CoefficientRule, CustomRule, DEFAULT_NMAX, DEFAULT_THRESHOLD};
use fpalg::seminorms::{envelope_metric, privalov_metric, seminorm, ENVELOPE_TOL};
use fpalg::verify::{
    check_functional_axioms, check_theorem3_first, estimate_theorem3_constant, hurwitz_closure_suite, SequenceSpec,
    VerificationReport,
};
use fpalg::{Complex64, DiskPoint, FpError, QuadConfig, SeminormFamily, SeminormSpec, SpaceParams, TruncatedSeries};
use serde_json::{json, Value};

const DEFAULT_QUAD_TOL: f64 = 1e-9;
const DEFAULT_CONTAINS_TOL: f64 = 1e-12;

/// Seminorms, metrics, membership and maximal ideals of the algebras F^p.
#[derive(Parser, Debug)]
#[command(name = "fpalg", version)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance: quadrature tolerance, or the containment tolerance of `ideal-check`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for generated corpora and random sequences.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SeriesArg {
    /// Series as a JSON file path or inline JSON `{"coeffs": [[re, im], ...]}`.
    #[arg(long)]
    series: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one seminorm of a series.
    Seminorm {
        #[command(flatten)]
        input: SeriesArg,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Family::Coeff)]
        family: Family,
    },
    /// Distance between two series.
    Metric {
        #[command(flatten)]
        input: SeriesArg,
        /// The second series (path or inline JSON).
        #[arg(long)]
        other: String,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = MetricKind::Privalov)]
        kind: MetricKind,
    },
    /// Classify a coefficient rule against the coefficient-growth criterion.
    Classify {
        #[arg(long, value_enum)]
        rule: RuleKind,
        /// Comma-separated rule parameters.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        params: Vec<f64>,
        /// Multiply the rule by this positive constant.
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: usize,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Test whether a series lies in the ideal of functions vanishing at lambda.
    IdealCheck {
        #[command(flatten)]
        input: SeriesArg,
        #[command(flatten)]
        lambda: LambdaArg,
    },
    /// Emit A with f = f(lambda) + A(z)(z - lambda) as series JSON.
    Factor {
        #[command(flatten)]
        input: SeriesArg,
        #[command(flatten)]
        lambda: LambdaArg,
    },
    /// Bracket the quotient seminorm of f modulo the ideal at lambda.
    QuotientNorm {
        #[command(flatten)]
        input: SeriesArg,
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = DEFAULT_K_BUDGET)]
        kbudget: usize,
    },
    /// Run a verification harness and emit its report.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, default_value_t = 1000)]
        corpus_size: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Point of the ideal for `functional` and `hurwitz`.
        #[arg(long, allow_hyphen_values = true, default_value = "0.5,0")]
        lambda: String,
        /// Radius for `hurwitz`.
        #[arg(long, default_value_t = 0.8)]
        r: f64,
        #[arg(long, value_enum, default_value_t = Sequence::Linear)]
        sequence: Sequence,
        #[arg(long, default_value_t = 32)]
        kmax: usize,
        /// Also write per-entry margins as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate a seeded random corpus.
    GenCorpus {
        #[arg(long, default_value_t = 100)]
        corpus_size: usize,
        #[arg(long, default_value_t = 256)]
        max_degree: usize,
    },
}

#[derive(Args, Debug)]
struct LambdaArg {
    /// Point of the unit disk as `re,im` (or `re`).
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Coeff,
    Integral,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MetricKind {
    Privalov,
    Envelope,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RuleKind {
    PowerTable,
    Geometric,
    StretchedExp,
    StretchedExpDamped,
    PowerLaw,
    ExpLogSquared,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Theorem {
    T3First,
    T3Constant,
    Functional,
    Hurwitz,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Sequence {
    Linear,
    Constant,
    Random,
}

enum Failure {
    Usage(String),
    Compute(FpError),
}

impl From<FpError> for Failure {
    fn from(e: FpError) -> Self {
        match e {
            FpError::Accuracy { .. } => Failure::Compute(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return fail(2, json!({"error": "usage", "message": msg.trim_end()}));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => fail(2, json!({"error": "usage", "message": message})),
        Err(Failure::Compute(FpError::Accuracy { what, residual, nodes })) => fail(
            3,
            json!({"error": "accuracy", "what": what, "residual": finite_or_null(residual), "nodes": nodes}),
        ),
        Err(Failure::Compute(e)) => fail(3, json!({"error": "accuracy", "message": e.to_string()})),
    }
}

fn fail(code: u8, object: Value) -> ExitCode {
    eprintln!("{object}");
    ExitCode::from(code)
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(usage(format!("--tol {tol} must be finite and nonnegative")));
        }
    }
    let quad = || -> Outcome<QuadConfig> { Ok(QuadConfig::with_tol(cli.tol.unwrap_or(DEFAULT_QUAD_TOL))?) };

    let output = match &cli.command {
        Command::Seminorm { input, p, c, family } => {
            let f = read_series(&input.series)?;
            let sp = SpaceParams::new(*p)?;
            let family = match family {
                Family::Coeff => SeminormFamily::Coefficient,
                Family::Integral => SeminormFamily::Integral,
            };
            let est = seminorm(&f, sp, SeminormSpec::new(family, *c)?, &quad()?)?;
            to_json(&est)
        }
        Command::Metric { input, other, p, kind } => {
            let f = read_series(&input.series)?;
            let g = read_series(other)?;
            let sp = SpaceParams::new(*p)?;
            match kind {
                MetricKind::Privalov => to_json(&privalov_metric(&f, &g, sp, &quad()?)?),
                MetricKind::Envelope => {
                    to_json(&envelope_metric(&f, &g, sp, cli.tol.unwrap_or(ENVELOPE_TOL))?)
                }
            }
        }
        Command::Classify {
            rule,
            params,
            scale,
            p,
            nmax,
            threshold,
        } => {
            let mut rule = build_rule(*rule, params)?;
            if let Some(m) = scale {
                rule = rule.scaled(*m);
            }
            let verdict = classify(&rule, SpaceParams::new(*p)?, *nmax, *threshold)?;
            let mut value = to_json(&verdict);
            value["rule"] = to_json(&rule);
            value
        }
        Command::IdealCheck { input, lambda } => {
            let f = read_series(&input.series)?;
            let ideal = IdealHandle::new(parse_lambda(&lambda.lambda)?);
            let (contains, value) = ideal_contains(ideal, &f, cli.tol.unwrap_or(DEFAULT_CONTAINS_TOL))?;
            json!({"contains": contains, "value": [value.re, value.im]})
        }
        Command::Factor { input, lambda } => {
            let f = read_series(&input.series)?;
            let ideal = IdealHandle::new(parse_lambda(&lambda.lambda)?);
            to_json(&coset_of(&f, ideal).quotient)
        }
        Command::QuotientNorm {
            input,
            lambda,
            r,
            kbudget,
        } => {
            let f = read_series(&input.series)?;
            let ideal = IdealHandle::new(parse_lambda(&lambda.lambda)?);
            to_json(&quotient_seminorm_bounds(&f, ideal, *r, *kbudget)?)
        }
        Command::Verify {
            theorem,
            corpus_size,
            p,
            c,
            lambda,
            r,
            sequence,
            kmax,
            csv,
        } => {
            let report = run_verify(cli, *theorem, *corpus_size, *p, *c, lambda, *r, *sequence, *kmax, &quad()?)?;
            if let Some(path) = csv {
                fs::write(path, report.margins_csv())
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            to_json(&report)
        }
        Command::GenCorpus {
            corpus_size,
            max_degree,
        } => to_json(&Corpus::generate(
            cli.seed,
            *corpus_size,
            GeneratorSpec::with_max_degree(*max_degree),
        )?),
    };

    let text = serde_json::to_string_pretty(&output).expect("serializable output") + "\n";
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    cli: &Cli,
    theorem: Theorem,
    corpus_size: usize,
    p: f64,
    c: f64,
    lambda: &str,
    r: f64,
    sequence: Sequence,
    kmax: usize,
    cfg: &QuadConfig,
) -> Outcome<VerificationReport> {
    let sp = SpaceParams::new(p)?;
    let corpus = || -> Outcome<Corpus> {
        if corpus_size == 0 {
            return Err(usage("--corpus-size must be positive"));
        }
        Ok(Corpus::generate(cli.seed, corpus_size, GeneratorSpec::default())?)
    };
    let report = match theorem {
        Theorem::T3First => check_theorem3_first(&corpus()?, sp, c, cfg)?,
        Theorem::T3Constant => estimate_theorem3_constant(&corpus()?, sp, c, cfg)?,
        Theorem::Functional => check_functional_axioms(&corpus()?, parse_lambda(lambda)?, sp, c)?,
        Theorem::Hurwitz => {
            let spec = match sequence {
                Sequence::Linear => SequenceSpec::Linear,
                Sequence::Constant => SequenceSpec::Constant,
                Sequence::Random => SequenceSpec::Random {
                    degree: 16,
                    seed: cli.seed,
                },
            };
            hurwitz_closure_suite(parse_lambda(lambda)?, r, &spec, kmax)?
        }
    };
    Ok(report)
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable value")
}

fn read_series(arg: &str) -> Outcome<TruncatedSeries> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| usage(format!("cannot read series file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid series JSON: {e}")))
}

fn parse_lambda(arg: &str) -> Outcome<DiskPoint> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| usage(format!("--lambda expects `re,im`, got `{arg}`")))
    };
    let z = match parts.as_slice() {
        [re] => Complex64::new(parse(re)?, 0.0),
        [re, im] => Complex64::new(parse(re)?, parse(im)?),
        _ => return Err(usage(format!("--lambda expects `re,im`, got `{arg}`"))),
    };
    Ok(DiskPoint::new(z)?)
}

fn build_rule(kind: RuleKind, params: &[f64]) -> Outcome<CoefficientRule> {
    let expect = |n: usize, names: &str| -> Outcome<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(usage(format!("rule {kind:?} takes --params {names}")))
        }
    };
    let rule = match kind {
        RuleKind::PowerTable => {
            if params.is_empty() {
                return Err(usage("rule power-table takes --params a0,a1,..."));
            }
            CoefficientRule::PowerTable { table: params.to_vec() }
        }
        RuleKind::Geometric => {
            expect(1, "rho")?;
            CoefficientRule::Geometric { rho: params[0] }
        }
        RuleKind::StretchedExp => {
            expect(2, "eps,beta")?;
            CoefficientRule::StretchedExp {
                eps: params[0],
                beta: params[1],
            }
        }
        RuleKind::StretchedExpDamped => {
            expect(1, "beta")?;
            CoefficientRule::StretchedExpDamped { beta: params[0] }
        }
        RuleKind::PowerLaw => {
            expect(1, "exponent")?;
            CoefficientRule::Custom {
                rule: CustomRule::PowerLaw { exponent: params[0] },
            }
        }
        RuleKind::ExpLogSquared => {
            expect(0, "(none)")?;
            CoefficientRule::Custom {
                rule: CustomRule::ExpLogSquared,
            }
        }
    };
    rule.validate()?;
    Ok(rule)
}
