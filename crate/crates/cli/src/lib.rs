//! Command-line surface: equation/field ingestion, command dispatch,
//! machine-readable reports.
//!
//! Exit codes: 0 success; 1 negative verdict under --strict-verdict;
//! 2 input error; 3 internal cross-check failure.

pub mod doc;
pub mod report;

use std::io::{Read, Write};
use std::time::Instant;

use centerflow::groupops::{concat, equivalent_up_to, in_xstar, inverse};
use centerflow::integrals::{moment_via_words, IntegralEvaluator};
use centerflow::polar::{param_count, polar_reduce};
use centerflow::returnmap::{
    center_check, return_coeffs_iterated, return_coeffs_transport, VERDICT_FLOAT_TOL,
};
use centerflow::verify::run_suites;
use centerflow::words::{MomentSpec, Word};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use doc::{parse_equation, parse_field, render_equation, Mode, ParsedEquation, RescaleNote};
use report::{render_pretty, scalar_json, verdict_json, Report, REPORT_SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE_VERDICT: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "centerflow",
    version,
    about = "Exact iterated integrals, return maps, and center certification for periodic series ODEs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Truncation order N for series and word scans.
    #[arg(long, global = true, default_value_t = 8)]
    order: u32,

    /// Scalar mode: exact pi-polynomials or complex doubles.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,

    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Exit with code 1 when the verdict is negative.
    #[arg(long, global = true)]
    strict_verdict: bool,

    /// Seed for the verify suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a planar polynomial field to the radial series equation.
    Reduce {
        /// Field document path, or "-" for standard input.
        field: String,
    },
    /// Return-map coefficients c_1..c_N by both exact pipelines.
    Coeffs {
        /// Equation document path, or "-" for standard input.
        equation: String,
    },
    /// Order-N center and universal-center certification.
    CenterCheck {
        equation: String,
    },
    /// Evaluate one moment, cross-checked against its shuffle expansion.
    Moments {
        equation: String,
        /// Base indices i_1,...,i_{k+1} (comma separated).
        #[arg(long, value_delimiter = ',', required = true)]
        bases: Vec<u32>,
        /// Exponents n_1,...,n_k (comma separated; one fewer than bases).
        #[arg(long, value_delimiter = ',')]
        exps: Vec<u32>,
    },
    /// Evaluate one basic iterated integral.
    Iterated {
        equation: String,
        /// Word indices i_1,...,i_k (comma separated; empty word allowed
        /// by passing --word "").
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        word: Vec<u32>,
    },
    /// Group operations on coefficient sequences.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Run randomized self-verification suites.
    Verify {
        /// Suite name (shuffle, moments, pipeline, group, numeric,
        /// quadrature, all).
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest word/series order the identities are checked at.
        #[arg(long, default_value_t = 6)]
        max_order: u32,
        /// Random inputs per identity.
        #[arg(long, default_value_t = 10)]
        trials: u32,
    },
}

#[derive(Subcommand, Debug)]
enum GroupOp {
    /// Concatenate two sequences (a on the first half, b on the second).
    Concat { a: String, b: String },
    /// Negated time reversal.
    Inverse { a: String },
    /// Finite-order equivalence: all integrals of a * b^{-1} vanish up
    /// to the order.
    Equiv { a: String, b: String },
}

enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT_ERROR,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

/// Entry point used by main(): real stdin, stdout, stderr.
pub fn run_from_env() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run(argv, &mut std::io::stdin(), &mut stdout, &mut stderr)
}

/// Parses argv, executes the command, writes the report, and returns
/// the exit code.
pub fn run(
    argv: Vec<String>,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INPUT_ERROR
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
        }
    };
    let started = Instant::now();
    let mode: Mode = cli.mode.into();
    let mut ctx = Context {
        stdin,
        mode,
        order: cli.order,
        seed: cli.seed,
        digests: Vec::new(),
        rescale: None,
    };
    let outcome = execute(&cli.command, &mut ctx);
    match outcome {
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
        Ok(Outcome { results, negative }) => {
            let report = Report {
                schema: REPORT_SCHEMA,
                command: argv.iter().skip(1).cloned().collect(),
                mode: mode.as_str().to_owned(),
                order: Some(ctx.order),
                input_digest: if ctx.digests.is_empty() {
                    None
                } else {
                    Some(ctx.digests.join("+"))
                },
                rescaled_period: ctx.rescale.clone(),
                results,
                timing_ms: started.elapsed().as_millis() as u64,
            };
            let rendered = if cli.pretty {
                render_pretty(&report)
            } else {
                let mut s = serde_json::to_string(&report).expect("report serializes");
                s.push('\n');
                s
            };
            let _ = out.write_all(rendered.as_bytes());
            if negative && cli.strict_verdict {
                EXIT_NEGATIVE_VERDICT
            } else {
                EXIT_OK
            }
        }
    }
}

struct Context<'a> {
    stdin: &'a mut dyn Read,
    mode: Mode,
    order: u32,
    seed: u64,
    digests: Vec<String>,
    rescale: Option<RescaleNote>,
}

struct Outcome {
    results: Value,
    negative: bool,
}

impl Outcome {
    fn ok(results: Value) -> Result<Outcome, CliError> {
        Ok(Outcome {
            results,
            negative: false,
        })
    }
}

impl Context<'_> {
    fn read_input(&mut self, path: &str) -> Result<String, CliError> {
        let raw = if path == "-" {
            let mut buf = String::new();
            self.stdin
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
        };
        let mut hasher = Sha256::new();
        hasher.update(raw.as_bytes());
        self.digests.push(format!("sha256:{:x}", hasher.finalize()));
        Ok(raw)
    }

    /// Loads an equation document. A full report with an embedded
    /// equation (as produced by `reduce` or `group`) is accepted too, so
    /// commands compose through pipes.
    fn load_equation(&mut self, path: &str) -> Result<ParsedEquation, CliError> {
        let raw = self.read_input(path)?;
        let text = match serde_json::from_str::<Value>(&raw) {
            Ok(Value::Object(map)) if map.contains_key("results") => {
                let embedded = map
                    .get("results")
                    .and_then(|r| r.get("equation"))
                    .ok_or_else(|| {
                        CliError::Input("report input carries no results.equation".to_owned())
                    })?;
                serde_json::to_string(embedded).expect("value serializes")
            }
            _ => raw,
        };
        let parsed =
            parse_equation(&text, self.mode).map_err(|e| CliError::Input(e.to_string()))?;
        if self.rescale.is_none() {
            self.rescale = parsed.rescale.clone();
        }
        Ok(parsed)
    }
}

fn execute(command: &Command, ctx: &mut Context) -> Result<Outcome, CliError> {
    match command {
        Command::Reduce { field } => {
            let raw = ctx.read_input(field)?;
            let parsed = parse_field(&raw, ctx.mode).map_err(|e| CliError::Input(e.to_string()))?;
            let seq = polar_reduce(&parsed.field, ctx.order)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let label = parsed.doc.label.clone();
            let source = format!(
                "planar field of degree {} with {} monomials",
                parsed.field.degree(),
                parsed.field.monomial_count()
            );
            let equation = render_equation(&seq, label, Some(source));
            Outcome::ok(json!({
                "equation": serde_json::to_value(&equation).expect("doc serializes"),
                "field_degree": parsed.field.degree(),
                "field_is_real": parsed.field.is_real(),
                "parameter_count_at_degree": param_count(parsed.field.degree())
                    .map_err(|e| CliError::Input(e.to_string()))?,
                "support": seq.support().collect::<Vec<_>>(),
            }))
        }

        Command::Coeffs { equation } => {
            let parsed = ctx.load_equation(equation)?;
            let via_integrals = return_coeffs_iterated(&parsed.seq, ctx.order);
            let via_transport = return_coeffs_transport(&parsed.seq, ctx.order);
            if !via_integrals.agrees_with(&via_transport, VERDICT_FLOAT_TOL) {
                return Err(CliError::Internal(
                    "return-map pipelines disagree".to_owned(),
                ));
            }
            let coefficients: Vec<Value> = (1..=ctx.order)
                .map(|n| json!({ "n": n, "value": scalar_json(via_integrals.coeff(n)) }))
                .collect();
            Outcome::ok(json!({
                "coefficients": coefficients,
                "pipelines_agree": true,
            }))
        }

        Command::CenterCheck { equation } => {
            let parsed = ctx.load_equation(equation)?;
            let verdict = center_check(&parsed.seq, ctx.order)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let negative = !verdict.is_center_up_to;
            Ok(Outcome {
                results: json!({
                    "verdict": verdict_json(&verdict),
                    "in_xstar": in_xstar(&parsed.seq),
                }),
                negative,
            })
        }

        Command::Moments {
            equation,
            bases,
            exps,
        } => {
            let parsed = ctx.load_equation(equation)?;
            let spec = MomentSpec::new(bases.clone(), exps.clone()).map_err(|_| {
                CliError::Input(format!(
                    "bad moment spec: {} bases need {} exps",
                    bases.len(),
                    bases.len().saturating_sub(1)
                ))
            })?;
            let mut ev = IntegralEvaluator::new(&parsed.seq);
            let value = ev.moment(&spec);
            let expanded = moment_via_words(&spec, &mut ev);
            if !value.agrees_with(&expanded, VERDICT_FLOAT_TOL) {
                return Err(CliError::Internal(format!(
                    "moment disagrees with its shuffle expansion: {} vs {}",
                    value.render(),
                    expanded.render()
                )));
            }
            Outcome::ok(json!({
                "spec": spec.to_string(),
                "value": scalar_json(&value),
                "expansion_word_count": centerflow::words::moment_shuffle_expand(&spec).len(),
                "expansion_agrees": true,
            }))
        }

        Command::Iterated { equation, word } => {
            let parsed = ctx.load_equation(equation)?;
            let word = Word::new(word.clone())
                .map_err(|e| CliError::Input(format!("bad word: {e}")))?;
            let mut ev = IntegralEvaluator::new(&parsed.seq);
            let value = ev.iterated(&word);
            Outcome::ok(json!({
                "word": word.to_string(),
                "word_order": word.order(),
                "value": scalar_json(&value),
            }))
        }

        Command::Group { op } => execute_group(op, ctx),

        Command::Verify {
            suite,
            max_order,
            trials,
        } => {
            let reports = run_suites(suite, *max_order, *trials, ctx.seed)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut all_passed = true;
            let suites: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let checks: Vec<Value> = r
                        .checks
                        .iter()
                        .map(|c| {
                            all_passed &= c.passed();
                            json!({
                                "name": c.name,
                                "trials": c.trials,
                                "failures": c.failures,
                                "first_failure": c.first_failure,
                            })
                        })
                        .collect();
                    json!({ "suite": r.suite, "checks": checks })
                })
                .collect();
            if !all_passed {
                // still print the full report before failing
                return Err(CliError::Internal(format!(
                    "verification failures: {}",
                    serde_json::to_string(&suites).expect("suites serialize")
                )));
            }
            Outcome::ok(json!({ "suites": suites, "seed": ctx.seed }))
        }
    }
}

fn execute_group(op: &GroupOp, ctx: &mut Context) -> Result<Outcome, CliError> {
    match op {
        GroupOp::Concat { a, b } => {
            let pa = ctx.load_equation(a)?;
            let pb = ctx.load_equation(b)?;
            let c = concat(&pa.seq, &pb.seq).map_err(|e| CliError::Input(e.to_string()))?;
            let equation = render_equation(&c, None, Some("concatenation".to_owned()));
            let piece_count: usize = c.iter().map(|(_, coeff)| coeff.pieces().len()).sum();
            Outcome::ok(json!({
                "equation": serde_json::to_value(&equation).expect("doc serializes"),
                "lattice_depth": c.depth(),
                "piece_count": piece_count,
            }))
        }
        GroupOp::Inverse { a } => {
            let pa = ctx.load_equation(a)?;
            let inv = inverse(&pa.seq);
            let equation = render_equation(&inv, None, Some("inverse".to_owned()));
            Outcome::ok(json!({
                "equation": serde_json::to_value(&equation).expect("doc serializes"),
                "lattice_depth": inv.depth(),
            }))
        }
        GroupOp::Equiv { a, b } => {
            let pa = ctx.load_equation(a)?;
            let pb = ctx.load_equation(b)?;
            let verdict = equivalent_up_to(&pa.seq, &pb.seq, ctx.order)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let negative = !verdict.equivalent_up_to;
            Ok(Outcome {
                results: json!({
                    "equivalent_up_to_N": verdict.equivalent_up_to,
                    "order_checked": verdict.order_checked,
                    "witness": match &verdict.witness {
                        None => Value::Null,
                        Some((w, value)) => json!({
                            "word": w.to_string(),
                            "value": scalar_json(value),
                        }),
                    },
                }),
                negative,
            })
        }
    }
}
