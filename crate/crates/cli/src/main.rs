//! Command-line surface for the exact intersection-number library.
//!
//! Subcommands: `npoint` (tabulate n-point coefficients), `intersect`
//! (a single ⟨τ_{d₁}⋯τ_{dₙ}⟩_g, optionally cross-checked against the
//! recursion oracle), `dr` (a ψ-integral over a double ramification cycle),
//! `drpush` (a push-forward integral computed by both available routes),
//! `pn` (raw kernel coefficients), and `selftest` (the verification
//! suites).
//!
//! Exit codes: 0 success, 1 usage or input error, 2 internal consistency
//! failure (failed exact division, oracle mismatch, invariant breach).

mod output;
mod selftest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use psi_point::algebra::{ExponentVector, Rational};
use psi_point::dr::{dr_integral, forgotten_integral_direct, forgotten_series, ForgottenSpec};
use psi_point::kernel::pn_eval;
use psi_point::npoint::{intersection_number, IntersectionTable};
use psi_point::oracle::Oracle;
use psi_point::Error;

use output::{format_rational, write_document, Document};

#[derive(Parser)]
#[command(
    name = "psi-point",
    about = "Exact n-point functions of psi-class intersection numbers",
    version
)]
struct Cli {
    /// Cap on concurrent workers (0 = auto); falls back to the
    /// PSI_POINT_PARALLELISM environment variable.
    #[arg(long, global = true)]
    parallelism: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the document to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate all intersection numbers with n points up to a total degree.
    Npoint {
        /// Number of marked points.
        #[arg(long)]
        n: usize,
        /// Truncation order (total degree of the generating function).
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// A single intersection number ⟨τ_{d₁}⋯τ_{dₙ}⟩_g.
    Intersect {
        /// Genus.
        #[arg(long)]
        g: u32,
        /// Comma-separated ψ-degrees d₁,…,dₙ.
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        /// Cross-check the value ("oracle" or "none").
        #[arg(long, default_value = "none")]
        check: Check,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// A ψ-integral over a double ramification cycle.
    Dr {
        /// Comma-separated integer weights summing to zero.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        /// Comma-separated ψ-degrees, one per weight.
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// A push-forward integral with forgotten points, computed through the
    /// generating series and through the signed partition sum; both values
    /// are reported and must agree.
    Drpush {
        /// Kept weights (n ≥ 3 entries).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        /// Forgotten weights (Σa + Σb = 0); omit for none.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<i64>>,
        /// ψ-degrees at the kept points.
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Raw kernel coefficients Pₙ(a; x).
    Pn {
        /// Comma-separated weights (rational evaluation point).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        /// Truncation order.
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the verification suites.
    Selftest {
        /// quick: small smoke envelope; full: the complete acceptance
        /// envelope.
        #[arg(long, default_value = "quick")]
        level: Level,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Check {
    None,
    Oracle,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let workers = cli.parallelism.or_else(|| {
        std::env::var("PSI_POINT_PARALLELISM")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(k) = workers {
            if k > 0 {
                builder = builder.num_threads(k);
            }
        }
        match builder.build() {
            Ok(pool) => pool,
            Err(err) => {
                eprintln!("error: cannot build worker pool: {err}");
                return ExitCode::from(2);
            }
        }
    };

    match pool.install(|| run(cli.command)) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// 2 for broken invariants, 1 for rejected input.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Algebra(psi_point::AlgebraError::NonExactDivision)
        | Error::Internal(_)
        | Error::SingularGrid(_)
        | Error::OracleNotValidated => 2,
        _ => 1,
    }
}

fn run(command: Command) -> psi_point::Result<ExitCode> {
    match command {
        Command::Npoint { n, order, output } => {
            let table = IntersectionTable::from_npoint_series(n, order)?;
            let entries: Vec<serde_json::Value> = table
                .entries()
                .map(|((g, d), entry)| {
                    serde_json::json!({
                        "g": g,
                        "d": d,
                        "value": format_rational(&entry.value),
                    })
                })
                .collect();
            let mut csv = vec![csv_header(n)];
            for ((g, d), entry) in table.entries() {
                csv.push(csv_row(*g, d, &entry.value));
            }
            let document = Document {
                json: serde_json::json!({ "n": n, "order": order, "entries": entries }),
                csv,
            };
            write_document(
                &document,
                output.format == Format::Csv,
                output.out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Intersect {
            g,
            d,
            check,
            output,
        } => {
            let value = intersection_number(g, &d)?;
            let mut status = "skipped";
            if check == Check::Oracle {
                let mut oracle = Oracle::new();
                let report = oracle.self_check()?;
                if !report.passed() {
                    eprintln!("oracle self-check failed: {:?}", report.mismatches);
                    return Ok(ExitCode::from(2));
                }
                let reference = oracle.dvv_number(g, &d)?;
                if reference == value {
                    status = "ok";
                } else {
                    eprintln!(
                        "oracle mismatch: theorem route {} vs recursion {}",
                        format_rational(&value),
                        format_rational(&reference)
                    );
                    return Ok(ExitCode::from(2));
                }
            }
            let document = Document {
                json: serde_json::json!({
                    "g": g,
                    "d": d,
                    "value": format_rational(&value),
                    "check": status,
                }),
                csv: vec![csv_header(d.len()), csv_row(g, &d, &value)],
            };
            write_document(
                &document,
                output.format == Format::Csv,
                output.out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dr { a, d, output } => {
            let value = dr_integral(&a, &d)?;
            let mut header: Vec<String> = (1..=a.len()).map(|i| format!("a{i}")).collect();
            header.extend((1..=d.len()).map(|i| format!("d{i}")));
            header.push("value".into());
            let mut row: Vec<String> = a.iter().map(i64::to_string).collect();
            row.extend(d.iter().map(u32::to_string));
            row.push(format_rational(&value));
            let document = Document {
                json: serde_json::json!({
                    "a": a,
                    "d": d,
                    "value": format_rational(&value),
                }),
                csv: vec![header.join(","), row.join(",")],
            };
            write_document(
                &document,
                output.format == Format::Csv,
                output.out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Drpush { a, b, d, output } => {
            let b: Vec<i64> = b.unwrap_or_default();
            let spec = ForgottenSpec::new(a.clone(), b.clone())?;
            let sum_d: u32 = d.iter().sum();
            let series = forgotten_series(&spec, sum_d)?;
            let from_series = series.coefficient(&ExponentVector::new(d.clone()))?;
            let direct = forgotten_integral_direct(&spec, &d)?;
            let agree = from_series == direct;
            let document = Document {
                json: serde_json::json!({
                    "kept": a,
                    "forgotten": b,
                    "d": d,
                    "series_value": format_rational(&from_series),
                    "direct_value": format_rational(&direct),
                    "agree": agree,
                }),
                csv: vec![
                    {
                        let mut h: Vec<String> = (1..=d.len()).map(|i| format!("d{i}")).collect();
                        h.push("series".into());
                        h.push("direct".into());
                        h.join(",")
                    },
                    {
                        let mut r: Vec<String> = d.iter().map(u32::to_string).collect();
                        r.push(format_rational(&from_series));
                        r.push(format_rational(&direct));
                        r.join(",")
                    },
                ],
            };
            write_document(
                &document,
                output.format == Format::Csv,
                output.out.as_deref(),
            )?;
            if agree {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("route mismatch: the two push-forward routes disagree");
                Ok(ExitCode::from(2))
            }
        }
        Command::Pn { a, order, output } => {
            let series = pn_eval(&psi_point::algebra::from_ints(&a), order)?;
            let entries: Vec<serde_json::Value> = series
                .terms()
                .map(|(e, c)| {
                    serde_json::json!({
                        "d": e.exponents(),
                        "value": format_rational(c),
                    })
                })
                .collect();
            let mut csv = vec![{
                let mut h: Vec<String> = (1..=a.len()).map(|i| format!("d{i}")).collect();
                h.push("value".into());
                h.join(",")
            }];
            for (e, c) in series.terms() {
                let mut row: Vec<String> = e.exponents().iter().map(u32::to_string).collect();
                row.push(format_rational(c));
                csv.push(row.join(","));
            }
            let document = Document {
                json: serde_json::json!({
                    "n": a.len(),
                    "a": a,
                    "order": order,
                    "entries": entries,
                }),
                csv,
            };
            write_document(
                &document,
                output.format == Format::Csv,
                output.out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { level } => selftest::run(level),
    }
}

fn csv_header(n: usize) -> String {
    let mut cols: Vec<String> = vec!["g".into()];
    cols.extend((1..=n).map(|i| format!("d{i}")));
    cols.push("value".into());
    cols.join(",")
}

fn csv_row(g: u32, d: &[u32], value: &Rational) -> String {
    let mut cols: Vec<String> = vec![g.to_string()];
    cols.extend(d.iter().map(u32::to_string));
    cols.push(format_rational(value));
    cols.join(",")
}
