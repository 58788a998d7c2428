//! `incmat`: rank chains, inclusion matrices, Smith forms and signed designs
//! from the command line.
//!
//! Exit status is 0 on success, 1 when a system is infeasible or a
//! verification check fails, and 2 for usage or input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use incmat_core::chains::{chain_of, complement_decompose, decompose};
use incmat_core::inclusion::{
    build_d_bar, build_d_under, build_q, build_r, build_w, build_w_bar, build_w_under, select_a,
};
use incmat_core::snf::{format_factors, invariant_factors, smith_normal_form};
use incmat_core::solver::{signed_design, solve_integral};
use incmat_core::subset::{rank, tableau};
use incmat_core::suite::{format_report, run_all};
use incmat_core::{ExactMatrix, IntegerVector, SubsetWord};

#[derive(Parser)]
#[command(
    name = "incmat",
    version,
    about = "Rank chains, inclusion matrices and signed t-designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frankl rank of a subset given as "2,3,7,8" ("" for the empty set)
    Rank { set: String },
    /// Two-row tableau of a subset; blanks print as "j"
    Tableau { set: String },
    /// The rank chain of 2^[v] through a subset
    Chain {
        set: String,
        #[arg(long)]
        v: u32,
    },
    /// Decompose 2^[v] into symmetric chains
    Decompose {
        #[arg(long)]
        v: u32,
        #[arg(long, value_enum, default_value_t = ChainKind::Rank)]
        kind: ChainKind,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Build an inclusion matrix
    Matrix {
        #[command(flatten)]
        spec: MatrixSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Omit the #row/#col label lines from text output
        #[arg(long)]
        no_labels: bool,
    },
    /// Smith normal form of a built matrix or of a matrix file
    Snf {
        #[arg(
            long,
            value_enum,
            conflicts_with = "input",
            required_unless_present = "input"
        )]
        kind: Option<MatrixKind>,
        #[command(flatten)]
        params: Params,
        /// Matrix file ("-" for standard input)
        #[arg(long)]
        input: Option<String>,
        /// Also print the unimodular transforms U and V
        #[arg(long)]
        transforms: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find an integral x with W_tk x = b
    Solve {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        v: u32,
        /// Solve for b = lambda * 1
        #[arg(long, conflicts_with = "b_file", required_unless_present = "b_file")]
        lambda: Option<i64>,
        /// Right-hand side, one integer per line ("-" for standard input)
        #[arg(long)]
        b_file: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check every structural identity up to a universe size
    Verify {
        #[arg(long, default_value_t = 6)]
        v_max: u32,
    },
}

#[derive(Args)]
struct MatrixSpec {
    #[arg(value_enum)]
    kind: MatrixKind,
    #[command(flatten)]
    params: Params,
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    v: Option<u32>,
    /// Lower level for `r` (R_it)
    #[arg(long)]
    i: Option<u32>,
    /// Column block size for `q` (Q_tj)
    #[arg(long)]
    j: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainKind {
    Rank,
    Complement,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    /// W_tk
    Wtk,
    /// W_t̄k
    Wbar,
    /// W_tk̲
    Wunder,
    /// R_it, from --i --t --v
    R,
    /// Q_tj, from --t --j --v --k
    Q,
    /// The unimodular block A_tk of W_t̄k
    A,
    /// D_t̄k
    Dbar,
    /// D_tk̲
    Dunder,
}

type CliResult<T> = Result<T, String>;

fn required(value: Option<u32>, flag: &str) -> CliResult<u32> {
    value.ok_or_else(|| format!("--{flag} is required for this matrix kind"))
}

fn build(kind: MatrixKind, p: &Params) -> CliResult<ExactMatrix> {
    let v = required(p.v, "v")?;
    let t = required(p.t, "t")?;
    let built = match kind {
        MatrixKind::R => build_r(required(p.i, "i")?, t, v),
        MatrixKind::Q => build_q(t, required(p.j, "j")?, v, required(p.k, "k")?),
        other => {
            let k = required(p.k, "k")?;
            match other {
                MatrixKind::Wtk => build_w(t, k, v),
                MatrixKind::Wbar => build_w_bar(t, k, v),
                MatrixKind::Wunder => build_w_under(t, k, v),
                MatrixKind::A => select_a(t, k, v),
                MatrixKind::Dbar => build_d_bar(t, k, v),
                MatrixKind::Dunder => build_d_under(t, k, v),
                MatrixKind::R | MatrixKind::Q => unreachable!(),
            }
        }
    };
    built.map_err(|e| e.to_string())
}

fn parse_set(text: &str) -> CliResult<SubsetWord> {
    text.parse().map_err(|e: incmat_core::Error| e.to_string())
}

fn read_source(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s
}

fn matrix_output(m: &ExactMatrix, format: Format, labels: bool) -> String {
    match format {
        Format::Text => m.to_text(labels),
        Format::Json => json(&m.to_json()),
        Format::Csv => m.to_csv(),
    }
}

/// Standard output and exit status of a successful parse.
fn run(command: Command) -> CliResult<(String, u8)> {
    Ok(match command {
        Command::Rank { set } => (format!("{}\n", rank(&parse_set(&set)?)), 0),
        Command::Tableau { set } => (format!("{}\n", tableau(&parse_set(&set)?)), 0),
        Command::Chain { set, v } => {
            let chain = chain_of(&parse_set(&set)?, v).map_err(|e| e.to_string())?;
            (format!("{}\n", chain.to_arrow_string()), 0)
        }
        Command::Decompose { v, kind, format } => {
            let d = match kind {
                ChainKind::Rank => decompose(v),
                ChainKind::Complement => complement_decompose(v),
            }
            .map_err(|e| e.to_string())?;
            match format {
                Format::Json => (format!("{}\n", d.to_json()), 0),
                Format::Text => (d.to_text(), 0),
                Format::Csv => return Err("decompose supports text and json".into()),
            }
        }
        Command::Matrix {
            spec,
            format,
            no_labels,
        } => (
            matrix_output(&build(spec.kind, &spec.params)?, format, !no_labels),
            0,
        ),
        Command::Snf {
            kind,
            params,
            input,
            transforms,
            format,
        } => {
            let m = match (kind, input) {
                (Some(kind), _) => build(kind, &params)?,
                (None, Some(path)) => {
                    ExactMatrix::from_text(&read_source(&path)?).map_err(|e| e.to_string())?
                }
                (None, None) => unreachable!("clap requires --kind or --input"),
            };
            if !transforms && format == Format::Text {
                return Ok((format_factors(&invariant_factors(&m)), 0));
            }
            let snf = smith_normal_form(&m);
            match format {
                Format::Text => {
                    let mut out = snf.to_text();
                    out.push_str("U\n");
                    out.push_str(&snf.u.to_text(false));
                    out.push_str("V\n");
                    out.push_str(&snf.v.to_text(false));
                    (out, 0)
                }
                Format::Json => (json(&snf.to_json()), 0),
                Format::Csv => return Err("snf supports text and json".into()),
            }
        }
        Command::Solve {
            t,
            k,
            v,
            lambda,
            b_file,
            format,
        } => {
            let report = match (lambda, b_file) {
                (Some(lambda), _) => signed_design(t, k, v, lambda),
                (None, Some(path)) => {
                    let b = IntegerVector::from_text(&read_source(&path)?)
                        .map_err(|e| e.to_string())?;
                    solve_integral(t, k, v, &b)
                }
                (None, None) => unreachable!("clap requires --lambda or --b-file"),
            }
            .map_err(|e| e.to_string())?;
            let code = if report.feasible { 0 } else { 1 };
            match format {
                Format::Text => (report.to_text(), code),
                Format::Json => (json(&report.to_json()), code),
                Format::Csv => return Err("solve supports text and json".into()),
            }
        }
        Command::Verify { v_max } => {
            let results = run_all(v_max).map_err(|e| e.to_string())?;
            let code = if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            };
            (format_report(&results), code)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            // A closed pipe is not worth reporting.
            let _ = io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
