//! The `circpeak` command: counting, class listing, tables, coefficient
//! triangles, path weights, and full cross-validation.
//!
//! Exit codes: 0 success/agreement, 1 verification mismatch, 2 usage error,
//! 3 scale limit exceeded.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use circpeak::closed_forms::{a_triangle, b_triangle, CoeffTriangle};
use circpeak::genfunc::gf_coefficient;
use circpeak::oracle::{enumerate_class, oracle_count};
use circpeak::paths::{
    cp_count, enumerate_paths, path_weight, step_weight, w_by_enumeration, w_closed,
    weight_grid_csv, Step,
};
use circpeak::recurrences::dp_table;
use circpeak::verify::{closed_route, run_verify, VerifyConfig};
use circpeak::{BigUint, Error, PeakSet, Permutation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCALE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "circpeak",
    version,
    about = "Exact enumeration of permutations by circular peak set"
)]
struct Cli {
    /// Worker threads for oracle table construction (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Closed,
    Dp,
    Genfunc,
    Paths,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    B,
    A,
}

#[derive(Subcommand)]
enum Command {
    /// Count permutations of [n] with circular peak set S.
    Count {
        #[arg(long)]
        n: u32,
        /// Comma-separated elements; empty for the empty set.
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long, value_enum, default_value = "paths")]
        method: Method,
    },
    /// List the class CP_n(S) in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Full count table at order n.
    Table {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Coefficient triangle rows (kind b or a).
    Coeffs {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Path weights w(i, r, n, k) by both routes.
    Paths {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Also list every path with per-step weights.
        #[arg(long)]
        list: bool,
        /// Emit a CSV weight table over the grid up to (i, k, n) instead.
        #[arg(long, conflicts_with = "list")]
        grid: bool,
    },
    /// Circular peak set of a permutation in one-line notation.
    Peaks {
        /// Space- or comma-separated values, e.g. "4 8 3 6 2 5 1 7".
        #[arg(long)]
        perm: String,
    },
    /// Run the cross-validation suite.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: u32,
    },
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::ScaleLimit(_) => EXIT_SCALE,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI against explicit argv and output streams; returns the exit
/// code. `argv` excludes the program name.
pub fn run<O: Write, E: Write>(argv: &[&str], out: &mut O, err: &mut E) -> i32 {
    let mut full = vec!["circpeak"];
    full.extend_from_slice(argv);
    let cli = match Cli::try_parse_from(full) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version through the error path
            let rendered = e.render();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{rendered}");
            return EXIT_OK;
        }
    };
    let threads = if cli.threads == 0 {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    } else {
        cli.threads
    };
    match dispatch(cli.command, threads, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_code(&e)
        }
    }
}

fn dispatch<O: Write>(command: Command, threads: usize, out: &mut O) -> circpeak::Result<i32> {
    match command {
        Command::Count { n, set, method } => cmd_count(n, &set, method, out),
        Command::Enumerate { n, set } => cmd_enumerate(n, &set, out),
        Command::Table { n, format } => cmd_table(n, format, out),
        Command::Coeffs { kind, k, format } => cmd_coeffs(kind, k, format, out),
        Command::Paths {
            i,
            r,
            n,
            k,
            list,
            grid,
        } => cmd_paths(i, r, n, k, list, grid, out),
        Command::Peaks { perm } => cmd_peaks(&perm, out),
        Command::Verify { max_n } => cmd_verify(max_n, threads, out),
    }
}

fn cmd_count<O: Write>(n: u32, set: &str, method: Method, out: &mut O) -> circpeak::Result<i32> {
    let s = PeakSet::parse(n, set)?;
    let single = |value: BigUint, out: &mut O| -> circpeak::Result<i32> {
        writeln!(out, "{value}").ok();
        Ok(EXIT_OK)
    };
    match method {
        Method::Oracle => single(oracle_count(&s)?, out),
        Method::Dp => single(dp_table(n)?.get(s.elements()), out),
        Method::Genfunc => single(gf_coefficient(&s)?, out),
        Method::Paths => single(cp_count(&s)?, out),
        Method::Closed => match closed_route(&s) {
            Some(value) => single(value, out),
            None => Err(Error::Domain(
                "closed forms cover |S| <= 2 and single runs; use another method".into(),
            )),
        },
        Method::All => {
            let mut values: Vec<(&str, BigUint)> = Vec::new();
            if n <= circpeak::oracle_limit() {
                values.push(("oracle", oracle_count(&s)?));
            }
            if let Some(value) = closed_route(&s) {
                values.push(("closed", value));
            }
            if n <= circpeak::dp_limit() {
                values.push(("dp", dp_table(n)?.get(s.elements())));
                values.push(("genfunc", gf_coefficient(&s)?));
            }
            values.push(("paths", cp_count(&s)?));
            for (route, value) in &values {
                writeln!(out, "{route}: {value}").ok();
            }
            let agreed = values.windows(2).all(|w| w[0].1 == w[1].1);
            if agreed {
                writeln!(out, "agreement: {} routes", values.len()).ok();
                Ok(EXIT_OK)
            } else {
                writeln!(out, "MISMATCH between routes").ok();
                Ok(EXIT_MISMATCH)
            }
        }
    }
}

fn cmd_enumerate<O: Write>(n: u32, set: &str, out: &mut O) -> circpeak::Result<i32> {
    let s = PeakSet::parse(n, set)?;
    let class = enumerate_class(&s)?;
    for p in &class {
        writeln!(out, "{p}").ok();
    }
    writeln!(out, "# total: {}", class.len()).ok();
    Ok(EXIT_OK)
}

fn cmd_table<O: Write>(n: u32, format: Format, out: &mut O) -> circpeak::Result<i32> {
    let table = dp_table(n)?;
    let rendered = match format {
        Format::Text => table.to_text(),
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
    };
    write!(out, "{rendered}").ok();
    Ok(EXIT_OK)
}

fn cmd_coeffs<O: Write>(kind: Kind, k: u32, format: Format, out: &mut O) -> circpeak::Result<i32> {
    if kind == Kind::B && k < 1 {
        return Err(Error::Domain("the b triangle starts at k = 1".into()));
    }
    let triangle: CoeffTriangle = match kind {
        Kind::B => b_triangle(k),
        Kind::A => a_triangle(k),
    };
    let rendered = match format {
        Format::Text => triangle.to_text(),
        Format::Csv => triangle.to_csv(),
        Format::Json => triangle.to_json() + "\n",
    };
    write!(out, "{rendered}").ok();
    Ok(EXIT_OK)
}

fn cmd_paths<O: Write>(
    i: u32,
    r: u32,
    n: u32,
    k: u32,
    list: bool,
    grid: bool,
    out: &mut O,
) -> circpeak::Result<i32> {
    if grid {
        let extra = n.saturating_sub(r + 2 * k);
        write!(out, "{}", weight_grid_csv(i, r, k, extra)).ok();
        return Ok(EXIT_OK);
    }
    if list {
        for path in enumerate_paths(r, n, k) {
            let mut height = 0u32;
            let mut pieces = Vec::new();
            for &step in path.word() {
                pieces.push(format!("{}", step_weight(i, height, step)));
                if matches!(step, Step::R) {
                    height += 1;
                }
            }
            let word = if path.word().is_empty() {
                "(empty)".to_string()
            } else {
                path.word_string()
            };
            let product = path_weight(i, &path);
            if pieces.is_empty() {
                writeln!(out, "{word}: weight {product}").ok();
            } else {
                writeln!(out, "{word}: {} = {product}", pieces.join("*")).ok();
            }
        }
    }
    writeln!(out, "w_enumeration: {}", w_by_enumeration(i, r, n, k)).ok();
    writeln!(out, "w_closed: {}", w_closed(i, r, n, k)).ok();
    Ok(EXIT_OK)
}

fn cmd_peaks<O: Write>(perm: &str, out: &mut O) -> circpeak::Result<i32> {
    let p = Permutation::parse(perm)?;
    writeln!(out, "{}", p.circular_peak_set()).ok();
    Ok(EXIT_OK)
}

fn cmd_verify<O: Write>(max_n: u32, threads: usize, out: &mut O) -> circpeak::Result<i32> {
    let report = run_verify(VerifyConfig { max_n, threads })?;
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {}: {}", check.name, check.detail).ok();
    }
    if report.all_passed() {
        writeln!(out, "all {} checks passed", report.checks.len()).ok();
        Ok(EXIT_OK)
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "{failed} check(s) FAILED").ok();
        Ok(EXIT_MISMATCH)
    }
}
