use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Number, Value};

use kbound::closed_form::{self, closed_table};
use kbound::enumerate::{count_brute, count_brute_with, enumerate, SearchOptions};
use kbound::frontier::{count_dp, count_dp_with_stats, term_table};
use kbound::oeis::to_bfile;
use kbound::seqmine::{conjecture_probe, denominator_coeffs};
use kbound::verify::{self, Outcome, Suite};
use kbound::{Count, CountTable, Error, GapSpec, Provenance, Variant};

/// Exact counting of k-bounded permutations.
#[derive(Parser)]
#[command(name = "kbound", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the number of permutations.
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "anchored")]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// List the permutations in lexicographic order.
    Enumerate {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "anchored")]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = ListFormat::Lines)]
        format: ListFormat,
    },
    /// Print counts for n = 1..=max-n.
    Table {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_n: u32,
        #[arg(long, default_value = "anchored")]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = TableFormat::Bfile)]
        format: TableFormat,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
    },
    /// Search the anchored table for a linear recurrence and report it as JSON.
    Mine {
        #[arg(long)]
        k: u32,
        /// Training terms.
        #[arg(long, default_value_t = 80)]
        terms: usize,
        /// Further terms the recurrence must predict.
        #[arg(long, default_value_t = 20)]
        holdout: usize,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Run an invariant suite, one PASS/FAIL/SKIP line per check.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        /// b-file cache for the oeis suite.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Time each n and print CSV.
    Bench {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        #[arg(long, default_value = "anchored")]
        variant: Variant,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Dp,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Lines,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Bfile,
    Csv,
    Json,
}

const USAGE: u8 = 2;
const FAILED: u8 = 1;
const ENVIRONMENT: u8 = 3;

enum Failure {
    /// Downstream closed stdout; not an error for a CLI.
    Closed,
    Usage(String),
    Failed(String),
    Environment(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGap
            | Error::InvalidVariant { .. }
            | Error::Precondition(_)
            | Error::InvalidSequenceId(_)
            | Error::InsufficientData { .. } => Failure::Usage(e.to_string()),
            Error::Offline { .. } | Error::Http { .. } | Error::Io(_) => Failure::Environment(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::Closed
        } else {
            Failure::Environment(e.to_string())
        }
    }
}

type Status = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = BufWriter::new(io::stdout().lock());
    let result = run(cli.command, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Closed => unreachable!(),
                Failure::Usage(m) => (USAGE, m),
                Failure::Failed(m) => (FAILED, m),
                Failure::Environment(m) => (ENVIRONMENT, m),
            };
            eprintln!("kbound: {msg}");
            ExitCode::from(code)
        }
    }
}

fn gap(k: u32) -> Result<GapSpec, Failure> {
    Ok(GapSpec::new(k)?)
}

fn closed_supported(k: u32, variant: Variant) -> Result<(), Failure> {
    if k > 3 || variant != Variant::Anchored {
        return Err(Failure::Usage(format!(
            "the closed method covers anchored counts with k <= 3, not k = {k} {variant}"
        )));
    }
    Ok(())
}

fn run(command: Command, out: &mut impl Write) -> Status {
    match command {
        Command::Count { k, n, variant, method } => {
            let g = gap(k)?;
            variant.validate(n)?;
            let c = match method {
                Method::Auto if k <= 3 && variant == Variant::Anchored => closed_count(k, n),
                Method::Auto | Method::Dp => count_dp(g, n, variant)?,
                Method::Brute => count_brute(g, n, variant)?,
                Method::Closed => {
                    closed_supported(k, variant)?;
                    closed_count(k, n)
                }
            };
            writeln!(out, "{c}")?;
            Ok(0)
        }
        Command::Enumerate { k, n, variant, format } => {
            let perms = enumerate(gap(k)?, n, variant)?;
            match format {
                ListFormat::Lines => {
                    for p in perms {
                        writeln!(out, "{p}")?;
                    }
                }
                ListFormat::Json => {
                    let all: Vec<Value> = perms.map(|p| json!(p.entries())).collect();
                    writeln!(out, "{}", Value::Array(all))?;
                }
            }
            Ok(0)
        }
        Command::Table { k, max_n, variant, format, method } => {
            let table = table(k, max_n, variant, method)?;
            match format {
                TableFormat::Bfile => write!(out, "{}", to_bfile(&table))?,
                TableFormat::Csv => {
                    for (n, v) in table.iter() {
                        writeln!(out, "{n},{v}")?;
                    }
                }
                TableFormat::Json => {
                    let doc = json!({
                        "k": k,
                        "variant": variant.to_string(),
                        "offset": table.offset(),
                        "terms": ints(table.terms()),
                    });
                    writeln!(out, "{doc}")?;
                }
            }
            Ok(0)
        }
        Command::Mine { k, terms, holdout, max_order } => {
            let report = conjecture_probe(gap(k)?, terms, holdout, max_order)?;
            let rec = report.recurrence.as_ref();
            let doc = json!({
                "k": report.k,
                "terms_used": report.terms_used,
                "holdout": report.holdout,
                "max_order": report.max_order,
                "order": report.order(),
                "lead": rec.map(|r| number(r.lead().to_string())),
                "coefficients": rec.map(|r| ints(r.coefficients())),
                "valid_from": rec.map(|r| r.valid_from()),
                "gf_numerator": report.gf.as_ref().map(|g| ints(g.numerator().coeffs())),
                "gf_denominator": report.gf.as_ref().map(|g| ints(g.denominator().coeffs())),
                "recurrence_denominator": rec.map(|r| ints(&denominator_coeffs(r))),
                "holdout_match": report.holdout_match,
                "state_space_size": report.state_space_size,
                "evidence": "numerical: fitted on a finite table and checked on held-out terms, not a proof",
            });
            writeln!(out, "{doc}")?;
            Ok(if report.holdout_match { 0 } else { FAILED })
        }
        Command::Verify { suite, max_n, k, cache_dir } => {
            let checks = verify::run(suite, &verify::Options { max_n, k, cache_dir });
            for c in &checks {
                writeln!(out, "{c}")?;
            }
            let code = if checks.iter().any(|c| c.outcome == Outcome::Fail) {
                FAILED
            } else if checks.iter().any(|c| c.outcome == Outcome::Skip) {
                ENVIRONMENT
            } else {
                0
            };
            Ok(code)
        }
        Command::Bench { k, max_n, method, variant } => {
            let g = gap(k)?;
            let column = match method {
                Method::Brute => "nodes",
                Method::Dp | Method::Auto => "peak_profiles",
                Method::Closed => {
                    closed_supported(k, variant)?;
                    "terms"
                }
            };
            writeln!(out, "n,seconds,{column}")?;
            for n in 1..=max_n {
                if variant.validate(n).is_err() {
                    continue;
                }
                let start = Instant::now();
                let metric = match method {
                    Method::Brute => count_brute_with(g, n, variant, SearchOptions::default())?.1 as usize,
                    Method::Dp | Method::Auto => count_dp_with_stats(g, n, variant)?.1.peak_profiles,
                    Method::Closed => closed_table(g, n)?.len(),
                };
                writeln!(out, "{n},{:.6},{metric}", start.elapsed().as_secs_f64())?;
            }
            Ok(0)
        }
    }
}

fn closed_count(k: u32, n: u32) -> Count {
    match k {
        1 => closed_form::count_k1(n),
        2 => closed_form::count_k2(n),
        _ => closed_form::count_k3(n),
    }
}

fn table(k: u32, max_n: u32, variant: Variant, method: Method) -> Result<CountTable, Failure> {
    let g = gap(k)?;
    Ok(match method {
        Method::Dp => term_table(g, variant, max_n),
        Method::Auto if k <= 3 && variant == Variant::Anchored => closed_table(g, max_n)?,
        Method::Auto => term_table(g, variant, max_n),
        Method::Closed => {
            closed_supported(k, variant)?;
            closed_table(g, max_n)?
        }
        Method::Brute => {
            let terms = (1..=max_n)
                .map(|n| {
                    if variant.validate(n).is_err() {
                        Ok(Count::default())
                    } else {
                        count_brute(g, n, variant)
                    }
                })
                .collect::<kbound::Result<Vec<_>>>()?;
            CountTable::new(g, variant, Provenance::Brute, terms)
        }
    })
}

/// A JSON number of any size.
fn number(digits: String) -> Value {
    Value::Number(digits.parse::<Number>().expect("decimal integer"))
}

fn ints<T: ToString>(v: &[T]) -> Vec<Value> {
    v.iter().map(|c| number(c.to_string())).collect()
}
