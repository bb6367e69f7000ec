//! `catalan2k` — residues of Catalan numbers modulo `2^k` from the shell.
//!
//! Five subcommands: `residue` (one clamped value), `table` (all k-1
//! values), `verify` (theorem checks against the oracles), `classify`
//! (odd fast path or even oracle path for an arbitrary index) and
//! `survey` (distinct residues at a fixed 2-adic valuation).
//!
//! Output is a single JSON document per invocation (CSV for `table` and
//! `survey` on request), identical bytes for identical invocations.
//! Exit codes: 0 success, 1 verification failure or broken internal
//! invariant, 2 usage or range error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use catalan2k::catalan::{
    classify, even_residue_survey, odd_catalan_residue, odd_residue_class_set, verify_theorem,
    OddIndex,
};
use catalan2k::oracle::{Oracle, DEFAULT_EXACT_BOUND, DEFAULT_STREAM_BOUND};
use catalan2k::Error;

#[derive(Parser)]
#[command(name = "catalan2k", version, about = "Catalan number residues modulo 2^k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print C_{2^m-1} mod 2^k (stabilization-clamped, fast for any m)
    Residue {
        /// Exponent m of the odd index n = 2^m - 1
        #[arg(long)]
        m: u64,
        /// Modulus exponent, 1..=64
        #[arg(long)]
        k: u32,
    },
    /// Print the k-1 distinct odd Catalan residues mod 2^k
    Table {
        /// Modulus exponent, 2..=64
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-verify distinctness and constancy against the oracles
    Verify {
        /// Modulus exponent, 2..=64
        #[arg(long)]
        k: u32,
        /// Largest rank checked (must be >= k-1)
        #[arg(long)]
        m_max: u64,
        /// Cap for exact big-integer evaluation
        #[arg(long, default_value_t = DEFAULT_EXACT_BOUND)]
        exact_bound: u64,
        /// Cap for the streaming residue engine
        #[arg(long, default_value_t = DEFAULT_STREAM_BOUND)]
        stream_bound: u64,
    },
    /// Classify C_n mod 2^k: odd fast path or even oracle path
    Classify {
        /// Catalan index n
        #[arg(long)]
        n: u64,
        /// Modulus exponent, 1..=64
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_EXACT_BOUND)]
        exact_bound: u64,
        #[arg(long, default_value_t = DEFAULT_STREAM_BOUND)]
        stream_bound: u64,
    },
    /// Distinct residues of C_n with nu2(C_n) = v, for n <= n_max
    Survey {
        /// Modulus exponent, 1..=64
        #[arg(long)]
        k: u32,
        /// Target 2-adic valuation
        #[arg(long)]
        v: u64,
        /// Scan bound (inclusive)
        #[arg(long)]
        n_max: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_STREAM_BOUND)]
        stream_bound: u64,
    },
}

#[derive(Serialize)]
struct OutputRecord<P: Serialize, R: Serialize> {
    command: &'static str,
    params: P,
    result: R,
    status: &'static str,
}

fn emit_json<P: Serialize, R: Serialize>(record: &OutputRecord<P, R>) {
    let doc = serde_json::to_string_pretty(record).expect("reports always serialize");
    println!("{doc}");
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Residue { m, k } => {
            let residue = odd_catalan_residue(OddIndex::from_exponent(m), k)?;
            #[derive(Serialize)]
            struct Params {
                m: u64,
                k: u32,
            }
            #[derive(Serialize)]
            struct Value {
                residue: u64,
                clamped_rank: u64,
            }
            emit_json(&OutputRecord {
                command: "residue",
                params: Params { m, k },
                result: Value {
                    residue: residue.value(),
                    clamped_rank: m.min(u64::from(k.saturating_sub(1))),
                },
                status: "ok",
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { k, format } => {
            let table = odd_residue_class_set(k)?;
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Params {
                        k: u32,
                    }
                    emit_json(&OutputRecord {
                        command: "table",
                        params: Params { k },
                        result: &table,
                        status: "ok",
                    });
                }
                Format::Csv => {
                    println!("m,residue");
                    for entry in table.entries() {
                        println!("{},{}", entry.m, entry.residue.value());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            k,
            m_max,
            exact_bound,
            stream_bound,
        } => {
            let oracle = Oracle {
                exact_bound,
                stream_bound,
            };
            let report = verify_theorem(k, m_max, &oracle)?;
            #[derive(Serialize)]
            struct Params {
                k: u32,
                m_max: u64,
                exact_bound: u64,
                stream_bound: u64,
            }
            let passed = report.passed;
            emit_json(&OutputRecord {
                command: "verify",
                params: Params {
                    k,
                    m_max,
                    exact_bound,
                    stream_bound,
                },
                result: &report,
                status: if passed { "pass" } else { "fail" },
            });
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Classify {
            n,
            k,
            exact_bound,
            stream_bound,
        } => {
            let oracle = Oracle {
                exact_bound,
                stream_bound,
            };
            let class = classify(n, k, &oracle)?;
            #[derive(Serialize)]
            struct Params {
                n: u64,
                k: u32,
            }
            emit_json(&OutputRecord {
                command: "classify",
                params: Params { n, k },
                result: class,
                status: "ok",
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Survey {
            k,
            v,
            n_max,
            format,
            stream_bound,
        } => {
            let oracle = Oracle {
                exact_bound: DEFAULT_EXACT_BOUND,
                stream_bound,
            };
            let report = even_residue_survey(k, v, n_max, &oracle)?;
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Params {
                        k: u32,
                        v: u64,
                        n_max: u64,
                    }
                    emit_json(&OutputRecord {
                        command: "survey",
                        params: Params { k, v, n_max },
                        result: &report,
                        status: "ok",
                    });
                }
                Format::Csv => {
                    println!("residue,witness");
                    for entry in &report.entries {
                        println!("{},{}", entry.residue, entry.witness);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                // a broken invariant is a bug, not a usage problem
                Error::InvariantViolation(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
