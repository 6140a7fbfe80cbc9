use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qschur::canonical::{table_csv, table_rows, CanonicalCache, DEFAULT_CAP};
use qschur::crystal::crystal_graph;
use qschur::schur::{CommutatorForm, PsiReading};
use qschur::suites::{self, Conventions, SuiteReport, TransferParams};
use qschur::transfer::{check_canonical_transfer, MonomialSpan, Verdict};
use qschur::{FlagSymbol, PeriodicMatrix};

#[derive(Parser)]
#[command(name = "qschur", version, about = "Exact computations in affine q-Schur algebras")]
struct Cli {
    /// Directory for cached canonical bases.
    #[arg(long, env = "QSCHUR_CACHE", global = true)]
    cache_dir: Option<PathBuf>,
    /// Bound on the number of labels explored by a canonical-basis solve.
    #[arg(long, default_value_t = DEFAULT_CAP, global = true)]
    cap: usize,
    /// How the rank-lowering twist reads a basis matrix.
    #[arg(long, default_value = "matrix-shift", global = true)]
    psi: PsiReading,
    /// Which weight difference the commutator relation uses.
    #[arg(long, default_value = "next-index", global = true)]
    commutator: CommutatorForm,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its JSON report.
    Suite {
        suite: SuiteName,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "D", default_value_t = 2)]
        d: usize,
        /// Band offset bound for matrix enumerations.
        #[arg(long, default_value_t = 2)]
        band: i64,
        /// Random monomials for the schur suite.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute one object and print it.
    Compute {
        #[command(subcommand)]
        entity: Entity,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Hecke,
    Relations,
    Statistics,
    Crystal,
    Canonical,
    Schur,
    Transfer,
    Determinism,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Entity {
    /// The statistic x of a flag symbol.
    Xstat {
        #[arg(long)]
        p: String,
    },
    /// The statistic y of a periodic matrix.
    Ystat {
        #[arg(long)]
        s: String,
    },
    /// Canonical basis element of the flag module.
    CanonicalT {
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Canonical basis element of the q-Schur algebra.
    CanonicalS {
        #[arg(long)]
        s: String,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Crystal graph on flag symbols with values in `[1, window]`.
    CrystalGraph {
        #[arg(long)]
        n: usize,
        #[arg(long = "D")]
        d: usize,
        #[arg(long)]
        window: i64,
        /// Restrict to one weight, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        weight: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Transfer the canonical basis element of an aperiodic matrix one
    /// rank down and compare with the expected value.
    Transfer {
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 4)]
        span_len: usize,
        #[arg(long, default_value_t = 3)]
        span_power: u32,
    },
}

fn cache(cli: &Cli) -> Result<CanonicalCache> {
    Ok(match &cli.cache_dir {
        Some(dir) => CanonicalCache::with_dir(dir, cli.cap)?,
        None => CanonicalCache::in_memory(cli.cap),
    })
}

fn run_suite(cli: &Cli, suite: SuiteName, n: usize, d: usize, band: i64, samples: usize) -> Result<SuiteReport> {
    let conv = Conventions {
        psi: cli.psi,
        commutator: cli.commutator,
    };
    Ok(match suite {
        SuiteName::Hecke => suites::hecke_relations(d, 5, &conv),
        SuiteName::Relations => suites::module_relations(n, d, &conv)?,
        SuiteName::Statistics => suites::statistics(n, d, &conv)?,
        SuiteName::Crystal => suites::crystal(n, d, &conv)?,
        SuiteName::Canonical => suites::canonical(n, d, band, &conv)?,
        SuiteName::Schur => suites::schur(n, d, samples, &conv)?,
        SuiteName::Transfer => {
            let params = TransferParams {
                band,
                ..TransferParams::default()
            };
            suites::transfer(n, d, params, &conv)?
        }
        SuiteName::Determinism => {
            let dir = cli
                .cache_dir
                .clone()
                .context("the determinism suite needs --cache-dir or QSCHUR_CACHE")?;
            suites::determinism(n, d, &dir, &conv)?
        }
    })
}

fn run(cli: &Cli) -> Result<bool> {
    let mut stdout = std::io::stdout().lock();
    match &cli.command {
        Command::Suite {
            suite,
            n,
            d,
            band,
            samples,
            out,
        } => {
            let report = run_suite(cli, *suite, *n, *d, *band, *samples)?;
            let text = serde_json::to_string_pretty(&report)?;
            writeln!(stdout, "{text}")?;
            if let Some(path) = out {
                std::fs::write(path, format!("{text}\n")).with_context(|| path.display().to_string())?;
            }
            eprint!("{report}");
            Ok(report.passed())
        }
        Command::Compute { entity } => match entity {
            Entity::Xstat { p } => {
                let p: FlagSymbol = p.parse()?;
                writeln!(stdout, "{}", p.x_stat())?;
                Ok(true)
            }
            Entity::Ystat { s } => {
                let s: PeriodicMatrix = s.parse()?;
                writeln!(stdout, "{}", s.y_stat())?;
                Ok(true)
            }
            Entity::CanonicalT { p, format } => {
                let b = cache(cli)?.tmodule(&p.parse()?)?;
                match format {
                    TableFormat::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&b)?)?,
                    TableFormat::Csv => write!(stdout, "{}", table_csv(&table_rows(&[b])))?,
                }
                Ok(true)
            }
            Entity::CanonicalS { s, format } => {
                let b = cache(cli)?.schur(&s.parse()?)?;
                match format {
                    TableFormat::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&b)?)?,
                    TableFormat::Csv => write!(stdout, "{}", table_csv(&table_rows(&[b])))?,
                }
                Ok(true)
            }
            Entity::CrystalGraph {
                n,
                d,
                window,
                weight,
                format,
            } => {
                if *window < 1 {
                    bail!("--window must be positive");
                }
                let g = crystal_graph(*n, *d, 1, *window, weight.as_deref())?;
                match format {
                    GraphFormat::Dot => write!(stdout, "{}", g.to_dot())?,
                    GraphFormat::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&g)?)?,
                }
                Ok(true)
            }
            Entity::Transfer {
                s,
                span_len,
                span_power,
            } => {
                let s: PeriodicMatrix = s.parse()?;
                let span = MonomialSpan::generate(s.n(), s.rank(), &s.col_weight(), *span_len, *span_power, 500_000)?;
                let cache = cache(cli)?;
                let report = check_canonical_transfer(&s, &span, cli.psi, |x| cache.schur(x))?;
                let ok = report.verdict != Verdict::Counterexample;
                writeln!(stdout, "{}", serde_json::to_string_pretty(&[report])?)?;
                Ok(ok)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
