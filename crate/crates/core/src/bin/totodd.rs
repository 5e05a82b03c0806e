use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use totodd::linalg::{left_kernel, rank, right_kernel};
use totodd::matrices::MatrixKind;
use totodd::series::{
    compare_rank_to_conjecture, conjectured_rank_series, recursion_b, recursion_t, series_e,
    series_o, series_s, DEFAULT_SIZE_BUDGET,
};
use totodd::store::{matrix_checksum, resolve_cache_dir, write_atomic, MatrixStore};
use totodd::suite::{run, OutputFormat, RunConfig, Suite};
use totodd::Result;

#[derive(Parser)]
#[command(
    name = "totodd",
    version,
    about = "Exact ranks and kernels of totally odd MZV matrices"
)]
struct Cli {
    /// Matrix cache directory (falls back to $TOTODD_CACHE, then ./cache)
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,

    /// json, csv or text
    #[arg(long, global = true)]
    format: Option<String>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct KindArgs {
    /// E, Ej, C or F
    kind: String,
    n: u32,
    r: usize,
    /// Only for Ej
    j: Option<usize>,
}

impl KindArgs {
    fn kind(&self) -> Result<MatrixKind> {
        MatrixKind::from_words(&self.kind, self.n, self.r, self.j)
    }
}

#[derive(Args)]
struct Range {
    #[arg(long = "Nmax", default_value_t = 21)]
    nmax: u32,
    #[arg(long = "rmax", default_value_t = 4)]
    rmax: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load) a matrix and write it to the cache
    Build(KindArgs),
    /// Print rank and kernel dimension
    Rank(KindArgs),
    /// Print a basis of the right (default) or left kernel
    Kernel {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        left: bool,
    },
    /// Run verification suites; exits nonzero only on theorem violations
    Verify {
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Random polynomials per (N, r, j) in the commute suite
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Also write the report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Computed ranks of C against the conjectured dimensions
    Table {
        #[command(flatten)]
        range: Range,
        /// Skip matrices with more rows than this
        #[arg(long, default_value_t = DEFAULT_SIZE_BUDGET)]
        budget: u64,
    },
    /// Print the generating series up to a weight bound
    Series {
        #[arg(long, default_value_t = 30)]
        bound: usize,
        #[arg(long = "rmax", default_value_t = 4)]
        rmax: usize,
    },
}

fn format_of(cli: &Cli, default: OutputFormat) -> Result<OutputFormat> {
    cli.format.as_deref().map_or(Ok(default), str::parse)
}

fn store_for(cli: &Cli) -> MatrixStore {
    MatrixStore::at(resolve_cache_dir(cli.cache_dir.as_deref()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.cmd {
        Command::Build(args) => {
            let kind = args.kind()?;
            let store = store_for(cli);
            let path = store.persist(&kind)?;
            let m = store.get(&kind)?;
            println!("{}", path.display());
            println!(
                "{}x{} sha256 {}",
                m.rows(),
                m.cols(),
                matrix_checksum(&kind, &m)
            );
        }
        Command::Rank(args) => {
            let m = store_for(cli).get(&args.kind()?)?;
            let rk = rank(&m);
            println!("rank {rk}, ker {}", m.rows() - rk);
        }
        Command::Kernel { kind, left } => {
            let m = store_for(cli).get(&kind.kind()?)?;
            let basis = if *left {
                left_kernel(&m)
            } else {
                right_kernel(&m)
            };
            match format_of(cli, OutputFormat::Text)? {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&basis)?),
                _ => {
                    for v in &basis.vectors {
                        let words: Vec<String> = v.iter().map(ToString::to_string).collect();
                        println!("{}", words.join(" "));
                    }
                }
            }
        }
        Command::Verify {
            range,
            suite,
            samples,
            out,
        } => {
            let mut config = RunConfig::new(range.nmax, range.rmax)?
                .with_suites(Suite::parse_many(suite)?)
                .with_seed(cli.seed);
            config.samples = *samples;
            config.format = format_of(cli, OutputFormat::Json)?;
            config.cache_dir = Some(resolve_cache_dir(cli.cache_dir.as_deref()));
            let report = run(&config)?;
            let text = match config.format {
                OutputFormat::Json => report.to_json()? + "\n",
                OutputFormat::Csv => report.to_csv()?,
                OutputFormat::Text => report.to_text(),
            };
            match out {
                Some(path) => write_atomic(path, text.as_bytes())?,
                None => print!("{text}"),
            }
            for f in report.findings() {
                eprintln!("{f}");
            }
            for v in report.violations() {
                eprintln!("{v}");
            }
            eprintln!(
                "{} records, {} findings, {} violations",
                report.records.len(),
                report.findings().count(),
                report.violations().count()
            );
            return Ok(ExitCode::from(report.exit_code() as u8));
        }
        Command::Table { range, budget } => {
            let store = store_for(cli);
            let table = compare_rank_to_conjecture(range.nmax, range.rmax, *budget, &store)?;
            match format_of(cli, OutputFormat::Csv)? {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&table.rows)?),
                _ => table.write_csv(std::io::stdout().lock())?,
            }
        }
        Command::Series { bound, rmax } => print_series(*bound, *rmax)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn print_series(bound: usize, rmax: usize) -> Result<()> {
    println!("E(x) = {}", series_e(bound));
    println!("O(x) = {}", series_o(bound));
    println!("S(x) = {}", series_s(bound));
    for r in 1..=rmax {
        println!(
            "rank series, depth {r}: {}",
            conjectured_rank_series(r, bound)
        );
    }
    for r in 2..=rmax {
        println!("T_{r}(x) = {}", recursion_t(r, bound));
        println!("B_{r}(x) = {}", recursion_b(r, bound)?);
    }
    Ok(())
}
