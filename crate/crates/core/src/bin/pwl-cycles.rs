use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pwl_cycles::displacement::ScanConfig;
use pwl_cycles::report::{analyze, SystemSpec};
use pwl_cycles::svg::{plot, PlotKind};
use pwl_cycles::sweep::{parse_strata, run_sweep, sweep_csv, SweepConfig};
use pwl_cycles::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_NO_CROSSING: u8 = 2;
const EXIT_UNCERTIFIED: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

/// Crossing limit cycles of planar piecewise linear systems with two zones.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical parameters of a system as JSON.
    Canon { input: PathBuf },
    /// Find and classify crossing limit cycles and certify their count.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        scan: ScanArgs,
        /// Emit the JSON report (default).
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit the cycle table as CSV.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a seeded batch of random systems and write one CSV row per system.
    Sweep {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated strata (generic, tl_zero, dl_zero, al_zero, disc_zero, continuous) or `all`.
        #[arg(long, default_value = "all")]
        strata: String,
        /// Worker threads; defaults to the number of logical processors.
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an SVG diagnostic.
    Plot {
        input: PathBuf,
        /// One of halfmaps, delta, contact.
        #[arg(long, default_value = "delta")]
        what: PlotKind,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Zero tolerance for half-map returns and displacement zeros.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Grid points over the half-map domain.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Truncation of unbounded half-map domains.
    #[arg(long, default_value_t = 1e6)]
    cap: f64,
}

impl ScanArgs {
    fn config(&self) -> Result<ScanConfig, Error> {
        if self.grid < 64 {
            return Err(Error::InvalidInput("--grid must be at least 64".into()));
        }
        if !(self.tol > 0.0 && self.cap > 0.0) {
            return Err(Error::InvalidInput("--tol and --cap must be positive".into()));
        }
        let mut cfg = ScanConfig {
            grid_n: self.grid,
            tol: self.tol,
            ..ScanConfig::default()
        };
        cfg.halfmap.tol = self.tol;
        cfg.halfmap.cap = self.cap;
        Ok(cfg)
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        Error::NoCrossingDynamics(_) => EXIT_NO_CROSSING,
        _ => EXIT_INPUT,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn set_threads(n: usize) {
    // only fails if a pool already exists, which cannot happen here
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Canon { input } => {
            set_threads(1);
            let c = SystemSpec::load(&input)?.canonical()?;
            println!("{}", serde_json::to_string_pretty(&c).expect("parameters serialize"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            input,
            scan,
            json: _,
            csv,
            out,
        } => {
            set_threads(1);
            let cfg = scan.config()?;
            let report = analyze(&SystemSpec::load(&input)?, &cfg)?;
            let text = if csv { report.to_csv() } else { report.to_json() + "\n" };
            emit(&text, out.as_deref())?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(if report.count.violation {
                eprintln!("bound violated: {}", report.count.notes.join("; "));
                ExitCode::from(EXIT_VIOLATION)
            } else if !report.count.certified {
                ExitCode::from(EXIT_UNCERTIFIED)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Sweep {
            n,
            seed,
            strata,
            threads,
            scan,
            out,
        } => {
            if n == 0 {
                return Err(Error::InvalidInput("--n must be at least 1".into()));
            }
            if let Some(t) = threads {
                set_threads(t.max(1));
            }
            let cfg = SweepConfig {
                n,
                seed,
                strata: parse_strata(&strata)?,
                scan: scan.config()?,
            };
            let (rows, summary) = run_sweep(&cfg);
            emit(&sweep_csv(&rows, &summary), out.as_deref())?;
            eprint!("{}", summary.csv_trailer());
            Ok(if summary.violations > 0 {
                ExitCode::from(EXIT_VIOLATION)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Plot { input, what, scan, out } => {
            set_threads(1);
            let report = analyze(&SystemSpec::load(&input)?, &scan.config()?)?;
            match plot(&report, what) {
                Ok(svg) => emit(&svg, Some(&out))?,
                Err(e @ Error::NotApplicable(_)) => eprintln!("warning: {e}"),
                Err(e) => return Err(e),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}
