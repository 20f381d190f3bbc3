use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ocwt_cli::output::{read_manifest, render, write_run, write_table};
use ocwt_cli::runner::{kernel_rows, run, transform_rows, wct_rows};
use ocwt_cli::scenario::{Scenario, Suite};
use ocwt_cli::{RunError, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};

/// Numerical checks for the Opdam–Cherednik windowed transform.
#[derive(Parser)]
#[command(name = "ocwt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file; defaults apply when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "ocwt-out")]
    out: PathBuf,
    /// Grid multiplier for convergence studies.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=16))]
    refine: u32,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Forward transform of `f` as `lambda,re,im`.
    Transform(Common),
    /// Windowed transform of `f` with the first window as `x,xi,re,im,abs2`.
    Wct(Common),
    /// Slices of the translation kernel as `x,y,z,k`.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Samples per slice.
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Runs suites and writes reports; the scenario's list when none are given.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        suites: Vec<Suite>,
    },
    /// Summarizes a manifest written by `verify`.
    Report { manifest: PathBuf },
}

fn scenario(common: &Common) -> Result<Scenario, RunError> {
    let s = match &common.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    s.validate()?;
    Ok(s)
}

fn in_pool<T>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, RunError>
where
    T: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ocwt_cli::ConfigError::Validation(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

fn table<const N: usize>(out: &Path, file: &str, header: [&str; N], rows: &[[f64; N]]) -> Result<i32, RunError> {
    let path = out.join(file);
    write_table(&path, header, rows)?;
    println!("{}", path.display());
    Ok(EXIT_PASS)
}

fn execute(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Transform(c) => {
            let s = scenario(&c)?;
            let rows = in_pool(c.jobs, || transform_rows(&s, c.refine as usize))??;
            table(&c.out, "transform.csv", ["lambda", "re", "im"], &rows)
        }
        Command::Wct(c) => {
            let s = scenario(&c)?;
            let rows = in_pool(c.jobs, || wct_rows(&s, c.refine as usize))??;
            table(&c.out, "wct.csv", ["x", "xi", "re", "im", "abs2"], &rows)
        }
        Command::Kernel { common: c, points } => {
            let s = scenario(&c)?;
            let rows = kernel_rows(&s, points)?;
            table(&c.out, "kernel.csv", ["x", "y", "z", "k"], &rows)
        }
        Command::Verify { common: c, suites } => {
            let s = scenario(&c)?;
            let suites = s.selected_suites(&suites);
            let manifest = run(&s, &suites, c.refine as usize, c.jobs)?;
            for path in write_run(&c.out, &manifest)? {
                eprintln!("wrote {}", path.display());
            }
            print!("{}", render(&manifest));
            Ok(if manifest.all_passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Report { manifest } => {
            let m = read_manifest(&manifest)?;
            print!("{}", render(&m));
            Ok(if m.all_passed() { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { EXIT_PASS as u8 });
        }
    };
    let code = match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
