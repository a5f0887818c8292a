//! Thin front end: argument parsing and process plumbing only; all
//! behavior lives in `lipfree::cli`.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use lipfree::cli::{run_check, run_converge, run_norm, Method, Overrides};
use lipfree::problem::read_problem;
use lipfree::{Error, Result};

/// Free-space norms over convex domains: dual and flow solvers,
/// convergence studies, property checks.
#[derive(Parser)]
#[command(name = "lipfree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the free-space norm of the problem's molecule
    Norm {
        /// Problem file (JSON)
        #[arg(long)]
        problem: PathBuf,
        /// dual, beckmann, or both
        #[arg(long, default_value = "dual")]
        method: String,
        /// Override the grid spacing used by the flow solver
        #[arg(long)]
        grid_h: Option<f64>,
        /// Override the facet count of the polygonal dual ball
        #[arg(long)]
        facets: Option<usize>,
    },
    /// Run a grid/facet refinement study and emit its CSV table
    Converge {
        /// Problem file (JSON) with grid.h_list and grid.k_list
        #[arg(long)]
        problem: PathBuf,
        /// Override the facet count outside the studied k_list
        #[arg(long)]
        facets: Option<usize>,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named property battery and report per-assertion verdicts
    Check {
        /// Problem file (JSON)
        #[arg(long)]
        problem: PathBuf,
        /// roundtrip, compat, mollify, or isometry1d (overrides the file)
        #[arg(long)]
        battery: Option<String>,
        /// Seed for randomized batteries (overrides the file)
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Norm { problem, method, grid_h, facets } => {
            let spec = read_problem(&problem)?;
            let method: Method = method.parse()?;
            let ov = Overrides { grid_h, facets, ..Default::default() };
            print!("{}", run_norm(&spec, method, &ov)?);
            Ok(0)
        }
        Command::Converge { problem, facets, out } => {
            let spec = read_problem(&problem)?;
            let ov = Overrides { facets, ..Default::default() };
            let csv = run_converge(&spec, &ov)?;
            match out {
                Some(path) => fs::write(&path, &csv).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Command::Check { problem, battery, seed } => {
            let spec = read_problem(&problem)?;
            let ov = Overrides { battery, seed, ..Default::default() };
            let (report, passed) = run_check(&spec, &ov)?;
            print!("{report}");
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn main() {
    match run(Cli::parse()) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
