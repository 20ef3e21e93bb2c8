//! Command-line scenario runner for the modular representation workbench.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use modrep::error::Error;
use modrep::report::{run_scenario, RunOutcome};
use modrep::scenario::{builtin, load_scenario, suggest_field, Scenario, BUILTIN_NAMES};

#[derive(Parser)]
#[command(name = "modrep", version, about = "Modular representation workbench: blocks, rank-variety lines, and ext-blocks of the stable module category")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct RunOpts {
    /// Override the random seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Tate window half-width
    #[arg(long)]
    window: Option<usize>,
    /// Retries after an exhausted randomized search
    #[arg(long)]
    retries: Option<usize>,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the ext-block graph in DOT format here
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a builtin scenario
    Builtin {
        /// One of: g84-unstable, g84-stable, p3, p5, s3-sanity
        name: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Field utilities
    Fields {
        /// Suggest the smallest splitting field for the group of a scenario
        /// (builtin name or file path)
        #[arg(long)]
        suggest: String,
    },
}

fn apply_opts(sc: &mut Scenario, opts: &RunOpts) {
    if let Some(s) = opts.seed {
        sc.seed = s;
    }
    if let Some(w) = opts.window {
        sc.window = Some(w);
    }
    if let Some(r) = opts.retries {
        sc.retries = r;
    }
}

fn execute(mut sc: Scenario, opts: &RunOpts) -> Result<bool, Error> {
    apply_opts(&mut sc, opts);
    let RunOutcome { report, dot } = run_scenario(&sc)?;
    print!("{}", report.to_text());
    if let Some(path) = &opts.out {
        std::fs::write(path, report.to_json())?;
    }
    if let Some(path) = &opts.dot {
        let dot = dot.ok_or(Error::DotWithoutExtBlocks)?;
        std::fs::write(path, dot)?;
    }
    Ok(report.passed)
}

fn load(name_or_path: &str) -> Result<Scenario, Error> {
    if BUILTIN_NAMES.contains(&name_or_path) {
        builtin(name_or_path)
    } else {
        load_scenario(std::path::Path::new(name_or_path))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Run { file, opts } => load_scenario(file).and_then(|sc| execute(sc, opts)),
        Cmd::Builtin { name, opts } => builtin(name).and_then(|sc| execute(sc, opts)),
        Cmd::Fields { suggest } => load(suggest).and_then(|sc| {
            suggest_field(&sc).map(|(p, n)| {
                println!("GF({p}^{n})");
                true
            })
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
