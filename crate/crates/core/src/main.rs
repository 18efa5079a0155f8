use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use gfmatroid::cli::{run, Command, RunConfig, EXIT_INPUT};

/// Analyses of matroids represented over small finite fields.
///
/// INPUT is `<path>.gfm`, `<path>.graph[@gf<q>]` or `gen:<id>`, where ids
/// include `mk4`, `mk5_dual`, `pg_2_2`, `u_2_4@gf5`, `petersen@gf2` and
/// `random_3_7@gf3`.
#[derive(Parser, Debug)]
#[command(name = "gfmatroid", version)]
struct Args {
    command: Command,
    input: String,
    /// Target instance for `minor`.
    target: Option<String>,
    /// Default field: `q` or `q:modulus-code`.
    #[arg(long)]
    field: Option<String>,
    /// Clique size for `verify`.
    #[arg(long, default_value_t = 4)]
    t: usize,
    /// `all` or `sample:<n>`.
    #[arg(long, default_value = "all")]
    basis: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Subset budget for exact `shatter`.
    #[arg(long)]
    budget: Option<u128>,
    /// Subset size for `shatter`.
    #[arg(long)]
    m: Option<usize>,
    /// Sample this many subsets in `shatter` instead of enumerating.
    #[arg(long)]
    trials: Option<usize>,
    /// Report path; for `gen`, the `.gfm` path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let report = serde_json::json!({
                "error": { "kind": "usage", "message": e.render().to_string().trim_end() }
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let config = RunConfig {
        command: args.command,
        input: args.input,
        target: args.target,
        field: args.field,
        t: args.t,
        basis: args.basis,
        seed: args.seed,
        budget: args.budget,
        m: args.m,
        trials: args.trials,
        out: args.out,
    };
    let outcome = run(&config);
    if config.out.is_none() || config.command == Command::Gen {
        let _ = std::io::stdout().write_all(outcome.report.as_bytes());
    }
    ExitCode::from(outcome.code as u8)
}
