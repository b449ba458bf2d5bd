use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use incibraid::scalars::Field;
use incibraid::search::DEFAULT_LIMIT;
use incibraid_cli::{format, run_check, run_family, run_search, CheckKind, CliError, FamilyArgs, RunReport, SearchArgs};

#[derive(Parser)]
#[command(name = "incibraid", version, about = "Braidings on incidence coalgebras of finite posets")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a lambda file against a poset file.
    Check {
        poset: PathBuf,
        lambda: PathBuf,
        #[arg(long = "check", value_enum, value_delimiter = ',')]
        checks: Vec<CheckKind>,
        /// Read each record as `output | input`.
        #[arg(long)]
        transpose_ingest: bool,
    },
    /// Realize a family instance, or N random ones, and verify them.
    Family {
        id: String,
        /// Parameters as name=value.
        params: Vec<String>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value = "Q")]
        field: Field,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lambda file, or a directory with --random. Without it the
        /// tensor goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the poset file.
        #[arg(long)]
        poset_out: Option<PathBuf>,
    },
    /// Exhaustive census over a prime field.
    Search {
        poset: PathBuf,
        #[arg(long, default_value = "GF(2)")]
        field: Field,
        /// Enumerate every support entry instead of the seed data.
        #[arg(long)]
        no_prune: bool,
        /// Enumerate every admissible set-level restriction, not only the flip.
        #[arg(long)]
        all_restrictions: bool,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(report: &RunReport, json: bool, to_stderr: bool) {
    let text = if json { report.to_json() } else { report.to_string() };
    if to_stderr {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
}

fn main() -> ExitCode {
    let command: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    // a tensor printed to stdout keeps stdout a valid lambda file
    let tensor_on_stdout = matches!(&cli.cmd, Cmd::Family { out: None, .. }) && !cli.json;
    let result: Result<RunReport, CliError> = match &cli.cmd {
        Cmd::Check {
            poset,
            lambda,
            checks,
            transpose_ingest,
        } => run_check(command, poset, lambda, checks, *transpose_ingest),
        Cmd::Family {
            id,
            params,
            random,
            field,
            seed,
            out,
            poset_out,
        } => {
            let args = FamilyArgs {
                family: id.clone(),
                params: params.clone(),
                random: *random,
                field: *field,
                seed: *seed,
                out: out.clone(),
                poset_out: poset_out.clone(),
            };
            run_family(command, &args).map(|(report, tensors)| {
                if tensor_on_stdout {
                    for t in &tensors {
                        print!("{}", format::write_lambda(t));
                    }
                }
                report
            })
        }
        Cmd::Search {
            poset,
            field,
            no_prune,
            all_restrictions,
            limit,
            out,
        } => {
            let args = SearchArgs {
                prune: !no_prune,
                all_restrictions: *all_restrictions,
                limit: *limit,
                out: out.clone(),
                ..SearchArgs::new(poset.clone(), *field)
            };
            run_search(command, &args)
        }
    };
    match result {
        Ok(report) => {
            emit(&report, cli.json, tensor_on_stdout);
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
