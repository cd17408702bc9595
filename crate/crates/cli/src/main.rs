//! `grdh`: exact counts, universality classification, the authentication
//! code, and formula-versus-enumeration sweeps from the command line.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 verification failure.
//! `GRDH_ENUM_CAP` bounds every enumeration.

mod analysis;
mod mac;
mod report;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{ClassifyArgs, CountArgs};
use crate::mac::KeySource;
use crate::report::{CliResult, Failure, Report};
use crate::sweep::SweepArgs;

#[derive(Parser)]
#[command(
    name = "grdh",
    version,
    about = "Restricted dot-product hashing: exact counts, probabilities and MACs"
)]
struct Cli {
    /// Print one JSON document instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Also show probabilities as (approximate) decimals
    #[arg(long, global = true)]
    approx: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count solutions of a1 x1 + ... + ak xk = b (mod n) with gcd(xi, n) = ti
    Count(CountArgs),
    /// AU and ADU status of a hash family, with witnesses
    Classify(ClassifyArgs),
    /// Authentication code with secrecy over Z_n^k
    #[command(subcommand)]
    Mac(MacCommand),
    /// Formula-versus-enumeration sweep
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SchemeArgs {
    /// Odd modulus
    #[arg(short = 'n')]
    n: u64,
    #[arg(short = 'k', default_value_t = 1)]
    k: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct KeyArgs {
    /// Key as x1,..,xk:y1,..,yk
    #[arg(long, value_parser = mac::parse_key)]
    key: Option<(Vec<u64>, Vec<u64>)>,
    /// Key file written by `mac keygen -o`
    #[arg(long)]
    key_file: Option<PathBuf>,
}

impl KeyArgs {
    fn source(self) -> KeySource {
        match (self.key, self.key_file) {
            (Some((x, y)), _) => KeySource::Inline(x, y),
            (None, Some(path)) => KeySource::File(path),
            (None, None) => unreachable!("clap requires one key source"),
        }
    }
}

#[derive(Subcommand)]
enum MacCommand {
    /// Sample a key
    Keygen {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Seed for a reproducible key
        #[arg(long)]
        seed: Option<u64>,
        /// Write the key as JSON
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    Encrypt {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        key: KeyArgs,
        /// Message, comma separated
        #[arg(short = 'm', value_delimiter = ',', required = true)]
        m: Vec<u64>,
    },
    /// Decrypt and verify; a bad tag prints REJECT
    Decrypt {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        key: KeyArgs,
        /// Ciphertext, comma separated
        #[arg(short = 'c', value_delimiter = ',', required = true)]
        c: Vec<u64>,
        #[arg(long)]
        tag: u64,
    },
    /// Exact secrecy, key-hiding and substitution analysis by enumeration
    Analyze {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Include the optimal forger's substitution table
        #[arg(long)]
        show_forger: bool,
    },
}

fn run(cli: Cli) -> CliResult<Report> {
    let approx = cli.approx;
    match cli.command {
        Command::Count(args) => analysis::count(args),
        Command::Classify(args) => analysis::classify_cmd(args, approx),
        Command::Mac(cmd) => match cmd {
            MacCommand::Keygen { scheme, seed, out } => {
                mac::keygen(scheme.n, scheme.k, seed, out.as_deref())
            }
            MacCommand::Encrypt { scheme, key, m } => {
                mac::encrypt_cmd(scheme.n, scheme.k, key.source(), m)
            }
            MacCommand::Decrypt {
                scheme,
                key,
                c,
                tag,
            } => mac::decrypt_cmd(scheme.n, scheme.k, key.source(), c, tag),
            MacCommand::Analyze {
                scheme,
                show_forger,
            } => mac::analyze(scheme.n, scheme.k, show_forger, approx),
        },
        Command::Sweep(args) => sweep::sweep(args, approx, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                match serde_json::to_string_pretty(&report) {
                    Ok(s) => println!("{s}"),
                    Err(e) => return Failure::from(e).exit_code(),
                }
            } else if report.stdout_taken {
                report.text.iter().for_each(|l| eprintln!("{l}"));
            } else {
                report.text.iter().for_each(|l| println!("{l}"));
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{failure}");
            failure.exit_code()
        }
    }
}
