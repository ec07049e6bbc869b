use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use udisc::cli;

/// Unitary discriminants of characters and discriminants of Hermitian forms.
#[derive(Parser)]
#[command(name = "udisc", version)]
struct Args {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deduce the unitary discriminant from a fact file.
    Deduce { file: PathBuf },
    /// Discriminant, discriminant algebra and transfer of a Gram matrix.
    Hform { file: PathBuf },
    /// Hilbert symbols (a,b)_v, at one place or at every relevant place.
    #[command(allow_negative_numbers = true)]
    Symbol { a: String, b: String, place: Option<String> },
    /// Whether a is a norm from Q(sqrt(-delta0)).
    #[command(allow_negative_numbers = true)]
    Isnorm { a: String, delta0: String },
    /// Run every fact file in a directory against its expected block.
    Corpus { dir: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (out, code) = match &args.command {
        Command::Deduce { file } => cli::cmd_deduce(file, args.json),
        Command::Hform { file } => cli::cmd_hform(file, args.json),
        Command::Symbol { a, b, place } => cli::cmd_symbol(a, b, place.as_deref(), args.json),
        Command::Isnorm { a, delta0 } => cli::cmd_isnorm(a, delta0, args.json),
        Command::Corpus { dir } => cli::cmd_corpus(dir, args.json),
    };
    print!("{out}");
    ExitCode::from(code as u8)
}
