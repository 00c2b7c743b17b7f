use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use wseg::{run, EvalArgs, SegmentArgs, SynthArgs};

/// Segment handwritten document pages directly into word images.
#[derive(Parser, Debug)]
#[command(name = "wseg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Segment a page image into word crops
    Segment(SegmentArgs),
    /// Score predicted boxes against ground truth
    Eval(EvalArgs),
    /// Generate a synthetic page with ground truth
    Synth(SynthArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let result = match &cli.command {
        Command::Segment(args) => run::run_segment(args),
        Command::Eval(args) => run::run_eval(args),
        Command::Synth(args) => run::run_synth(args),
    };
    if let Err(e) = result {
        eprintln!("wseg: {e}");
        std::process::exit(e.exit_code());
    }
}
