use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bis_lab::{Command, Format};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bislab", version, about = "Rate regions and code simulations for biometric identification")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Information quantities and the corner tuple of the configured auxiliaries
    Rates(Args),
    /// Boundary sweep over `region.r_i_grid`
    Region(Args),
    /// Monte Carlo trials of the random code
    Simulate(Args),
    /// Two-way containment check between the two region descriptions
    Equiv(Args),
    /// Special-case reductions of the region
    Reduce(Args),
}

#[derive(clap::Args)]
struct Args {
    /// TOML experiment file
    #[arg(long)]
    config: PathBuf,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; csv is available for `region` only
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Rates(a) => (Command::Rates, a),
        Cmd::Region(a) => (Command::Region, a),
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Equiv(a) => (Command::Equiv, a),
        Cmd::Reduce(a) => (Command::Reduce, a),
    };
    let format = match (args.format, command) {
        (Some(FormatArg::Json), _) => Format::Json,
        (Some(FormatArg::Csv), _) | (None, Command::Region) => Format::Csv,
        (None, _) => Format::Json,
    };
    match bis_lab::run(command, &args.config, args.out.as_deref(), format, args.threads) {
        Ok(Some(text)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
