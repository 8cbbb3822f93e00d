use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use singinv::cli::{exit_code, run, Format, Options};
use singinv::weightss::Field;

/// Exact invariants of singular spaces from JSON job documents.
#[derive(Parser, Debug)]
#[command(name = "singinv", version)]
struct Args {
    /// Job document (`-` for standard input).
    input: PathBuf,
    /// Series truncation order in `q`.
    #[arg(long)]
    order: Option<u32>,
    /// Coefficient field: Q, F2 or Fp:<p>.
    #[arg(long)]
    field: Option<String>,
    /// Output format: text or json.
    #[arg(long)]
    format: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn execute(args: &Args) -> singinv::Result<String> {
    let src = if args.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(&args.input)
    }
    .map_err(|e| singinv::Error::input(format!("{}: {e}", args.input.display())))?;
    let options = Options {
        order: args.order,
        field: args.field.as_deref().map(Field::parse).transpose()?,
        format: args.format.as_deref().map(Format::parse).transpose()?,
    };
    run(&src, &options)
}
