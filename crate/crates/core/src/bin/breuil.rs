use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use breuil::cli::{run_with, Command, Format};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "breuil", version, about = "Breuil windows, displays and modules at finite precision")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "human")]
    format: Fmt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Human,
    Kv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate the frame, every window and an optional morphism.
    Validate { file: Option<PathBuf> },
    /// Height, dimension and nilpotence of each window's special fiber.
    SpecialFiber { file: Option<PathBuf> },
    /// The Dieudonné display of each window.
    Display { file: Option<PathBuf> },
    /// Solve for the isomorphism over T_a between two windows.
    SolveIso { file: Option<PathBuf> },
    /// Breuil module of the isogeny given by two windows and a matrix.
    Module { file: Option<PathBuf> },
    /// nu(a) from --p/--a or from a frame block.
    Nu {
        file: Option<PathBuf>,
        #[arg(long, requires = "a")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        a: Option<u64>,
    },
    /// Run the built-in invariant suite.
    Selftest,
}

fn read_input(file: Option<&PathBuf>) -> std::io::Result<String> {
    match file {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = match args.format {
        Fmt::Human => Format::Human,
        Fmt::Kv => Format::Kv,
    };
    let (cmd, file, nu_args) = match &args.cmd {
        Cmd::Validate { file } => (Command::Validate, file.as_ref(), None),
        Cmd::SpecialFiber { file } => (Command::SpecialFiber, file.as_ref(), None),
        Cmd::Display { file } => (Command::Display, file.as_ref(), None),
        Cmd::SolveIso { file } => (Command::SolveIso, file.as_ref(), None),
        Cmd::Module { file } => (Command::Module, file.as_ref(), None),
        Cmd::Nu { file, p, a } => (Command::Nu, file.as_ref(), p.zip(*a)),
        Cmd::Selftest => (Command::Selftest, None, None),
    };
    let input = if matches!(cmd, Command::Selftest) || nu_args.is_some() {
        String::new()
    } else {
        match read_input(file) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: cannot read input: {}", e);
                return ExitCode::from(2);
            }
        }
    };
    let out = run_with(cmd, &input, format, nu_args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
