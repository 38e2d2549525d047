use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nielsen_cli::commands::{self, CliError, CliResult, Output, Surface};
use nielsen_core::projective::Field;

/// Reidemeister, minimum and Nielsen coincidence numbers for maps from
/// spheres into spheres and projective spaces.
#[derive(Parser)]
#[command(name = "nielsen", version)]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    machine: bool,
    /// Table file; overrides $NIELSEN_TABLES and the embedded dataset.
    #[arg(long, global = true, value_name = "PATH")]
    tables: Option<PathBuf>,
    /// Exit with status 1 on unknown values or failed checks.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe π_m(S^q).
    Pi { m: u32, q: u32 },
    /// Describe the stable stem π_k^S.
    Stems { k: u32 },
    /// Numbers for f1, f2: S^m → KP(n'), given by their lifts to S^q.
    Nielsen {
        /// Field R, C or H.
        #[arg(long)]
        field: Field,
        #[arg(long)]
        nprime: u32,
        #[arg(long)]
        m: u32,
        /// Expression for the lift of f1 in π_m(S^q).
        #[arg(long)]
        f1: String,
        /// Expression for the lift of f2.
        #[arg(long)]
        f2: String,
        /// Take (f1, f1) to be loose when it is not known to be.
        #[arg(long)]
        assume_self_loose: bool,
    },
    /// Numbers for f1, f2: S^m → S^n.
    Sphere {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Expression in π_m(S^n).
        #[arg(long)]
        f1: String,
        /// Expression in π_m(S^n).
        #[arg(long)]
        f2: String,
    },
    /// Which Nielsen numbers agree identically, one row per m.
    Compare {
        #[arg(long, value_parser = surface)]
        surface: Surface,
        /// Inclusive range `a..b`.
        #[arg(long)]
        m_range: String,
    },
    /// Witness pairs separating the Nielsen numbers.
    Witnesses {
        /// One of a, b, c.
        #[arg(long)]
        claim: char,
    },
    /// Looseness of self-coincidence pairs.
    Selfloose {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        nprime: u32,
        #[arg(long)]
        m: Option<u32>,
        /// Ask about the projection S^q → KP(n') instead.
        #[arg(long)]
        fiber: bool,
    },
    /// Check that the self-map s moves every point off its K-line.
    VerifyS {
        #[arg(long)]
        field: Field,
        #[arg(long, default_value_t = 1)]
        nprime: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the structural and consistency checks on the table file.
    ValidateData,
    /// Whether MCC = N^# for all pairs S^m → KP(n').
    Wecken {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        nprime: u32,
        #[arg(long)]
        m: u32,
    },
    /// The Kervaire invariant one exception.
    Kervaire {
        #[arg(long, default_value = "R")]
        field: Field,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
}

fn surface(s: &str) -> Result<Surface, String> {
    match s.to_ascii_uppercase().as_str() {
        "CP1" => Ok(Surface::Cp1),
        "RP2" => Ok(Surface::Rp2),
        _ => Err(format!("unknown surface `{s}` (expected CP1 or RP2)")),
    }
}

fn run(cli: &Cli) -> CliResult<Output> {
    let tables = || commands::tables(cli.tables.as_deref());
    match &cli.command {
        Command::Pi { m, q } => commands::pi(&tables()?, *m, *q),
        Command::Stems { k } => commands::stems(&tables()?, *k),
        Command::Nielsen { field, nprime, m, f1, f2, assume_self_loose } => {
            commands::nielsen(&tables()?, *field, *nprime, *m, f1, f2, *assume_self_loose)
        }
        Command::Sphere { m, n, f1, f2 } => commands::sphere(&tables()?, *m, *n, f1, f2),
        Command::Compare { surface, m_range } => {
            let range = commands::parse_range(m_range)?;
            commands::compare(&tables()?, *surface, range)
        }
        Command::Witnesses { claim } => commands::witnesses(&tables()?, *claim),
        Command::Selfloose { field, nprime, m, fiber } => commands::selfloose(*field, *nprime, *m, *fiber),
        Command::VerifyS { field, nprime, samples, seed } => commands::verify_s(*field, *nprime, *samples, *seed),
        Command::ValidateData => {
            let (origin, text) = commands::table_source(cli.tables.as_deref())?;
            let out = commands::validate_data(&origin, &text)?;
            if out.violation {
                print(cli, &out);
                return Err(CliError { code: commands::EXIT_DATA, message: "data file has violations".into() });
            }
            Ok(out)
        }
        Command::Wecken { field, nprime, m } => commands::wecken(*field, *nprime, *m),
        Command::Kervaire { field, n, m } => commands::kervaire(*field, *n, *m),
    }
}

fn print(cli: &Cli, out: &Output) {
    if cli.machine {
        println!("{}", serde_json::to_string_pretty(&out.machine).expect("JSON values serialize"));
    } else {
        print!("{}", out.human);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print(&cli, &out);
            ExitCode::from(out.exit_code(cli.strict))
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
