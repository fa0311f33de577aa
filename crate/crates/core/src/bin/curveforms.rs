use clap::{Parser, Subcommand};
use curveforms::cli::{run, Command, CurveSpec, InputFile};
use curveforms::normalize::DEFAULT_LOOP_CAP;
use curveforms::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "curveforms", version, about = "Regular differentials and Cartier-Manin matrices of plane curves over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Opts {
    /// Prime characteristic.
    #[arg(long)]
    p: Option<u64>,
    /// Curve equation in x and y, e.g. "x^5+y^5+x*y".
    #[arg(long)]
    curve: Option<String>,
    /// JSON file with {"p": ..., "curve": "..."} instead of --p/--curve.
    #[arg(long, conflicts_with_all = ["p", "curve"])]
    input: Option<PathBuf>,
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    json: bool,
    /// Cap on normalization loops.
    #[arg(long)]
    loop_cap: Option<usize>,
    /// Report the coordinate change applied to the input.
    #[arg(long)]
    show_transform: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integral closure as a tower of ring extensions.
    Normalize(Opts),
    /// Basis of the integral closure, trace matrix and conductor generators.
    Conductor(Opts),
    /// Basis of regular differentials phi dx / F_y.
    Forms(Opts),
    /// Cartier-Manin matrix on the differential basis.
    Cartier(Opts),
    /// Genus, a-number, p-rank and superspeciality.
    Invariants(Opts),
}

fn spec_of(o: &Opts) -> Result<CurveSpec, Error> {
    let (p, curve, file_cap) = match &o.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
            let f: InputFile = serde_json::from_str(&text)
                .map_err(|e| Error::Validation(format!("bad input file {}: {e}", path.display())))?;
            (f.p, f.curve, f.loop_cap)
        }
        None => match (o.p, &o.curve) {
            (Some(p), Some(c)) => (p, c.clone(), None),
            _ => return Err(Error::Validation("either --input or both --p and --curve are required".into())),
        },
    };
    let mut spec = CurveSpec::new(p, curve);
    spec.loop_cap = o.loop_cap.or(file_cap).unwrap_or(DEFAULT_LOOP_CAP);
    spec.show_transform = o.show_transform;
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, opts) = match &cli.command {
        Cmd::Normalize(o) => (Command::Normalize, o),
        Cmd::Conductor(o) => (Command::Conductor, o),
        Cmd::Forms(o) => (Command::Forms, o),
        Cmd::Cartier(o) => (Command::Cartier, o),
        Cmd::Invariants(o) => (Command::Invariants, o),
    };
    match spec_of(opts).and_then(|s| run(&s, command)) {
        Ok(report) => {
            if opts.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.module());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
