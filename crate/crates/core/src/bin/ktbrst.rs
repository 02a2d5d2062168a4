use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ktbrst::brst::Model;
use ktbrst::dsl::{parse_model, render_model};
use ktbrst::models::{builtin, BUILTIN_MODELS};
use ktbrst::report::{emit_report, parse_selection, run_checks, CheckKind, Format};

#[derive(Parser)]
#[command(name = "ktbrst", version, about = "Verify Koszul–Tate and BRST data of Lagrangian field theories")]
struct Cli {
    /// Output format: text or structured.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Number of checks to run in parallel.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on a built-in model or a .ktb file.
    Check {
        model: String,
        /// Comma-separated subset of checks (default: all but euler-lagrange).
        #[arg(long)]
        only: Option<String>,
    },
    /// Print the Euler–Lagrange components of the Lagrangian.
    DumpEl { model: String },
    /// List built-in models and check names.
    ListModels,
    /// Print a model as .ktb source.
    Render { model: String },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn load(spec: &str) -> Result<Model, String> {
    let path = Path::new(spec);
    if path.extension().is_some_and(|e| e == "ktb") || path.is_file() {
        let src = std::fs::read_to_string(path).map_err(|e| format!("{spec}: {e}"))?;
        let parsed = parse_model(&src).map_err(|e| format!("{spec}:{e}"))?;
        for w in &parsed.warnings {
            eprintln!("{spec}:{w}");
        }
        Ok(parsed.model)
    } else {
        builtin(spec).map_err(|e| e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let model = |spec: &str| {
        load(spec).map_err(|e| {
            eprintln!("error: {e}");
            ExitCode::from(2)
        })
    };
    let run = |m: &Model, selection: &[CheckKind]| {
        let report = run_checks(m, selection, cli.jobs.max(1));
        print!("{}", emit_report(&report, cli.format));
        if report.all_passed() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    };
    match &cli.command {
        Command::Check { model: spec, only } => {
            let selection = match only.as_deref().map(parse_selection) {
                None => CheckKind::default_selection(),
                Some(Ok(s)) => s,
                Some(Err(e)) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match model(spec) {
                Ok(m) => run(&m, &selection),
                Err(code) => code,
            }
        }
        Command::DumpEl { model: spec } => match model(spec) {
            Ok(m) => run(&m, &[CheckKind::EulerLagrange]),
            Err(code) => code,
        },
        Command::Render { model: spec } => match model(spec) {
            Ok(m) => {
                print!("{}", render_model(&m));
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::ListModels => {
            println!("built-in models:");
            for (name, about) in BUILTIN_MODELS {
                println!("  {name:<20} {about}");
            }
            println!("checks (for --only):");
            for k in CheckKind::ALL {
                println!("  {:<20} {}", k.name(), k.describe());
            }
            ExitCode::SUCCESS
        }
    }
}
