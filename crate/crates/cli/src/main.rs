use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isodiff_cli::commands::{
    cmd_check, cmd_complete, cmd_gauge_gen, cmd_verify, CompleteArgs, GaugeArgs, Outcome,
    ReportFormat, EXIT_INPUT_ERROR,
};
use isodiff_core::completion::Mode;

#[derive(Parser)]
#[command(name = "isodiff", version, about = "Integrability checks and completion for parameterized difference-differential systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Ground,
    Symbolic,
}

#[derive(Subcommand)]
enum Command {
    /// Check the integrability conditions of a system file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Complete the parameter matrices so that every condition holds.
    Complete {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
        /// Numerator degree bound of the ansatz.
        #[arg(long)]
        num_deg: Option<u32>,
        /// Ansatz denominator, a polynomial expression.
        #[arg(long)]
        den: Option<String>,
        /// Shift bound of the default denominator guess.
        #[arg(long)]
        shift_bound: Option<u32>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Numerator degree bound of the ground search.
        #[arg(long)]
        ground_deg: Option<u32>,
        /// Write the completed system file here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Full verdict of a system with parameter matrices and adjoined families.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Generate a random integrable system.
    GaugeGen {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Comma-separated NAME:ROLE pairs.
        #[arg(long, default_value = "x:phi,t:delta,a:sigma,b:sigma")]
        vars: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Degree bound of the entries of the fundamental solution.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome {
        code: EXIT_INPUT_ERROR,
        stdout: String::new(),
        stderr: format!("error: cannot read {}: {e}\n", path.display()),
    })
}

fn write(path: &Option<PathBuf>, text: &str) -> Result<(), Outcome> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Outcome {
            code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: cannot write {}: {e}\n", p.display()),
        })?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, Outcome> {
    Ok(match cli.command {
        Command::Check { file, report } => cmd_check(&read(&file)?, report.into()),
        Command::Verify { file, report } => cmd_verify(&read(&file)?, report.into()),
        Command::Complete {
            file,
            report,
            num_deg,
            den,
            shift_bound,
            mode,
            ground_deg,
            output,
        } => {
            let args = CompleteArgs {
                numerator_degree: num_deg,
                denominator: den,
                shift_bound,
                mode: match mode {
                    ModeArg::Auto => Mode::Auto,
                    ModeArg::Ground => Mode::Ground,
                    ModeArg::Symbolic => Mode::Symbolic,
                },
                ground_degree: ground_deg,
            };
            let res = cmd_complete(&read(&file)?, &args, report.into());
            if let Some(system) = &res.system {
                write(&output, system)?;
            }
            res.outcome
        }
        Command::GaugeGen {
            n,
            vars,
            seed,
            degree,
            output,
        } => {
            let out = cmd_gauge_gen(&GaugeArgs { n, vars, seed, degree });
            if out.code == 0 && output.is_some() {
                write(&output, &out.stdout)?;
                Outcome {
                    stdout: String::new(),
                    ..out
                }
            } else {
                out
            }
        }
    })
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own code 2 means "no completion" here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT_ERROR as u8 } else { 0 });
        }
    };
    let out = run(cli).unwrap_or_else(|e| e);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
