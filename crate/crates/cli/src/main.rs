use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcopy_core::sweep::{self, evaluate, render, run_sweep};
use qcopy_core::{run_verify, CopierFamily, Format, Series, SweepConfig, VerifyOptions};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_IO: u8 = 3;

/// Fidelity and information transfer of quantum copiers for two nonorthogonal qubit states.
#[derive(Parser, Debug)]
#[command(name = "qcopy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one copier (or `input`) at one overlap f.
    Eval {
        #[arg(long = "f", allow_negative_numbers = true)]
        f: f64,
        #[arg(long)]
        copier: String,
        /// Print a single JSON object instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Tabulate the indicators of several copiers over a uniform f grid.
    Sweep {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        f_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        f_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Comma-separated copier tags, or `all`.
        #[arg(long, default_value = "all")]
        copiers: String,
        /// Add rows tagged `input` for the uncopied states.
        #[arg(long)]
        baselines: bool,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
    },
    /// Run the invariant suite over a uniform f grid.
    Verify {
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, hide = true, allow_negative_numbers = true)]
        inject_quartic_fault: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

enum Failure {
    Domain(String),
    Io(String),
    Verify,
}

impl From<qcopy_core::Error> for Failure {
    fn from(e: qcopy_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn parse_copiers(list: &str) -> Result<Vec<CopierFamily>, Failure> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(CopierFamily::ALL.to_vec());
    }
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<CopierFamily>().map_err(Failure::from))
        .collect()
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Io(format!("writing to standard output: {e}")))
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { f, copier, json } => {
            let series: Series = copier.parse()?;
            let rec = evaluate(f, series)?;
            if json {
                emit(out, &(sweep::record_to_json(&rec)? + "\n"))
            } else {
                let fmt = sweep::format_sig12;
                let text = format!(
                    "f        {}\ncopier   {}\ni1       {}\ni1_ratio {}\nih       {}\nf_local  {}\nq        {}\nr        {}\nq_h      {}\n",
                    fmt(rec.f),
                    rec.series,
                    fmt(rec.i1),
                    fmt(rec.i1_ratio),
                    fmt(rec.ih),
                    fmt(rec.f_local),
                    fmt(rec.q),
                    fmt(rec.r),
                    fmt(rec.q_h),
                );
                emit(out, &text)
            }
        }
        Command::Sweep {
            f_min,
            f_max,
            steps,
            copiers,
            baselines,
            out: path,
            format,
        } => {
            let config = SweepConfig {
                f_min,
                f_max,
                steps,
                copiers: parse_copiers(&copiers)?,
                include_baselines: baselines,
                format: format.into(),
            };
            let text = render(&run_sweep(&config)?, config.format)?;
            match path {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
                None => emit(out, &text),
            }
        }
        Command::Verify {
            steps,
            inject_quartic_fault,
        } => {
            let report = run_verify(&VerifyOptions {
                steps,
                quartic_fault: inject_quartic_fault,
            })?;
            emit(out, &report.render())?;
            if report.all_passed() {
                Ok(())
            } else {
                for c in report.failures() {
                    let _ = writeln!(err, "qcopy: invariant `{}` failed: {}", c.name, c.detail);
                }
                Err(Failure::Verify)
            }
        }
    }
}

fn exit_code(failure: &Failure) -> u8 {
    match failure {
        Failure::Domain(_) => EXIT_DOMAIN,
        Failure::Io(_) => EXIT_IO,
        Failure::Verify => EXIT_VERIFY_FAILED,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut err = io::stderr();
    match run(cli, &mut io::stdout().lock(), &mut err) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Failure::Domain(msg) | Failure::Io(msg) = &failure {
                let _ = writeln!(err, "qcopy: {msg}");
            }
            ExitCode::from(exit_code(&failure))
        }
    }
}
