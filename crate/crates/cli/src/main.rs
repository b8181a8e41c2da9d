use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qecon::experiments::{
    self, AlgoParams, Algorithm, Figure, MoneyAttack, MoneyParams, RngSource, StreamFormat,
};
use qecon::money::BankPolicy;
use qecon::report::ExperimentReport;

/// Seeded quantum-circuit experiments. Every run prints one report; the exit
/// status is nonzero when any of its checks fails.
#[derive(Debug, Parser)]
#[command(name = "qecon", version)]
struct Cli {
    /// Master seed; trial seeds are derived from it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, serialize, run and check one of the introductory circuits.
    Demo {
        #[arg(value_enum)]
        figure: FigureArg,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
    },
    /// Private-key money: honest use, forging attacks, the security game.
    Money {
        #[arg(value_enum)]
        attack: AttackArg,
        #[arg(long, default_value_t = 5)]
        qubits: usize,
        /// Defaults to 100000 for `guess`, 1000 otherwise.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
    /// Algorithm experiments.
    Algo {
        #[arg(value_enum)]
        which: AlgoArg,
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Random streams and their uniformity report.
    Rng {
        #[arg(value_enum)]
        source: SourceArg,
        /// Draws to analyse (or to emit).
        #[arg(long)]
        count: Option<usize>,
        /// Extra seeded QRNG runs for the pass-rate estimate.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Emit the raw stream instead of the report.
        #[arg(long, value_enum)]
        emit: Option<EmitArg>,
        /// With `--emit`, write the stream here and still print the report.
        #[arg(long, requires = "emit")]
        stream_file: Option<PathBuf>,
    },
    /// Run a circuit file.
    Circuit {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        /// Initial basis state as a bit string; all zeros by default.
        #[arg(long)]
        initial: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    Ii,
    #[value(name = "III")]
    Iii,
    #[value(name = "IV")]
    Iv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AttackArg {
    None,
    Guess,
    Adaptive,
    Game,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    ReturnAlways,
    ReturnOnValid,
    Reissue,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    Ols,
    Grover,
    Gradient,
    Montecarlo,
    Qubo,
    Lightning,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SourceArg {
    Lcg,
    BadLcg,
    Qrng,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EmitArg {
    Decimal,
    Hex,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::I => Figure::I,
            FigureArg::Ii => Figure::II,
            FigureArg::Iii => Figure::III,
            FigureArg::Iv => Figure::IV,
        }
    }
}

impl From<AttackArg> for MoneyAttack {
    fn from(a: AttackArg) -> Self {
        match a {
            AttackArg::None => MoneyAttack::None,
            AttackArg::Guess => MoneyAttack::Guess,
            AttackArg::Adaptive => MoneyAttack::Adaptive,
            AttackArg::Game => MoneyAttack::Game,
        }
    }
}

impl From<PolicyArg> for BankPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::ReturnAlways => BankPolicy::ReturnAlways,
            PolicyArg::ReturnOnValid => BankPolicy::ReturnOnValid,
            PolicyArg::Reissue => BankPolicy::ReissueOnValid,
        }
    }
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ols => Algorithm::Ols,
            AlgoArg::Grover => Algorithm::Grover,
            AlgoArg::Gradient => Algorithm::Gradient,
            AlgoArg::Montecarlo => Algorithm::MonteCarlo,
            AlgoArg::Qubo => Algorithm::Qubo,
            AlgoArg::Lightning => Algorithm::Lightning,
        }
    }
}

impl From<SourceArg> for RngSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Lcg => RngSource::Lcg,
            SourceArg::BadLcg => RngSource::BadLcg,
            SourceArg::Qrng => RngSource::Qrng,
        }
    }
}

impl From<EmitArg> for StreamFormat {
    fn from(e: EmitArg) -> Self {
        match e {
            EmitArg::Decimal => StreamFormat::Decimal,
            EmitArg::Hex => StreamFormat::Hex,
        }
    }
}

/// `None` when only a raw stream was printed.
fn run(cli: &Cli) -> Result<Option<ExperimentReport>> {
    let seed = cli.seed;
    let report = match &cli.command {
        Command::Demo { figure, shots } => experiments::demo((*figure).into(), *shots, seed)?,
        Command::Money {
            attack,
            qubits,
            trials,
            policy,
        } => {
            let attack: MoneyAttack = (*attack).into();
            let default_trials = if attack == MoneyAttack::Guess { 100_000 } else { 1000 };
            let params = MoneyParams {
                qubits: *qubits,
                trials: trials.unwrap_or(default_trials),
                policy: policy.map(Into::into),
            };
            experiments::money(attack, params, seed)?
        }
        Command::Algo { which, qubits, trials } => experiments::algo(
            (*which).into(),
            AlgoParams {
                qubits: *qubits,
                trials: *trials,
            },
            seed,
        )?,
        Command::Rng {
            source,
            count,
            trials,
            emit,
            stream_file,
        } => {
            let source: RngSource = (*source).into();
            let count = count.unwrap_or_else(|| source.default_count());
            if let Some(format) = emit {
                let stream = experiments::rng_stream(source, count, (*format).into(), seed)?;
                match stream_file {
                    Some(path) => {
                        std::fs::write(path, stream).with_context(|| format!("writing {}", path.display()))?
                    }
                    None => {
                        let _ = std::io::stdout().lock().write_all(stream.as_bytes());
                        return Ok(None);
                    }
                }
            }
            experiments::rng_report(source, count, *trials, seed)?
        }
        Command::Circuit { file, shots, initial } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            experiments::circuit_file(&text, *shots, initial.as_deref(), seed)
                .with_context(|| format!("running {}", file.display()))?
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(Some(r)) => r,
        Ok(None) => return ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.out {
        OutFormat::Json => report.to_json() + "\n",
        OutFormat::Csv => report.to_csv(),
    };
    // a closed downstream pipe is not a failure of the experiment
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    let failed = report.failed_checks();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for name in failed {
            eprintln!("FAILED {name}");
        }
        ExitCode::FAILURE
    }
}
