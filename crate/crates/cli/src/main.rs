use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use projquant_core::{parse_rational, Coefficient, Rational, RicciConvention};
use projquant_cli::{run, CliError, Command, Options, ProblemDocument};

#[derive(Parser)]
#[command(name = "projquant", version, about = "Projectively invariant quantization of third-order symbols")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Print the six quantization coefficients.
    Coefficients(Args),
    /// Print the operator coefficients A3, A2, A1, A0 (and Q(P)φ when φ is given).
    Quantize(Args),
    /// Check invariance under ∇ → ∇ + ω.
    VerifyProjective(Args),
    /// Check flat sl(n+1)-equivariance generator by generator.
    VerifySl(Args),
    /// Check the two projective shift identities.
    ShiftIdentities(Args),
    /// Print the Ricci tensor of the connection.
    Ricci(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Standard,
    OppositeTrace,
    Transposed,
}

#[derive(clap::Args)]
struct Args {
    /// Problem document (TOML).
    document: PathBuf,
    /// Free parameter for resonant δ.
    #[arg(long, value_parser = rational)]
    t: Option<Rational>,
    /// Add p/q to a coefficient, e.g. alpha=1/1000. Repeatable.
    #[arg(long, value_parser = perturbation)]
    perturb: Vec<(Coefficient, Rational)>,
    /// Fill missing symbol, omega and phi with seeded random objects.
    #[arg(long)]
    seed: Option<u64>,
    /// Additional vector field for verify-sl, e.g. "x1^2*∂2". Repeatable.
    #[arg(long = "extra-field")]
    extra_field: Vec<String>,
    /// Ricci convention used in the quantization.
    #[arg(long, value_enum, default_value = "opposite-trace")]
    convention: Convention,
    /// Emit a JSON report.
    #[arg(long)]
    json: bool,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn perturbation(s: &str) -> Result<(Coefficient, Rational), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=p/q, got {s:?}"))?;
    let coef: Coefficient = name.trim().parse().map_err(|_| {
        let names: Vec<&str> = Coefficient::ALL.iter().map(|c| c.name()).collect();
        format!("unknown coefficient {name:?} (one of {})", names.join(", "))
    })?;
    Ok((coef, rational(value.trim())?))
}

fn execute(command: Command, args: &Args) -> Result<projquant_cli::Report, CliError> {
    let text = std::fs::read_to_string(&args.document)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.document.display())))?;
    let doc = ProblemDocument::parse(&text)?;
    let opts = Options {
        t: args.t.clone(),
        perturb: args.perturb.clone(),
        seed: args.seed,
        extra_fields: args.extra_field.clone(),
        convention: match args.convention {
            Convention::Standard => RicciConvention::Standard,
            Convention::OppositeTrace => RicciConvention::OppositeTrace,
            Convention::Transposed => RicciConvention::Transposed,
        },
    };
    if command != Command::VerifySl && !opts.extra_fields.is_empty() {
        return Err(CliError::Usage("--extra-field only applies to verify-sl".into()));
    }
    run(command, doc, &opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Sub::Coefficients(a) => (Command::Coefficients, a),
        Sub::Quantize(a) => (Command::Quantize, a),
        Sub::VerifyProjective(a) => (Command::VerifyProjective, a),
        Sub::VerifySl(a) => (Command::VerifySl, a),
        Sub::ShiftIdentities(a) => (Command::ShiftIdentities, a),
        Sub::Ricci(a) => (Command::Ricci, a),
    };
    match execute(command, args) {
        Ok(report) => {
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            let code = e.exit_code();
            if args.json {
                let obj = serde_json::json!({
                    "command": command.name(),
                    "error": e.to_string(),
                    "exit_code": code,
                });
                println!("{}", serde_json::to_string_pretty(&obj).unwrap());
            }
            eprintln!("error: {e}");
            if matches!(e, CliError::Core(projquant_core::Error::ResonantDelta { .. })) {
                eprintln!("hint: set `t` in the document or pass --t p/q");
            }
            ExitCode::from(code)
        }
    }
}
