use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::PathBuf;

use benford_audit::cli::{self, OutputFormat};
use benford_audit::error::{Error, Result};
use benford_audit::modone::AnalyticDistribution;
use benford_audit::{audit, metrics, modone, Base};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "benford-audit",
    version,
    about = "First-digit law audits: exact distances, counterexamples, data checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Report format for the main artifact
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Write the artifact here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a prepackaged study
    #[command(subcommand)]
    Audit(AuditCommand),
    /// Test a dataset against the first-digit law
    Analyze {
        /// Input file; omit or pass '-' to read stdin
        input: Option<PathBuf>,
        /// CSV column to read, by header name or 0-based index;
        /// without this, input is one value per line
        #[arg(long)]
        column: Option<String>,
        /// Take first digits from the decimal text instead of the parsed
        /// float (base 10 only)
        #[arg(long)]
        digits_from_text: bool,
        #[arg(long, default_value = "10")]
        base: Base,
        /// Quantile level for the spread block
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a mixture experiment from a spec file
    Simulate {
        /// JSON mixture spec
        spec: PathBuf,
        #[arg(long, default_value = "10")]
        base: Base,
        /// Override the seed in the spec file
        #[arg(long)]
        seed: Option<u64>,
        /// Override samples_per_component in the spec file
        #[arg(long)]
        samples: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Sharp-bound verification for uniform variables: distance curve,
    /// refined minimum, and closed-form bound
    Prop1 {
        /// Number of phase grid points
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value = "10")]
        base: Base,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Leading-1 fractions of {1..2*base^n}: uniform integers beat 50%
    Counterexamples {
        /// Largest n to report
        #[arg(long, default_value_t = 12)]
        n: u32,
        #[arg(long, default_value = "10")]
        base: Base,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The spread-versus-distance counterexample table
    Nonmonotonicity {
        #[arg(long, default_value = "10")]
        base: Base,
        /// Quantile level for the quantile-spread column
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Distances of an exactly-Benford variable examined in other bases
    Basechange {
        /// Comma-separated bases; the first is the reference
        #[arg(long, default_value = "10,2")]
        bases: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Distance of the log of a decade-supported Benford variable
    BenfordLog {
        /// Decade index (support base^k to base^(k+1)); must be >= 1
        #[arg(long, default_value_t = 1)]
        k: i32,
        #[arg(long, default_value = "10")]
        base: Base,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() {
    let parsed = Cli::parse();
    if let Err(e) = run(parsed) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(parsed: Cli) -> Result<()> {
    match parsed.command {
        Command::Audit(study) => run_audit(study),
        Command::Analyze {
            input,
            column,
            digits_from_text,
            base,
            alpha,
            out,
        } => run_analyze(
            input,
            column.as_deref(),
            digits_from_text,
            base,
            alpha,
            &out,
        ),
        Command::Simulate {
            spec,
            base,
            seed,
            samples,
            out,
        } => run_simulate(&spec, base, seed, samples, &out),
    }
}

fn run_audit(study: AuditCommand) -> Result<()> {
    match study {
        AuditCommand::Prop1 { grid, base, out } => {
            let curve = audit::prop1_curve(base, grid)?;
            let summary = cli::Prop1Summary::from_curve(&curve, base, grid);
            let artifact = match out.format {
                OutputFormat::Csv => cli::prop1_curve_csv(&curve)?,
                OutputFormat::Json => cli::to_json_text(&cli::Prop1Report {
                    schema_version: cli::SCHEMA_VERSION,
                    base: summary.base,
                    grid_size: grid,
                    bound: summary.bound,
                    theta_star: summary.theta_star,
                    d_star: summary.d_star,
                    residual: summary.residual,
                    thetas: curve.thetas.clone(),
                    distances: curve.distances.clone(),
                }),
            };
            cli::write_artifact(&artifact, out.output.as_deref())?;
            // the headline numbers always get printed; stderr keeps them
            // out of a stdout artifact's bytes
            let summary_text = cli::to_json_text(&summary);
            if out.output.is_some() {
                print!("{summary_text}");
            } else {
                eprint!("{summary_text}");
            }
            Ok(())
        }
        AuditCommand::Counterexamples { n, base, out } => {
            let report = cli::counterexample_report(n, base)?;
            let artifact = match out.format {
                OutputFormat::Csv => cli::counterexample_csv(&report)?,
                OutputFormat::Json => cli::to_json_text(&report),
            };
            cli::write_artifact(&artifact, out.output.as_deref())
        }
        AuditCommand::Nonmonotonicity { base, alpha, out } => {
            let report = audit::nonmonotonicity_report(base, alpha)?;
            let artifact = match out.format {
                OutputFormat::Csv => cli::nonmonotonicity_csv(&report)?,
                OutputFormat::Json => cli::to_json_text(&cli::NonmonotonicityEnvelope {
                    schema_version: cli::SCHEMA_VERSION,
                    report,
                }),
            };
            cli::write_artifact(&artifact, out.output.as_deref())
        }
        AuditCommand::Basechange { bases, out } => {
            let bases = parse_bases(&bases)?;
            let dist = AnalyticDistribution::PowerOfUniform {
                a: 1.0,
                base: bases[0],
            };
            let rows = audit::base_change_audit(&dist, &bases)?;
            let artifact = match out.format {
                OutputFormat::Csv => cli::base_change_csv(&rows)?,
                OutputFormat::Json => cli::to_json_text(&cli::BaseChangeReport {
                    schema_version: cli::SCHEMA_VERSION,
                    distribution: format!("power_of_uniform(a = 1, base = {})", bases[0]),
                    rows,
                }),
            };
            cli::write_artifact(&artifact, out.output.as_deref())
        }
        AuditCommand::BenfordLog { k, base, out } => {
            let log_scale = audit::log_of_benford_audit(k, base)?;
            let raw = modone::log_mod_one(&AnalyticDistribution::BenfordDecade { k, base }, base)?;
            let report = cli::BenfordLogReport {
                schema_version: cli::SCHEMA_VERSION,
                k,
                base: base.get(),
                log_scale,
                raw_scale_ks: metrics::ks_distance(&raw).statistic,
            };
            let artifact = match out.format {
                OutputFormat::Csv => cli::benford_log_csv(&report)?,
                OutputFormat::Json => cli::to_json_text(&report),
            };
            cli::write_artifact(&artifact, out.output.as_deref())
        }
    }
}

fn parse_bases(text: &str) -> Result<Vec<Base>> {
    let bases = text
        .split(',')
        .map(|part| part.trim().parse())
        .collect::<Result<Vec<Base>>>()?;
    if bases.is_empty() {
        return Err(Error::config("at least one base is required".to_string()));
    }
    Ok(bases)
}

fn run_analyze(
    input: Option<PathBuf>,
    column: Option<&str>,
    digits_from_text: bool,
    base: Base,
    alpha: f64,
    out: &OutputArgs,
) -> Result<()> {
    if digits_from_text && base.get() != 10 {
        return Err(Error::config(
            "digits-from-text reads decimal numerals and only supports base 10".to_string(),
        ));
    }
    let stdin_marker = PathBuf::from("-");
    let (reader, source): (Box<dyn BufRead>, String) = match input {
        None => (
            Box::new(BufReader::new(std::io::stdin())),
            "stdin".to_string(),
        ),
        Some(path) if path == stdin_marker => (
            Box::new(BufReader::new(std::io::stdin())),
            "stdin".to_string(),
        ),
        Some(path) => {
            let file = fs::File::open(&path)?;
            (Box::new(BufReader::new(file)), path.display().to_string())
        }
    };
    let dataset = cli::read_dataset(reader, &source, column, digits_from_text)?;
    let report = cli::analyze_dataset(&dataset, base, alpha)?;
    let artifact = match out.format {
        OutputFormat::Csv => cli::digit_table_csv(&report)?,
        OutputFormat::Json => cli::to_json_text(&report),
    };
    cli::write_artifact(&artifact, out.output.as_deref())
}

fn run_simulate(
    spec_path: &PathBuf,
    base: Base,
    seed: Option<u64>,
    samples: Option<u64>,
    out: &OutputArgs,
) -> Result<()> {
    let mut text = String::new();
    fs::File::open(spec_path)?.read_to_string(&mut text)?;
    let mut spec = cli::parse_mixture_spec(&text, &spec_path.display().to_string())?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    if let Some(samples) = samples {
        spec.samples_per_component = samples;
    }
    spec.validate()?;
    let trace = audit::mixture_experiment(&spec, base)?;
    let artifact = match out.format {
        OutputFormat::Csv => cli::trace_csv(&trace.rows)?,
        OutputFormat::Json => cli::to_json_text(&cli::SimulateReport {
            schema_version: cli::SCHEMA_VERSION,
            base: base.get(),
            spec,
            rows: trace.rows,
        }),
    };
    cli::write_artifact(&artifact, out.output.as_deref())
}
