use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use stripft::report::{analyze, emit, AnalysisConfig, AnalyzeError, CheckKind, EmitFormat};

/// Analyze one-variable functions in the restricted power-constructible
/// grammar: strip widths, sector angles, residue-based Fourier transforms,
/// Mellin values, rationality reconstruction, and decay-rate fits that are
/// cross-checked against quadrature.
#[derive(Parser)]
#[command(name = "stripft", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression, run the applicable checks, and report.
    Analyze(AnalyzeArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Expression in the grammar, e.g. "1/(1+t^2)" or "t*exp(i*t^4/4)".
    expression: String,
    /// Largest |ξ| on the sampling grids.
    #[arg(long, default_value_t = 8.0)]
    xi_max: f64,
    /// Grid points per side (≥ 24 when decay_fit is enabled).
    #[arg(long, default_value_t = 64)]
    xi_samples: usize,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
    /// Comma-separated checks to run
    /// (closed_form,decay_fit,mellin,rationality,riemann_ft).
    #[arg(long)]
    checks: Option<String>,
    /// Write the full JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write plot data (xi, |F| engine, |F| oracle, envelope fit) as CSV.
    #[arg(long)]
    emit_plot: Option<PathBuf>,
    /// Stdout format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => match run(args) {
            Ok(pass) => {
                if pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {:#}", e);
                ExitCode::from(3)
            }
        },
    }
}

fn run(args: AnalyzeArgs) -> anyhow::Result<bool> {
    let mut cfg = AnalysisConfig::new(&args.expression);
    cfg.xi_max = args.xi_max;
    cfg.xi_samples = args.xi_samples;
    cfg.quad.abs_tol = args.quad_tol;
    cfg.quad.rel_tol = args.quad_tol;
    if let Some(list) = &args.checks {
        let mut set = BTreeSet::new();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let check =
                CheckKind::from_name(name).with_context(|| format!("unknown check {:?}", name))?;
            set.insert(check);
        }
        cfg.checks = set;
    }

    let report = analyze(&cfg).map_err(|e| match e {
        AnalyzeError::Parse(p) => anyhow::anyhow!("parse: {}", p),
        AnalyzeError::Config(c) => anyhow::anyhow!("config: {}", c),
    })?;

    let stdout_bytes = match args.format {
        Format::Text => emit(&report, EmitFormat::Text),
        Format::Json => emit(&report, EmitFormat::Json),
    };
    std::io::stdout().write_all(&stdout_bytes)?;

    if let Some(path) = &args.report {
        std::fs::write(path, emit(&report, EmitFormat::Json))
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    if let Some(path) = &args.emit_plot {
        std::fs::write(path, emit(&report, EmitFormat::CsvPlot))
            .with_context(|| format!("writing plot data to {}", path.display()))?;
    }
    Ok(report.pass())
}
