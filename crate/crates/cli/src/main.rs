use clap::{Args, Parser, Subcommand};
use splitquad_cli::config::{load_json, AnnulusConfig, FlatpanelConfig, GridSpec, SubdivisionMode};
use splitquad_cli::{annulus, flatpanel, selftest, CliError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "splitquad", version, about = "Kernel-split quadrature experiments for the 2D modified Helmholtz equation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Accuracy map of flat-panel single-layer evaluation over an (α, h) grid.
    Flatpanel(RunArgs),
    /// Annulus Dirichlet solve: accuracy and assembly cost over an α sweep.
    Annulus(RunArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// α values: comma list `1,10,100` or log range `lo:hi:count`.
    #[arg(long)]
    alpha: Option<String>,
    /// Panel lengths (flatpanel only): comma list or log range.
    #[arg(long)]
    h: Option<String>,
    /// Nodes per panel.
    #[arg(long)]
    n: Option<usize>,
    /// Kernel-split accuracy constant C_ε.
    #[arg(long = "c-eps")]
    c_eps: Option<f64>,
    /// Bernstein cutoff radius R_ε.
    #[arg(long = "r-eps")]
    r_eps: Option<f64>,
    /// PRNG seed for target generation.
    #[arg(long)]
    seed: Option<u64>,
    /// Which variants to run.
    #[arg(long)]
    subdivision: Option<String>,
    /// CSV output path (stdout when omitted). A matching plotting script
    /// is written alongside.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_mode(s: &Option<String>) -> Result<Option<SubdivisionMode>, CliError> {
    s.as_deref().map(str::parse).transpose()
}

fn emit(csv: String, out: &Option<PathBuf>, plot_script: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(path) => {
            let io = |e: std::io::Error| CliError::Config(format!("cannot write output: {e}"));
            std::fs::write(path, csv).map_err(io)?;
            let script_path = path.with_extension("py");
            std::fs::write(&script_path, plot_script).map_err(io)?;
            eprintln!(
                "wrote {} and plotting script {}",
                path.display(),
                script_path.display()
            );
            Ok(())
        }
    }
}

fn run_flatpanel(args: &RunArgs) -> Result<(), CliError> {
    let mut cfg: FlatpanelConfig = load_json(args.config.as_deref().map(Path::new))?;
    if let Some(s) = &args.alpha {
        cfg.alpha = GridSpec::parse(s)?;
    }
    if let Some(s) = &args.h {
        cfg.h = GridSpec::parse(s)?;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(v) = args.c_eps {
        cfg.c_eps = v;
    }
    if let Some(v) = args.r_eps {
        cfg.r_eps = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(m) = parse_mode(&args.subdivision)? {
        cfg.subdivision = m;
    }
    let outcome = flatpanel::run(&cfg)?;
    emit(
        flatpanel::to_csv(&outcome.rows),
        &args.out,
        include_str!("../../../scripts/plot_flatpanel.py"),
    )?;
    if outcome.oracle_failures > 0 {
        return Err(CliError::Numerical(format!(
            "{} grid cell(s) had non-convergent reference quadrature",
            outcome.oracle_failures
        )));
    }
    Ok(())
}

fn run_annulus(args: &RunArgs) -> Result<(), CliError> {
    if args.h.is_some() {
        return Err(CliError::Config("--h only applies to flatpanel".into()));
    }
    let mut cfg: AnnulusConfig = load_json(args.config.as_deref().map(Path::new))?;
    if let Some(s) = &args.alpha {
        cfg.alpha = GridSpec::parse(s)?;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(v) = args.c_eps {
        cfg.c_eps = v;
    }
    if let Some(v) = args.r_eps {
        cfg.r_eps = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(m) = parse_mode(&args.subdivision)? {
        cfg.subdivision = m;
    }
    let rows = annulus::run(&cfg)?;
    emit(
        annulus::to_csv(&rows),
        &args.out,
        include_str!("../../../scripts/plot_annulus.py"),
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match &cli.cmd {
        Cmd::Flatpanel(args) => run_flatpanel(args),
        Cmd::Annulus(args) => run_annulus(args),
        Cmd::Selftest => {
            if selftest::run() {
                Ok(())
            } else {
                Err(CliError::Numerical("selftest failed".into()))
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
