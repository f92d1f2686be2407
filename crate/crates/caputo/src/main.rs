//! Command-line front end: `solve` one problem, run a convergence `study`,
//! or `verify` the coefficient lemmas. Exit codes: 0 ok, 2 solver failure,
//! 3 verification failure, 4 bad configuration.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use caputo::error::Error;
use caputo::problems::{make_problem, registry};
use caputo::solver::{solve, solve_corrected, NewtonConfig};
use caputo::study::{
    emit_combined_markdown, emit_report, parse_sigma_rule, run_study, trajectory_csv, OutputFormat,
    StudySpec,
};
use caputo::verification::{run_all, VerificationConfig};
use caputo::{Grid, Order};

#[derive(Parser)]
#[command(
    name = "caputo",
    version,
    about = "Caputo fractional ODE solver and verification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct StudyFlags {
    /// JSON study config; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Registry problem id (see `--list`)
    #[arg(long)]
    problem: Option<String>,
    /// Fractional orders, comma separated
    #[arg(long, value_delimiter = ',')]
    nu: Vec<f64>,
    /// Dyadic levels l (dx = 2^-l), comma separated
    #[arg(long, value_delimiter = ',')]
    levels: Vec<u32>,
    /// Final time
    #[arg(long = "T")]
    t: Option<f64>,
    /// Use the correction-augmented scheme
    #[arg(long)]
    corrected: bool,
    /// Correction exponents, e.g. k*nu:3
    #[arg(long)]
    sigma_rule: Option<String>,
    /// Output format: csv or markdown
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a registry problem on a single grid and dump the trajectory
    Solve {
        #[command(flatten)]
        flags: StudyFlags,
        /// List available problems and exit
        #[arg(long)]
        list: bool,
    },
    /// Run a convergence study over (nu, level) cells
    Study {
        #[command(flatten)]
        flags: StudyFlags,
    },
    /// Run the coefficient/kernel verification suite
    Verify {
        /// Largest row index for the row-wise lemma checks
        #[arg(long, default_value_t = 200)]
        index_max: usize,
        /// Largest kernel size n
        #[arg(long, default_value_t = 64)]
        kernel_max: usize,
        /// Write the machine-readable JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn merge_spec(flags: &StudyFlags) -> Result<StudySpec, Error> {
    let mut spec = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<StudySpec>(&text)
                .map_err(|e| Error::InvalidConfig(format!("bad config {}: {e}", path.display())))?
        }
        None => StudySpec {
            problem: String::new(),
            nu: Vec::new(),
            levels: Vec::new(),
            t: 1.0,
            corrected: false,
            sigma_rule: None,
            format: OutputFormat::Csv,
            out: None,
        },
    };
    if let Some(p) = &flags.problem {
        spec.problem = p.clone();
    }
    if !flags.nu.is_empty() {
        spec.nu = flags.nu.clone();
    }
    if !flags.levels.is_empty() {
        spec.levels = flags.levels.clone();
    }
    if let Some(t) = flags.t {
        spec.t = t;
    }
    if flags.corrected {
        spec.corrected = true;
    }
    if let Some(r) = &flags.sigma_rule {
        spec.sigma_rule = Some(r.clone());
    }
    if let Some(f) = flags.format {
        spec.format = f;
    }
    if let Some(o) = &flags.out {
        spec.out = Some(o.clone());
    }
    if spec.problem.is_empty() {
        return Err(Error::InvalidConfig("no problem selected".into()));
    }
    Ok(spec)
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(flags: &StudyFlags, list: bool) -> Result<(), Error> {
    if list {
        for spec in registry() {
            println!("{:<20} {}", spec.id, spec.description);
        }
        return Ok(());
    }
    let spec = merge_spec(flags)?;
    spec.validate()?;
    let order = Order::new(spec.nu[0])?;
    let problem = make_problem(&spec.problem, order)?;
    let grid = Grid::with_step(spec.t, 0.5f64.powi(spec.levels[0] as i32))?;
    let cfg = NewtonConfig::default();
    let traj = if spec.corrected {
        let rule = spec.sigma_rule.as_deref().unwrap_or("k*nu:3");
        solve_corrected(&problem, grid, &cfg, &parse_sigma_rule(rule, order.nu())?)?
    } else {
        solve(&problem, grid, &cfg)?
    };
    write_or_print(&spec.out, &trajectory_csv(&traj, &problem))
}

fn cmd_study(flags: &StudyFlags) -> Result<(), Error> {
    let spec = merge_spec(flags)?;
    let reports = run_study(&spec)?;
    let text = match spec.format {
        OutputFormat::Markdown => emit_combined_markdown(&reports),
        OutputFormat::Csv => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!("# problem={} nu={}\n", r.problem, r.nu));
                out.push_str(&emit_report(r, OutputFormat::Csv));
                out.push('\n');
            }
            out
        }
    };
    write_or_print(&spec.out, &text)
}

fn cmd_verify(index_max: usize, kernel_max: usize, out: &Option<PathBuf>) -> Result<bool, Error> {
    let cfg = VerificationConfig {
        index_max,
        kernel_max,
        ..VerificationConfig::default()
    };
    let reports = run_all(&cfg)?;
    for rep in &reports {
        println!("{}", rep.summary_line());
    }
    let all_passed = reports.iter().all(|r| r.passed);
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&reports)? + "\n")?;
    }
    println!(
        "{} of {} checks passed",
        reports.iter().filter(|r| r.passed).count(),
        reports.len()
    );
    Ok(all_passed)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NonConvergence { .. } | Error::SingularJacobian { .. } => 2,
        _ => 4,
    }
}

fn main() -> ExitCode {
    env_logger::init();
    // flag parse failures are configuration errors (exit 4), not clap's
    // default exit 2, which is reserved for solver non-convergence
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(4);
        }
    };
    let result = match &cli.command {
        Command::Solve { flags, list } => cmd_solve(flags, *list).map(|_| true),
        Command::Study { flags } => cmd_study(flags).map(|_| true),
        Command::Verify {
            index_max,
            kernel_max,
            out,
        } => cmd_verify(*index_max, *kernel_max, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
