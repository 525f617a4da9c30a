use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sturm_branches::asymptotics::Refinement;
use sturm_branches::harness::csv::Table;
use sturm_branches::harness::selftest::selftest_with;
use sturm_branches::harness::{self, tables, ConfigError, HarnessError, RunConfig};
use sturm_branches::oracle::Symmetry;
use sturm_branches::specfun;

#[derive(Parser)]
#[command(version, about = "Two-branch periodic eigenvalue asymptotics and a shooting oracle")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the `# generated` line so that output is byte-reproducible.
    #[arg(long, global = true)]
    no_header_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the potential against the admissible class.
    Validate,
    /// Turning point, actions and ζ₂ for each a.
    Geometry {
        #[arg(long, value_delimiter = ',')]
        a: Vec<f64>,
    },
    /// Tabulate H± and arg Γ(1/2 + ix).
    Hfun {
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
    /// Asymptotic branch values λ±(a, p).
    Spectrum {
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        p_min: Option<u32>,
        #[arg(long)]
        p_max: Option<u32>,
        /// Re-evaluate b₂ at the branch value until it settles.
        #[arg(long)]
        refine: bool,
    },
    /// Dirichlet/Neumann shooting eigenvalues in a λ window.
    Oracle {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        lambda_min: f64,
        #[arg(long)]
        lambda_max: f64,
        #[arg(long, value_enum, default_value_t = SymmetryArg::Both)]
        symmetry: SymmetryArg,
    },
    /// Asymptotics against the oracle over the config grid.
    Compare,
    /// Fixed-p sweep across the definite/indefinite boundary.
    Sweep,
    /// Reduced-size run of every invariant suite.
    Selftest {
        #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
        arg_gamma_bias: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    D,
    N,
    Both,
}

impl SymmetryArg {
    fn symmetries(self) -> &'static [Symmetry] {
        match self {
            SymmetryArg::D => &[Symmetry::Dirichlet],
            SymmetryArg::N => &[Symmetry::Neumann],
            SymmetryArg::Both => &Symmetry::BOTH,
        }
    }
}

/// What a subcommand produced: a table and whether its checks passed.
struct Outcome {
    table: Option<Table>,
    passed: bool,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table: Some(table), passed: true }
    }
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::Usage(msg.into())
}

fn load(cli: &Cli) -> Result<Option<RunConfig>, HarnessError> {
    match &cli.config {
        None => Ok(None),
        Some(path) => match RunConfig::load(path) {
            Err(ConfigError::Empty) => Err(usage(format!("config {} is empty", path.display()))),
            other => Ok(Some(other?)),
        },
    }
}

fn run(cli: &Cli) -> Result<Outcome, HarnessError> {
    let config = load(cli)?;
    let base = config.clone().unwrap_or_else(|| RunConfig::canonical(Vec::new(), 1, 1));
    let require = |what: &str| config.as_ref().ok_or_else(|| usage(format!("`{what}` needs --config")));
    Ok(match &cli.command {
        Command::Validate => {
            let (table, report) = tables::validate(&base.potential);
            Outcome { table: Some(table), passed: report.passed() }
        }
        Command::Geometry { a } => {
            let a = if a.is_empty() { config.as_ref().map(|c| c.a_values()).transpose()?.unwrap_or_default() } else { a.clone() };
            if a.is_empty() {
                return Err(usage("`geometry` needs --a or a config grid"));
            }
            tables::geometry(&base.validated_potential()?, &a, &base.region_thresholds())?.into()
        }
        Command::Hfun { x_min, x_max, step } => tables::hfun(*x_min, *x_max, *step)?.into(),
        Command::Spectrum { a, p_min, p_max, refine } => {
            let grid = base.grid.as_ref().filter(|_| config.is_some());
            let a = a.or_else(|| grid.and_then(|g| g.a.first().copied().or(g.a_min))).ok_or_else(|| usage("`spectrum` needs --a"))?;
            let p_min = p_min.or(grid.map(|g| g.p_min)).ok_or_else(|| usage("`spectrum` needs --p-min"))?;
            let p_max = p_max.or(grid.map(|g| g.p_max)).ok_or_else(|| usage("`spectrum` needs --p-max"))?;
            if p_min == 0 || p_min > p_max {
                return Err(usage(format!("need 1 ≤ p_min ≤ p_max, got {p_min}..{p_max}")));
            }
            let refinement = if *refine { Refinement::FixedPoint } else { grid.map_or(Refinement::None, |g| g.refinement) };
            let potential = base.validated_potential()?;
            tables::spectrum(&potential, a, (p_min, p_max), refinement, &base.region_thresholds(), &base.constants())?.into()
        }
        Command::Oracle { a, lambda_min, lambda_max, symmetry } => {
            if lambda_min.partial_cmp(lambda_max) != Some(std::cmp::Ordering::Less) {
                return Err(usage("need lambda_min < lambda_max"));
            }
            let potential = base.validated_potential()?;
            tables::oracle(&potential, *a, (*lambda_min, *lambda_max), symmetry.symmetries(), base.oracle_config())?.into()
        }
        Command::Compare => {
            let report = harness::compare(require("compare")?)?;
            for u in &report.unmatched {
                eprintln!("unmatched a = {}, p = {}, {}: {}", u.a, u.p, u.sign.symbol(), u.reason);
            }
            let over = report.rows.iter().filter(|r| !r.within_budget()).count();
            eprintln!("{} rows, {} over budget, {} unmatched", report.rows.len(), over, report.unmatched.len());
            Outcome { table: Some(report.table()), passed: report.unmatched.is_empty() }
        }
        Command::Sweep => {
            let report = harness::sweep_transition(require("sweep")?)?;
            for (name, j) in [("lambda+", report.jumps_plus), ("lambda-", report.jumps_minus)] {
                if let Some(j) = j {
                    eprintln!("{name}: max jump {:.3e}, median jump {:.3e}, ratio {:.2}", j.max_jump, j.median_jump, j.ratio());
                }
            }
            for e in &report.ends {
                eprintln!(
                    "a = {}, {} ({}): lemma residual {:.3e}, budget {:.3e}",
                    e.a,
                    e.sign.symbol(),
                    e.region,
                    e.residual,
                    e.budget
                );
            }
            let table = harness::CompareReport { rows: report.rows, unmatched: report.unmatched }.table();
            Outcome { table: Some(table), passed: true }
        }
        Command::Selftest { arg_gamma_bias } => {
            let bias = *arg_gamma_bias;
            let report = selftest_with(&move |x| specfun::arg_gamma(x) + bias);
            println!("{report}");
            Outcome { table: None, passed: report.passed() }
        }
    })
}

fn emit(cli: &Cli, table: &Table, config_out: Option<PathBuf>) -> Result<(), HarnessError> {
    let stamp = !cli.no_header_timestamp;
    match cli.out.clone().or(config_out) {
        Some(path) => table.write(BufWriter::new(File::create(path)?), stamp),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(&mut lock, stamp)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        if let Some(table) = &outcome.table {
            let config_out = load(&cli).ok().flatten().and_then(|c| c.output.path);
            emit(&cli, table, config_out)?;
        }
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(HarnessError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
