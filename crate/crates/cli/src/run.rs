//! Argument parsing and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use moprl::criteria::CriterionRegistry;
use moprl::rational::parse_rational;
use moprl::{MultiIndex, Rational};

use crate::commands::{self, Context, IndexSource};
use crate::config::{parse_poly_type, RunConfig};
use crate::record::{run_exit_code, ResultRecord};

#[derive(Debug, Parser)]
#[command(name = "moprl", version, about = "Exact multiple orthogonal polynomials for finite atomic measure systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML system configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config seed (used by random systems).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for output files; records also go to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits of decimal annotations.
    #[arg(long, default_value_t = 12)]
    pub precision: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments c_k of every measure, k = 0..=max-k.
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
    },
    /// Type I or type II polynomials.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Multi-index like `1,2`; repeatable. Defaults to the config indices.
        #[arg(long)]
        index: Vec<String>,
        #[arg(long = "type", default_value = "ii")]
        poly_type: String,
    },
    /// Isolated real zeros, refined below --width.
    Zeros {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        index: Vec<String>,
        #[arg(long = "type", default_value = "ii")]
        poly_type: String,
        #[arg(long, default_value = "1/1000")]
        width: String,
    },
    /// Run a named criterion over indices.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Criterion name; defaults to `verify.criterion` in the config.
        #[arg(long)]
        criterion: Option<String>,
        #[arg(long)]
        index: Vec<String>,
        /// Grid bounds like `3,3`, expanded lexicographically.
        #[arg(long)]
        grid: Option<String>,
        /// Overrides `verify.type`.
        #[arg(long = "type")]
        poly_type: Option<String>,
        /// Overrides `verify.j` (1-based).
        #[arg(long)]
        j: Option<usize>,
    },
    /// Normality, determinant sign and zero midpoints over a grid (CSV).
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value = "1/1000000")]
        width: String,
    },
}

/// Error that ends the run before any record is produced.
pub struct Abort {
    pub code: i32,
    pub message: String,
}

fn abort(code: i32, message: impl ToString) -> Abort {
    Abort { code, message: message.to_string() }
}

fn parse_index(s: &str) -> Result<MultiIndex, Abort> {
    s.parse().map_err(|e| abort(1, format!("--index {s:?}: {e}")))
}

fn parse_grid(s: &str) -> Result<Vec<usize>, Abort> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| abort(1, format!("--grid {s:?}: {e}"))))
        .collect()
}

fn parse_width(s: &str) -> Result<Rational, Abort> {
    let w = parse_rational(s).map_err(|e| abort(1, format!("--width: {e}")))?;
    if w <= Rational::from_integer(0.into()) {
        return Err(abort(1, "--width must be positive"));
    }
    Ok(w)
}

fn load(common: &Common) -> Result<(RunConfig, Context), Abort> {
    let config = RunConfig::load(&common.config).map_err(|e| abort(1, e))?;
    let seed = common.seed.or(config.seed);
    let system = config.system.build(seed.unwrap_or(0)).map_err(|e| abort(1, e))?;
    Ok((config.clone(), Context::new(system, seed, common.precision)))
}

fn check_lengths(ctx: &Context, indices: &[MultiIndex]) -> Result<(), Abort> {
    match indices.iter().find(|n| n.r() != ctx.system.r()) {
        Some(n) => Err(abort(3, format!("index {n} has {} components, system has {}", n.r(), ctx.system.r()))),
        None => Ok(()),
    }
}

/// `--index` flags, else the config indices (grids expanded).
fn indices(flags: &[String], config: &RunConfig, ctx: &Context) -> Result<IndexSource, Abort> {
    if !flags.is_empty() {
        let list = flags.iter().map(|s| parse_index(s)).collect::<Result<Vec<_>, _>>()?;
        check_lengths(ctx, &list)?;
        return Ok(IndexSource::Explicit(list));
    }
    match &config.indices {
        None => Ok(IndexSource::None),
        Some(spec) => {
            let (list, grid) = spec.expand(ctx.system.r()).map_err(|e| abort(3, e))?;
            Ok(if grid { IndexSource::Grid(list) } else { IndexSource::Explicit(list) })
        }
    }
}

fn required(source: IndexSource, command: &str) -> Result<Vec<MultiIndex>, Abort> {
    match source {
        IndexSource::Explicit(l) | IndexSource::Grid(l) => Ok(l),
        IndexSource::None => Err(abort(3, format!("{command} needs --index or config indices"))),
    }
}

/// Records plus any extra files keyed by name.
struct Output {
    command: &'static str,
    records: Vec<ResultRecord>,
    csv: Option<String>,
}

fn execute(cli: Cli) -> Result<Output, Abort> {
    match cli.command {
        Command::Moments { common, max_k } => {
            let (_, ctx) = load(&common)?;
            Ok(Output { command: "moments", records: commands::moments(&ctx, max_k), csv: None })
        }
        Command::Solve { common, index, poly_type } => {
            let ty = parse_poly_type(&poly_type).map_err(|e| abort(1, e))?;
            let (config, ctx) = load(&common)?;
            let list = required(indices(&index, &config, &ctx)?, "solve")?;
            Ok(Output { command: "solve", records: commands::solve(&ctx, ty, &list), csv: None })
        }
        Command::Zeros { common, index, poly_type, width } => {
            let ty = parse_poly_type(&poly_type).map_err(|e| abort(1, e))?;
            let width = parse_width(&width)?;
            let (config, ctx) = load(&common)?;
            let list = required(indices(&index, &config, &ctx)?, "zeros")?;
            Ok(Output { command: "zeros", records: commands::zeros(&ctx, ty, &list, &width), csv: None })
        }
        Command::Verify { common, criterion, index, grid, poly_type, j } => {
            let registry = CriterionRegistry::default();
            let (config, ctx) = load(&common)?;
            let spec = config.verify.clone().unwrap_or_default();
            let name = criterion
                .or(spec.criterion.clone())
                .ok_or_else(|| abort(1, "no criterion given (--criterion or verify.criterion)"))?;
            let mut params = spec.params().map_err(|e| abort(1, e))?;
            if let Some(t) = poly_type {
                params.poly_type = parse_poly_type(&t).map_err(|e| abort(1, e))?;
            }
            if let Some(j) = j {
                params.j = Some(j.checked_sub(1).ok_or_else(|| abort(1, "--j is 1-based"))?);
            }
            let source = match grid {
                Some(g) => {
                    let bounds = parse_grid(&g)?;
                    if bounds.len() != ctx.system.r() {
                        return Err(abort(3, format!("--grid has {} bounds, system has {} measures", bounds.len(), ctx.system.r())));
                    }
                    IndexSource::Grid(MultiIndex::grid(&bounds))
                }
                None => indices(&index, &config, &ctx)?,
            };
            let records = commands::verify(&ctx, &registry, &name, &params, source).map_err(|e| abort(1, e))?;
            Ok(Output { command: "verify", records, csv: None })
        }
        Command::Scan { common, grid, width } => {
            let width = parse_width(&width)?;
            let (config, ctx) = load(&common)?;
            let list = match grid {
                Some(g) => {
                    let bounds = parse_grid(&g)?;
                    if bounds.len() != ctx.system.r() {
                        return Err(abort(3, format!("--grid has {} bounds, system has {} measures", bounds.len(), ctx.system.r())));
                    }
                    MultiIndex::grid(&bounds)
                }
                None => required(indices(&[], &config, &ctx)?, "scan")?,
            };
            let (records, csv) = commands::scan(&ctx, &list, &width);
            Ok(Output { command: "scan", records, csv: Some(csv) })
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn main_with(cli: Cli, out_dir: Option<PathBuf>) -> i32 {
    let output = match execute(cli) {
        Ok(o) => o,
        Err(a) => {
            eprintln!("moprl: {}", a.message);
            return a.code;
        }
    };
    let lines: String = output.records.iter().map(|r| r.to_line() + "\n").collect();
    let mut stdout = std::io::stdout().lock();
    let written = match (&out_dir, &output.csv) {
        (None, Some(csv)) => stdout.write_all(csv.as_bytes()),
        _ => stdout.write_all(lines.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("moprl: writing stdout: {e}");
        return 1;
    }
    if let Some(dir) = out_dir {
        let result = std::fs::create_dir_all(&dir)
            .and_then(|_| std::fs::write(dir.join(format!("{}.jsonl", output.command)), &lines))
            .and_then(|_| match &output.csv {
                Some(csv) => std::fs::write(dir.join(format!("{}.csv", output.command)), csv),
                None => Ok(()),
            });
        if let Err(e) = result {
            eprintln!("moprl: writing {}: {e}", dir.display());
            return 1;
        }
    }
    for r in &output.records {
        if let Some(e) = &r.error {
            let idx = r.index.as_ref().map(|i| format!(" {i:?}")).unwrap_or_default();
            eprintln!("moprl: {}{idx}: {e}", r.command);
        }
    }
    run_exit_code(&output.records)
}

impl Command {
    pub fn out_dir(&self) -> Option<PathBuf> {
        match self {
            Command::Moments { common, .. }
            | Command::Solve { common, .. }
            | Command::Zeros { common, .. }
            | Command::Verify { common, .. }
            | Command::Scan { common, .. } => common.out.clone(),
        }
    }
}

