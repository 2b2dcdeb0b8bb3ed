use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use covercab::covermat::{build_bmatrix_with_cutoff, stack_layouts, BinaryCoverageMatrix};
use covercab::optimizer::{
    max_coverage_budget, min_cover_exact, min_cover_greedy, OptimizeError, SolverOptions,
};
use covercab::render::render_solution;
use covercab::report::{SolutionReport, SolveMode};
use covercab::scene::{load_scene, Scene};
use covercab::sweep::{read_csv, run_sweep, write_csv};
use covercab::Execution;

/// Camera placement for vehicle cabins.
#[derive(Parser)]
#[command(name = "covercab", version)]
struct Cli {
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the pose grid over one layout and write the coverage CSV.
    Sweep {
        /// Scene file, or `default` for the built-in scene.
        #[arg(long, default_value = "default")]
        scene: String,
        #[arg(long)]
        layout: u32,
        #[arg(long)]
        out: PathBuf,
        /// Angle grid overrides, e.g. `yaw=0:350:10,pitch=-90:0:10,roll=0`.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Choose camera poses from coverage data.
    Optimize(OptimizeArgs),
    /// Print which selected camera sees each marker.
    Report {
        /// Solution JSON written by `optimize --json`.
        #[arg(long)]
        solution: PathBuf,
    },
    /// Draw a top-down SVG of a layout and a solution.
    Render {
        #[arg(long, default_value = "default")]
        scene: String,
        #[arg(long)]
        layout: u32,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct OptimizeArgs {
    /// Coverage CSV; repeat to optimize several layouts jointly.
    #[arg(long, conflicts_with = "scene")]
    csv: Vec<PathBuf>,
    /// Layout ids for the CSV files, in order (default 1, 2, ...).
    #[arg(long, value_delimiter = ',', requires = "csv")]
    labels: Vec<u32>,
    /// Sweep this scene in memory instead of reading CSV files.
    #[arg(long, requires = "layouts")]
    scene: Option<String>,
    /// Layouts to sweep and stack, e.g. `2,3`.
    #[arg(long, value_delimiter = ',')]
    layouts: Vec<u32>,
    #[arg(long, requires = "scene")]
    grid: Option<String>,
    /// Use exactly k cameras and maximize coverage.
    #[arg(long, conflicts_with = "greedy")]
    budget: Option<usize>,
    /// Greedy cover instead of the exact search.
    #[arg(long)]
    greedy: bool,
    /// Luminance must exceed this to count as seen.
    #[arg(long, default_value_t = 0.0)]
    cutoff: f64,
    /// Search node limit for the exact solvers.
    #[arg(long, default_value_t = covercab::optimizer::DEFAULT_MAX_EVALUATIONS)]
    max_evaluations: u64,
    /// Also write the solution as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let infeasible = matches!(e.downcast_ref(), Some(OptimizeError::Infeasible { .. }));
            ExitCode::from(if infeasible { 2 } else { 1 })
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("COVERCAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("COVERCAB_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Sweep {
            scene,
            layout,
            out,
            grid,
        } => {
            let scene = open_scene(&scene)?;
            let grid = match grid {
                Some(spec) => scene.grid.with_overrides(&spec)?,
                None => scene.grid.clone(),
            };
            let ds = run_sweep(&scene, layout, &grid, exec)?;
            write_csv(&ds, &out)?;
            let meta = ds.meta.as_ref().expect("sweeps carry metadata");
            println!(
                "layout {}: {} poses x {} markers = {} records -> {}",
                layout,
                meta.poses,
                6 * meta.occupants,
                ds.len(),
                out.display()
            );
            Ok(())
        }
        Command::Optimize(args) => optimize(args, exec),
        Command::Report { solution } => {
            let report = read_report(&solution)?;
            print!("{}", report.to_text());
            print!("{}", report.attribution_text());
            Ok(())
        }
        Command::Render {
            scene,
            layout,
            solution,
            out,
        } => {
            let scene = open_scene(&scene)?;
            let report = read_report(&solution)?;
            let svg = render_solution(&scene, layout, &report)?;
            std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
            Ok(())
        }
    }
}

fn open_scene(arg: &str) -> Result<Scene> {
    Ok(load_scene(arg)?)
}

fn read_report(path: &Path) -> Result<SolutionReport> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SolutionReport::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_matrix(args: &OptimizeArgs, exec: Execution) -> Result<BinaryCoverageMatrix> {
    let mut mats = Vec::new();
    if let Some(scene_arg) = &args.scene {
        let scene = open_scene(scene_arg)?;
        let grid = match &args.grid {
            Some(spec) => scene.grid.with_overrides(spec)?,
            None => scene.grid.clone(),
        };
        for &id in &args.layouts {
            let ds = run_sweep(&scene, id, &grid, exec)?;
            mats.push(build_bmatrix_with_cutoff(&ds, id, args.cutoff)?);
        }
    } else {
        if args.csv.is_empty() {
            bail!("give --csv files or --scene with --layouts");
        }
        if !args.labels.is_empty() && args.labels.len() != args.csv.len() {
            bail!(
                "{} labels for {} CSV files",
                args.labels.len(),
                args.csv.len()
            );
        }
        for (i, path) in args.csv.iter().enumerate() {
            let id = args.labels.get(i).copied().unwrap_or(i as u32 + 1);
            let ds = read_csv(path)?;
            mats.push(
                build_bmatrix_with_cutoff(&ds, id, args.cutoff)
                    .with_context(|| format!("{}", path.display()))?,
            );
        }
    }
    Ok(if mats.len() == 1 {
        mats.pop().unwrap()
    } else {
        stack_layouts(&mats)?
    })
}

fn optimize(args: OptimizeArgs, exec: Execution) -> Result<()> {
    let a = load_matrix(&args, exec)?;
    let opts = SolverOptions {
        execution: exec,
        max_evaluations: args.max_evaluations,
    };
    let (sol, mode) = if let Some(k) = args.budget {
        (max_coverage_budget(&a, k, &opts)?, SolveMode::Budget)
    } else if args.greedy {
        (min_cover_greedy(&a)?, SolveMode::Greedy)
    } else {
        (min_cover_exact(&a, &opts)?, SolveMode::Exact)
    };
    let report = SolutionReport::new(&a, &sol, mode, args.budget);
    print!("{}", report.to_text());
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
