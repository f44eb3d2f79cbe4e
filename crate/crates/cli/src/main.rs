mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use vcm_core::figures::figure_data;
use vcm_core::io::{round_sig12, trajectory_to_csv, trajectory_to_json};
use vcm_core::sweep::{rows_to_csv, run_sweep};
use vcm_core::{
    closed_form_optimum, deviation_gains, fit_quadratic, format_sig12, grid_search, run_game,
    vertex,
};

use crate::config::Config;

#[derive(Parser)]
#[command(name = "vcm", version, about = "Dynamic public good game simulator and solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON config file (params, scenario or profile, step, epsilon, sweep ranges).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for generated files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Grid step: switch-stage grid for optimize/sweep/emit-figures,
    /// contribution grid for verify-nash.
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Deviation gain tolerance for verify-nash.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Format of what is printed to stdout.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and write its trajectory.
    Simulate {
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Grid search over the switch stage plus the closed-form vertex.
    Optimize,
    /// Best unilateral deviation gain of every player.
    VerifyNash {
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Least-squares quadratic fit of an (x, y) CSV file.
    Fit { input: PathBuf },
    /// Compare the three optimum routes over a parameter grid.
    Sweep,
    /// Write the data series behind the outcome figures.
    EmitFigures,
}

/// Run outcome: `Ok(true)` when every requested check passed.
type Checked = Result<bool>;

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Checked {
    let config = Config::load(cli.common.config.as_deref())?;
    let c = &cli.common;
    match &cli.command {
        Command::Simulate { scenario } => simulate(&config, c, scenario.as_deref()),
        Command::Optimize => optimize(&config, c),
        Command::VerifyNash { scenario } => verify_nash(&config, c, scenario.as_deref()),
        Command::Fit { input } => fit(input),
        Command::Sweep => sweep(&config, c),
        Command::EmitFigures => emit_figures(&config, c),
    }
}

fn num(v: f64) -> Value {
    json!(round_sig12(v))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn step_or(config: &Config, common: &Common, default: f64) -> Result<f64> {
    let step = common.step.or(config.step).unwrap_or(default);
    if step.is_nan() || step <= 0.0 {
        bail!("step must be positive, got {step}");
    }
    Ok(step)
}

fn simulate(config: &Config, common: &Common, scenario: Option<&str>) -> Checked {
    let params = config.params()?;
    let profile = config.profile(&params, scenario)?;
    let trajectory = run_game(&params, &profile)?;
    write_file(&common.out, "trajectory.csv", &trajectory_to_csv(&trajectory)?)?;
    write_file(&common.out, "trajectory.json", &trajectory_to_json(&trajectory)?)?;
    match common.format {
        Some(Format::Json) => {
            let totals: Vec<Value> = trajectory.total_payoffs.iter().map(|&v| num(v)).collect();
            println!("{}", json!({ "total_payoffs": totals }));
        }
        _ => {
            let totals: Vec<String> = trajectory
                .total_payoffs
                .iter()
                .map(|&v| format_sig12(v))
                .collect();
            println!("{}", totals.join(" "));
        }
    }
    Ok(true)
}

fn optimize(config: &Config, common: &Common) -> Checked {
    let params = config.params()?;
    let step = step_or(config, common, 0.01)?;
    let grid = grid_search(&params, step)?;
    let closed = closed_form_optimum(&params)?;
    let model = fit_quadratic(&grid.samples)?;
    let mut table = String::from("x,payoff\n");
    for &(x, y) in &grid.samples {
        table.push_str(&format!("{},{}\n", format_sig12(x), format_sig12(y)));
    }
    let path = write_file(&common.out, "switch_payoffs.csv", &table)?;
    let fit_vertex = vertex(&model).ok();
    match common.format {
        Some(Format::Json) => {
            let doc = json!({
                "step": num(step),
                "grid_best_x": num(grid.best_x),
                "grid_best_payoff": num(grid.best_payoff),
                "closed_form_x": num(closed.x),
                "closed_form_payoff": num(closed.payoff),
                "closed_form_vertex": closed.vertex.map(num),
                "closed_form_clamped": closed.clamped,
                "fit": {"a": num(model.a), "b": num(model.b), "c": num(model.c), "rss": num(model.rss)},
                "fit_vertex_x": fit_vertex.map(|v| num(v.0)),
                "samples_csv": path.display().to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        _ => {
            let f = format_sig12;
            println!("step {}", f(step));
            println!("grid_best_x {}", f(grid.best_x));
            println!("grid_best_payoff {}", f(grid.best_payoff));
            println!("closed_form_x {}", f(closed.x));
            println!("closed_form_payoff {}", f(closed.payoff));
            println!("closed_form_clamped {}", closed.clamped);
            println!(
                "fit a={} b={} c={} rss={}",
                f(model.a),
                f(model.b),
                f(model.c),
                f(model.rss)
            );
            if let Some((x, _)) = fit_vertex {
                println!("fit_vertex_x {}", f(x));
            }
            println!("samples {}", path.display());
        }
    }
    Ok(true)
}

fn verify_nash(config: &Config, common: &Common, scenario: Option<&str>) -> Checked {
    let params = config.params()?;
    let profile = config.profile(&params, scenario)?;
    let step = step_or(config, common, 1.0)?;
    let epsilon = common.epsilon.or(config.epsilon).unwrap_or(1e-9);
    if epsilon.is_nan() || epsilon < 0.0 {
        bail!("epsilon must be non-negative, got {epsilon}");
    }
    let gains = deviation_gains(&params, &profile, step)?;
    let nash = gains.iter().all(|&g| g <= epsilon);
    match common.format {
        Some(Format::Json) => {
            let doc = json!({
                "grid_step": num(step),
                "epsilon": epsilon,
                "gains": gains.iter().map(|&g| num(g)).collect::<Vec<_>>(),
                "is_nash": nash,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        _ => {
            println!("{:<8}{:>16}", "player", "gain");
            for (i, &g) in gains.iter().enumerate() {
                println!("{:<8}{:>16}", i + 1, format_sig12(g));
            }
            println!("nash {nash}");
        }
    }
    Ok(nash)
}

fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match cells.as_slice() {
            [x, y] => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(pair) => samples.push(pair),
            // A non-numeric first line is a header.
            None if i == 0 => continue,
            None => bail!("{}:{}: expected `x,y`, got {line:?}", path.display(), i + 1),
        }
    }
    Ok(samples)
}

fn fit(input: &Path) -> Checked {
    let samples = read_samples(input)?;
    let model = fit_quadratic(&samples)?;
    let v = vertex(&model).ok();
    let doc = json!({
        "a": num(model.a),
        "b": num(model.b),
        "c": num(model.c),
        "rss": num(model.rss),
        "n_samples": model.n_samples,
        "vertex_x": v.map(|v| num(v.0)),
        "vertex_y": v.map(|v| num(v.1)),
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(true)
}

fn sweep(config: &Config, common: &Common) -> Checked {
    let step = step_or(config, common, 0.01)?;
    let rows = run_sweep(&config.sweep_ranges(), step)?;
    let csv = rows_to_csv(&rows)?;
    let path = write_file(&common.out, "sweep.csv", &csv)?;
    let agree = rows.iter().filter(|r| r.agrees()).count();
    if common.format == Some(Format::Json) {
        let doc = json!({"rows": rows.len(), "agree": agree, "report": path.display().to_string()});
        println!("{doc}");
    } else {
        println!("{agree}/{} rows agree within step {}", rows.len(), format_sig12(step));
        println!("report {}", path.display());
    }
    Ok(agree == rows.len())
}

fn emit_figures(config: &Config, common: &Common) -> Checked {
    let params = config.params()?;
    let step = step_or(config, common, 0.01)?;
    for figure in figure_data(&params, step)? {
        let path = write_file(&common.out, &figure.file_name, &figure.to_csv())?;
        println!("{}", path.display());
    }
    Ok(true)
}
