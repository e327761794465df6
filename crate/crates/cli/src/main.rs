use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use searchstop::objective::Params;
use searchstop::oracle::oracle;
use searchstop::{Dag, SchedulingStrategy};
use searchstop_cli::config::{ExperimentConfig, preset, resolve_out_dir};
use searchstop_cli::experiment::run_experiment;
use searchstop_cli::plot::{PlotOptions, render_regret_svg};
use searchstop_cli::{CliError, Result, csvio};

/// Print to stdout, exiting quietly when the downstream consumer is gone
/// (e.g. output piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "searchstop",
    version,
    about = "Budgeted sequential search-and-stop on DAGs: offline oracle and online bandit policies"
)]
struct Cli {
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (overrides SEARCHSTOP_OUT and the config value).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel replications.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Experiment config file (used by simulate and sweep).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the quasi-optimal stationary search for explicit parameters.
    Oracle {
        /// DAG text file (first line n, then "u v" edges).
        #[arg(long)]
        dag: Option<PathBuf>,
        /// Use an edgeless DAG on N arms instead of --dag.
        #[arg(long)]
        edgeless: Option<usize>,
        /// Comma-separated weight vector.
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<f64>,
        /// Comma-separated cost vector.
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<f64>,
        /// auto, smith, or exhaustive.
        #[arg(long, default_value = "auto")]
        strategy: String,
    },
    /// Run the experiment described by --config.
    Simulate,
    /// Rerun the --config experiment for each value of one key.
    Sweep {
        /// Config key to vary (budget, replications, seed, zeta, checkpoints, n, m, eps, cost_mean).
        #[arg(long)]
        key: String,
        /// Comma-separated list of values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Run a named preset: sec5-desk, sec5-full, or two-path.
    Preset {
        name: String,
        /// Budget override.
        #[arg(long)]
        budget: Option<f64>,
        /// Replication-count override.
        #[arg(long)]
        replications: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Oracle {
            dag,
            edgeless,
            w,
            c,
            strategy,
        } => cmd_oracle(dag.as_deref(), *edgeless, w, c, strategy),
        Cmd::Simulate => {
            let mut cfg = load_config(&cli)?;
            apply_global_overrides(&mut cfg, &cli);
            let out_dir = resolve_out_dir(cli.out.as_deref(), &cfg.run.out_dir, env_var);
            execute(&cfg, &out_dir, cli.jobs)
        }
        Cmd::Sweep { key, values } => {
            let base = load_config(&cli)?;
            cmd_sweep(&base, &cli, key, values)
        }
        Cmd::Preset {
            name,
            budget,
            replications,
        } => {
            let mut cfg = preset(name)?;
            if let Some(b) = budget {
                cfg.run.budget = *b;
            }
            if let Some(r) = replications {
                cfg.run.replications = *r;
            }
            apply_global_overrides(&mut cfg, &cli);
            let out_dir = resolve_out_dir(cli.out.as_deref(), &cfg.run.out_dir, env_var);
            execute(&cfg, &out_dir, cli.jobs)
        }
    }
}

fn env_var(name: &str) -> Option<String> {
    std::env::var(name).ok()
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("config", "this command needs --config PATH"))?;
    ExperimentConfig::load(path)
}

fn apply_global_overrides(cfg: &mut ExperimentConfig, cli: &Cli) {
    if let Some(seed) = cli.seed {
        cfg.run.seed = seed;
    }
}

fn cmd_oracle(
    dag_path: Option<&Path>,
    edgeless: Option<usize>,
    w: &[f64],
    c: &[f64],
    strategy: &str,
) -> Result<()> {
    let dag = match (dag_path, edgeless) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config("dag", format!("cannot read {}: {e}", path.display()))
            })?;
            Dag::from_text(&text).map_err(|e| CliError::config("dag", e.to_string()))?
        }
        (None, Some(n)) => {
            Dag::edgeless(n).map_err(|e| CliError::config("edgeless", e.to_string()))?
        }
        _ => {
            return Err(CliError::config(
                "dag",
                "give exactly one of --dag PATH or --edgeless N",
            ));
        }
    };
    let strategy = parse_strategy(strategy)?;
    let params =
        Params::new(w.to_vec(), c.to_vec()).map_err(|e| CliError::config("w", e.to_string()))?;
    if params.len() != dag.n() {
        return Err(CliError::config(
            "w",
            format!("expected {} entries, got {}", dag.n(), params.len()),
        ));
    }
    let result = oracle(&dag, &params, strategy)?;
    out!("search:         {}", result.search);
    out!("cut_index:      {}", result.cut_index);
    out!("j_plus:         {}", result.j_plus);
    out!("full_extension: {}", result.full_extension);
    let j_plus_json = match result.j_plus.finite() {
        Some(x) => serde_json::json!(x),
        None => serde_json::json!("inf"),
    };
    let record = serde_json::json!({
        "search": result.search.arms(),
        "cut_index": result.cut_index,
        "j_plus": j_plus_json,
        "full_extension": result.full_extension.arms(),
        "degenerate": result.is_degenerate(),
    });
    out!("{record}");
    Ok(())
}

fn parse_strategy(s: &str) -> Result<SchedulingStrategy> {
    match s {
        "auto" => Ok(SchedulingStrategy::Auto),
        "smith" => Ok(SchedulingStrategy::SmithRule),
        "exhaustive" => Ok(SchedulingStrategy::Exhaustive),
        other => Err(CliError::config(
            "strategy",
            format!("unknown strategy {other:?}; expected auto, smith or exhaustive"),
        )),
    }
}

/// Run one experiment and write runs.csv, curve.csv, regret.svg and the
/// resolved config echo into `out_dir`.
fn execute(cfg: &ExperimentConfig, out_dir: &Path, jobs: usize) -> Result<()> {
    let resolved = cfg.resolve()?;
    std::fs::create_dir_all(out_dir)?;
    let output = run_experiment(&resolved, jobs)?;

    let runs_path = out_dir.join("runs.csv");
    let curve_path = out_dir.join("curve.csv");
    let svg_path = out_dir.join("regret.svg");
    csvio::write_runs(&runs_path, &output.rows)?;
    csvio::write_curve(&curve_path, &output.curve)?;
    std::fs::write(
        &svg_path,
        render_regret_svg(&output.curve, &PlotOptions::default()),
    )?;
    std::fs::write(out_dir.join("config.toml"), cfg.to_toml())?;

    out!(
        "instance: {} arms, J* = {:.6}, seed = {}",
        resolved.instance.n(),
        resolved.j_star,
        resolved.seed
    );
    out!("wrote {} ({} rows)", runs_path.display(), output.rows.len());
    out!("wrote {}", curve_path.display());
    out!("wrote {}", svg_path.display());
    out!("final mean regret proxy at B = {}:", resolved.budget);
    for series in &output.curve.series {
        let last = series.mean.len() - 1;
        out!(
            "  {:8} {:10.3} +- {:.3}",
            series.policy,
            series.mean[last],
            series.stderr[last]
        );
    }
    Ok(())
}

fn cmd_sweep(base: &ExperimentConfig, cli: &Cli, key: &str, values: &[String]) -> Result<()> {
    let out_root = resolve_out_dir(cli.out.as_deref(), &base.run.out_dir, env_var);
    std::fs::create_dir_all(&out_root)?;
    let mut summary = Vec::new();
    for value in values {
        let mut cfg = base.clone();
        apply_global_overrides(&mut cfg, cli);
        cfg.apply_override(key, value)?;
        let sub = out_root.join(format!("{}-{}", sanitize(key), sanitize(value)));
        execute(&cfg, &sub, cli.jobs)?;
        let curve = csvio::read_curve(&sub.join("curve.csv"))?;
        for series in &curve.series {
            let last = series.mean.len() - 1;
            summary.push(SweepRow {
                key: key.to_string(),
                value: value.clone(),
                policy: series.policy.clone(),
                final_budget: *curve.checkpoint_budgets.last().unwrap(),
                mean_regret_proxy: series.mean[last],
                stderr_regret_proxy: series.stderr[last],
            });
        }
    }
    let summary_path = out_root.join("sweep_summary.csv");
    let mut w = csv::Writer::from_path(&summary_path).map_err(CliError::from)?;
    for row in &summary {
        w.serialize(row).map_err(CliError::from)?;
    }
    w.flush().map_err(CliError::from)?;
    out!("wrote {}", summary_path.display());
    Ok(())
}

#[derive(serde::Serialize)]
struct SweepRow {
    key: String,
    value: String,
    policy: String,
    final_budget: f64,
    mean_regret_proxy: f64,
    stderr_regret_proxy: f64,
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
