use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use drawbench::aggregate::aggregate;
use drawbench::client::{ModelClient, ScriptedMockClient};
use drawbench::harness::{read_results, run_benchmark, ResultsWriter, RunConfig};
use drawbench::http::{HttpClient, Provider};
use drawbench::io::{load_dataset, load_layout, load_task, read_text, seed_dataset, LoadError};
use drawbench::report::{render_csv, render_text};
use drawbench_core::actions::parse_actions;
use drawbench_core::dataset::{dataset_stats, format_percent, Dataset};
use drawbench_core::evaluator::{evaluate, EvalOptions, ScoreMode};
use drawbench_core::feedback::generate_feedback;
use drawbench_core::interpreter::{interpret, render_svg, ToolUsage};

/// Scores GUI drawing-action sequences against task criteria.
///
/// Exit status: 0 success (for `eval`, a perfect score), 1 imperfect score
/// or invalid dataset, 2 unreadable input, bad flags or configuration.
#[derive(Parser)]
#[command(name = "drawbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ratio,
    Weighted,
}

impl From<Mode> for ScoreMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Ratio => ScoreMode::Ratio,
            Mode::Weighted => ScoreMode::Weighted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Usage {
    /// A tool counts once its toolbar button is clicked.
    Selected,
    /// A tool counts only if something was drawn with it.
    Drawn,
}

impl From<Usage> for ToolUsage {
    fn from(u: Usage) -> Self {
        match u {
            Usage::Selected => ToolUsage::Selected,
            Usage::Drawn => ToolUsage::Drawn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Score an action sequence against a task; prints the report as JSON,
    /// then the feedback text.
    Eval {
        /// File holding the model output (a JSON action array, possibly
        /// surrounded by other text).
        actions: PathBuf,
        /// Task file: a single task object or a `.tasks.json` dataset.
        task: PathBuf,
        /// Task to pick when TASK is a dataset with several tasks.
        #[arg(long)]
        task_id: Option<String>,
        #[arg(long, value_enum, default_value = "ratio")]
        mode: Mode,
        /// Layout file; defaults to the built-in layout.
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Use the task's lenient criteria when it has them.
        #[arg(long)]
        lenient: bool,
        #[arg(long, value_enum, default_value = "selected")]
        tool_usage: Usage,
    },
    /// Interpret an action sequence and write it as SVG.
    Render {
        actions: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Run the two-turn protocol for every task and client.
    Bench {
        /// Dataset file, or `seed` for the bundled tasks.
        #[arg(long, default_value = "seed")]
        dataset: String,
        /// `mock`, `mock:SCRIPT.json`, `openai:MODEL`, `anthropic:MODEL` or
        /// `google:MODEL`. Repeat for several models.
        #[arg(long = "client", required = true)]
        clients: Vec<String>,
        /// TOML run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Results file, one JSON record per line.
        #[arg(long, default_value = "bench.results.jsonl")]
        out: PathBuf,
        /// Sessions to run concurrently (overrides the config).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum)]
        tool_usage: Option<Usage>,
        /// Record elapsed times as 0 for reproducible result files.
        #[arg(long)]
        frozen_clock: bool,
        #[arg(long)]
        lenient: bool,
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Summarize a results file.
    Report {
        results: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Check a dataset file and print its composition.
    ValidateDataset { file: PathBuf },
}

/// Operational failure: message for standard error, exit status 2.
struct Fatal(String);

impl<E: Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { actions, task, task_id, mode, layout, lenient, tool_usage } => {
            cmd_eval(&actions, &task, task_id.as_deref(), mode, layout.as_deref(), lenient, tool_usage)
        }
        Command::Render { actions, out, layout } => cmd_render(&actions, out.as_deref(), layout.as_deref()),
        Command::Bench { dataset, clients, config, out, jobs, mode, tool_usage, frozen_clock, lenient, layout } => {
            let overrides = Overrides { jobs, mode, tool_usage, frozen_clock, lenient };
            cmd_bench(&dataset, &clients, config.as_deref(), &out, overrides, layout.as_deref())
        }
        Command::Report { results, format } => cmd_report(&results, format),
        Command::ValidateDataset { file } => cmd_validate(&file),
    };
    match result {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_eval(
    actions: &Path,
    task: &Path,
    task_id: Option<&str>,
    mode: Mode,
    layout: Option<&Path>,
    lenient: bool,
    usage: Usage,
) -> Result<ExitCode, Fatal> {
    let raw = read_text(actions)?;
    let task = load_task(task, task_id)?;
    let layout = load_layout(layout)?;
    let spec = task.criteria_for(lenient);
    let opts = EvalOptions { mode: mode.into(), tool_usage: usage.into(), ..Default::default() };
    let report = evaluate(&raw, spec, &layout, &opts);
    let feedback = generate_feedback(&report, spec, &layout);
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out, "\n\n{}", feedback.text)?;
    Ok(if report.is_perfect() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_render(actions: &Path, out: Option<&Path>, layout: Option<&Path>) -> Result<ExitCode, Fatal> {
    let raw = read_text(actions)?;
    let layout = load_layout(layout)?;
    let seq = parse_actions(&raw).map_err(|e| Fatal(format!("{}: {e}", actions.display())))?;
    let trace = interpret(&seq, &layout);
    for d in &trace.diagnostics {
        eprintln!("warning: action {}: {} at {}", d.action_index, d.kind.name(), d.point);
    }
    let svg = render_svg(&trace, &layout.canvas);
    match out {
        Some(p) => std::fs::write(p, svg).map_err(|e| Fatal(format!("cannot write {}: {e}", p.display())))?,
        None => std::io::stdout().write_all(svg.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

struct Overrides {
    jobs: Option<usize>,
    mode: Option<Mode>,
    tool_usage: Option<Usage>,
    frozen_clock: bool,
    lenient: bool,
}

fn make_client(spec: &str, cfg: &RunConfig) -> Result<Arc<dyn ModelClient>, Fatal> {
    if spec == "mock" {
        return Ok(Arc::new(ScriptedMockClient::seed()));
    }
    let (kind, arg) = spec.split_once(':').ok_or_else(|| Fatal(format!("unknown client '{spec}'")))?;
    if kind == "mock" {
        return Ok(Arc::new(ScriptedMockClient::from_file(Path::new(arg))?));
    }
    let provider = Provider::from_name(kind).ok_or_else(|| Fatal(format!("unknown client provider '{kind}'")))?;
    if arg.is_empty() {
        return Err(Fatal(format!("client '{spec}' names no model")));
    }
    let base = cfg.base_urls.get(kind).map(String::as_str);
    Ok(Arc::new(HttpClient::from_env(provider, arg, base, cfg.timeout())?))
}

fn cmd_bench(
    dataset: &str,
    clients: &[String],
    config: Option<&Path>,
    out: &Path,
    o: Overrides,
    layout: Option<&Path>,
) -> Result<ExitCode, Fatal> {
    let mut cfg = match config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(j) = o.jobs {
        cfg.jobs = j;
    }
    if let Some(m) = o.mode {
        cfg.score_mode = m.into();
    }
    if let Some(u) = o.tool_usage {
        cfg.tool_usage = u.into();
    }
    cfg.frozen_clock |= o.frozen_clock;
    cfg.lenient |= o.lenient;
    cfg.validate()?;

    let ds: Dataset = if dataset == "seed" { seed_dataset() } else { load_dataset(Path::new(dataset))? };
    let layout = load_layout(layout)?;
    let clients = clients.iter().map(|c| make_client(c, &cfg)).collect::<Result<Vec<_>, _>>()?;
    let mut writer = ResultsWriter::create(out).map_err(|e| Fatal(format!("cannot create {}: {e}", out.display())))?;
    let mut write_error = None;
    let start = Instant::now();
    let results = run_benchmark(&clients, &ds, &layout, &cfg, &mut |r| {
        if write_error.is_none() {
            write_error = writer.write(r).err();
        }
    });
    if let Some(e) = write_error {
        return Err(Fatal(format!("cannot write {}: {e}", out.display())));
    }
    let a = aggregate(&results);
    let failed: usize = a.by_model.iter().map(|m| m.failed).sum();
    eprintln!(
        "{} sessions ({} failed) in {:.1}s; mean score {:.3} -> {:.3}; results in {}",
        a.sessions,
        failed,
        start.elapsed().as_secs_f64(),
        a.overall.turn1.mean,
        a.overall.turn2.mean,
        out.display()
    );
    for r in results.iter().filter(|r| r.failed) {
        let reason = r.turn2.as_ref().and_then(|t| t.failure.as_deref()).or(r.turn1.failure.as_deref());
        eprintln!("failed: {} {}: {}", r.model, r.task_id, reason.unwrap_or("unknown"));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(results: &Path, format: Format) -> Result<ExitCode, Fatal> {
    let rs = read_results(results)?;
    if rs.is_empty() {
        return Err(Fatal(format!("{}: no results", results.display())));
    }
    let a = aggregate(&rs);
    let text = match format {
        Format::Table => render_text(&a),
        Format::Csv => render_csv(&a),
    };
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(file: &Path) -> Result<ExitCode, Fatal> {
    let ds = match load_dataset(file) {
        Ok(ds) => ds,
        Err(e @ (LoadError::Io { .. } | LoadError::Json { .. })) => return Err(e.into()),
        Err(e) => {
            eprintln!("invalid: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let stats = dataset_stats(&ds.tasks);
    let mut out = std::io::stdout().lock();
    writeln!(out, "{} {}: {} tasks", ds.name, ds.version, stats.total)?;
    for r in &stats.by_difficulty {
        writeln!(out, "  {:<18} {:>4}  {:>6}", r.difficulty.label(), r.count, format_percent(r.percent_tenths))?;
    }
    for r in stats.by_category.iter().filter(|r| r.count > 0) {
        writeln!(out, "  {:<18} {:>4}  {:>6}", r.category.name(), r.count, format_percent(r.percent_tenths))?;
    }
    Ok(ExitCode::SUCCESS)
}
