//! Two-turn evaluation loop, batch runner and results persistence.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use drawbench_core::actions::parse_actions;
use drawbench_core::dataset::{Category, Dataset, Difficulty, TaskSpec};
use drawbench_core::evaluator::{evaluate, EvalOptions, EvaluationReport, ScoreMode};
use drawbench_core::feedback::{feedback_record, generate_feedback, FeedbackRecord};
use drawbench_core::geometry::UiLayout;
use drawbench_core::interpreter::ToolUsage;
use serde::{Deserialize, Serialize};

use crate::client::{ClientError, GenerateParams, GenerateRequest, Generation, ModelClient};
use crate::prompt::{build_prompt, Revision, PROMPT_VERSION};

/// Version of the results record layout.
pub const RESULTS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_seconds: f64,
    /// Total generate attempts per turn, including the first.
    pub retries: u32,
    pub early_stop_threshold: f64,
    pub score_mode: ScoreMode,
    pub tool_usage: ToolUsage,
    /// Score against each task's lenient criteria when it has them.
    pub lenient: bool,
    /// Sessions run concurrently; 1 runs them strictly in order.
    pub jobs: usize,
    /// Record elapsed times as 0 so result files are reproducible.
    pub frozen_clock: bool,
    /// Base URL per provider name, overriding the environment.
    pub base_urls: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            temperature: 0.7,
            max_tokens: 4000,
            timeout_seconds: 30.0,
            retries: 3,
            early_stop_threshold: 0.9,
            score_mode: ScoreMode::Ratio,
            tool_usage: ToolUsage::Selected,
            lenient: false,
            jobs: 1,
            frozen_clock: false,
            base_urls: BTreeMap::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("invalid run config: {0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return bad("temperature must be a non-negative number");
        }
        if self.max_tokens == 0 {
            return bad("max_tokens must be positive");
        }
        if !(self.timeout_seconds.is_finite() && self.timeout_seconds > 0.0) {
            return bad("timeout_seconds must be positive");
        }
        if self.retries == 0 {
            return bad("retries must be positive");
        }
        if !(self.early_stop_threshold > 0.0 && self.early_stop_threshold <= 1.0) {
            return bad("early_stop_threshold must be in (0, 1]");
        }
        if self.jobs == 0 {
            return bad("jobs must be positive");
        }
        Ok(())
    }

    pub fn parse(text: &str, path: &Path) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|source| ConfigError::Toml { path: path.into(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text, path)
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_seconds)
    }

    fn params(&self) -> GenerateParams {
        GenerateParams { temperature: self.temperature, max_tokens: self.max_tokens }
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions { mode: self.score_mode, tool_usage: self.tool_usage, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TokenUsage {
    pub input: u64,
    pub output: u64,
    /// True when any count is a characters/4 estimate.
    pub estimated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackOut {
    pub text: String,
    pub record: FeedbackRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnResult {
    pub turn: u8,
    pub raw_output: String,
    /// Generate calls made, including retries.
    pub attempts: u32,
    /// Last client error when no attempt produced output.
    pub failure: Option<String>,
    pub report: EvaluationReport,
    /// Present on turn 1 when the score is below the early-stop threshold.
    pub feedback: Option<FeedbackOut>,
    pub tokens: TokenUsage,
    pub elapsed_ms: u64,
}

impl TurnResult {
    pub fn score(&self) -> f64 {
        self.report.score
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionResult {
    pub schema_version: u32,
    pub prompt_version: u32,
    pub model: String,
    pub task_id: String,
    pub category: Category,
    pub difficulty: Difficulty,
    pub turn1: TurnResult,
    pub turn2: Option<TurnResult>,
    pub final_score: f64,
    pub improvement: f64,
    /// The client produced no output on some turn after every retry.
    pub failed: bool,
}

impl SessionResult {
    pub fn early_stopped(&self) -> bool {
        self.turn2.is_none() && self.turn1.failure.is_none()
    }
}

fn estimate_tokens(text: &str) -> u64 {
    (text.chars().count() as u64).div_ceil(4)
}

/// Runs one generate call on a worker thread and waits at most `deadline`.
pub fn generate_with_deadline(
    client: &Arc<dyn ModelClient>,
    req: GenerateRequest,
    deadline: Duration,
) -> Result<Generation, ClientError> {
    let (tx, rx) = mpsc::channel();
    let worker = Arc::clone(client);
    thread::Builder::new()
        .name("generate".into())
        .spawn(move || {
            let _ = tx.send(worker.generate(&req));
        })
        .map_err(|e| ClientError::Transport(format!("cannot start worker: {e}")))?;
    match rx.recv_timeout(deadline) {
        Ok(r) => r,
        Err(mpsc::RecvTimeoutError::Timeout) => Err(ClientError::Timeout(deadline)),
        Err(mpsc::RecvTimeoutError::Disconnected) => Err(ClientError::Transport("client panicked".into())),
    }
}

struct Generated {
    text: String,
    attempts: u32,
    failure: Option<String>,
    tokens: TokenUsage,
}

/// Generates with retries on client errors and on unparseable output. The
/// last parseable-or-not text wins once attempts run out.
fn generate_turn(client: &Arc<dyn ModelClient>, task: &TaskSpec, turn: u8, prompt: &str, cfg: &RunConfig) -> Generated {
    let mut tokens = TokenUsage::default();
    let mut last_text: Option<String> = None;
    let mut last_error = None;
    let mut attempts = 0;
    for attempt in 0..cfg.retries {
        attempts += 1;
        let req = GenerateRequest {
            task_id: task.id.clone(),
            turn,
            attempt,
            prompt: prompt.to_string(),
            params: cfg.params(),
        };
        match generate_with_deadline(client, req, cfg.timeout()) {
            Ok(g) => {
                tokens.input += g.input_tokens.unwrap_or_else(|| estimate_tokens(prompt));
                tokens.output += g.output_tokens.unwrap_or_else(|| estimate_tokens(&g.text));
                tokens.estimated |= g.input_tokens.is_none() || g.output_tokens.is_none();
                let ok = parse_actions(&g.text).is_ok();
                last_text = Some(g.text);
                if ok {
                    break;
                }
            }
            Err(e) => last_error = Some(e.to_string()),
        }
    }
    match last_text {
        Some(text) => Generated { text, attempts, failure: None, tokens },
        None => Generated { text: String::new(), attempts, failure: last_error, tokens },
    }
}

fn run_turn(
    client: &Arc<dyn ModelClient>,
    task: &TaskSpec,
    layout: &UiLayout,
    cfg: &RunConfig,
    turn: u8,
    revision: Option<Revision<'_>>,
) -> TurnResult {
    let start = Instant::now();
    let prompt = build_prompt(task, layout, revision);
    let g = generate_turn(client, task, turn, &prompt, cfg);
    let spec = task.criteria_for(cfg.lenient);
    let report = evaluate(&g.text, spec, layout, &cfg.eval_options());
    let feedback = (turn == 1 && report.score < cfg.early_stop_threshold).then(|| {
        let doc = generate_feedback(&report, spec, layout);
        FeedbackOut { record: feedback_record(&doc), text: doc.text }
    });
    let elapsed_ms = if cfg.frozen_clock { 0 } else { start.elapsed().as_millis() as u64 };
    TurnResult {
        turn,
        raw_output: g.text,
        attempts: g.attempts,
        failure: g.failure,
        report,
        feedback,
        tokens: g.tokens,
        elapsed_ms,
    }
}

/// Turn 1, then turn 2 with feedback unless turn 1 reached the threshold or
/// the client could not be reached.
pub fn run_session(
    client: &Arc<dyn ModelClient>,
    task: &TaskSpec,
    layout: &UiLayout,
    cfg: &RunConfig,
) -> SessionResult {
    let turn1 = run_turn(client, task, layout, cfg, 1, None);
    let turn2 = match (&turn1.feedback, &turn1.failure) {
        (Some(fb), None) => {
            let rev = Revision { previous_output: &turn1.raw_output, feedback: &fb.text };
            Some(run_turn(client, task, layout, cfg, 2, Some(rev)))
        }
        _ => None,
    };
    let final_score = turn2.as_ref().unwrap_or(&turn1).score();
    let improvement = turn2.as_ref().map_or(0.0, |t| t.score() - turn1.score());
    let failed = turn1.failure.is_some() || turn2.as_ref().is_some_and(|t| t.failure.is_some());
    SessionResult {
        schema_version: RESULTS_SCHEMA_VERSION,
        prompt_version: PROMPT_VERSION,
        model: client.model_id().to_string(),
        task_id: task.id.clone(),
        category: task.category,
        difficulty: task.difficulty,
        turn1,
        turn2,
        final_score,
        improvement,
        failed,
    }
}

/// Serializes calls to a client that is not safe for concurrent use.
struct Serialized {
    inner: Arc<dyn ModelClient>,
    lock: Mutex<()>,
}

impl ModelClient for Serialized {
    fn model_id(&self) -> &str {
        self.inner.model_id()
    }

    fn generate(&self, req: &GenerateRequest) -> Result<Generation, ClientError> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        self.inner.generate(req)
    }
}

/// Runs every task against every client, model-major. Each result is passed
/// to `sink` in (model, task) order as soon as it and all earlier ones are
/// done; the full list is returned at the end.
pub fn run_benchmark(
    clients: &[Arc<dyn ModelClient>],
    dataset: &Dataset,
    layout: &UiLayout,
    cfg: &RunConfig,
    sink: &mut dyn FnMut(&SessionResult),
) -> Vec<SessionResult> {
    let work: Vec<(usize, usize)> =
        (0..clients.len()).flat_map(|m| (0..dataset.tasks.len()).map(move |t| (m, t))).collect();
    let mut out = Vec::with_capacity(work.len());
    if cfg.jobs <= 1 || work.len() <= 1 {
        for &(m, t) in &work {
            let r = run_session(&clients[m], &dataset.tasks[t], layout, cfg);
            sink(&r);
            out.push(r);
        }
        return out;
    }

    let clients: Vec<Arc<dyn ModelClient>> = clients
        .iter()
        .map(|c| {
            if c.concurrent() {
                Arc::clone(c)
            } else {
                Arc::new(Serialized { inner: Arc::clone(c), lock: Mutex::new(()) }) as Arc<dyn ModelClient>
            }
        })
        .collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, SessionResult)>();
    thread::scope(|scope| {
        for _ in 0..cfg.jobs.min(work.len()) {
            let tx = tx.clone();
            let (next, work, clients) = (&next, &work, &clients);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(m, t)) = work.get(i) else { break };
                let r = run_session(&clients[m], &dataset.tasks[t], layout, cfg);
                if tx.send((i, r)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        for (i, r) in rx {
            pending.insert(i, r);
            while let Some(r) = pending.remove(&out.len()) {
                sink(&r);
                out.push(r);
            }
        }
    });
    out
}

/// Appends one JSON line per session, flushing after each.
pub struct ResultsWriter<W: Write> {
    inner: W,
}

impl ResultsWriter<BufWriter<File>> {
    pub fn create(path: &Path) -> io::Result<Self> {
        Ok(ResultsWriter { inner: BufWriter::new(File::create(path)?) })
    }
}

impl<W: Write> ResultsWriter<W> {
    pub fn new(inner: W) -> Self {
        ResultsWriter { inner }
    }

    pub fn write(&mut self, r: &SessionResult) -> io::Result<()> {
        serde_json::to_writer(&mut self.inner, r)?;
        self.inner.write_all(b"\n")?;
        self.inner.flush()
    }

    pub fn into_inner(self) -> W {
        self.inner
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ResultsError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {source}", path.display())]
    Json { path: PathBuf, line: usize, source: serde_json::Error },
    #[error("{}:{line}: unsupported schema_version {found}", path.display())]
    Schema { path: PathBuf, line: usize, found: u32 },
}

/// Reads a `.results.jsonl` file. Blank lines are skipped.
pub fn read_results(path: &Path) -> Result<Vec<SessionResult>, ResultsError> {
    let io_err = |source| ResultsError::Io { path: path.into(), source };
    let file = File::open(path).map_err(io_err)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let r: SessionResult = serde_json::from_str(&line).map_err(|source| ResultsError::Json {
            path: path.into(),
            line: i + 1,
            source,
        })?;
        if r.schema_version != RESULTS_SCHEMA_VERSION {
            return Err(ResultsError::Schema { path: path.into(), line: i + 1, found: r.schema_version });
        }
        out.push(r);
    }
    Ok(out)
}
