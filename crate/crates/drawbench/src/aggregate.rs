//! Summary statistics over session results.

use std::collections::BTreeMap;

use drawbench_core::dataset::{Category, Difficulty};
use drawbench_core::evaluator::ErrorKind;
use serde::{Deserialize, Serialize};

use crate::harness::SessionResult;

/// Scores at or above this count as perfect.
pub const PERFECT_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub n: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub stddev: f64,
    pub median: f64,
    pub perfect: usize,
    /// `perfect / n`, or 0 when empty.
    pub perfect_rate: f64,
}

impl ScoreSummary {
    /// Summarizes `scores`; all fields are 0 when empty.
    pub fn of(scores: &[f64]) -> ScoreSummary {
        let n = scores.len();
        if n == 0 {
            return ScoreSummary::default();
        }
        let mean = scores.iter().sum::<f64>() / n as f64;
        let var = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n as f64;
        let mut sorted = scores.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
        let perfect = scores.iter().filter(|&&s| s >= PERFECT_THRESHOLD).count();
        ScoreSummary { n, mean, stddev: var.sqrt(), median, perfect, perfect_rate: perfect as f64 / n as f64 }
    }
}

/// Statistics for a subset of sessions. Turn 2 uses the final score, so
/// early-stopped sessions carry their turn-1 score forward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub key: String,
    pub sessions: usize,
    pub turn1: ScoreSummary,
    pub turn2: ScoreSummary,
    pub mean_improvement: f64,
}

impl GroupRow {
    fn of(key: &str, rs: &[&SessionResult]) -> GroupRow {
        let t1: Vec<f64> = rs.iter().map(|r| r.turn1.score()).collect();
        let t2: Vec<f64> = rs.iter().map(|r| r.final_score).collect();
        let imp = if rs.is_empty() { 0.0 } else { rs.iter().map(|r| r.improvement).sum::<f64>() / rs.len() as f64 };
        GroupRow {
            key: key.into(),
            sessions: rs.len(),
            turn1: ScoreSummary::of(&t1),
            turn2: ScoreSummary::of(&t2),
            mean_improvement: imp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRow {
    pub group: GroupRow,
    pub failed: usize,
    /// Wall time over both turns.
    pub minutes: f64,
    pub input_tokens: u64,
    pub output_tokens: u64,
    pub tokens_estimated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucket {
    None,
    Small,
    Medium,
    Large,
}

impl Bucket {
    pub const ALL: [Bucket; 4] = [Bucket::None, Bucket::Small, Bucket::Medium, Bucket::Large];

    /// Buckets by improvement rounded to hundredths: `<= 0`, `0.01-0.05`,
    /// `0.06-0.10`, `> 0.10`.
    pub fn of(improvement: f64) -> Bucket {
        match (improvement * 100.0).round() as i64 {
            i64::MIN..=0 => Bucket::None,
            1..=5 => Bucket::Small,
            6..=10 => Bucket::Medium,
            _ => Bucket::Large,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            Bucket::None => "No improvement (0)",
            Bucket::Small => "Small (0.01-0.05)",
            Bucket::Medium => "Medium (0.06-0.10)",
            Bucket::Large => "Large (>0.10)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketRow {
    pub bucket: Bucket,
    pub count: usize,
    pub percent: f64,
}

/// Error counts for one kind, or all kinds when `kind` is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub kind: Option<ErrorKind>,
    pub turn1: usize,
    /// Counted over executed second turns only.
    pub turn2: usize,
    /// `(turn2 - turn1) / turn1 * 100`; `None` when `turn1` is 0.
    pub reduction_pct: Option<f64>,
}

impl ErrorRow {
    fn new(kind: Option<ErrorKind>, turn1: usize, turn2: usize) -> ErrorRow {
        let reduction_pct = (turn1 > 0).then(|| (turn2 as f64 - turn1 as f64) / turn1 as f64 * 100.0);
        ErrorRow { kind, turn1, turn2, reduction_pct }
    }

    pub fn label(&self) -> &'static str {
        self.kind.map_or("Total", ErrorKind::name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub sessions: usize,
    pub overall: GroupRow,
    /// One row per difficulty level, easy to very hard, including empty ones.
    pub by_difficulty: Vec<GroupRow>,
    /// Categories that occur, in canonical order.
    pub by_category: Vec<GroupRow>,
    pub improvement: Vec<BucketRow>,
    /// One row per error kind, then the total.
    pub errors: Vec<ErrorRow>,
    /// Models in order of first appearance.
    pub by_model: Vec<ModelRow>,
}

pub const ERROR_KINDS: [ErrorKind; 4] =
    [ErrorKind::SyntaxError, ErrorKind::CoordinateError, ErrorKind::LogicError, ErrorKind::EfficiencyWarning];

pub fn aggregate(results: &[SessionResult]) -> AggregateReport {
    let all: Vec<&SessionResult> = results.iter().collect();
    let by_difficulty = Difficulty::ALL
        .iter()
        .map(|&d| {
            let rs: Vec<_> = results.iter().filter(|r| r.difficulty == d).collect();
            GroupRow::of(d.name(), &rs)
        })
        .collect();
    let by_category = Category::ALL
        .iter()
        .filter_map(|&c| {
            let rs: Vec<_> = results.iter().filter(|r| r.category == c).collect();
            (!rs.is_empty()).then(|| GroupRow::of(c.name(), &rs))
        })
        .collect();

    let mut counts = BTreeMap::new();
    for r in results {
        *counts.entry(Bucket::of(r.improvement)).or_insert(0usize) += 1;
    }
    let improvement = Bucket::ALL
        .iter()
        .map(|&b| {
            let count = counts.get(&b).copied().unwrap_or(0);
            let percent = if results.is_empty() { 0.0 } else { count as f64 * 100.0 / results.len() as f64 };
            BucketRow { bucket: b, count, percent }
        })
        .collect();

    let mut errors: Vec<ErrorRow> = ERROR_KINDS
        .iter()
        .map(|&k| {
            let t1 = results.iter().map(|r| r.turn1.report.count(k)).sum();
            let t2 = results.iter().filter_map(|r| r.turn2.as_ref()).map(|t| t.report.count(k)).sum();
            ErrorRow::new(Some(k), t1, t2)
        })
        .collect();
    let (t1, t2) = errors.iter().fold((0, 0), |(a, b), e| (a + e.turn1, b + e.turn2));
    errors.push(ErrorRow::new(None, t1, t2));

    let mut models: Vec<&str> = Vec::new();
    for r in results {
        if !models.contains(&r.model.as_str()) {
            models.push(&r.model);
        }
    }
    let by_model = models
        .iter()
        .map(|&m| {
            let rs: Vec<_> = results.iter().filter(|r| r.model == m).collect();
            let turns = || rs.iter().flat_map(|r| std::iter::once(&r.turn1).chain(r.turn2.as_ref()));
            ModelRow {
                group: GroupRow::of(m, &rs),
                failed: rs.iter().filter(|r| r.failed).count(),
                minutes: turns().map(|t| t.elapsed_ms).sum::<u64>() as f64 / 60_000.0,
                input_tokens: turns().map(|t| t.tokens.input).sum(),
                output_tokens: turns().map(|t| t.tokens.output).sum(),
                tokens_estimated: turns().any(|t| t.tokens.estimated),
            }
        })
        .collect();

    AggregateReport {
        sessions: results.len(),
        overall: GroupRow::of("overall", &all),
        by_difficulty,
        by_category,
        improvement,
        errors,
        by_model,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::harness::{TokenUsage, TurnResult, RESULTS_SCHEMA_VERSION};
    use drawbench_core::evaluator::{evaluate, CriteriaSpec, DetectedError, EvalOptions};
    use drawbench_core::geometry::UiLayout;

    /// A session with the given scores and error kinds per turn.
    pub(crate) fn session(
        task: &str,
        difficulty: Difficulty,
        t1: f64,
        t2: Option<f64>,
        e1: &[ErrorKind],
        e2: &[ErrorKind],
    ) -> SessionResult {
        let turn = |n: u8, score: f64, errs: &[ErrorKind]| {
            let spec = CriteriaSpec { min_segments: Some(1), ..Default::default() };
            let mut report = evaluate("[]", &spec, &UiLayout::default(), &EvalOptions::default());
            report.score = score;
            report.errors = errs.iter().map(|&k| DetectedError::new(k, None, String::new(), String::new())).collect();
            TurnResult {
                turn: n,
                raw_output: String::new(),
                attempts: 1,
                failure: None,
                report,
                feedback: None,
                tokens: TokenUsage { input: 10, output: 5, estimated: false },
                elapsed_ms: 1500,
            }
        };
        SessionResult {
            schema_version: RESULTS_SCHEMA_VERSION,
            prompt_version: 1,
            model: "m".into(),
            task_id: task.into(),
            category: Category::BasicShapes,
            difficulty,
            turn1: turn(1, t1, e1),
            turn2: t2.map(|s| turn(2, s, e2)),
            final_score: t2.unwrap_or(t1),
            improvement: t2.map_or(0.0, |s| s - t1),
            failed: false,
        }
    }

    #[test]
    fn mean_and_perfect_rate() {
        let rs = [
            session("a", Difficulty::Easy, 1.0, None, &[], &[]),
            session("b", Difficulty::Easy, 0.8, Some(0.9), &[], &[]),
        ];
        let a = aggregate(&rs);
        assert!((a.overall.turn1.mean - 0.9).abs() < 1e-12);
        assert_eq!(a.overall.turn1.perfect_rate, 0.5);
        assert_eq!(a.overall.turn2.perfect_rate, 1.0);
        assert!((a.overall.turn1.stddev - 0.1).abs() < 1e-12);
        assert_eq!(a.by_difficulty.len(), 4);
        assert_eq!(a.by_difficulty[1].sessions, 0);
        assert_eq!(a.by_category.len(), 1);
        assert_eq!(a.by_model[0].input_tokens, 30);
        assert!((a.by_model[0].minutes - 4.5 / 60.0).abs() < 1e-12);
    }

    #[test]
    fn early_stopped_is_no_improvement() {
        let rs: Vec<_> = (0..5).map(|i| session(&i.to_string(), Difficulty::Hard, 0.95, None, &[], &[])).collect();
        let a = aggregate(&rs);
        assert_eq!((a.improvement[0].count, a.improvement[0].percent), (5, 100.0));
    }

    #[test]
    fn bucket_edges_are_closed() {
        assert_eq!(Bucket::of(0.0), Bucket::None);
        assert_eq!(Bucket::of(-0.2), Bucket::None);
        assert_eq!(Bucket::of(0.01), Bucket::Small);
        assert_eq!(Bucket::of(0.95 - 0.9), Bucket::Small);
        assert_eq!(Bucket::of(0.06), Bucket::Medium);
        assert_eq!(Bucket::of(1.0 - 0.9), Bucket::Medium);
        assert_eq!(Bucket::of(0.11), Bucket::Large);
        assert_eq!(Bucket::of(0.004), Bucket::None);
    }

    #[test]
    fn error_reduction() {
        let rs = [
            session("a", Difficulty::Easy, 0.5, Some(0.6), &[ErrorKind::LogicError], &[ErrorKind::LogicError]),
            session("b", Difficulty::Easy, 0.5, Some(0.9), &[ErrorKind::LogicError], &[]),
        ];
        let a = aggregate(&rs);
        let logic = a.errors.iter().find(|e| e.kind == Some(ErrorKind::LogicError)).unwrap();
        assert_eq!((logic.turn1, logic.turn2, logic.reduction_pct), (2, 1, Some(-50.0)));
        assert_eq!(a.errors[0].reduction_pct, None);
        assert_eq!(a.errors.last().unwrap().label(), "Total");
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(ScoreSummary::of(&[0.3, 0.1, 0.2]).median, 0.2);
        assert_eq!(ScoreSummary::of(&[0.4, 0.1, 0.2, 0.3]).median, 0.25);
        assert_eq!(ScoreSummary::of(&[]), ScoreSummary::default());
    }
}
