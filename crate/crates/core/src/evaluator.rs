//! Rule-based scoring of a drawing trace against task criteria.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::actions::{parse_actions, ActionSequence, SyntaxFailure};
use crate::geometry::{region_rect, Color, Rect, Region, RegionKind, ToolKind, UiLayout, CORNER_NAMES};
use crate::interpreter::{interpret, trace_stats, DiagnosticKind, DrawingTrace, ToolUsage, TraceStats};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Action count above which an efficiency warning fires when the task sets
/// no `max_actions`.
pub const DEFAULT_ACTION_BUDGET: usize = 60;
pub const DEFAULT_SIZE_TOLERANCE: f64 = 0.10;
/// Coverage at or above which the ratio score earns its bonus.
pub const BONUS_COVERAGE: f64 = 0.40;

const BPS: i64 = 10_000;
const BONUS_BPS: i64 = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SizeConstraint {
    pub width: i64,
    pub height: i64,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub rel_tolerance: Option<f64>,
}

impl SizeConstraint {
    pub fn tolerance(&self) -> f64 {
        self.rel_tolerance.unwrap_or(DEFAULT_SIZE_TOLERANCE)
    }
}

/// The checks a task asks for. Absent fields are not evaluated.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct CriteriaSpec {
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub required_tools: Option<BTreeSet<ToolKind>>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub required_colors: Option<BTreeSet<Color>>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub min_segments: Option<usize>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub min_coverage: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub max_actions: Option<usize>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub position_constraint: Option<RegionKind>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub size_constraint: Option<SizeConstraint>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "core::ops::Not::not"))]
    pub corner_placement: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriteriaError {
    #[error("{0}")]
    Empty(String),
    #[error("{0}")]
    BadThreshold(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown score mode '{0}' (expected ratio or weighted)")]
pub struct ParseModeError(pub String);

impl CriteriaSpec {
    pub fn is_empty(&self) -> bool {
        self.required_tools.is_none()
            && self.required_colors.is_none()
            && self.min_segments.is_none()
            && self.min_coverage.is_none()
            && self.max_actions.is_none()
            && self.position_constraint.is_none()
            && self.size_constraint.is_none()
            && !self.corner_placement
    }

    /// Rejects empty specs and non-positive or out-of-range thresholds.
    pub fn validate(&self) -> Result<(), CriteriaError> {
        let bad = |what: String| Err(CriteriaError::BadThreshold(what));
        let empty = |what: &str| Err(CriteriaError::Empty(what.into()));
        if self.is_empty() {
            return empty("no criteria present");
        }
        if self.required_tools.as_ref().is_some_and(BTreeSet::is_empty) {
            return empty("required_tools is empty");
        }
        if self.required_colors.as_ref().is_some_and(BTreeSet::is_empty) {
            return empty("required_colors is empty");
        }
        if self.min_segments == Some(0) {
            return bad("min_segments must be positive".into());
        }
        if let Some(c) = self.min_coverage {
            if !(c > 0.0 && c <= 1.0) {
                return bad(format!("min_coverage {c} is outside (0, 1]"));
            }
        }
        if self.max_actions == Some(0) {
            return bad("max_actions must be positive".into());
        }
        if let Some(s) = &self.size_constraint {
            if s.width <= 0 || s.height <= 0 {
                return bad(format!("size_constraint {}x{} must be positive", s.width, s.height));
            }
            let t = s.tolerance();
            if !(t > 0.0 && t < 1.0) {
                return bad(format!("rel_tolerance {t} is outside (0, 1)"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CriterionId {
    RequiredTools,
    RequiredColors,
    MinSegments,
    MinCoverage,
    MaxActions,
    PositionConstraint,
    SizeConstraint,
    CornerPlacement,
    SyntaxValidity,
    CoordinateBounds,
}

impl CriterionId {
    pub const ALL: [CriterionId; 10] = [
        CriterionId::RequiredTools,
        CriterionId::RequiredColors,
        CriterionId::MinSegments,
        CriterionId::MinCoverage,
        CriterionId::MaxActions,
        CriterionId::PositionConstraint,
        CriterionId::SizeConstraint,
        CriterionId::CornerPlacement,
        CriterionId::SyntaxValidity,
        CriterionId::CoordinateBounds,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            CriterionId::RequiredTools => "required_tools",
            CriterionId::RequiredColors => "required_colors",
            CriterionId::MinSegments => "min_segments",
            CriterionId::MinCoverage => "min_coverage",
            CriterionId::MaxActions => "max_actions",
            CriterionId::PositionConstraint => "position_constraint",
            CriterionId::SizeConstraint => "size_constraint",
            CriterionId::CornerPlacement => "corner_placement",
            CriterionId::SyntaxValidity => "syntax_validity",
            CriterionId::CoordinateBounds => "coordinate_bounds",
        }
    }

    /// Weight in basis points (1/10000).
    pub const fn default_weight(self) -> u32 {
        match self {
            CriterionId::RequiredTools | CriterionId::RequiredColors => 2000,
            CriterionId::MinSegments | CriterionId::PositionConstraint | CriterionId::CornerPlacement => 1500,
            CriterionId::MinCoverage | CriterionId::SizeConstraint => 1000,
            CriterionId::MaxActions | CriterionId::SyntaxValidity | CriterionId::CoordinateBounds => 500,
        }
    }

    /// Criteria that the ratio score replaces with error penalties.
    pub const fn penalized_via_errors(self) -> bool {
        matches!(self, CriterionId::SyntaxValidity | CriterionId::CoordinateBounds)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-criterion weights in basis points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weights([u32; 10]);

impl Default for Weights {
    fn default() -> Self {
        Weights(CriterionId::ALL.map(CriterionId::default_weight))
    }
}

impl Weights {
    pub fn get(&self, id: CriterionId) -> u32 {
        self.0[id.index()]
    }

    /// Panics on a zero weight.
    pub fn with(mut self, id: CriterionId, bps: u32) -> Self {
        assert!(bps > 0, "criterion weights must be positive");
        self.0[id.index()] = bps;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CriterionResult {
    pub id: CriterionId,
    pub satisfied: bool,
    /// Basis points.
    pub weight: u32,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum ErrorKind {
    SyntaxError,
    CoordinateError,
    LogicError,
    EfficiencyWarning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Severity {
    Critical,
    High,
    Medium,
    Low,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 4] =
        [ErrorKind::SyntaxError, ErrorKind::CoordinateError, ErrorKind::LogicError, ErrorKind::EfficiencyWarning];

    pub const fn name(self) -> &'static str {
        match self {
            ErrorKind::SyntaxError => "SYNTAX_ERROR",
            ErrorKind::CoordinateError => "COORDINATE_ERROR",
            ErrorKind::LogicError => "LOGIC_ERROR",
            ErrorKind::EfficiencyWarning => "EFFICIENCY_WARNING",
        }
    }

    pub const fn severity(self) -> Severity {
        match self {
            ErrorKind::SyntaxError => Severity::Critical,
            ErrorKind::CoordinateError => Severity::High,
            ErrorKind::LogicError => Severity::Medium,
            ErrorKind::EfficiencyWarning => Severity::Low,
        }
    }

    /// Score deduction in basis points.
    pub const fn penalty_bps(self) -> u32 {
        match self {
            ErrorKind::SyntaxError => 3000,
            ErrorKind::CoordinateError => 2000,
            ErrorKind::LogicError => 1000,
            ErrorKind::EfficiencyWarning => 500,
        }
    }

    /// Signed score adjustment, e.g. -0.3 for a syntax error.
    pub fn penalty(self) -> f64 {
        -(self.penalty_bps() as f64) / BPS as f64
    }

    pub const fn is_warning(self) -> bool {
        matches!(self, ErrorKind::EfficiencyWarning)
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DetectedError {
    pub kind: ErrorKind,
    pub severity: Severity,
    pub penalty: f64,
    pub message: String,
    /// Second line of advice shown under the message.
    pub detail: String,
    pub action_index: Option<usize>,
}

impl DetectedError {
    pub fn new(kind: ErrorKind, action_index: Option<usize>, message: String, detail: String) -> Self {
        DetectedError { kind, severity: kind.severity(), penalty: kind.penalty(), message, detail, action_index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ScoreMode {
    /// Fraction of criteria met, plus penalties and bonus.
    #[default]
    Ratio,
    /// Weighted fraction of criteria met, no penalties.
    Weighted,
}

impl core::str::FromStr for ScoreMode {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ratio" => Ok(ScoreMode::Ratio),
            "weighted" => Ok(ScoreMode::Weighted),
            other => Err(ParseModeError(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Grade {
    #[cfg_attr(feature = "serde", serde(rename = "Excellent"))]
    Excellent,
    #[cfg_attr(feature = "serde", serde(rename = "Great"))]
    Great,
    #[cfg_attr(feature = "serde", serde(rename = "Good job"))]
    GoodJob,
    #[cfg_attr(feature = "serde", serde(rename = "Good attempt"))]
    GoodAttempt,
    #[cfg_attr(feature = "serde", serde(rename = "Needs improvement"))]
    NeedsImprovement,
}

impl Grade {
    pub fn from_score(score: f64) -> Grade {
        if score >= 1.0 {
            Grade::Excellent
        } else if score >= 0.9 {
            Grade::Great
        } else if score >= 0.8 {
            Grade::GoodJob
        } else if score >= 0.6 {
            Grade::GoodAttempt
        } else {
            Grade::NeedsImprovement
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            Grade::Excellent => "Excellent",
            Grade::Great => "Great",
            Grade::GoodJob => "Good job",
            Grade::GoodAttempt => "Good attempt",
            Grade::NeedsImprovement => "Needs improvement",
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An unsatisfied criterion and the value it expected.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MissingCriterion {
    pub id: CriterionId,
    pub unmet: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EvaluationReport {
    pub criteria: Vec<CriterionResult>,
    pub errors: Vec<DetectedError>,
    pub stats: TraceStats,
    pub score_ratio: f64,
    pub score_weighted: f64,
    pub mode: ScoreMode,
    pub score: f64,
    pub grade: Grade,
    pub bonus: f64,
    pub missing_criteria: Vec<MissingCriterion>,
    /// Corner regions holding no drawing-element centroid.
    pub empty_corners: Vec<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub syntax_failure: Option<SyntaxFailure>,
}

impl EvaluationReport {
    pub fn is_perfect(&self) -> bool {
        self.score >= 1.0
    }

    pub fn count(&self, kind: ErrorKind) -> usize {
        self.errors.iter().filter(|e| e.kind == kind).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    pub mode: ScoreMode,
    pub tool_usage: ToolUsage,
    pub weights: Weights,
}

/// Formats items the way feedback lists them: `['a', 'b']`.
pub fn quoted_list<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut out = String::from("[");
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("'{item}'"));
    }
    out.push(']');
    out
}

fn centroid_in(rect: &Rect, bbox: &Rect) -> bool {
    rect.contains_doubled(bbox.centroid_doubled())
}

/// Corner names (top-left, top-right, bottom-left, bottom-right) that hold no
/// drawing-element centroid.
pub fn empty_corners(trace: &DrawingTrace, layout: &UiLayout) -> Vec<&'static str> {
    let Region::Corners(corners) = region_rect(RegionKind::Corners, &layout.canvas) else {
        unreachable!("corners always yields four rects")
    };
    let boxes: Vec<Rect> = trace.elements.iter().filter_map(|e| e.content_bbox()).collect();
    corners.iter().zip(CORNER_NAMES).filter(|(c, _)| !boxes.iter().any(|b| centroid_in(c, b))).map(|(_, n)| n).collect()
}

fn size_ok(actual: i64, want: i64, tol: f64) -> bool {
    ((actual - want).abs() as f64) <= tol * want as f64
}

/// One result per criterion present in `spec`, followed by the
/// syntax-validity and coordinate-bounds results derived from `errors`.
pub fn check_criteria(
    stats: &TraceStats,
    trace: &DrawingTrace,
    spec: &CriteriaSpec,
    layout: &UiLayout,
    errors: &[DetectedError],
    weights: &Weights,
) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    let mut push = |id: CriterionId, satisfied: bool, detail: String| {
        out.push(CriterionResult { id, satisfied, weight: weights.get(id), detail });
    };
    if let Some(req) = &spec.required_tools {
        let missing: Vec<_> = req.difference(&stats.tools_used).collect();
        push(
            CriterionId::RequiredTools,
            missing.is_empty(),
            format!("used {}, required {}", quoted_list(&stats.tools_used), quoted_list(req)),
        );
    }
    if let Some(req) = &spec.required_colors {
        let missing: Vec<_> = req.difference(&stats.colors_used).collect();
        push(
            CriterionId::RequiredColors,
            missing.is_empty(),
            format!("used {}, required {}", quoted_list(&stats.colors_used), quoted_list(req)),
        );
    }
    if let Some(n) = spec.min_segments {
        push(
            CriterionId::MinSegments,
            stats.segments >= n,
            format!("{} segment(s), need at least {n}", stats.segments),
        );
    }
    if let Some(c) = spec.min_coverage {
        push(
            CriterionId::MinCoverage,
            stats.coverage >= c,
            format!("coverage {:.4}, need at least {c:.2}", stats.coverage),
        );
    }
    if let Some(n) = spec.max_actions {
        push(CriterionId::MaxActions, stats.action_count <= n, format!("{} action(s), limit {n}", stats.action_count));
    }
    if let Some(kind) = spec.position_constraint {
        let (ok, detail) = match region_rect(kind, &layout.canvas) {
            Region::Single(r) => match &stats.content_bbox {
                Some(b) => {
                    let c = b.centroid_doubled();
                    (
                        centroid_in(&r, b),
                        format!("content centroid ({}, {}) vs {kind} region {r}", half(c.x), half(c.y)),
                    )
                }
                None => (false, String::from("nothing drawn")),
            },
            Region::Corners(_) => {
                let empty = empty_corners(trace, layout);
                (empty.is_empty(), format!("empty corners {}", quoted_list(&empty)))
            }
        };
        push(CriterionId::PositionConstraint, ok, detail);
    }
    if let Some(s) = &spec.size_constraint {
        let (ok, detail) = match &stats.content_bbox {
            Some(b) => (
                size_ok(b.width(), s.width, s.tolerance()) && size_ok(b.height(), s.height, s.tolerance()),
                format!(
                    "content {}x{}, want {}x{} within {:.0}%",
                    b.width(),
                    b.height(),
                    s.width,
                    s.height,
                    s.tolerance() * 100.0
                ),
            ),
            None => (false, String::from("nothing drawn")),
        };
        push(CriterionId::SizeConstraint, ok, detail);
    }
    if spec.corner_placement {
        let empty = empty_corners(trace, layout);
        push(CriterionId::CornerPlacement, empty.is_empty(), format!("empty corners {}", quoted_list(&empty)));
    }
    let syntax = errors.iter().filter(|e| e.kind == ErrorKind::SyntaxError).count();
    push(CriterionId::SyntaxValidity, syntax == 0, format!("{syntax} syntax error(s)"));
    let coords = errors.iter().filter(|e| e.kind == ErrorKind::CoordinateError).count();
    push(CriterionId::CoordinateBounds, coords == 0, format!("{coords} coordinate error(s)"));
    out
}

fn half(doubled: i64) -> String {
    if doubled % 2 == 0 {
        format!("{}", doubled / 2)
    } else {
        format!("{}{}.5", if doubled < 0 { "-" } else { "" }, doubled.abs() / 2)
    }
}

/// Errors for a document that failed to parse: exactly one syntax error.
pub fn syntax_errors(failure: &SyntaxFailure) -> Vec<DetectedError> {
    let at = match failure.action_index {
        Some(i) => format!("action {i}"),
        None => format!("byte {}", failure.position),
    };
    alloc::vec![DetectedError::new(
        ErrorKind::SyntaxError,
        failure.action_index,
        format!("Invalid action sequence: {} at {at}.", failure.reason),
        String::from("Output a JSON array of objects such as {\"action\": \"moveTo\", \"x\": 35, \"y\": 45}."),
    )]
}

/// Errors found while executing a parsed sequence, ordered by action index
/// with the efficiency warning last.
pub fn detect_errors(trace: &DrawingTrace, spec: &CriteriaSpec, layout: &UiLayout) -> Vec<DetectedError> {
    let w = &layout.window;
    let c = layout.canvas.rect();
    let mut out: Vec<DetectedError> = trace
        .diagnostics
        .iter()
        .filter_map(|d| {
            let i = d.action_index;
            let p = d.point;
            let (kind, message, detail) = match d.kind {
                DiagnosticKind::OutOfWindowMove => (
                    ErrorKind::CoordinateError,
                    format!("Action {i} moves outside the screen to {p}."),
                    format!("Keep x within {}-{} and y within {}-{}.", w.min.x, w.max.x, w.min.y, w.max.y),
                ),
                DiagnosticKind::OffCanvasPress => (
                    ErrorKind::CoordinateError,
                    format!("Action {i} presses the mouse outside the canvas at {p}."),
                    format!("Start strokes inside the canvas {c}."),
                ),
                DiagnosticKind::UnmatchedDown => (
                    ErrorKind::LogicError,
                    format!("mouseDown at action {i} has no matching mouseUp."),
                    String::from("Pair every mouseDown with exactly one mouseUp."),
                ),
                DiagnosticKind::UnmatchedUp => (
                    ErrorKind::LogicError,
                    format!("mouseUp at action {i} has no matching mouseDown."),
                    String::from("Pair every mouseDown with exactly one mouseUp."),
                ),
                DiagnosticKind::DegenerateShape => return None,
            };
            Some(DetectedError::new(kind, Some(i), message, detail))
        })
        .collect();
    out.sort_by_key(|e| e.action_index);
    let budget = spec.max_actions.unwrap_or(DEFAULT_ACTION_BUDGET);
    if trace.action_count > budget {
        out.push(DetectedError::new(
            ErrorKind::EfficiencyWarning,
            None,
            format!("Action sequence is long ({} actions; limit {budget}).", trace.action_count),
            String::from("Use shape tools and fewer intermediate moves."),
        ));
    }
    out
}

fn clamp_ratio(num: i64, den: i64) -> f64 {
    if num <= 0 {
        0.0
    } else if num >= den {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// Bonus in basis points: awarded for coverage of at least 0.40 without an
/// efficiency warning.
pub fn bonus_bps(stats: &TraceStats, errors: &[DetectedError]) -> i64 {
    if stats.coverage >= BONUS_COVERAGE && !errors.iter().any(|e| e.kind.is_warning()) {
        BONUS_BPS
    } else {
        0
    }
}

/// Criteria met over criteria scored, plus per-error penalties and the bonus,
/// clamped to [0, 1]. Syntax-validity and coordinate-bounds are left out of
/// the fraction because their errors are already penalized.
pub fn score_ratio(criteria: &[CriterionResult], errors: &[DetectedError], stats: &TraceStats) -> f64 {
    let scored: Vec<_> = criteria.iter().filter(|c| !c.id.penalized_via_errors()).collect();
    let (met, total) = if scored.is_empty() {
        (1, 1)
    } else {
        (scored.iter().filter(|c| c.satisfied).count() as i64, scored.len() as i64)
    };
    let penalty: i64 = errors.iter().map(|e| e.kind.penalty_bps() as i64).sum();
    let adjust = bonus_bps(stats, errors) - penalty;
    // exact rational arithmetic so band edges such as 0.9 compare cleanly
    clamp_ratio(met * BPS + adjust * total, total * BPS)
}

/// Weighted fraction of satisfied criteria over every present criterion.
pub fn score_weighted(criteria: &[CriterionResult]) -> f64 {
    let total: i64 = criteria.iter().map(|c| c.weight as i64).sum();
    if total == 0 {
        return 1.0;
    }
    let met: i64 = criteria.iter().filter(|c| c.satisfied).map(|c| c.weight as i64).sum();
    clamp_ratio(met, total)
}

fn missing_entry(
    r: &CriterionResult,
    spec: &CriteriaSpec,
    stats: &TraceStats,
    trace: &DrawingTrace,
    layout: &UiLayout,
) -> String {
    match r.id {
        CriterionId::RequiredTools => {
            let req = spec.required_tools.clone().unwrap_or_default();
            quoted_list(req.difference(&stats.tools_used))
        }
        CriterionId::RequiredColors => {
            let req = spec.required_colors.clone().unwrap_or_default();
            quoted_list(req.difference(&stats.colors_used))
        }
        CriterionId::MinSegments => format!("{} (found {})", spec.min_segments.unwrap_or(0), stats.segments),
        CriterionId::MinCoverage => format!("{:.2} (found {:.2})", spec.min_coverage.unwrap_or(0.0), stats.coverage),
        CriterionId::MaxActions => format!("{} (found {})", spec.max_actions.unwrap_or(0), stats.action_count),
        CriterionId::PositionConstraint => match spec.position_constraint {
            Some(RegionKind::Corners) => format!("corners (empty: {})", quoted_list(empty_corners(trace, layout))),
            Some(kind) => String::from(kind.name()),
            None => String::new(),
        },
        CriterionId::SizeConstraint => match (&spec.size_constraint, &stats.content_bbox) {
            (Some(s), Some(b)) => format!("{}x{} (found {}x{})", s.width, s.height, b.width(), b.height()),
            (Some(s), None) => format!("{}x{} (nothing drawn)", s.width, s.height),
            _ => String::new(),
        },
        CriterionId::CornerPlacement => quoted_list(empty_corners(trace, layout)),
        CriterionId::SyntaxValidity | CriterionId::CoordinateBounds => r.detail.clone(),
    }
}

/// Scores an already-interpreted trace.
pub fn evaluate_trace(
    trace: &DrawingTrace,
    spec: &CriteriaSpec,
    layout: &UiLayout,
    opts: &EvalOptions,
    syntax_failure: Option<SyntaxFailure>,
) -> EvaluationReport {
    let stats = trace_stats(trace, &layout.canvas, opts.tool_usage);
    let errors = match &syntax_failure {
        Some(f) => syntax_errors(f),
        None => detect_errors(trace, spec, layout),
    };
    let criteria = check_criteria(&stats, trace, spec, layout, &errors, &opts.weights);
    let score_ratio = score_ratio(&criteria, &errors, &stats);
    let score_weighted = score_weighted(&criteria);
    let score = match opts.mode {
        ScoreMode::Ratio => score_ratio,
        ScoreMode::Weighted => score_weighted,
    };
    let missing_criteria = criteria
        .iter()
        .filter(|c| !c.satisfied)
        .map(|c| MissingCriterion { id: c.id, unmet: missing_entry(c, spec, &stats, trace, layout) })
        .collect();
    EvaluationReport {
        bonus: bonus_bps(&stats, &errors) as f64 / BPS as f64,
        criteria,
        errors,
        stats,
        score_ratio,
        score_weighted,
        mode: opts.mode,
        score,
        grade: Grade::from_score(score),
        missing_criteria,
        empty_corners: empty_corners(trace, layout).into_iter().map(String::from).collect(),
        syntax_failure,
    }
}

/// Scores a parsed sequence.
pub fn evaluate_sequence(
    seq: &ActionSequence,
    spec: &CriteriaSpec,
    layout: &UiLayout,
    opts: &EvalOptions,
) -> EvaluationReport {
    evaluate_trace(&interpret(seq, layout), spec, layout, opts, None)
}

/// Parses, interprets and scores raw model output. Total over any input.
pub fn evaluate(raw_output: &str, spec: &CriteriaSpec, layout: &UiLayout, opts: &EvalOptions) -> EvaluationReport {
    match parse_actions(raw_output) {
        Ok(seq) => evaluate_sequence(&seq, spec, layout, opts),
        Err(f) => evaluate_trace(&DrawingTrace::empty(), spec, layout, opts, Some(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{parse_actions, serialize_actions, Action};
    use crate::samples;
    use alloc::vec;
    use proptest::prelude::*;

    fn tools(t: &[ToolKind]) -> Option<BTreeSet<ToolKind>> {
        Some(t.iter().copied().collect())
    }

    fn colors(c: &[Color]) -> Option<BTreeSet<Color>> {
        Some(c.iter().copied().collect())
    }

    fn eval(text: &str, spec: &CriteriaSpec) -> EvaluationReport {
        evaluate(text, spec, &UiLayout::default(), &EvalOptions::default())
    }

    fn result(id: CriterionId, satisfied: bool) -> CriterionResult {
        CriterionResult { id, satisfied, weight: id.default_weight(), detail: String::new() }
    }

    fn no_stats() -> TraceStats {
        trace_stats(&DrawingTrace::empty(), &UiLayout::default().canvas, ToolUsage::Selected)
    }

    #[test]
    fn corner_squares_meet_corner_spec() {
        let spec = CriteriaSpec {
            required_tools: tools(&[ToolKind::Rectangle]),
            min_segments: Some(4),
            corner_placement: true,
            position_constraint: Some(RegionKind::Corners),
            ..Default::default()
        };
        let r = eval(samples::CORNER_SQUARES, &spec);
        assert!(r.criteria.iter().all(|c| c.satisfied), "{:?}", r.criteria);
        assert!(r.errors.is_empty());
        assert_eq!(r.score, 1.0);
        assert_eq!(r.score_weighted, 1.0);
    }

    #[test]
    fn red_circle_is_centered() {
        let spec = CriteriaSpec { position_constraint: Some(RegionKind::Center), ..Default::default() };
        let r = eval(samples::RED_CIRCLE, &spec);
        assert!(r.criteria[0].satisfied, "{}", r.criteria[0].detail);
        let spec = CriteriaSpec { position_constraint: Some(RegionKind::TopLeft), ..Default::default() };
        assert!(!eval(samples::RED_CIRCLE, &spec).criteria[0].satisfied);
    }

    #[test]
    fn empty_trace_misses_segments() {
        let spec = CriteriaSpec { min_segments: Some(1), ..Default::default() };
        let r = eval("[]", &spec);
        assert!(!r.criteria[0].satisfied);
        assert_eq!(
            r.missing_criteria,
            vec![MissingCriterion { id: CriterionId::MinSegments, unmet: "1 (found 0)".into() }]
        );
        assert_eq!(r.score, 0.0);
    }

    #[test]
    fn size_constraint_tolerance() {
        let spec = |w, h| CriteriaSpec {
            size_constraint: Some(SizeConstraint { width: w, height: h, rel_tolerance: None }),
            ..Default::default()
        };
        // the blue rectangle spans 300x200
        assert!(eval(samples::BLUE_RECTANGLE, &spec(300, 200)).criteria[0].satisfied);
        assert!(eval(samples::BLUE_RECTANGLE, &spec(320, 190)).criteria[0].satisfied);
        assert!(!eval(samples::BLUE_RECTANGLE, &spec(340, 200)).criteria[0].satisfied);
    }

    #[test]
    fn mutation_dropped_mouse_up() {
        let mut seq = parse_actions(samples::BLUE_RECTANGLE).unwrap();
        seq.actions.pop();
        let r = evaluate_sequence(&seq, &CriteriaSpec::default(), &UiLayout::default(), &EvalOptions::default());
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].kind, ErrorKind::LogicError);
        assert_eq!(r.errors[0].penalty, -0.1);
        assert_eq!(r.errors[0].severity, Severity::Medium);
    }

    #[test]
    fn mutation_out_of_window() {
        let mut seq = parse_actions(samples::BLUE_RECTANGLE).unwrap();
        seq.actions.push(Action::move_to(2000, 50));
        let r = evaluate_sequence(&seq, &CriteriaSpec::default(), &UiLayout::default(), &EvalOptions::default());
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].kind, ErrorKind::CoordinateError);
        assert_eq!(r.errors[0].message, "Action 8 moves outside the screen to (2000, 50).");
        assert!(!r.criteria.iter().find(|c| c.id == CriterionId::CoordinateBounds).unwrap().satisfied);
    }

    #[test]
    fn malformed_text_is_one_syntax_error() {
        let spec = CriteriaSpec { min_segments: Some(1), ..Default::default() };
        let r = eval("[{", &spec);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].kind, ErrorKind::SyntaxError);
        assert_eq!(r.errors[0].penalty, -0.3);
        assert_eq!(r.score_ratio, 0.0);
        assert!(r.syntax_failure.is_some());
    }

    #[test]
    fn long_sequence_warns() {
        let mut seq = parse_actions(samples::BLUE_RECTANGLE).unwrap();
        seq.actions.extend((0..100).map(|_| Action::move_to(700, 500)));
        let r = evaluate_sequence(&seq, &CriteriaSpec::default(), &UiLayout::default(), &EvalOptions::default());
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].kind, ErrorKind::EfficiencyWarning);
        assert_eq!(r.errors[0].penalty, -0.05);
        let tight = CriteriaSpec { max_actions: Some(5), ..Default::default() };
        let r = eval(samples::BLUE_RECTANGLE, &tight);
        assert_eq!(r.count(ErrorKind::EfficiencyWarning), 1);
        assert!(!r.criteria[0].satisfied);
    }

    #[test]
    fn ratio_examples() {
        let stats = no_stats();
        let c = [
            result(CriterionId::RequiredTools, true),
            result(CriterionId::RequiredColors, true),
            result(CriterionId::MinSegments, true),
            result(CriterionId::MinCoverage, false),
            result(CriterionId::SyntaxValidity, true),
            result(CriterionId::CoordinateBounds, true),
        ];
        let logic = DetectedError::new(ErrorKind::LogicError, Some(3), String::new(), String::new());
        assert_eq!(score_ratio(&c, &[logic], &stats), 0.65);
        let syntax = DetectedError::new(ErrorKind::SyntaxError, None, String::new(), String::new());
        let none = [result(CriterionId::MinSegments, false)];
        assert_eq!(score_ratio(&none, &[syntax], &stats), 0.0);
        let mut big = stats.clone();
        big.coverage = 0.42;
        let all = [result(CriterionId::MinSegments, true)];
        assert_eq!(score_ratio(&all, &[], &big), 1.0);
        assert_eq!(bonus_bps(&big, &[]), 500);
    }

    #[test]
    fn weighted_examples() {
        let present = [
            CriterionId::RequiredTools,
            CriterionId::RequiredColors,
            CriterionId::MinSegments,
            CriterionId::MinCoverage,
            CriterionId::PositionConstraint,
            CriterionId::SizeConstraint,
            CriterionId::SyntaxValidity,
            CriterionId::CoordinateBounds,
        ];
        let all: Vec<_> = present.iter().map(|&id| result(id, true)).collect();
        assert_eq!(score_weighted(&all), 1.0);
        let mut one_off = all.clone();
        one_off[0].satisfied = false;
        assert_eq!(score_weighted(&one_off), 0.8);
        let pair = [result(CriterionId::RequiredTools, false), result(CriterionId::RequiredColors, true)];
        assert_eq!(score_weighted(&pair), 0.5);
    }

    #[test]
    fn grade_bands() {
        assert_eq!(Grade::from_score(1.0), Grade::Excellent);
        assert_eq!(Grade::from_score(0.9), Grade::Great);
        assert_eq!(Grade::from_score(0.8999), Grade::GoodJob);
        assert_eq!(Grade::from_score(0.80), Grade::GoodJob);
        assert_eq!(Grade::from_score(0.75), Grade::GoodAttempt);
        assert_eq!(Grade::from_score(0.6), Grade::GoodAttempt);
        assert_eq!(Grade::from_score(0.59), Grade::NeedsImprovement);
        assert_eq!(Grade::GoodJob.label(), "Good job");
    }

    #[test]
    fn ratio_hits_band_edges_exactly() {
        // 19 of 20 met minus one efficiency warning is exactly 0.9
        let mut c: Vec<_> = (0..20).map(|_| result(CriterionId::MinSegments, true)).collect();
        c[0].satisfied = false;
        let warn = DetectedError::new(ErrorKind::EfficiencyWarning, None, String::new(), String::new());
        let s = score_ratio(&c, &[warn], &no_stats());
        assert_eq!(s, 0.9);
        assert_eq!(Grade::from_score(s), Grade::Great);
    }

    #[test]
    fn spec_validation() {
        assert!(CriteriaSpec::default().validate().is_err());
        assert!(CriteriaSpec { min_segments: Some(0), ..Default::default() }.validate().is_err());
        assert!(CriteriaSpec { min_coverage: Some(1.5), ..Default::default() }.validate().is_err());
        assert!(CriteriaSpec { required_tools: tools(&[]), ..Default::default() }.validate().is_err());
        let bad_tol = SizeConstraint { width: 10, height: 10, rel_tolerance: Some(1.0) };
        assert!(CriteriaSpec { size_constraint: Some(bad_tol), ..Default::default() }.validate().is_err());
        assert!(CriteriaSpec { corner_placement: true, ..Default::default() }.validate().is_ok());
    }

    #[test]
    fn golden_samples_score_perfect_in_weighted_mode() {
        let opts = EvalOptions { mode: ScoreMode::Weighted, ..Default::default() };
        let cases = [
            (
                samples::RED_CIRCLE,
                CriteriaSpec {
                    required_tools: tools(&[ToolKind::Pen]),
                    required_colors: colors(&[Color::RED]),
                    min_segments: Some(1),
                    position_constraint: Some(RegionKind::Center),
                    ..Default::default()
                },
            ),
            (
                samples::BLUE_RECTANGLE,
                CriteriaSpec {
                    required_tools: tools(&[ToolKind::Rectangle]),
                    required_colors: colors(&[Color::BLUE]),
                    min_segments: Some(1),
                    ..Default::default()
                },
            ),
            (
                samples::CIRCLE_ABOVE_SQUARE,
                CriteriaSpec {
                    required_tools: tools(&[ToolKind::Circle, ToolKind::Rectangle]),
                    required_colors: colors(&[Color::RED, Color::BLUE]),
                    min_segments: Some(2),
                    ..Default::default()
                },
            ),
            (
                samples::CIRCLE_GRID,
                CriteriaSpec {
                    required_tools: tools(&[ToolKind::Circle]),
                    min_segments: Some(6),
                    min_coverage: Some(0.2),
                    ..Default::default()
                },
            ),
            (
                samples::FILLED_HOUSE,
                CriteriaSpec {
                    required_tools: tools(&[ToolKind::Pen, ToolKind::Fill]),
                    required_colors: colors(&[Color::RED]),
                    min_segments: Some(3),
                    ..Default::default()
                },
            ),
        ];
        for (text, spec) in cases {
            let r = evaluate(text, &spec, &UiLayout::default(), &opts);
            assert!(r.errors.is_empty(), "{:?}", r.errors);
            assert_eq!(r.score, 1.0, "{:?}", r.missing_criteria);
            assert_eq!(r.grade, Grade::Excellent);
        }
    }

    #[test]
    fn required_tool_mismatch_lists_missing() {
        let spec = CriteriaSpec { required_tools: tools(&[ToolKind::Circle]), ..Default::default() };
        let r = eval(samples::BLUE_RECTANGLE, &spec);
        assert_eq!(r.missing_criteria[0].unmet, "['circle']");
        assert!(!r.is_perfect());
    }

    #[test]
    fn drawn_tool_usage_option() {
        let spec = CriteriaSpec { required_tools: tools(&[ToolKind::Rectangle]), ..Default::default() };
        let opts = EvalOptions { tool_usage: ToolUsage::Drawn, ..Default::default() };
        let select_only = "[{\"action\": \"moveTo\", \"x\": 35, \"y\": 365}, {\"action\": \"click\"}]";
        assert!(eval(select_only, &spec).criteria[0].satisfied);
        let r = evaluate(select_only, &spec, &UiLayout::default(), &opts);
        assert!(!r.criteria[0].satisfied);
    }

    fn arb_criteria() -> impl Strategy<Value = Vec<CriterionResult>> {
        proptest::collection::vec((0usize..10, any::<bool>(), 1u32..5000), 1..10).prop_map(|v| {
            v.into_iter()
                .map(|(i, s, w)| CriterionResult {
                    id: CriterionId::ALL[i],
                    satisfied: s,
                    weight: w,
                    detail: String::new(),
                })
                .collect()
        })
    }

    fn arb_errors() -> impl Strategy<Value = Vec<DetectedError>> {
        proptest::collection::vec(0usize..4, 0..6).prop_map(|v| {
            v.into_iter().map(|k| DetectedError::new(ErrorKind::ALL[k], None, String::new(), String::new())).collect()
        })
    }

    proptest! {
        #[test]
        fn scores_are_bounded_and_monotone(c in arb_criteria(), e in arb_errors(), cov in 0.0f64..1.0, flip in 0usize..10) {
            let mut stats = no_stats();
            stats.coverage = cov;
            let r = score_ratio(&c, &e, &stats);
            let w = score_weighted(&c);
            prop_assert!((0.0..=1.0).contains(&r));
            prop_assert!((0.0..=1.0).contains(&w));
            let i = flip % c.len();
            if !c[i].satisfied {
                let mut better = c.clone();
                better[i].satisfied = true;
                prop_assert!(score_ratio(&better, &e, &stats) >= r);
                prop_assert!(score_weighted(&better) >= w);
            }
            prop_assert_eq!(w == 1.0, c.iter().all(|x| x.satisfied));
            prop_assert_eq!(w == 0.0, c.iter().all(|x| !x.satisfied));
        }

        #[test]
        fn evaluate_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
            let text = String::from_utf8_lossy(&bytes);
            let spec = CriteriaSpec { min_segments: Some(1), ..Default::default() };
            let r = eval(&text, &spec);
            prop_assert!((0.0..=1.0).contains(&r.score));
            prop_assert_eq!(r.grade, Grade::from_score(r.score));
        }

        #[test]
        fn errors_are_deterministic_and_ordered(xs in proptest::collection::vec((0u8..4, -50i64..1200, -50i64..900), 0..40)) {
            let actions: Vec<Action> = xs.into_iter().map(|(k, x, y)| match k {
                0 => Action::move_to(x, y),
                1 => Action::Click,
                2 => Action::MouseDown,
                _ => Action::MouseUp,
            }).collect();
            let text = serialize_actions(&ActionSequence::from_actions(actions));
            let spec = CriteriaSpec { min_segments: Some(1), ..Default::default() };
            let a = eval(&text, &spec);
            let b = eval(&text, &spec);
            prop_assert_eq!(&a, &b);
            let idx: Vec<usize> = a.errors.iter().filter_map(|e| e.action_index).collect();
            prop_assert!(idx.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
