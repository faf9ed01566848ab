//! Corrective feedback text built from an evaluation report.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::evaluator::{quoted_list, CriteriaSpec, CriterionId, ErrorKind, EvaluationReport, BONUS_COVERAGE};
use crate::geometry::{region_rect, Region, RegionKind, UiLayout, CORNER_NAMES};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// A numbered entry: one message line and an optional indented advice line.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FeedbackItem {
    pub message: String,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub detail: Option<String>,
}

impl FeedbackItem {
    fn new(message: String, detail: String) -> Self {
        FeedbackItem { message, detail: Some(detail) }
    }

    fn plain(message: String) -> Self {
        FeedbackItem { message, detail: None }
    }
}

/// Machine-readable form of a feedback document. [`render_record`] turns it
/// back into the exact text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FeedbackRecord {
    pub header: String,
    pub errors: Vec<FeedbackItem>,
    pub warnings: Vec<FeedbackItem>,
    pub suggestions: Vec<String>,
    /// `id: unmet value` entries.
    pub missing_criteria: Vec<String>,
    pub current_stats: Vec<String>,
    /// Checklist shown for a perfect result.
    pub met_criteria: Vec<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub closing: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackDocument {
    pub record: FeedbackRecord,
    pub text: String,
}

impl FeedbackDocument {
    pub fn header(&self) -> &str {
        &self.record.header
    }
}

pub fn feedback_record(doc: &FeedbackDocument) -> FeedbackRecord {
    doc.record.clone()
}

fn numbered(title: &str, items: &[FeedbackItem]) -> String {
    let mut out = format!("{title}:");
    for (i, item) in items.iter().enumerate() {
        out.push_str(&format!("\n  {}. {}", i + 1, item.message));
        if let Some(d) = &item.detail {
            out.push_str(&format!("\n     {d}"));
        }
    }
    out
}

fn bulleted(title: &str, bullet: char, lines: &[String]) -> String {
    let mut out = format!("{title}:");
    for l in lines {
        out.push_str(&format!("\n  {bullet} {l}"));
    }
    out
}

/// Renders a record to text. Sections are separated by a blank line and
/// empty sections are left out.
pub fn render_record(r: &FeedbackRecord) -> String {
    let mut sections = alloc::vec![r.header.clone()];
    if !r.errors.is_empty() {
        sections.push(numbered("ERRORS", &r.errors));
    }
    if !r.warnings.is_empty() {
        sections.push(numbered("WARNINGS", &r.warnings));
    }
    if !r.suggestions.is_empty() {
        let items: Vec<_> = r.suggestions.iter().cloned().map(FeedbackItem::plain).collect();
        sections.push(numbered("SUGGESTIONS", &items));
    }
    if !r.missing_criteria.is_empty() {
        sections.push(bulleted("MISSING CRITERIA", '-', &r.missing_criteria));
    }
    if !r.current_stats.is_empty() {
        sections.push(bulleted("CURRENT STATS", '-', &r.current_stats));
    }
    if !r.met_criteria.is_empty() {
        sections.push(bulleted("All criteria met", '+', &r.met_criteria));
    }
    if let Some(c) = &r.closing {
        sections.push(c.clone());
    }
    sections.join("\n\n")
}

fn is_perfect(report: &EvaluationReport) -> bool {
    report.score >= 1.0 && report.errors.is_empty() && report.criteria.iter().all(|c| c.satisfied)
}

fn header(report: &EvaluationReport, errors: usize, warnings: usize) -> String {
    if is_perfect(report) {
        return format!("Score: {:.2}/1.00 - {}! Perfect score!", report.score, report.grade);
    }
    let counts = match (errors, warnings) {
        (0, w) if w > 0 => format!("{w} warning(s) found."),
        (e, 0) => format!("{e} error(s) found."),
        (e, w) => format!("{e} error(s) and {w} warning(s) found."),
    };
    format!("Score: {:.2}/1.00 - {}! {counts}", report.score, report.grade)
}

fn unsatisfied(report: &EvaluationReport, id: CriterionId) -> bool {
    report.criteria.iter().any(|c| c.id == id && !c.satisfied)
}

fn satisfied(report: &EvaluationReport, id: CriterionId) -> bool {
    report.criteria.iter().any(|c| c.id == id && c.satisfied)
}

fn criterion_errors(report: &EvaluationReport, spec: &CriteriaSpec, layout: &UiLayout) -> Vec<FeedbackItem> {
    let stats = &report.stats;
    let mut out = Vec::new();
    if let Some(req) = &spec.required_tools {
        for tool in req.difference(&stats.tools_used) {
            let detail = match layout.tool_button(*tool) {
                Some(b) => format!("Select it by clicking at coordinates {}.", b.center),
                None => String::from("This tool is not available in the toolbar."),
            };
            out.push(FeedbackItem::new(format!("Required tool '{tool}' was not used."), detail));
        }
    }
    if let Some(req) = &spec.required_colors {
        for color in req.difference(&stats.colors_used) {
            out.push(match layout.swatch(*color) {
                Some(s) => FeedbackItem::new(
                    format!("Required color '{}' was not used.", s.name),
                    format!("Select it by clicking at coordinates {}.", s.center),
                ),
                None => FeedbackItem::new(
                    format!("Required color '{color}' was not used."),
                    String::from("This color is not available in the palette."),
                ),
            });
        }
    }
    if unsatisfied(report, CriterionId::MinSegments) {
        out.push(FeedbackItem::new(
            format!("Drawing has {} segment(s); at least {} required.", stats.segments, spec.min_segments.unwrap_or(0)),
            String::from("Each mouseDown/mouseUp pair on the canvas draws one segment."),
        ));
    }
    let mut corners_reported = false;
    if unsatisfied(report, CriterionId::PositionConstraint) {
        match spec.position_constraint.map(|k| (k, region_rect(k, &layout.canvas))) {
            Some((kind, Region::Single(r))) => out.push(FeedbackItem::new(
                format!("Drawing is not positioned in the {kind} region."),
                format!("Keep the center of the drawing inside {r}."),
            )),
            Some((_, Region::Corners(_))) => {
                corners_reported = true;
                out.extend(corner_items(report, layout));
            }
            None => {}
        }
    }
    if unsatisfied(report, CriterionId::SizeConstraint) {
        if let Some(s) = &spec.size_constraint {
            let (w, h) = stats.content_bbox.map(|b| (b.width(), b.height())).unwrap_or((0, 0));
            out.push(FeedbackItem::new(
                format!("Drawing size {w}x{h} does not match the required {}x{}.", s.width, s.height),
                format!(
                    "Drag so the drawing spans {}x{} pixels, within {:.0}%.",
                    s.width,
                    s.height,
                    s.tolerance() * 100.0
                ),
            ));
        }
    }
    if unsatisfied(report, CriterionId::CornerPlacement) && !corners_reported {
        out.extend(corner_items(report, layout));
    }
    out
}

fn corner_items(report: &EvaluationReport, layout: &UiLayout) -> Vec<FeedbackItem> {
    let Region::Corners(rects) = region_rect(RegionKind::Corners, &layout.canvas) else {
        return Vec::new();
    };
    let empty = &report.empty_corners;
    CORNER_NAMES
        .iter()
        .zip(rects)
        .filter(|(name, _)| empty.iter().any(|e| e == *name))
        .map(|(name, r)| {
            FeedbackItem::new(format!("No element was drawn in the {name} corner."), format!("Draw inside {r}."))
        })
        .collect()
}

fn suggestions(report: &EvaluationReport, spec: &CriteriaSpec) -> Vec<String> {
    let stats = &report.stats;
    let mut out = Vec::new();
    if let Some(req) = &spec.required_tools {
        for tool in req.difference(&stats.tools_used).filter(|t| t.is_shape()) {
            out.push(format!("Use the {tool} tool for more efficient shape creation."));
        }
    }
    match spec.min_coverage {
        Some(min) if stats.coverage < min => out.push(format!("Aim for at least {min:.2} coverage of the canvas.")),
        Some(_) => out.push(format!("Drawing coverage is good ({:.2}).", stats.coverage)),
        None if stats.coverage >= BONUS_COVERAGE => {
            out.push(format!("Drawing coverage is good ({:.2}).", stats.coverage))
        }
        None => {}
    }
    let tools = spec.required_tools.is_some();
    let colors = spec.required_colors.is_some();
    let tools_ok = !tools || satisfied(report, CriterionId::RequiredTools);
    let colors_ok = !colors || satisfied(report, CriterionId::RequiredColors);
    if tools_ok && colors_ok {
        match (tools, colors) {
            (true, true) => out.push(String::from("All required tools and colors were correctly used.")),
            (true, false) => out.push(String::from("All required tools were correctly used.")),
            (false, true) => out.push(String::from("All required colors were correctly used.")),
            (false, false) => {}
        }
    }
    if report.errors.iter().any(|e| e.kind.is_warning()) {
        out.push(String::from("Reduce intermediate moveTo steps to stay within the action budget."));
    }
    out
}

fn met_checklist(spec: &CriteriaSpec) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(t) = &spec.required_tools {
        out.push(format!("Required tools: {}", quoted_list(t)));
    }
    if let Some(c) = &spec.required_colors {
        out.push(format!("Required colors: {}", quoted_list(c)));
    }
    if let Some(n) = spec.min_segments {
        out.push(format!("Minimum segments: {n}"));
    }
    if let Some(c) = spec.min_coverage {
        out.push(format!("Minimum coverage: {c:.2}"));
    }
    if let Some(n) = spec.max_actions {
        out.push(format!("Maximum actions: {n}"));
    }
    if let Some(p) = spec.position_constraint {
        out.push(format!("Position constraint: {p}"));
    }
    if let Some(s) = &spec.size_constraint {
        out.push(format!("Size constraint: {}x{} within {:.0}%", s.width, s.height, s.tolerance() * 100.0));
    }
    if spec.corner_placement {
        out.push(String::from("Corner placement: all four corners"));
    }
    out.push(String::from("No errors detected"));
    out
}

/// Builds the feedback document for `report`.
pub fn generate_feedback(report: &EvaluationReport, spec: &CriteriaSpec, layout: &UiLayout) -> FeedbackDocument {
    let mut record = FeedbackRecord::default();
    if is_perfect(report) {
        record.header = header(report, 0, 0);
        record.met_criteria = met_checklist(spec);
        record.closing = Some(String::from("Great job! No improvements needed."));
    } else {
        let mut errors: Vec<FeedbackItem> = report
            .errors
            .iter()
            .filter(|e| !e.kind.is_warning())
            .map(|e| FeedbackItem::new(e.message.clone(), e.detail.clone()))
            .collect();
        errors.extend(criterion_errors(report, spec, layout));
        let mut warnings = Vec::new();
        if unsatisfied(report, CriterionId::MinCoverage) {
            warnings.push(FeedbackItem::new(
                format!("Drawing is too small (coverage: {:.2}).", report.stats.coverage),
                String::from("Consider using larger coordinates to cover more canvas area."),
            ));
        }
        warnings.extend(
            report
                .errors
                .iter()
                .filter(|e| e.kind == ErrorKind::EfficiencyWarning)
                .map(|e| FeedbackItem::new(e.message.clone(), e.detail.clone())),
        );
        record.header = header(report, errors.len(), warnings.len());
        record.errors = errors;
        record.warnings = warnings;
        record.suggestions = suggestions(report, spec);
        record.missing_criteria = report.missing_criteria.iter().map(|m| format!("{}: {}", m.id, m.unmet)).collect();
        if report.score < 1.0 {
            let s = &report.stats;
            record.current_stats = alloc::vec![
                format!("Tools used: {}", quoted_list(&s.tools_used)),
                format!("Colors used: {}", quoted_list(&s.colors_used)),
                format!("Segments: {}", s.segments),
                format!("Coverage: {:.2}", s.coverage),
            ];
        }
    }
    let text = render_record(&record);
    FeedbackDocument { record, text }
}
