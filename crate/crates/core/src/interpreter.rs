//! Headless execution of action sequences against the simulated UI.
//!
//! The interpreter is a small state machine over [`BrushState`]. It never
//! aborts: anything a real browser would have silently ignored or clamped is
//! recorded as an [`ExecutionDiagnostic`] and left for the evaluator to
//! penalize.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::actions::{Action, ActionSequence};
use crate::geometry::{bbox_union, coverage, hit_test, CanvasSpec, Color, Hit, Point, Rect, UiLayout};

pub use crate::geometry::ToolKind;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Brush size on start-up, in pixels.
pub const DEFAULT_BRUSH_SIZE: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BrushState {
    pub tool: ToolKind,
    pub color: Color,
    pub size: u32,
    pub cursor: Point,
    pub button_down: bool,
    /// Where the current press began; present iff `button_down`.
    pub stroke_start: Option<Point>,
}

impl Default for BrushState {
    fn default() -> Self {
        BrushState {
            tool: ToolKind::Pen,
            color: Color::BLACK,
            size: DEFAULT_BRUSH_SIZE,
            cursor: Point::new(0, 0),
            button_down: false,
            stroke_start: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum TraceElement {
    /// Freehand pen or eraser drag. `bbox` is clipped to the canvas.
    Stroke {
        tool: ToolKind,
        color: Color,
        size: u32,
        vertices: Vec<Point>,
        bbox: Rect,
    },
    /// Line, rectangle or circle drag from `anchor` to `target`.
    Shape {
        tool: ToolKind,
        color: Color,
        size: u32,
        anchor: Point,
        target: Point,
        bbox: Rect,
    },
    Fill {
        point: Point,
        color: Color,
    },
    Dot {
        point: Point,
        tool: ToolKind,
        color: Color,
        size: u32,
    },
    ToolSelect {
        tool: ToolKind,
    },
    ColorSelect {
        color: Color,
    },
}

impl TraceElement {
    /// Strokes, shapes, fills and dots; selections are not drawing.
    pub fn is_drawing(&self) -> bool {
        !matches!(self, TraceElement::ToolSelect { .. } | TraceElement::ColorSelect { .. })
    }

    pub fn is_eraser(&self) -> bool {
        matches!(
            self,
            TraceElement::Stroke { tool: ToolKind::Eraser, .. } | TraceElement::Dot { tool: ToolKind::Eraser, .. }
        )
    }

    /// Tool that produced a drawing element.
    pub fn drawing_tool(&self) -> Option<ToolKind> {
        match self {
            TraceElement::Stroke { tool, .. } | TraceElement::Shape { tool, .. } | TraceElement::Dot { tool, .. } => {
                Some(*tool)
            }
            TraceElement::Fill { .. } => Some(ToolKind::Fill),
            _ => None,
        }
    }

    /// Color painted by a non-eraser drawing element.
    pub fn paint_color(&self) -> Option<Color> {
        if self.is_eraser() {
            return None;
        }
        match self {
            TraceElement::Stroke { color, .. }
            | TraceElement::Shape { color, .. }
            | TraceElement::Fill { color, .. }
            | TraceElement::Dot { color, .. } => Some(*color),
            _ => None,
        }
    }

    /// Extent counted as drawn content (eraser marks excluded).
    pub fn content_bbox(&self) -> Option<Rect> {
        if self.is_eraser() {
            return None;
        }
        match self {
            TraceElement::Stroke { bbox, .. } | TraceElement::Shape { bbox, .. } => Some(*bbox),
            TraceElement::Fill { point, .. } | TraceElement::Dot { point, .. } => Some(Rect::point(*point)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DiagnosticKind {
    UnmatchedDown,
    UnmatchedUp,
    OutOfWindowMove,
    OffCanvasPress,
    DegenerateShape,
}

impl DiagnosticKind {
    pub const fn name(self) -> &'static str {
        match self {
            DiagnosticKind::UnmatchedDown => "unmatched-down",
            DiagnosticKind::UnmatchedUp => "unmatched-up",
            DiagnosticKind::OutOfWindowMove => "out-of-window-move",
            DiagnosticKind::OffCanvasPress => "off-canvas-press",
            DiagnosticKind::DegenerateShape => "degenerate-shape",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ExecutionDiagnostic {
    pub kind: DiagnosticKind,
    pub action_index: usize,
    /// Requested target for out-of-window moves, otherwise the cursor.
    pub point: Point,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DrawingTrace {
    pub elements: Vec<TraceElement>,
    pub diagnostics: Vec<ExecutionDiagnostic>,
    pub final_state: BrushState,
    pub action_count: usize,
    /// The last element was produced by closing a press that was never
    /// released.
    pub auto_closed: bool,
}

impl DrawingTrace {
    pub fn empty() -> Self {
        DrawingTrace {
            elements: Vec::new(),
            diagnostics: Vec::new(),
            final_state: BrushState::default(),
            action_count: 0,
            auto_closed: false,
        }
    }

    /// Elements that a longer sequence with the same prefix would also
    /// produce, i.e. without a trailing auto-closed stroke.
    pub fn committed(&self) -> &[TraceElement] {
        if self.auto_closed {
            &self.elements[..self.elements.len() - 1]
        } else {
            &self.elements
        }
    }
}

enum PressKind {
    Freehand { tool: ToolKind, color: Color, size: u32, vertices: Vec<Point> },
    Shape { tool: ToolKind, color: Color, size: u32, anchor: Point },
    Fill,
    OffCanvas,
}

struct Press {
    index: usize,
    kind: PressKind,
}

struct Machine<'a> {
    layout: &'a UiLayout,
    state: BrushState,
    press: Option<Press>,
    elements: Vec<TraceElement>,
    diagnostics: Vec<ExecutionDiagnostic>,
}

impl Machine<'_> {
    fn diag(&mut self, kind: DiagnosticKind, action_index: usize, point: Point, detail: String) {
        self.diagnostics.push(ExecutionDiagnostic { kind, action_index, point, detail });
    }

    fn clip(&self, r: Rect) -> Rect {
        // presses only start on the canvas, so the clip is never empty
        r.intersect(&self.layout.canvas.rect()).unwrap_or(r)
    }

    fn step(&mut self, index: usize, action: Action) {
        match action {
            Action::MoveTo(requested) => {
                let p = self.layout.window.clamp(requested);
                if p != requested {
                    self.diag(
                        DiagnosticKind::OutOfWindowMove,
                        index,
                        requested,
                        format!(
                            "moveTo{requested} is outside the window {}; cursor clamped to {p}",
                            self.layout.window
                        ),
                    );
                }
                self.state.cursor = p;
                if let Some(Press { kind: PressKind::Freehand { vertices, .. }, .. }) = &mut self.press {
                    vertices.push(p);
                }
            }
            Action::Click => {
                let p = self.state.cursor;
                match hit_test(self.layout, p) {
                    Hit::Tool(tool) => {
                        self.state.tool = tool;
                        self.elements.push(TraceElement::ToolSelect { tool });
                    }
                    Hit::Color(color) => {
                        self.state.color = color;
                        self.elements.push(TraceElement::ColorSelect { color });
                    }
                    // a click while the button is held only changes selections
                    Hit::Canvas if self.press.is_some() => {}
                    Hit::Canvas => {
                        let BrushState { tool, color, size, .. } = self.state;
                        match tool {
                            ToolKind::Pen | ToolKind::Eraser => {
                                self.elements.push(TraceElement::Dot { point: p, tool, color, size })
                            }
                            ToolKind::Fill => self.elements.push(TraceElement::Fill { point: p, color }),
                            ToolKind::Line | ToolKind::Rectangle | ToolKind::Circle => self.diag(
                                DiagnosticKind::DegenerateShape,
                                index,
                                p,
                                format!("click at {p} with the {tool} tool draws nothing; drag instead"),
                            ),
                        }
                    }
                    Hit::WindowVoid | Hit::OutOfWindow => {}
                }
            }
            Action::MouseDown => {
                if let Some(press) = &self.press {
                    let started = press.index;
                    let p = self.state.cursor;
                    self.diag(
                        DiagnosticKind::UnmatchedDown,
                        index,
                        p,
                        format!("mouseDown while the button is already down since action {started}"),
                    );
                    return;
                }
                let p = self.state.cursor;
                let BrushState { tool, color, size, .. } = self.state;
                let kind = if hit_test(self.layout, p) == Hit::Canvas {
                    match tool {
                        ToolKind::Pen | ToolKind::Eraser => {
                            PressKind::Freehand { tool, color, size, vertices: vec![p] }
                        }
                        ToolKind::Line | ToolKind::Rectangle | ToolKind::Circle => {
                            PressKind::Shape { tool, color, size, anchor: p }
                        }
                        ToolKind::Fill => {
                            self.elements.push(TraceElement::Fill { point: p, color });
                            PressKind::Fill
                        }
                    }
                } else {
                    self.diag(
                        DiagnosticKind::OffCanvasPress,
                        index,
                        p,
                        format!("mouseDown at {p} is outside the canvas {}", self.layout.canvas.rect()),
                    );
                    PressKind::OffCanvas
                };
                self.press = Some(Press { index, kind });
                self.state.button_down = true;
                self.state.stroke_start = Some(p);
            }
            Action::MouseUp => {
                if self.press.is_none() {
                    let p = self.state.cursor;
                    self.diag(DiagnosticKind::UnmatchedUp, index, p, "mouseUp without a preceding mouseDown".into());
                    return;
                }
                self.release();
            }
        }
    }

    /// Ends the current press at the cursor; returns whether an element was
    /// emitted.
    fn release(&mut self) -> bool {
        let Some(press) = self.press.take() else { return false };
        self.state.button_down = false;
        self.state.stroke_start = None;
        let element = match press.kind {
            PressKind::Freehand { tool, color, size, vertices } => {
                let bbox = vertices.iter().map(|v| Rect::point(*v)).reduce(|a, b| a.union(&b));
                let bbox = self.clip(bbox.expect("a press records its first vertex"));
                TraceElement::Stroke { tool, color, size, vertices, bbox }
            }
            PressKind::Shape { tool, color, size, anchor } => {
                let target = self.state.cursor;
                let bbox = self.clip(Rect::spanning(anchor, target));
                TraceElement::Shape { tool, color, size, anchor, target, bbox }
            }
            PressKind::Fill | PressKind::OffCanvas => return false,
        };
        self.elements.push(element);
        true
    }
}

/// Executes `seq` left to right against `layout`.
pub fn interpret(seq: &ActionSequence, layout: &UiLayout) -> DrawingTrace {
    let mut m =
        Machine { layout, state: BrushState::default(), press: None, elements: Vec::new(), diagnostics: Vec::new() };
    for (i, a) in seq.actions.iter().enumerate() {
        m.step(i, *a);
    }
    let mut auto_closed = false;
    if let Some(press) = &m.press {
        let started = press.index;
        let cursor = m.state.cursor;
        let pressed_at = m.state.stroke_start.unwrap_or(cursor);
        m.diag(
            DiagnosticKind::UnmatchedDown,
            started,
            pressed_at,
            format!("mouseDown at action {started} is never released; closed at {cursor}"),
        );
        auto_closed = m.release();
    }
    DrawingTrace {
        elements: m.elements,
        diagnostics: m.diagnostics,
        final_state: m.state,
        action_count: seq.actions.len(),
        auto_closed,
    }
}

/// How the set of "used" tools is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ToolUsage {
    /// A tool counts as used once its button was clicked.
    #[default]
    Selected,
    /// A tool counts only if it produced a drawing element.
    Drawn,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TraceStats {
    pub tools_used: BTreeSet<ToolKind>,
    pub colors_used: BTreeSet<Color>,
    /// Drawing elements: strokes, shapes, fills and canvas dots.
    pub segments: usize,
    pub content_bbox: Option<Rect>,
    pub coverage: f64,
    pub action_count: usize,
}

pub fn trace_stats(trace: &DrawingTrace, canvas: &CanvasSpec, usage: ToolUsage) -> TraceStats {
    let tools_used = match usage {
        ToolUsage::Selected => trace
            .elements
            .iter()
            .filter_map(|e| match e {
                TraceElement::ToolSelect { tool } => Some(*tool),
                _ => None,
            })
            .collect(),
        ToolUsage::Drawn => trace.elements.iter().filter_map(TraceElement::drawing_tool).collect(),
    };
    let colors_used = trace
        .elements
        .iter()
        .filter_map(|e| match e {
            TraceElement::ColorSelect { color } => Some(*color),
            other => other.paint_color(),
        })
        .collect();
    let boxes: Vec<Rect> = trace.elements.iter().filter_map(TraceElement::content_bbox).collect();
    let content_bbox = bbox_union(&boxes);
    TraceStats {
        tools_used,
        colors_used,
        segments: trace.elements.iter().filter(|e| e.is_drawing()).count(),
        coverage: coverage(content_bbox.as_ref(), canvas),
        content_bbox,
        action_count: trace.action_count,
    }
}

/// Writes a doubled coordinate as a decimal with at most one fractional digit.
fn half(out: &mut String, doubled: i64) {
    let _ = if doubled % 2 == 0 {
        write!(out, "{}", doubled / 2)
    } else {
        let sign = if doubled < 0 { "-" } else { "" };
        write!(out, "{sign}{}.5", doubled.abs() / 2)
    };
}

/// SVG document for `trace` in canvas-relative coordinates. Selections
/// appear as comments; every drawing element becomes one primitive.
pub fn render_svg(trace: &DrawingTrace, canvas: &CanvasSpec) -> String {
    let (w, h) = (canvas.width, canvas.height);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(
        out,
        "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"{}\"/>",
        canvas.background
    );
    let local = |p: &Point| canvas.to_canvas(*p);
    for e in &trace.elements {
        match e {
            TraceElement::ToolSelect { tool } => {
                let _ = writeln!(out, "  <!-- tool {tool} -->");
            }
            TraceElement::ColorSelect { color } => {
                let _ = writeln!(out, "  <!-- color {color} -->");
            }
            TraceElement::Stroke { tool, color, size, vertices, .. } => {
                let (class, paint) =
                    if *tool == ToolKind::Eraser { ("eraser", canvas.background) } else { ("stroke", *color) };
                let _ = write!(out, "  <polyline class=\"{class}\" points=\"");
                for (i, v) in vertices.iter().map(local).enumerate() {
                    let _ = write!(out, "{}{},{}", if i == 0 { "" } else { " " }, v.x, v.y);
                }
                let _ = writeln!(
                    out,
                    "\" fill=\"none\" stroke=\"{paint}\" stroke-width=\"{size}\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>"
                );
            }
            TraceElement::Shape { tool, color, size, anchor, target, .. } => {
                let (a, t) = (local(anchor), local(target));
                let r = Rect::spanning(a, t);
                let _ = match tool {
                    ToolKind::Line => writeln!(
                        out,
                        "  <line class=\"shape\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{size}\"/>",
                        a.x, a.y, t.x, t.y
                    ),
                    ToolKind::Circle => {
                        let c = r.centroid_doubled();
                        out.push_str("  <ellipse class=\"shape\" cx=\"");
                        half(&mut out, c.x);
                        out.push_str("\" cy=\"");
                        half(&mut out, c.y);
                        out.push_str("\" rx=\"");
                        half(&mut out, r.width());
                        out.push_str("\" ry=\"");
                        half(&mut out, r.height());
                        writeln!(out, "\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{size}\"/>")
                    }
                    _ => writeln!(
                        out,
                        "  <rect class=\"shape\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{size}\"/>",
                        r.min.x,
                        r.min.y,
                        r.width(),
                        r.height()
                    ),
                };
            }
            TraceElement::Fill { point, color } => {
                let p = local(point);
                let _ =
                    writeln!(out, "  <circle class=\"fill\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{color}\"/>", p.x, p.y);
            }
            TraceElement::Dot { point, tool, color, size } => {
                let p = local(point);
                let paint = if *tool == ToolKind::Eraser { canvas.background } else { *color };
                let _ = write!(out, "  <circle class=\"dot\" cx=\"{}\" cy=\"{}\" r=\"", p.x, p.y);
                half(&mut out, *size as i64);
                let _ = writeln!(out, "\" fill=\"{paint}\"/>");
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
