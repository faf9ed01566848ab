//! Hit regions of the simulated drawing application and their text format.
//!
//! Layout files are line-oriented `key = value` documents:
//!
//! ```text
//! version = 1
//! canvas = 90,70 1000x700
//! canvas.background = #FFFFFF
//! window = 0,0 1100x800
//! tool.pen = 35,45 30x30
//! color.red = #FF0000 429,25 24x24
//! ```
//!
//! Tool and color entries give the button *center* followed by the hit-box
//! size. Blank lines and lines starting with `#` are ignored.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{CanvasSpec, Color, Point, Rect, ToolKind};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Version 1 of the default layout in the key/value format.
pub const DEFAULT_LAYOUT: &str = "\
# drawbench default UI layout
version = 1
canvas = 90,70 1000x700
canvas.background = #FFFFFF
window = 0,0 1100x800
tool.pen = 35,45 30x30
tool.eraser = 35,125 30x30
tool.fill = 35,205 30x30
tool.line = 35,285 30x30
tool.rectangle = 35,365 30x30
tool.circle = 35,445 30x30
color.black = #000000 405,25 24x24
color.red = #FF0000 429,25 24x24
color.green = #00FF00 453,25 24x24
color.blue = #0000FF 477,25 24x24
color.yellow = #FFFF00 501,25 24x24
color.magenta = #FF00FF 525,25 24x24
color.cyan = #00FFFF 549,25 24x24
color.white = #FFFFFF 573,25 24x24
";

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ToolButton {
    pub tool: ToolKind,
    /// The coordinate a user is told to click.
    pub center: Point,
    pub hit: Rect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ColorSwatch {
    pub name: String,
    pub color: Color,
    pub center: Point,
    pub hit: Rect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct UiLayout {
    pub tools: Vec<ToolButton>,
    pub colors: Vec<ColorSwatch>,
    pub canvas: CanvasSpec,
    /// Valid cursor space. Closed on all edges, unlike every other rect.
    pub window: Rect,
}

/// Classification of a cursor position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hit {
    Tool(ToolKind),
    Color(Color),
    Canvas,
    WindowVoid,
    OutOfWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LayoutError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("unsupported layout version {0}")]
    Version(String),
    #[error("canvas must have positive width and height")]
    EmptyCanvas,
    #[error("hit regions `{0}` and `{1}` overlap")]
    Overlap(String, String),
    #[error("hit region `{0}` intersects the canvas")]
    OnCanvas(String),
    #[error("hit region `{0}` lies outside the window")]
    OutsideWindow(String),
}

impl Default for UiLayout {
    fn default() -> Self {
        let tool =
            |tool, x, y| ToolButton { tool, center: Point::new(x, y), hit: Rect::centered(Point::new(x, y), 30, 30) };
        let swatch = |name: &str, color, x| ColorSwatch {
            name: name.to_string(),
            color,
            center: Point::new(x, 25),
            hit: Rect::centered(Point::new(x, 25), 24, 24),
        };
        UiLayout {
            tools: Vec::from([
                tool(ToolKind::Pen, 35, 45),
                tool(ToolKind::Eraser, 35, 125),
                tool(ToolKind::Fill, 35, 205),
                tool(ToolKind::Line, 35, 285),
                tool(ToolKind::Rectangle, 35, 365),
                tool(ToolKind::Circle, 35, 445),
            ]),
            colors: Vec::from([
                swatch("black", Color::BLACK, 405),
                swatch("red", Color::RED, 429),
                swatch("green", Color::GREEN, 453),
                swatch("blue", Color::BLUE, 477),
                swatch("yellow", Color::YELLOW, 501),
                swatch("magenta", Color::MAGENTA, 525),
                swatch("cyan", Color::CYAN, 549),
                swatch("white", Color::WHITE, 573),
            ]),
            canvas: CanvasSpec::default(),
            window: Rect::from_origin_size(Point::new(0, 0), 1100, 800),
        }
    }
}

impl UiLayout {
    pub fn tool_button(&self, tool: ToolKind) -> Option<&ToolButton> {
        self.tools.iter().find(|b| b.tool == tool)
    }

    pub fn swatch(&self, color: Color) -> Option<&ColorSwatch> {
        self.colors.iter().find(|s| s.color == color)
    }

    /// Checks the structural invariants: positive canvas, pairwise disjoint
    /// hit regions, none on the canvas, all inside the window.
    pub fn validate(&self) -> Result<(), LayoutError> {
        if self.canvas.width <= 0 || self.canvas.height <= 0 {
            return Err(LayoutError::EmptyCanvas);
        }
        let regions: Vec<(String, Rect)> = self
            .tools
            .iter()
            .map(|b| (format!("tool.{}", b.tool), b.hit))
            .chain(self.colors.iter().map(|s| (format!("color.{}", s.name), s.hit)))
            .collect();
        let canvas = self.canvas.rect();
        for (i, (name, hit)) in regions.iter().enumerate() {
            if hit.overlaps(&canvas) {
                return Err(LayoutError::OnCanvas(name.clone()));
            }
            if !self.window.contains_rect(hit) {
                return Err(LayoutError::OutsideWindow(name.clone()));
            }
            if let Some((other, _)) = regions[i + 1..].iter().find(|(_, r)| r.overlaps(hit)) {
                return Err(LayoutError::Overlap(name.clone(), other.clone()));
            }
        }
        Ok(())
    }

    /// Parses and validates a key/value layout document.
    pub fn parse(text: &str) -> Result<UiLayout, LayoutError> {
        let mut version = None;
        let mut canvas: Option<CanvasSpec> = None;
        let mut background = None;
        let mut window = None;
        let mut tools = Vec::new();
        let mut colors = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let syntax = |reason: &str| LayoutError::Syntax { line, reason: reason.to_string() };
            let (key, value) = trimmed.split_once('=').ok_or_else(|| syntax("expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let fields: Vec<&str> = value.split_whitespace().collect();

            match key {
                "version" => version = Some(value.to_string()),
                "canvas" => {
                    let [origin, size] = fields[..] else {
                        return Err(syntax("expected `x,y WxH`"));
                    };
                    let origin = parse_point(origin).ok_or_else(|| syntax("bad origin"))?;
                    let (width, height) = parse_size(size).ok_or_else(|| syntax("bad size"))?;
                    canvas = Some(CanvasSpec { origin, width, height, background: Color::WHITE });
                }
                "canvas.background" => {
                    background = Some(value.parse::<Color>().map_err(|e| syntax(&e.to_string()))?);
                }
                "window" => {
                    let [origin, size] = fields[..] else {
                        return Err(syntax("expected `x,y WxH`"));
                    };
                    let origin = parse_point(origin).ok_or_else(|| syntax("bad origin"))?;
                    let (w, h) = parse_size(size).ok_or_else(|| syntax("bad size"))?;
                    window = Some(Rect::from_origin_size(origin, w, h));
                }
                _ => {
                    if let Some(name) = key.strip_prefix("tool.") {
                        let tool: ToolKind = name.parse().map_err(|e: super::ParseToolError| syntax(&e.to_string()))?;
                        let [center, size] = fields[..] else {
                            return Err(syntax("expected `x,y WxH`"));
                        };
                        let center = parse_point(center).ok_or_else(|| syntax("bad center"))?;
                        let (w, h) = parse_size(size).ok_or_else(|| syntax("bad size"))?;
                        if tools.iter().any(|b: &ToolButton| b.tool == tool) {
                            return Err(syntax("duplicate tool"));
                        }
                        tools.push(ToolButton { tool, center, hit: Rect::centered(center, w, h) });
                    } else if let Some(name) = key.strip_prefix("color.") {
                        let [hex, center, size] = fields[..] else {
                            return Err(syntax("expected `#RRGGBB x,y WxH`"));
                        };
                        let color: Color = hex.parse().map_err(|e: super::ParseColorError| syntax(&e.to_string()))?;
                        let center = parse_point(center).ok_or_else(|| syntax("bad center"))?;
                        let (w, h) = parse_size(size).ok_or_else(|| syntax("bad size"))?;
                        if name.is_empty() || colors.iter().any(|s: &ColorSwatch| s.name == name || s.color == color) {
                            return Err(syntax("duplicate or empty color"));
                        }
                        colors.push(ColorSwatch {
                            name: name.to_string(),
                            color,
                            center,
                            hit: Rect::centered(center, w, h),
                        });
                    } else {
                        return Err(syntax("unknown key"));
                    }
                }
            }
        }

        match version.as_deref() {
            Some("1") => {}
            Some(v) => return Err(LayoutError::Version(v.to_string())),
            None => return Err(LayoutError::MissingKey("version")),
        }
        let mut canvas = canvas.ok_or(LayoutError::MissingKey("canvas"))?;
        if let Some(bg) = background {
            canvas.background = bg;
        }
        let layout = UiLayout { tools, colors, canvas, window: window.ok_or(LayoutError::MissingKey("window"))? };
        layout.validate()?;
        Ok(layout)
    }

    /// Renders the layout in the key/value format accepted by [`UiLayout::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("version = 1\n");
        let c = &self.canvas;
        let _ = writeln!(out, "canvas = {},{} {}x{}", c.origin.x, c.origin.y, c.width, c.height);
        let _ = writeln!(out, "canvas.background = {}", c.background);
        let w = &self.window;
        let _ = writeln!(out, "window = {},{} {}x{}", w.min.x, w.min.y, w.width(), w.height());
        for b in &self.tools {
            let _ =
                writeln!(out, "tool.{} = {},{} {}x{}", b.tool, b.center.x, b.center.y, b.hit.width(), b.hit.height());
        }
        for s in &self.colors {
            let _ = writeln!(
                out,
                "color.{} = {} {},{} {}x{}",
                s.name,
                s.color,
                s.center.x,
                s.center.y,
                s.hit.width(),
                s.hit.height()
            );
        }
        out
    }
}

fn parse_point(s: &str) -> Option<Point> {
    let (x, y) = s.split_once(',')?;
    Some(Point::new(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

fn parse_size(s: &str) -> Option<(i64, i64)> {
    let (w, h) = s.split_once('x')?;
    let (w, h): (i64, i64) = (w.parse().ok()?, h.parse().ok()?);
    (w > 0 && h > 0).then_some((w, h))
}

/// Classifies `p`, testing tool buttons, then swatches, then the canvas,
/// then the window.
pub fn hit_test(layout: &UiLayout, p: Point) -> Hit {
    if let Some(b) = layout.tools.iter().find(|b| b.hit.contains(p)) {
        return Hit::Tool(b.tool);
    }
    if let Some(s) = layout.colors.iter().find(|s| s.hit.contains(p)) {
        return Hit::Color(s.color);
    }
    if layout.canvas.rect().contains(p) {
        Hit::Canvas
    } else if layout.window.contains_closed(p) {
        Hit::WindowVoid
    } else {
        Hit::OutOfWindow
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_layout_is_valid_and_matches_embedded_text() {
        let layout = UiLayout::default();
        layout.validate().unwrap();
        assert_eq!(UiLayout::parse(DEFAULT_LAYOUT).unwrap(), layout);
        assert_eq!(UiLayout::parse(&layout.to_text()).unwrap(), layout);
    }

    #[test]
    fn hit_test_named_elements() {
        let l = UiLayout::default();
        assert_eq!(hit_test(&l, Point::new(35, 365)), Hit::Tool(ToolKind::Rectangle));
        assert_eq!(hit_test(&l, Point::new(429, 25)), Hit::Color(Color::RED));
        assert_eq!(hit_test(&l, Point::new(600, 400)), Hit::Canvas);
        assert_eq!(hit_test(&l, Point::new(35, 45)), Hit::Tool(ToolKind::Pen));
        assert_eq!(hit_test(&l, Point::new(35, 445)), Hit::Tool(ToolKind::Circle));
        assert_eq!(hit_test(&l, Point::new(35, 205)), Hit::Tool(ToolKind::Fill));
        assert_eq!(hit_test(&l, Point::new(477, 25)), Hit::Color(Color::BLUE));
        assert_eq!(hit_test(&l, Point::new(1095, 790)), Hit::WindowVoid);
        assert_eq!(hit_test(&l, Point::new(1100, 800)), Hit::WindowVoid);
        assert_eq!(hit_test(&l, Point::new(1101, 0)), Hit::OutOfWindow);
        // the canvas max edge is exclusive
        assert_eq!(hit_test(&l, Point::new(1090, 400)), Hit::WindowVoid);
        assert_eq!(hit_test(&l, Point::new(1089, 769)), Hit::Canvas);
    }

    #[test]
    fn every_button_center_hits_itself() {
        let l = UiLayout::default();
        for b in &l.tools {
            assert_eq!(hit_test(&l, b.center), Hit::Tool(b.tool));
        }
        for s in &l.colors {
            assert_eq!(hit_test(&l, s.center), Hit::Color(s.color));
        }
    }

    #[test]
    fn parse_rejects_bad_documents() {
        assert_eq!(UiLayout::parse("canvas = 0,0 10x10\nwindow = 0,0 10x10"), Err(LayoutError::MissingKey("version")));
        assert!(matches!(UiLayout::parse("version = 2"), Err(LayoutError::Version(_))));
        assert!(matches!(UiLayout::parse("version = 1\nbogus"), Err(LayoutError::Syntax { line: 2, .. })));
        let overlapping = "version = 1\ncanvas = 100,100 100x100\nwindow = 0,0 300x300\ntool.pen = 20,20 30x30\ntool.fill = 30,30 30x30\n";
        assert!(matches!(UiLayout::parse(overlapping), Err(LayoutError::Overlap(..))));
        let on_canvas = "version = 1\ncanvas = 100,100 100x100\nwindow = 0,0 300x300\ntool.pen = 110,110 30x30\n";
        assert!(matches!(UiLayout::parse(on_canvas), Err(LayoutError::OnCanvas(_))));
        let outside = "version = 1\ncanvas = 100,100 100x100\nwindow = 0,0 300x300\ntool.pen = 5,5 30x30\n";
        assert!(matches!(UiLayout::parse(outside), Err(LayoutError::OutsideWindow(_))));
    }

    proptest! {
        #[test]
        fn hit_test_is_total_over_window(x in -50i64..1200, y in -50i64..900) {
            let l = UiLayout::default();
            let p = Point::new(x, y);
            let hit = hit_test(&l, p);
            let matches = l.tools.iter().filter(|b| b.hit.contains(p)).count()
                + l.colors.iter().filter(|s| s.hit.contains(p)).count()
                + usize::from(l.canvas.rect().contains(p));
            prop_assert!(matches <= 1);
            if l.window.contains_closed(p) {
                prop_assert_ne!(hit, Hit::OutOfWindow);
            } else {
                prop_assert_eq!(hit, Hit::OutOfWindow);
            }
        }
    }
}
