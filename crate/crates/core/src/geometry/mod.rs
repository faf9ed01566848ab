//! Screen/canvas coordinates and the geometric predicates used by scoring.
//!
//! All coordinates are integer screen pixels. Rectangles use half-open
//! containment on their max edges (`min <= p < max`) so that the four
//! canvas quadrants partition the canvas exactly; the cursor window is the
//! one closed rectangle (see [`UiLayout::window`]).

mod layout;

pub use layout::{hit_test, ColorSwatch, Hit, LayoutError, ToolButton, UiLayout, DEFAULT_LAYOUT};

use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// A screen position in whole pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub const fn offset(self, dx: i64, dy: i64) -> Self {
        Point { x: self.x + dx, y: self.y + dy }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Axis-aligned rectangle with `min <= max` on both axes. Zero-area
/// rectangles are allowed (a single dot has a degenerate bounding box).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    /// Returns `None` when `min` is not below-left of `max`.
    pub fn new(min: Point, max: Point) -> Option<Rect> {
        (min.x <= max.x && min.y <= max.y).then_some(Rect { min, max })
    }

    /// Smallest rectangle spanning two arbitrary corner points.
    pub fn spanning(a: Point, b: Point) -> Rect {
        Rect { min: Point::new(a.x.min(b.x), a.y.min(b.y)), max: Point::new(a.x.max(b.x), a.y.max(b.y)) }
    }

    /// Degenerate rectangle covering a single point.
    pub fn point(p: Point) -> Rect {
        Rect { min: p, max: p }
    }

    /// `width × height` rectangle whose center is `center`. For odd sizes
    /// the extra pixel goes to the max side.
    pub fn centered(center: Point, width: i64, height: i64) -> Rect {
        let min = Point::new(center.x - width / 2, center.y - height / 2);
        Rect { min, max: min.offset(width, height) }
    }

    pub fn from_origin_size(origin: Point, width: i64, height: i64) -> Rect {
        Rect { min: origin, max: origin.offset(width, height) }
    }

    pub fn width(&self) -> i64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> i64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> i128 {
        self.width() as i128 * self.height() as i128
    }

    /// Half-open containment: `min <= p < max`.
    pub fn contains(&self, p: Point) -> bool {
        self.min.x <= p.x && p.x < self.max.x && self.min.y <= p.y && p.y < self.max.y
    }

    /// Closed containment: `min <= p <= max`.
    pub fn contains_closed(&self, p: Point) -> bool {
        self.min.x <= p.x && p.x <= self.max.x && self.min.y <= p.y && p.y <= self.max.y
    }

    /// Half-open containment for a point given in doubled coordinates, which
    /// keeps centroids of integer rectangles exact.
    pub fn contains_doubled(&self, p2: Point) -> bool {
        2 * self.min.x <= p2.x && p2.x < 2 * self.max.x && 2 * self.min.y <= p2.y && p2.y < 2 * self.max.y
    }

    /// Centroid in doubled coordinates (`min + max`).
    pub fn centroid_doubled(&self) -> Point {
        Point::new(self.min.x + self.max.x, self.min.y + self.max.y)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.min.x <= other.min.x && self.min.y <= other.min.y && other.max.x <= self.max.x && other.max.y <= self.max.y
    }

    /// True when the interiors overlap (shared edges do not count).
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min.x < other.max.x && other.min.x < self.max.x && self.min.y < other.max.y && other.min.y < self.max.y
    }

    /// Closed intersection; `None` when the rectangles are disjoint.
    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        Rect::new(
            Point::new(self.min.x.max(other.min.x), self.min.y.max(other.min.y)),
            Point::new(self.max.x.min(other.max.x), self.max.y.min(other.max.y)),
        )
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Rect {
        Rect { min: self.min.offset(dx, dy), max: self.max.offset(dx, dy) }
    }

    /// Nearest point of the closed rectangle.
    pub fn clamp(&self, p: Point) -> Point {
        Point::new(p.x.clamp(self.min.x, self.max.x), p.y.clamp(self.min.y, self.max.y))
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.min, self.max)
    }
}

/// Smallest rectangle containing every input; `None` for no input.
pub fn bbox_union<'a, I>(rects: I) -> Option<Rect>
where
    I: IntoIterator<Item = &'a Rect>,
{
    rects.into_iter().fold(None, |acc: Option<Rect>, r| match acc {
        None => Some(*r),
        Some(a) => Some(a.union(r)),
    })
}

/// 24-bit RGB color, displayed as `#RRGGBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "alloc::string::String", into = "alloc::string::String"))]
pub struct Color(u32);

impl Color {
    pub const BLACK: Color = Color(0x000000);
    pub const RED: Color = Color(0xFF0000);
    pub const GREEN: Color = Color(0x00FF00);
    pub const BLUE: Color = Color(0x0000FF);
    pub const YELLOW: Color = Color(0xFFFF00);
    pub const MAGENTA: Color = Color(0xFF00FF);
    pub const CYAN: Color = Color(0x00FFFF);
    pub const WHITE: Color = Color(0xFFFFFF);

    pub const fn from_rgb(rgb: u32) -> Color {
        Color(rgb & 0xFF_FFFF)
    }

    pub const fn rgb(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:06X}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid hex color {0:?}; expected #RRGGBB")]
pub struct ParseColorError(pub alloc::string::String);

impl FromStr for Color {
    type Err = ParseColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseColorError(s.into());
        let hex = s.strip_prefix('#').ok_or_else(err)?;
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(err());
        }
        u32::from_str_radix(hex, 16).map(Color).map_err(|_| err())
    }
}

impl TryFrom<alloc::string::String> for Color {
    type Error = ParseColorError;

    fn try_from(s: alloc::string::String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Color> for alloc::string::String {
    fn from(c: Color) -> Self {
        alloc::format!("{c}")
    }
}

/// The six drawing tools of the simulated application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ToolKind {
    Pen,
    Eraser,
    Fill,
    Line,
    Rectangle,
    Circle,
}

impl ToolKind {
    pub const ALL: [ToolKind; 6] =
        [ToolKind::Pen, ToolKind::Eraser, ToolKind::Fill, ToolKind::Line, ToolKind::Rectangle, ToolKind::Circle];

    pub const fn name(self) -> &'static str {
        match self {
            ToolKind::Pen => "pen",
            ToolKind::Eraser => "eraser",
            ToolKind::Fill => "fill",
            ToolKind::Line => "line",
            ToolKind::Rectangle => "rectangle",
            ToolKind::Circle => "circle",
        }
    }

    /// Tools that record every vertex of a drag.
    pub const fn is_freehand(self) -> bool {
        matches!(self, ToolKind::Pen | ToolKind::Eraser)
    }

    /// Tools whose geometry is defined by press and release points only.
    pub const fn is_shape(self) -> bool {
        matches!(self, ToolKind::Line | ToolKind::Rectangle | ToolKind::Circle)
    }
}

impl fmt::Display for ToolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown tool {0:?}")]
pub struct ParseToolError(pub alloc::string::String);

impl FromStr for ToolKind {
    type Err = ParseToolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ToolKind::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| ParseToolError(s.into()))
    }
}

/// Drawing surface placement in screen coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CanvasSpec {
    pub origin: Point,
    pub width: i64,
    pub height: i64,
    pub background: Color,
}

impl Default for CanvasSpec {
    fn default() -> Self {
        CanvasSpec { origin: Point::new(90, 70), width: 1000, height: 700, background: Color::WHITE }
    }
}

impl CanvasSpec {
    pub fn rect(&self) -> Rect {
        Rect::from_origin_size(self.origin, self.width, self.height)
    }

    pub fn area(&self) -> i128 {
        self.width as i128 * self.height as i128
    }

    /// Screen point to canvas-relative point.
    pub fn to_canvas(&self, p: Point) -> Point {
        p.offset(-self.origin.x, -self.origin.y)
    }
}

/// Area of `content_bbox` (clipped to the canvas) over the canvas area.
pub fn coverage(content_bbox: Option<&Rect>, canvas: &CanvasSpec) -> f64 {
    let Some(clipped) = content_bbox.and_then(|b| b.intersect(&canvas.rect())) else {
        return 0.0;
    };
    let local = clipped.translate(-canvas.origin.x, -canvas.origin.y);
    local.area() as f64 / canvas.area() as f64
}

/// Named canvas regions usable as position constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RegionKind {
    Center,
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
    Corners,
}

impl RegionKind {
    pub const ALL: [RegionKind; 6] = [
        RegionKind::Center,
        RegionKind::TopLeft,
        RegionKind::TopRight,
        RegionKind::BottomLeft,
        RegionKind::BottomRight,
        RegionKind::Corners,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            RegionKind::Center => "center",
            RegionKind::TopLeft => "top-left",
            RegionKind::TopRight => "top-right",
            RegionKind::BottomLeft => "bottom-left",
            RegionKind::BottomRight => "bottom-right",
            RegionKind::Corners => "corners",
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Corner order used by [`Region::Corners`].
pub const CORNER_NAMES: [&str; 4] = ["top-left", "top-right", "bottom-left", "bottom-right"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Single(Rect),
    /// Top-left, top-right, bottom-left, bottom-right.
    Corners([Rect; 4]),
}

/// Screen rectangle(s) for a named region of `canvas`.
///
/// `center` is the middle 20% of each axis, the quadrants split each axis in
/// half, and `corners` are four 25%-by-25% rectangles anchored at the canvas
/// corners.
pub fn region_rect(kind: RegionKind, canvas: &CanvasSpec) -> Region {
    let (ox, oy) = (canvas.origin.x, canvas.origin.y);
    let (w, h) = (canvas.width, canvas.height);
    let rect = |x0: i64, y0: i64, x1: i64, y1: i64| Rect { min: Point::new(x0, y0), max: Point::new(x1, y1) };
    let (hw, hh) = (w / 2, h / 2);
    match kind {
        RegionKind::Center => {
            let (rw, rh) = (w / 5, h / 5);
            let left = ox + (w - rw) / 2;
            let top = oy + (h - rh) / 2;
            Region::Single(rect(left, top, left + rw, top + rh))
        }
        RegionKind::TopLeft => Region::Single(rect(ox, oy, ox + hw, oy + hh)),
        RegionKind::TopRight => Region::Single(rect(ox + hw, oy, ox + w, oy + hh)),
        RegionKind::BottomLeft => Region::Single(rect(ox, oy + hh, ox + hw, oy + h)),
        RegionKind::BottomRight => Region::Single(rect(ox + hw, oy + hh, ox + w, oy + h)),
        RegionKind::Corners => {
            let (cw, ch) = (w / 4, h / 4);
            Region::Corners([
                rect(ox, oy, ox + cw, oy + ch),
                rect(ox + w - cw, oy, ox + w, oy + ch),
                rect(ox, oy + h - ch, ox + cw, oy + h),
                rect(ox + w - cw, oy + h - ch, ox + w, oy + h),
            ])
        }
    }
}
