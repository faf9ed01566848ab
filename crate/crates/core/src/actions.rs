//! The four-instruction mouse language: `moveTo`, `click`, `mouseDown`, `mouseUp`.
//!
//! Wire format is a JSON array of objects:
//!
//! ```text
//! [
//!   {"action": "moveTo", "x": 35, "y": 45},
//!   {"action": "click"}
//! ]
//! ```
//!
//! Model output is rarely clean, so [`parse_actions`] scans the text for the
//! first `[` that opens a syntactically complete JSON array whose elements
//! are all objects, skipping prose, code fences and unrelated brackets.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::geometry::Point;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Upper bound on accepted sequence length.
pub const MAX_ACTIONS: usize = 10_000;

const MAX_DEPTH: usize = 64;

/// Largest coordinate magnitude accepted from a fractional-syntax number
/// (`35.0`); beyond 2^53 an `f64` no longer identifies a unique integer.
const MAX_EXACT_FLOAT: f64 = 9_007_199_254_740_992.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    MoveTo(Point),
    Click,
    MouseDown,
    MouseUp,
}

impl Action {
    pub const fn move_to(x: i64, y: i64) -> Action {
        Action::MoveTo(Point::new(x, y))
    }

    pub const fn name(&self) -> &'static str {
        match self {
            Action::MoveTo(_) => "moveTo",
            Action::Click => "click",
            Action::MouseDown => "mouseDown",
            Action::MouseUp => "mouseUp",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::MoveTo(p) => write!(f, "{{\"action\": \"moveTo\", \"x\": {}, \"y\": {}}}", p.x, p.y),
            other => write!(f, "{{\"action\": \"{}\"}}", other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSequence {
    pub actions: Vec<Action>,
    /// The raw text the actions were parsed from (or the canonical text when
    /// built programmatically).
    pub source_text: String,
}

impl ActionSequence {
    pub fn from_actions(actions: Vec<Action>) -> Self {
        let source_text = serialize(&actions);
        ActionSequence { actions, source_text }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SyntaxFailureKind {
    MalformedDocument,
    UnknownActionKind,
    MissingField,
    NonIntegerCoordinate,
    TooManyActions,
}

impl SyntaxFailureKind {
    pub const fn name(self) -> &'static str {
        match self {
            SyntaxFailureKind::MalformedDocument => "malformed-document",
            SyntaxFailureKind::UnknownActionKind => "unknown-action-kind",
            SyntaxFailureKind::MissingField => "missing-field",
            SyntaxFailureKind::NonIntegerCoordinate => "non-integer-coordinate",
            SyntaxFailureKind::TooManyActions => "too-many-actions",
        }
    }
}

/// Why a model output could not be read as an action sequence.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[error("{} at byte {position}: {reason}", kind.name())]
pub struct SyntaxFailure {
    pub kind: SyntaxFailureKind,
    /// Byte offset into the input text.
    pub position: usize,
    /// Index of the offending array element, when one was identified.
    pub action_index: Option<usize>,
    pub reason: String,
}

/// Extracts and validates the first action array in `text`.
pub fn parse_actions(text: &str) -> Result<ActionSequence, SyntaxFailure> {
    let bytes = text.as_bytes();
    let mut first_error: Option<(usize, String)> = None;

    for start in bytes.iter().enumerate().filter(|(_, &b)| b == b'[').map(|(i, _)| i) {
        let mut reader = Reader { bytes, pos: start };
        match reader.value(0) {
            Ok(Spanned { value: Json::Array(items), .. }) => {
                if items.iter().all(|item| matches!(item.value, Json::Object(_))) {
                    let actions = validate(items)?;
                    return Ok(ActionSequence { actions, source_text: text.to_string() });
                }
            }
            Ok(_) => unreachable!("a value starting at `[` is an array"),
            Err(err) => {
                first_error.get_or_insert(err);
            }
        }
    }

    let (position, reason) = first_error.unwrap_or_else(|| (0, "no action array found".to_string()));
    Err(SyntaxFailure { kind: SyntaxFailureKind::MalformedDocument, position, action_index: None, reason })
}

/// Canonical text for `seq`: one action object per line, in
/// `"action"`, `"x"`, `"y"` field order.
pub fn serialize_actions(seq: &ActionSequence) -> String {
    serialize(&seq.actions)
}

fn serialize(actions: &[Action]) -> String {
    if actions.is_empty() {
        return "[]".to_string();
    }
    let mut out = String::from("[\n");
    for (i, a) in actions.iter().enumerate() {
        let sep = if i + 1 == actions.len() { "" } else { "," };
        let _ = writeln!(out, "  {a}{sep}");
    }
    out.push(']');
    out
}

fn validate(items: Vec<Spanned>) -> Result<Vec<Action>, SyntaxFailure> {
    if items.len() > MAX_ACTIONS {
        return Err(SyntaxFailure {
            kind: SyntaxFailureKind::TooManyActions,
            position: items[MAX_ACTIONS].pos,
            action_index: Some(MAX_ACTIONS),
            reason: alloc::format!("{} actions exceed the limit of {MAX_ACTIONS}", items.len()),
        });
    }
    items
        .into_iter()
        .enumerate()
        .map(|(index, item)| {
            let Json::Object(fields) = item.value else { unreachable!() };
            let fail =
                |kind, position, reason: String| SyntaxFailure { kind, position, action_index: Some(index), reason };
            let field = |name: &str| fields.iter().find(|(k, _)| k == name).map(|(_, v)| v);

            let kind = field("action").ok_or_else(|| {
                fail(SyntaxFailureKind::MissingField, item.pos, "missing field \"action\"".to_string())
            })?;
            let Json::String(kind_name) = &kind.value else {
                return Err(fail(
                    SyntaxFailureKind::UnknownActionKind,
                    kind.pos,
                    "\"action\" must be a string".to_string(),
                ));
            };
            match kind_name.as_str() {
                "click" => Ok(Action::Click),
                "mouseDown" => Ok(Action::MouseDown),
                "mouseUp" => Ok(Action::MouseUp),
                "moveTo" => {
                    let coord = |name: &'static str| -> Result<i64, SyntaxFailure> {
                        let v = field(name).ok_or_else(|| {
                            fail(
                                SyntaxFailureKind::MissingField,
                                item.pos,
                                alloc::format!("moveTo is missing field \"{name}\""),
                            )
                        })?;
                        integer(&v.value).ok_or_else(|| {
                            fail(
                                SyntaxFailureKind::NonIntegerCoordinate,
                                v.pos,
                                alloc::format!("\"{name}\" must be an integer"),
                            )
                        })
                    };
                    Ok(Action::move_to(coord("x")?, coord("y")?))
                }
                other => Err(fail(
                    SyntaxFailureKind::UnknownActionKind,
                    kind.pos,
                    alloc::format!("unknown action {other:?}"),
                )),
            }
        })
        .collect()
}

fn integer(value: &Json) -> Option<i64> {
    let Json::Number(text) = value else { return None };
    if let Ok(v) = text.parse::<i64>() {
        return Some(v);
    }
    // `35.0` and `3.5e1` name integers; `35.5` does not.
    let v: f64 = text.parse().ok()?;
    let t = v as i64;
    (v.is_finite() && (-MAX_EXACT_FLOAT..=MAX_EXACT_FLOAT).contains(&v) && t as f64 == v).then_some(t)
}

struct Spanned {
    value: Json,
    pos: usize,
}

enum Json {
    Null,
    Bool,
    Number(String),
    String(String),
    Array(Vec<Spanned>),
    Object(Vec<(String, Spanned)>),
}

type ReadResult<T> = Result<T, (usize, String)>;

/// Strict RFC 8259 reader over a byte slice, tracking byte offsets.
struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn err<T>(&self, reason: &str) -> ReadResult<T> {
        Err((self.pos, reason.to_string()))
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> ReadResult<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(match b {
                b']' => "expected `]` or `,`",
                b'}' => "expected `}` or `,`",
                b':' => "expected `:`",
                _ => "unexpected character",
            })
        }
    }

    fn value(&mut self, depth: usize) -> ReadResult<Spanned> {
        if depth > MAX_DEPTH {
            return self.err("nesting too deep");
        }
        self.skip_ws();
        let pos = self.pos;
        let value = match self.peek() {
            None => return self.err("unexpected end of input"),
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                } else {
                    loop {
                        items.push(self.value(depth + 1)?);
                        self.skip_ws();
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            self.expect(b']')?;
                            break;
                        }
                    }
                }
                Json::Array(items)
            }
            Some(b'{') => {
                self.pos += 1;
                let mut fields = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b'}') {
                    self.pos += 1;
                } else {
                    loop {
                        self.skip_ws();
                        if self.peek() != Some(b'"') {
                            return self.err("expected string key");
                        }
                        let key = self.string()?;
                        self.skip_ws();
                        self.expect(b':')?;
                        let v = self.value(depth + 1)?;
                        fields.push((key, v));
                        self.skip_ws();
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            self.expect(b'}')?;
                            break;
                        }
                    }
                }
                Json::Object(fields)
            }
            Some(b'"') => Json::String(self.string()?),
            Some(b't') => self.literal("true", Json::Bool)?,
            Some(b'f') => self.literal("false", Json::Bool)?,
            Some(b'n') => self.literal("null", Json::Null)?,
            Some(b'-' | b'0'..=b'9') => Json::Number(self.number()?),
            Some(_) => return self.err("unexpected character"),
        };
        Ok(Spanned { value, pos })
    }

    fn literal(&mut self, word: &str, value: Json) -> ReadResult<Json> {
        if self.bytes[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            Ok(value)
        } else {
            self.err("invalid literal")
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self) -> ReadResult<String> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        match self.peek() {
            Some(b'0') => self.pos += 1,
            Some(b'1'..=b'9') => {
                self.digits();
            }
            _ => return self.err("invalid number"),
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            if self.digits() == 0 {
                return self.err("invalid number");
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                return self.err("invalid number");
            }
        }
        // ASCII by construction
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn string(&mut self) -> ReadResult<String> {
        self.pos += 1; // opening quote
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => return self.err("unterminated string"),
                Some(b'"') => {
                    self.pos += 1;
                    break;
                }
                Some(b'\\') => {
                    self.pos += 1;
                    let c = match self.peek() {
                        Some(b'"') => '"',
                        Some(b'\\') => '\\',
                        Some(b'/') => '/',
                        Some(b'b') => '\u{8}',
                        Some(b'f') => '\u{c}',
                        Some(b'n') => '\n',
                        Some(b'r') => '\r',
                        Some(b't') => '\t',
                        Some(b'u') => {
                            self.pos += 1;
                            let hex =
                                self.bytes.get(self.pos..self.pos + 4).ok_or((self.pos, "bad escape".to_string()))?;
                            let code = core::str::from_utf8(hex)
                                .ok()
                                .and_then(|h| u32::from_str_radix(h, 16).ok())
                                .ok_or((self.pos, "bad escape".to_string()))?;
                            self.pos += 3;
                            // lone surrogates decode to U+FFFD; keys we care about are ASCII
                            char::from_u32(code).unwrap_or('\u{FFFD}')
                        }
                        _ => return self.err("bad escape"),
                    };
                    self.pos += 1;
                    let mut buf = [0u8; 4];
                    out.extend_from_slice(c.encode_utf8(&mut buf).as_bytes());
                }
                Some(b) if b < 0x20 => return self.err("control character in string"),
                Some(b) => {
                    out.push(b);
                    self.pos += 1;
                }
            }
        }
        Ok(String::from_utf8_lossy(&out).into_owned())
    }
}
