//! Headless verification of mouse-action drawing sequences.
//!
//! The pipeline is `parse_actions` → `interpret` → `evaluate` → `generate_feedback`,
//! all pure and deterministic. This crate needs only `alloc`; file formats,
//! model clients and the command line live in the `drawbench` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod actions;
pub mod dataset;
pub mod evaluator;
pub mod feedback;
pub mod geometry;
pub mod interpreter;
pub mod samples;

pub use actions::{parse_actions, serialize_actions, Action, ActionSequence, SyntaxFailure, SyntaxFailureKind};
pub use dataset::{
    dataset_stats, Category, Dataset, DatasetStats, Difficulty, TaskSpec, ValidationFailure, ValidationKind,
};
pub use evaluator::{
    evaluate, evaluate_sequence, CriteriaSpec, CriterionId, DetectedError, ErrorKind, EvalOptions, EvaluationReport,
    Grade, ScoreMode,
};
pub use feedback::{generate_feedback, FeedbackDocument, FeedbackRecord};
pub use geometry::{CanvasSpec, Color, Point, Rect, RegionKind, ToolKind, UiLayout};
pub use interpreter::{interpret, render_svg, trace_stats, DrawingTrace, ToolUsage, TraceStats};
