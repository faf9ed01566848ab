//! Task definitions, validation and distribution statistics.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::evaluator::{CriteriaError, CriteriaSpec};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Version of the task-file layout understood by this crate.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
    VeryHard,
}

impl Difficulty {
    pub const ALL: [Difficulty; 4] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Hard, Difficulty::VeryHard];

    pub const fn name(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
            Difficulty::VeryHard => "very_hard",
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            Difficulty::Easy => "Easy",
            Difficulty::Medium => "Medium",
            Difficulty::Hard => "Hard",
            Difficulty::VeryHard => "Very Hard",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Difficulty {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Difficulty::ALL.into_iter().find(|d| d.name() == s).ok_or(())
    }
}

macro_rules! categories {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
        pub enum Category {
            $(#[cfg_attr(feature = "serde", serde(rename = $name))] $variant,)*
        }

        impl Category {
            pub const ALL: [Category; 20] = [$(Category::$variant),*];

            pub const fn name(self) -> &'static str {
                match self {
                    $(Category::$variant => $name,)*
                }
            }
        }
    };
}

categories! {
    SpatialReasoning => "spatial_reasoning",
    BasicShapes => "basic_shapes",
    Objects => "objects",
    Compositional => "compositional",
    Patterns => "patterns",
    MultiColor => "multi_color",
    Position => "position",
    Size => "size",
    ToolUsage => "tool_usage",
    EfficiencyTest => "efficiency_test",
    Creative => "creative",
    Angle => "angle",
    Complex => "complex",
    Scenes => "scenes",
    PrecisionTest => "precision_test",
    ToolSwitching => "tool_switching",
    Spatial => "spatial",
    Symmetry => "symmetry",
    Texture => "texture",
    Grid => "grid",
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Category::ALL.into_iter().find(|c| c.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TaskSpec {
    pub id: String,
    pub text: String,
    pub category: Category,
    pub difficulty: Difficulty,
    pub criteria: CriteriaSpec,
    /// Relaxed criteria, e.g. accepting a pen-drawn circle for a circle task.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub lenient_criteria: Option<CriteriaSpec>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub rationale: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ValidationKind {
    DuplicateId,
    UnknownCategory,
    UnknownDifficulty,
    EmptyCriteria,
    BadThreshold,
    EmptyDataset,
}

impl ValidationKind {
    pub const fn name(self) -> &'static str {
        match self {
            ValidationKind::DuplicateId => "duplicate-id",
            ValidationKind::UnknownCategory => "unknown-category",
            ValidationKind::UnknownDifficulty => "unknown-difficulty",
            ValidationKind::EmptyCriteria => "empty-criteria",
            ValidationKind::BadThreshold => "bad-threshold",
            ValidationKind::EmptyDataset => "empty-dataset",
        }
    }
}

impl fmt::Display for ValidationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// First problem found in a dataset, tagged with the offending task id.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[error("{}{kind}: {reason}", task_id.as_ref().map(|t| format!("task '{t}': ")).unwrap_or_default())]
pub struct ValidationFailure {
    pub kind: ValidationKind,
    pub task_id: Option<String>,
    pub reason: String,
}

impl ValidationFailure {
    fn new(kind: ValidationKind, task_id: &str, reason: String) -> Self {
        ValidationFailure { kind, task_id: Some(task_id.into()), reason }
    }
}

fn check_criteria(id: &str, which: &str, c: &CriteriaSpec) -> Result<(), ValidationFailure> {
    c.validate().map_err(|e| {
        let kind = match e {
            CriteriaError::Empty(_) => ValidationKind::EmptyCriteria,
            CriteriaError::BadThreshold(_) => ValidationKind::BadThreshold,
        };
        ValidationFailure::new(kind, id, format!("{which}: {e}"))
    })
}

impl TaskSpec {
    /// Builds a task from its textual category and difficulty and validates
    /// its criteria.
    pub fn from_parts(
        id: &str,
        text: &str,
        category: &str,
        difficulty: &str,
        criteria: CriteriaSpec,
        lenient_criteria: Option<CriteriaSpec>,
        rationale: Option<String>,
    ) -> Result<TaskSpec, ValidationFailure> {
        let category = category.parse().map_err(|()| {
            ValidationFailure::new(ValidationKind::UnknownCategory, id, format!("unknown category '{category}'"))
        })?;
        let difficulty = difficulty.parse().map_err(|()| {
            ValidationFailure::new(ValidationKind::UnknownDifficulty, id, format!("unknown difficulty '{difficulty}'"))
        })?;
        let task =
            TaskSpec { id: id.into(), text: text.into(), category, difficulty, criteria, lenient_criteria, rationale };
        task.validate()?;
        Ok(task)
    }

    pub fn validate(&self) -> Result<(), ValidationFailure> {
        check_criteria(&self.id, "criteria", &self.criteria)?;
        if let Some(l) = &self.lenient_criteria {
            check_criteria(&self.id, "lenient_criteria", l)?;
        }
        Ok(())
    }

    /// The criteria to score against, strict or lenient.
    pub fn criteria_for(&self, lenient: bool) -> &CriteriaSpec {
        match (&self.lenient_criteria, lenient) {
            (Some(l), true) => l,
            _ => &self.criteria,
        }
    }
}

/// A validated, non-empty task collection with unique ids.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Dataset {
    pub schema_version: u32,
    pub name: String,
    pub version: String,
    pub tasks: Vec<TaskSpec>,
}

/// Checks a task list: non-empty, unique ids, every criteria block valid.
pub fn validate_tasks(tasks: &[TaskSpec]) -> Result<(), ValidationFailure> {
    if tasks.is_empty() {
        return Err(ValidationFailure {
            kind: ValidationKind::EmptyDataset,
            task_id: None,
            reason: "dataset has no tasks".into(),
        });
    }
    let mut seen = BTreeSet::new();
    for t in tasks {
        if !seen.insert(t.id.as_str()) {
            return Err(ValidationFailure::new(ValidationKind::DuplicateId, &t.id, "id appears more than once".into()));
        }
        t.validate()?;
    }
    Ok(())
}

impl Dataset {
    pub fn new(name: &str, version: &str, tasks: Vec<TaskSpec>) -> Result<Dataset, ValidationFailure> {
        validate_tasks(&tasks)?;
        Ok(Dataset { schema_version: SCHEMA_VERSION, name: name.into(), version: version.into(), tasks })
    }

    pub fn task(&self, id: &str) -> Option<&TaskSpec> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn count(&self, difficulty: Difficulty) -> usize {
        self.tasks.iter().filter(|t| t.difficulty == difficulty).count()
    }
}

/// Share of `count` in `total`, in tenths of a percent, rounded half up.
pub fn percent_tenths(count: usize, total: usize) -> u32 {
    if total == 0 {
        return 0;
    }
    ((count as u64 * 1000 + total as u64 / 2) / total as u64) as u32
}

/// Formats tenths of a percent as `44.8%`.
pub fn format_percent(tenths: u32) -> String {
    format!("{}.{}%", tenths / 10, tenths % 10)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DifficultyRow {
    pub difficulty: Difficulty,
    pub count: usize,
    pub percent_tenths: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CategoryRow {
    pub category: Category,
    /// Counts per difficulty, easy to very hard.
    pub by_difficulty: [usize; 4],
    pub count: usize,
    pub percent_tenths: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DatasetStats {
    pub total: usize,
    pub by_difficulty: Vec<DifficultyRow>,
    /// Every category in canonical order, including empty ones.
    pub by_category: Vec<CategoryRow>,
}

pub fn dataset_stats(tasks: &[TaskSpec]) -> DatasetStats {
    let total = tasks.len();
    let by_difficulty = Difficulty::ALL
        .iter()
        .map(|&d| {
            let count = tasks.iter().filter(|t| t.difficulty == d).count();
            DifficultyRow { difficulty: d, count, percent_tenths: percent_tenths(count, total) }
        })
        .collect();
    let by_category = Category::ALL
        .iter()
        .map(|&c| {
            let mut by = [0usize; 4];
            for t in tasks.iter().filter(|t| t.category == c) {
                by[t.difficulty.index()] += 1;
            }
            let count = by.iter().sum();
            CategoryRow { category: c, by_difficulty: by, count, percent_tenths: percent_tenths(count, total) }
        })
        .collect();
    DatasetStats { total, by_difficulty, by_category }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn crit() -> CriteriaSpec {
        CriteriaSpec { min_segments: Some(1), ..Default::default() }
    }

    fn task(id: &str, c: Category, d: Difficulty) -> TaskSpec {
        TaskSpec {
            id: id.into(),
            text: String::new(),
            category: c,
            difficulty: d,
            criteria: crit(),
            lenient_criteria: None,
            rationale: None,
        }
    }

    #[test]
    fn vocabularies_round_trip() {
        for c in Category::ALL {
            assert_eq!(c.name().parse::<Category>(), Ok(c));
        }
        for d in Difficulty::ALL {
            assert_eq!(d.name().parse::<Difficulty>(), Ok(d));
        }
        assert!("Easy".parse::<Difficulty>().is_err());
        assert!("doodles".parse::<Category>().is_err());
    }

    #[test]
    fn from_parts_failures() {
        let e = TaskSpec::from_parts("t1", "x", "doodles", "easy", crit(), None, None).unwrap_err();
        assert_eq!((e.kind, e.task_id.as_deref()), (ValidationKind::UnknownCategory, Some("t1")));
        let e = TaskSpec::from_parts("t1", "x", "grid", "trivial", crit(), None, None).unwrap_err();
        assert_eq!(e.kind, ValidationKind::UnknownDifficulty);
        let e = TaskSpec::from_parts("t1", "x", "grid", "easy", CriteriaSpec::default(), None, None).unwrap_err();
        assert_eq!(e.kind, ValidationKind::EmptyCriteria);
        let bad = CriteriaSpec { min_coverage: Some(1.5), ..Default::default() };
        let e = TaskSpec::from_parts("t1", "x", "grid", "easy", bad.clone(), None, None).unwrap_err();
        assert_eq!(e.kind, ValidationKind::BadThreshold);
        let e = TaskSpec::from_parts("t1", "x", "grid", "easy", crit(), Some(bad), None).unwrap_err();
        assert_eq!(e.kind, ValidationKind::BadThreshold);
        assert!(e.to_string().starts_with("task 't1': bad-threshold: lenient_criteria"));
    }

    #[test]
    fn duplicate_and_empty() {
        let tasks = vec![task("a", Category::Grid, Difficulty::Easy), task("a", Category::Grid, Difficulty::Hard)];
        assert_eq!(validate_tasks(&tasks).unwrap_err().kind, ValidationKind::DuplicateId);
        assert_eq!(validate_tasks(&[]).unwrap_err().kind, ValidationKind::EmptyDataset);
    }

    #[test]
    fn published_difficulty_split() {
        // 112 / 97 / 21 / 20 of 250
        let mut tasks = Vec::new();
        for (d, n) in
            [(Difficulty::Easy, 112), (Difficulty::Medium, 97), (Difficulty::Hard, 21), (Difficulty::VeryHard, 20)]
        {
            for i in 0..n {
                tasks.push(task(&format!("{d}-{i}"), Category::BasicShapes, d));
            }
        }
        let s = dataset_stats(&tasks);
        let pct: Vec<_> = s.by_difficulty.iter().map(|r| format_percent(r.percent_tenths)).collect();
        assert_eq!(pct, ["44.8%", "38.8%", "8.4%", "8.0%"]);
        assert_eq!(s.by_category[1].count, 250);
        assert_eq!(format_percent(percent_tenths(71, 250)), "28.4%");
    }

    #[test]
    fn empty_view_is_all_zero() {
        let s = dataset_stats(&[]);
        assert_eq!(s.total, 0);
        assert!(s.by_difficulty.iter().all(|r| r.count == 0 && r.percent_tenths == 0));
        assert!(s.by_category.iter().all(|r| r.count == 0 && r.percent_tenths == 0));
    }

    proptest! {
        #[test]
        fn stats_counts_sum(picks in proptest::collection::vec((0usize..20, 0usize..4), 1..300)) {
            let tasks: Vec<_> = picks.iter().enumerate()
                .map(|(i, (c, d))| task(&format!("t{i}"), Category::ALL[*c], Difficulty::ALL[*d]))
                .collect();
            let s = dataset_stats(&tasks);
            prop_assert_eq!(s.by_difficulty.iter().map(|r| r.count).sum::<usize>(), tasks.len());
            prop_assert_eq!(s.by_category.iter().map(|r| r.count).sum::<usize>(), tasks.len());
            let pct: u32 = s.by_difficulty.iter().map(|r| r.percent_tenths).sum();
            prop_assert!((998..=1002).contains(&pct), "{}", pct);
        }
    }
}
