//! Aligned text tables and long-form CSV for an [`AggregateReport`].

use drawbench_core::dataset::{Category, Difficulty};

use crate::aggregate::{AggregateReport, GroupRow};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Count(u64),
    /// Printed with three decimals.
    Score(f64),
    /// Signed, three decimals.
    Delta(f64),
    /// A fraction printed as a percentage with one decimal.
    Rate(f64),
    /// Already a percentage; signed, one decimal. `None` prints as `n/a`.
    Percent(Option<f64>),
    /// Printed with two decimals.
    Minutes(f64),
}

impl Cell {
    fn display(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Count(n) => n.to_string(),
            Cell::Score(v) => format!("{v:.3}"),
            Cell::Delta(v) => format!("{v:+.3}"),
            Cell::Rate(v) => format!("{:.1}%", v * 100.0),
            Cell::Percent(Some(v)) => format!("{v:+.1}%"),
            Cell::Percent(None) => "n/a".into(),
            Cell::Minutes(v) => format!("{v:.2}"),
        }
    }

    /// Unrounded value for machine-readable output.
    fn raw(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Count(n) => n.to_string(),
            Cell::Score(v) | Cell::Delta(v) | Cell::Rate(v) | Cell::Minutes(v) => v.to_string(),
            Cell::Percent(v) => v.map(|v| v.to_string()).unwrap_or_default(),
        }
    }

    fn numeric(&self) -> bool {
        !matches!(self, Cell::Text(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: &'static str,
    pub header: Vec<&'static str>,
    /// The first cell of each row is its key.
    pub rows: Vec<Vec<Cell>>,
}

fn text(s: &str) -> Cell {
    Cell::Text(s.into())
}

fn group_cells(label: &str, g: &GroupRow) -> Vec<Cell> {
    vec![
        text(label),
        Cell::Count(g.sessions as u64),
        Cell::Score(g.turn1.mean),
        Cell::Score(g.turn2.mean),
        Cell::Delta(g.mean_improvement),
        Cell::Rate(g.turn1.perfect_rate),
        Cell::Rate(g.turn2.perfect_rate),
    ]
}

const GROUP_HEADER: [&str; 6] = ["Sessions", "Turn 1", "Turn 2", "Improvement", "Perfect T1", "Perfect T2"];

fn group_table(title: &'static str, key: &'static str, rows: Vec<Vec<Cell>>) -> Table {
    let mut header = vec![key];
    header.extend(GROUP_HEADER);
    Table { title, header, rows }
}

pub fn tables(a: &AggregateReport) -> Vec<Table> {
    let (t1, t2) = (&a.overall.turn1, &a.overall.turn2);
    let overall = Table {
        title: "Overall Performance",
        header: vec!["Metric", "Turn 1", "Turn 2"],
        rows: vec![
            vec![text("Average Score"), Cell::Score(t1.mean), Cell::Score(t2.mean)],
            vec![text("Std Dev"), Cell::Score(t1.stddev), Cell::Score(t2.stddev)],
            vec![text("Median"), Cell::Score(t1.median), Cell::Score(t2.median)],
            vec![text("Perfect Rate (>= 0.9)"), Cell::Rate(t1.perfect_rate), Cell::Rate(t2.perfect_rate)],
            vec![text("Perfect Count"), Cell::Count(t1.perfect as u64), Cell::Count(t2.perfect as u64)],
            vec![text("Sessions"), Cell::Count(t1.n as u64), Cell::Count(t2.n as u64)],
        ],
    };
    let difficulty = group_table(
        "Performance by Difficulty",
        "Difficulty",
        a.by_difficulty
            .iter()
            .map(|g| {
                let label = g.key.parse::<Difficulty>().map(Difficulty::label).unwrap_or(&g.key);
                group_cells(label, g)
            })
            .collect(),
    );
    let category = group_table(
        "Performance by Category",
        "Category",
        a.by_category
            .iter()
            .map(|g| group_cells(g.key.parse::<Category>().map(Category::name).unwrap_or(&g.key), g))
            .collect(),
    );
    let improvement = Table {
        title: "Improvement Distribution",
        header: vec!["Improvement", "Count", "Percent"],
        rows: a
            .improvement
            .iter()
            .map(|b| vec![text(b.bucket.label()), Cell::Count(b.count as u64), Cell::Rate(b.percent / 100.0)])
            .collect(),
    };
    let errors = Table {
        title: "Error Frequency and Reduction",
        header: vec!["Error Type", "Turn 1", "Turn 2", "Change"],
        rows: a
            .errors
            .iter()
            .map(|e| {
                vec![
                    text(e.label()),
                    Cell::Count(e.turn1 as u64),
                    Cell::Count(e.turn2 as u64),
                    Cell::Percent(e.reduction_pct),
                ]
            })
            .collect(),
    };
    let models = Table {
        title: "Performance by Model",
        header: vec![
            "Model",
            "Sessions",
            "Failed",
            "Turn 1",
            "Turn 2",
            "Perfect T2",
            "Minutes",
            "Input Tokens",
            "Output Tokens",
        ],
        rows: a
            .by_model
            .iter()
            .map(|m| {
                let tok = |n: u64| if m.tokens_estimated { text(&format!("~{n}")) } else { Cell::Count(n) };
                vec![
                    text(&m.group.key),
                    Cell::Count(m.group.sessions as u64),
                    Cell::Count(m.failed as u64),
                    Cell::Score(m.group.turn1.mean),
                    Cell::Score(m.group.turn2.mean),
                    Cell::Rate(m.group.turn2.perfect_rate),
                    Cell::Minutes(m.minutes),
                    tok(m.input_tokens),
                    tok(m.output_tokens),
                ]
            })
            .collect(),
    };
    vec![overall, difficulty, category, improvement, errors, models]
}

/// Renders one table: title, header, rule, rows. Text is left-aligned and
/// numbers right-aligned.
pub fn render_table(t: &Table) -> String {
    let cells: Vec<Vec<(String, bool)>> =
        t.rows.iter().map(|r| r.iter().map(|c| (c.display(), c.numeric())).collect()).collect();
    let mut widths: Vec<usize> = t.header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (i, (s, _)) in row.iter().enumerate() {
            widths[i] = widths[i].max(s.chars().count());
        }
    }
    let line = |parts: Vec<(String, bool)>| {
        let padded: Vec<String> = parts
            .iter()
            .enumerate()
            .map(
                |(i, (s, right))| {
                    if *right {
                        format!("{s:>w$}", w = widths[i])
                    } else {
                        format!("{s:<w$}", w = widths[i])
                    }
                },
            )
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![t.title.to_string()];
    out.push(line(t.header.iter().enumerate().map(|(i, h)| (h.to_string(), i > 0)).collect()));
    out.push(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    out.extend(cells.into_iter().map(line));
    out.join("\n")
}

pub fn render_text(a: &AggregateReport) -> String {
    let mut s = tables(a).iter().map(render_table).collect::<Vec<_>>().join("\n\n");
    s.push('\n');
    s
}

/// Long-form CSV: one `table,row,column,value` record per cell.
pub fn render_csv(a: &AggregateReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["table", "row", "column", "value"]).expect("in-memory write");
    for t in tables(a) {
        for row in &t.rows {
            let key = row[0].raw();
            for (col, cell) in t.header.iter().zip(row).skip(1) {
                w.write_record([t.title, key.as_str(), col, cell.raw().as_str()]).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::aggregate;
    use crate::aggregate::tests::session;
    use drawbench_core::evaluator::ErrorKind;

    fn sample() -> AggregateReport {
        aggregate(&[
            session("a", Difficulty::Easy, 1.0, None, &[], &[]),
            session("b", Difficulty::Hard, 0.7, Some(0.95), &[ErrorKind::LogicError], &[]),
        ])
    }

    #[test]
    fn text_has_every_block() {
        let s = render_text(&sample());
        for title in [
            "Overall Performance",
            "Performance by Difficulty",
            "Performance by Category",
            "Improvement Distribution",
            "Error Frequency and Reduction",
            "Performance by Model",
        ] {
            assert!(s.contains(&format!("{title}\n")), "{title}");
        }
        let block = s.split("\n\n").find(|b| b.starts_with("Performance by Difficulty")).unwrap();
        assert_eq!(block.lines().count(), 3 + 4);
        assert!(block.contains("Very Hard"));
        assert!(s.contains("Average Score           0.850   0.975\n"), "{s}");
        let logic = s.lines().find(|l| l.starts_with("LOGIC_ERROR")).unwrap();
        assert_eq!(logic.split_whitespace().collect::<Vec<_>>(), ["LOGIC_ERROR", "1", "0", "-100.0%"]);
        assert!(s.contains("Large (>0.10)"));
    }

    #[test]
    fn csv_is_long_form() {
        let s = render_csv(&sample());
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
        assert!(rows.iter().all(|r| r.len() == 4));
        let find = |t: &str, row: &str, col: &str| {
            rows.iter().find(|r| &r[0] == t && &r[1] == row && &r[2] == col).map(|r| r[3].to_string())
        };
        assert_eq!(find("Overall Performance", "Average Score", "Turn 1").as_deref(), Some("0.85"));
        assert_eq!(find("Performance by Difficulty", "Very Hard", "Sessions").as_deref(), Some("0"));
        assert_eq!(find("Error Frequency and Reduction", "LOGIC_ERROR", "Change").as_deref(), Some("-100"));
        assert_eq!(find("Error Frequency and Reduction", "SYNTAX_ERROR", "Change").as_deref(), Some(""));
    }
}
