//! Prompt construction for both turns.

use drawbench_core::dataset::TaskSpec;
use drawbench_core::geometry::UiLayout;
use drawbench_core::samples;

/// Identifies the template text; recorded with every result.
pub const PROMPT_VERSION: u32 = 1;

const TEMPLATE: &str = include_str!("../assets/prompt.v1.txt");
const REVISION: &str = include_str!("../assets/revision.v1.txt");

/// Inputs for the second turn.
#[derive(Debug, Clone, Copy)]
pub struct Revision<'a> {
    pub previous_output: &'a str,
    pub feedback: &'a str,
}

/// Replaces `{key}` placeholders in one left-to-right pass, so substituted
/// text is never rescanned.
pub fn fill(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    'scan: while let Some(i) = rest.find('{') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        for (key, value) in vars {
            let token_len = key.len() + 2;
            if rest.len() >= token_len && rest[1..].starts_with(key) && rest.as_bytes()[token_len - 1] == b'}' {
                out.push_str(value);
                rest = &rest[token_len..];
                continue 'scan;
            }
        }
        out.push('{');
        rest = &rest[1..];
    }
    out.push_str(rest);
    out
}

/// Builds the prompt for turn 1 (`revision = None`) or turn 2.
pub fn build_prompt(task: &TaskSpec, layout: &UiLayout, revision: Option<Revision<'_>>) -> String {
    let tools: Vec<String> = layout
        .tools
        .iter()
        .map(|b| format!("- {}: {} (button {}x{})", b.tool, b.center, b.hit.width(), b.hit.height()))
        .collect();
    let colors: Vec<String> = layout.colors.iter().map(|s| format!("- {} {}: {}", s.name, s.color, s.center)).collect();
    let canvas = format!("{} ({}x{})", layout.canvas.rect(), layout.canvas.width, layout.canvas.height);
    let window = layout.window.to_string();
    let revision = revision
        .map(|r| fill(REVISION, &[("previous", r.previous_output.trim_end()), ("feedback", r.feedback)]))
        .unwrap_or_default();
    fill(
        TEMPLATE,
        &[
            ("window", &window),
            ("canvas", &canvas),
            ("tools", &tools.join("\n")),
            ("colors", &colors.join("\n")),
            ("example", samples::BLUE_RECTANGLE),
            ("task", &task.text),
            ("revision", &revision),
        ],
    )
}
