//! Cleaning of raw LLM generations.
//!
//! Code is pulled out of ``` or """ fenced blocks. Requirements lose leading
//! preamble lines, trailing summary lines and markdown markup. Both cleaners
//! are idempotent: feeding a cleaned text back in returns it unchanged.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CleanError {
    #[error("generation is empty after cleaning")]
    EmptyGeneration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputKind {
    Code,
    Requirement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanedOutput {
    pub text: String,
    pub kind: OutputKind,
    pub applied_rules: Vec<String>,
}

/// Keyword lists for preamble and summary detection, matched
/// case-insensitively at the start of a line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CleaningRules {
    pub preamble_keywords: Vec<String>,
    pub summary_keywords: Vec<String>,
    /// How many leading / trailing lines are inspected.
    pub window: usize,
}

impl Default for CleaningRules {
    fn default() -> Self {
        Self {
            preamble_keywords: ["sure", "here", "certainly", "below", "okay"]
                .map(String::from)
                .to_vec(),
            summary_keywords: ["in summary", "overall", "hope this", "this code", "note:"]
                .map(String::from)
                .to_vec(),
            window: 2,
        }
    }
}

fn fence_open() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"^\s*(```|""")\s*([\w#+.\-]*)\s*$"#).unwrap())
}

fn fence_close(token: &str) -> &'static Regex {
    static TICKS: OnceLock<Regex> = OnceLock::new();
    static QUOTES: OnceLock<Regex> = OnceLock::new();
    if token == "```" {
        TICKS.get_or_init(|| Regex::new(r"^\s*```\s*$").unwrap())
    } else {
        QUOTES.get_or_init(|| Regex::new(r#"^\s*"""\s*$"#).unwrap())
    }
}

/// Drops leading and trailing whitespace-only lines and trailing blanks on
/// every line.
fn tidy_block(lines: &[&str]) -> String {
    let first = lines.iter().position(|l| !l.trim().is_empty());
    let last = lines.iter().rposition(|l| !l.trim().is_empty());
    match (first, last) {
        (Some(a), Some(b)) => lines[a..=b]
            .iter()
            .map(|l| l.trim_end())
            .collect::<Vec<_>>()
            .join("\n"),
        _ => String::new(),
    }
}

fn scrub_fence_tokens(text: &str) -> (String, bool) {
    let mut out = text.to_string();
    let mut changed = false;
    while out.contains("```") || out.contains("\"\"\"") {
        out = out.replace("```", "").replace("\"\"\"", "");
        changed = true;
    }
    (out, changed)
}

pub fn extract_code(raw: &str) -> Result<CleanedOutput, CleanError> {
    let lines: Vec<&str> = raw.lines().collect();
    let mut blocks = Vec::new();
    let mut found_fence = false;
    let mut i = 0;
    while i < lines.len() {
        let Some(caps) = fence_open().captures(lines[i]) else {
            i += 1;
            continue;
        };
        found_fence = true;
        let close = fence_close(caps.get(1).unwrap().as_str());
        let body_start = i + 1;
        let mut j = body_start;
        while j < lines.len() && !close.is_match(lines[j]) {
            j += 1;
        }
        let body = tidy_block(&lines[body_start..j]);
        if !body.is_empty() {
            blocks.push(body);
        }
        i = j + 1;
    }

    let mut rules = Vec::new();
    let joined = if found_fence {
        rules.push("fenced-extract".to_string());
        if blocks.len() > 1 {
            rules.push("multi-fence-join".to_string());
        }
        blocks.join("\n\n")
    } else {
        rules.push("no-fence-passthrough".to_string());
        raw.to_string()
    };
    let (scrubbed, changed) = scrub_fence_tokens(&joined);
    if changed {
        rules.push("fence-token-scrub".to_string());
    }
    let text = scrubbed.trim().to_string();
    if text.is_empty() {
        return Err(CleanError::EmptyGeneration);
    }
    Ok(CleanedOutput {
        text,
        kind: OutputKind::Code,
        applied_rules: rules,
    })
}

fn starts_with_keyword(line: &str, keywords: &[String]) -> bool {
    let lower = line.trim().to_lowercase();
    keywords.iter().any(|k| {
        let k = k.to_lowercase();
        lower.starts_with(&k)
            && lower[k.len()..]
                .chars()
                .next()
                .map_or(true, |c| !c.is_alphanumeric() || !k.chars().last().is_some_and(char::is_alphanumeric))
    })
}

fn markdown_heading() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*#+\s*").unwrap())
}

fn markdown_bullet() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*[*\-+]\s+").unwrap())
}

fn strip_markdown(line: &str) -> String {
    if fence_open().is_match(line) {
        return String::new();
    }
    let line = markdown_heading().replace(line, "");
    let line = markdown_bullet().replace(&line, "");
    line.replace(['*', '`'], "").trim().to_string()
}

fn clean_requirement_once(text: &str, rules: &CleaningRules, applied: &mut Vec<String>) -> String {
    let mut lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();

    let mut dropped = 0;
    while dropped < rules.window && lines.first().is_some_and(|l| starts_with_keyword(l, &rules.preamble_keywords)) {
        lines.remove(0);
        dropped += 1;
    }
    if dropped > 0 {
        applied.push("preamble-removed".to_string());
    }

    let mut dropped = 0;
    while dropped < rules.window && lines.last().is_some_and(|l| starts_with_keyword(l, &rules.summary_keywords)) {
        lines.pop();
        dropped += 1;
    }
    if dropped > 0 {
        applied.push("summary-removed".to_string());
    }

    let stripped: Vec<String> = lines
        .iter()
        .map(|l| strip_markdown(l))
        .filter(|l| !l.is_empty())
        .collect();
    if stripped.len() != lines.len() || stripped.iter().zip(&lines).any(|(a, b)| a != b.trim()) {
        applied.push("markdown-stripped".to_string());
    }
    stripped.join("\n")
}

/// Repeats the cleaning pass until it reaches a fixpoint.
pub fn extract_requirement_with(raw: &str, rules: &CleaningRules) -> Result<CleanedOutput, CleanError> {
    let mut applied = Vec::new();
    let mut current = raw.trim().to_string();
    loop {
        let next = clean_requirement_once(&current, rules, &mut applied);
        if next == current || next.is_empty() {
            current = next;
            break;
        }
        current = next;
    }
    applied.dedup();
    if current.is_empty() {
        return Err(CleanError::EmptyGeneration);
    }
    Ok(CleanedOutput {
        text: current,
        kind: OutputKind::Requirement,
        applied_rules: applied,
    })
}

pub fn extract_requirement(raw: &str) -> Result<CleanedOutput, CleanError> {
    extract_requirement_with(raw, &CleaningRules::default())
}
