//! Embedded session blocks: extraction, checking and in-place fixing.
//!
//! Two block syntaxes are recognized:
//!
//! ````text
//! ```repl label=intro
//! >> 1 + 1
//! 2
//! ```
//!
//! \begin{repltest}{intro}
//! >> 1 + 1
//! 2
//! \end{repltest}
//! ````
//!
//! Lines starting with `>> ` are inputs; the lines up to the next prompt are
//! the expected output. Blocks sharing a label share one interpreter
//! environment, in document order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::interp::Environment;
use crate::env::ManifestFile;

pub const PROMPT: &str = ">>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoctestError {
    #[error("line {line}: block is never closed")]
    UnterminatedBlock { line: usize },

    #[error("line {line}: block has no label")]
    MissingLabel { line: usize },

    #[error("document changed since it was checked")]
    StaleReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Syntax {
    Markdown,
    Latex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub input: String,
    /// 1-based line of the prompt.
    pub line: usize,
    pub expected: Vec<String>,
    /// Bytes of the expected lines, through the newline of the last
    /// non-blank one. Empty when nothing is expected.
    pub output_span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoctestBlock {
    pub label: String,
    pub syntax: Syntax,
    /// 1-based line of the opening marker.
    pub line: usize,
    /// Bytes from the opening marker through the closing marker line.
    pub span: Range<usize>,
    pub entries: Vec<Entry>,
}

/// A line with its byte range, excluding the newline.
struct Line<'a> {
    text: &'a str,
    start: usize,
    /// Offset just past the newline, or the end of the document.
    next: usize,
}

fn split_lines(doc: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < doc.len() {
        let end = doc[start..].find('\n').map_or(doc.len(), |i| start + i);
        let next = (end + 1).min(doc.len());
        out.push(Line {
            text: &doc[start..end],
            start,
            next: if end < doc.len() { next } else { end },
        });
        start = end + 1;
    }
    out
}

fn strip(line: &str) -> &str {
    line.trim_end()
}

fn prompt_input(line: &str) -> Option<&str> {
    let t = strip(line);
    if t == PROMPT {
        return Some("");
    }
    t.strip_prefix(">> ")
}

/// `Some(label)` for a ```` ```repl ```` opening fence; the label may be
/// missing.
fn markdown_open(line: &str) -> Option<Option<String>> {
    let rest = strip(line).strip_prefix("```repl")?;
    if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
        return None;
    }
    let label = rest
        .split_whitespace()
        .find_map(|attr| attr.strip_prefix("label="))
        .filter(|l| !l.is_empty())
        .map(str::to_string);
    Some(label)
}

fn latex_open(line: &str) -> Option<Option<String>> {
    let rest = strip(line).trim_start().strip_prefix(r"\begin{repltest}")?;
    let label = rest
        .strip_prefix('{')
        .and_then(|r| r.split_once('}'))
        .map(|(l, _)| l.trim())
        .filter(|l| !l.is_empty() && !l.contains(char::is_whitespace))
        .map(str::to_string);
    Some(label)
}

fn parse_entries(lines: &[Line<'_>], first_line: usize) -> Vec<Entry> {
    let mut entries: Vec<Entry> = Vec::new();
    for (k, line) in lines.iter().enumerate() {
        if let Some(input) = prompt_input(line.text) {
            entries.push(Entry {
                input: input.to_string(),
                line: first_line + k,
                expected: Vec::new(),
                output_span: line.next..line.next,
            });
        } else if let Some(entry) = entries.last_mut() {
            if !strip(line.text).is_empty() {
                // Blank lines in between are kept; trailing ones are not.
                let from = entry.output_span.start;
                let first = lines.iter().position(|l| l.start == from).unwrap_or(k);
                entry.expected = lines[first..=k].iter().map(|l| strip(l.text).to_string()).collect();
                entry.output_span = from..line.next;
            }
        }
    }
    entries
}

/// Finds all blocks in document order.
pub fn extract_blocks(doc: &str) -> Result<Vec<DoctestBlock>, DoctestError> {
    let lines = split_lines(doc);
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let text = lines[i].text;
        let (syntax, label) = if let Some(label) = markdown_open(text) {
            (Syntax::Markdown, label)
        } else if let Some(label) = latex_open(text) {
            (Syntax::Latex, label)
        } else if strip(text).trim_start().starts_with("```") {
            // Some other fenced block: skip it whole.
            let close = lines[i + 1..].iter().position(|l| strip(l.text).trim_start() == "```");
            i += close.map_or(lines.len(), |c| c + 2);
            continue;
        } else {
            i += 1;
            continue;
        };
        let line_no = i + 1;
        let label = label.ok_or(DoctestError::MissingLabel { line: line_no })?;
        let is_close = |t: &str| match syntax {
            Syntax::Markdown => strip(t) == "```",
            Syntax::Latex => strip(t).trim_start() == r"\end{repltest}",
        };
        let close = lines[i + 1..]
            .iter()
            .position(|l| is_close(l.text))
            .map(|c| i + 1 + c)
            .ok_or(DoctestError::UnterminatedBlock { line: line_no })?;
        blocks.push(DoctestBlock {
            label,
            syntax,
            line: line_no,
            span: lines[i].start..lines[close].next,
            entries: parse_entries(&lines[i + 1..close], line_no + 1),
        });
        i = close + 1;
    }
    Ok(blocks)
}

/// One mismatched output line; `None` marks a missing line on that side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineDiff {
    /// 1-based document line where the expected line is, or would go.
    pub line: usize,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl fmt::Display for LineDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &Option<String>| s.as_ref().map_or("<nothing>".to_string(), |s| format!("{s:?}"));
        write!(f, "line {}: expected {}, got {}", self.line, show(&self.expected), show(&self.actual))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockStatus {
    Pass,
    Fail(Vec<LineDiff>),
    /// An entry whose output did not match raised an error, or the prelude
    /// failed.
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockResult {
    pub label: String,
    pub line: usize,
    /// Actual output per entry; empty when the block did not run.
    pub actual: Vec<Vec<String>>,
    pub diffs: Vec<LineDiff>,
    pub status: BlockStatus,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    /// SHA-256 of the checked document.
    pub document_hash: String,
    pub results: Vec<BlockResult>,
    pub elapsed: Duration,
}

impl PartialEq for RunReport {
    fn eq(&self, other: &Self) -> bool {
        self.document_hash == other.document_hash && self.results == other.results
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub blocks: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

impl Totals {
    pub fn add(&mut self, other: Totals) {
        self.blocks += other.blocks;
        self.passed += other.passed;
        self.failed += other.failed;
        self.errored += other.errored;
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.blocks
    }
}

impl fmt::Display for Totals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} blocks, {} passed", self.blocks, self.passed)?;
        if self.failed > 0 {
            write!(f, ", {} failed", self.failed)?;
        }
        if self.errored > 0 {
            write!(f, ", {} errored", self.errored)?;
        }
        Ok(())
    }
}

impl RunReport {
    pub fn totals(&self) -> Totals {
        let mut t = Totals {
            blocks: self.results.len(),
            ..Totals::default()
        };
        for r in &self.results {
            match r.status {
                BlockStatus::Pass => t.passed += 1,
                BlockStatus::Fail(_) => t.failed += 1,
                BlockStatus::Error(_) => t.errored += 1,
            }
        }
        t
    }

    /// Human-readable findings for `name`; passing blocks are not listed.
    pub fn render_text(&self, name: &str) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.results {
            match &r.status {
                BlockStatus::Pass => {}
                BlockStatus::Fail(diffs) => {
                    out.push(format!("{name}:{} [{}] FAIL", r.line, r.label));
                    out.extend(diffs.iter().map(|d| format!("  {d}")));
                }
                BlockStatus::Error(msg) => {
                    out.push(format!("{name}:{} [{}] ERROR: {msg}", r.line, r.label));
                    out.extend(r.diffs.iter().map(|d| format!("  {d}")));
                }
            }
        }
        out
    }

    pub fn to_json(&self, name: &str) -> Json {
        let blocks: Vec<Json> = self
            .results
            .iter()
            .map(|r| {
                let (status, message) = match &r.status {
                    BlockStatus::Pass => ("pass", None),
                    BlockStatus::Fail(_) => ("fail", None),
                    BlockStatus::Error(m) => ("error", Some(m.clone())),
                };
                json!({
                    "label": r.label,
                    "line": r.line,
                    "status": status,
                    "message": message,
                    "diffs": r.diffs,
                })
            })
            .collect();
        json!({
            "path": name,
            "document_sha256": self.document_hash,
            "blocks": blocks,
            "totals": self.totals(),
            "elapsed_ms": self.elapsed.as_millis() as u64,
        })
    }
}

/// Settings shared by every label environment.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Statements run in each label's environment before its first block.
    pub prelude: Option<String>,
    /// Directory that relative `save`/`load` paths resolve against.
    pub base_dir: PathBuf,
    pub manifest: Option<ManifestFile>,
}

pub fn document_hash(doc: &str) -> String {
    hex::encode(Sha256::digest(doc.as_bytes()))
}

fn stripped(lines: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = lines.into_iter().map(|l| l.trim_end().to_string()).collect();
    while out.last().is_some_and(|l| l.is_empty()) {
        out.pop();
    }
    out
}

fn diff_entry(entry: &Entry, actual: &[String]) -> Vec<LineDiff> {
    let n = entry.expected.len().max(actual.len());
    (0..n)
        .filter_map(|k| {
            let e = entry.expected.get(k);
            let a = actual.get(k);
            (e != a).then(|| LineDiff {
                line: entry.line + 1 + k,
                expected: e.cloned(),
                actual: a.cloned(),
            })
        })
        .collect()
}

fn run_label(blocks: &[&DoctestBlock], options: &RunOptions) -> Vec<BlockResult> {
    let mut env = Environment::new(options.base_dir.clone());
    env.set_manifest(options.manifest.clone());
    let prelude_error = options
        .prelude
        .as_deref()
        .and_then(|src| env.run(src).error)
        .map(|e| format!("prelude: {e}"));

    blocks
        .iter()
        .map(|block| {
            let mut result = BlockResult {
                label: block.label.clone(),
                line: block.line,
                actual: Vec::new(),
                diffs: Vec::new(),
                status: BlockStatus::Pass,
            };
            if let Some(msg) = &prelude_error {
                result.status = BlockStatus::Error(msg.clone());
                return result;
            }
            let mut first_error = None;
            for entry in &block.entries {
                let out = env.run(&entry.input);
                let actual = stripped(out.rendered());
                let diffs = diff_entry(entry, &actual);
                if !diffs.is_empty() && first_error.is_none() {
                    first_error = out.error.map(|e| e.to_string());
                }
                result.diffs.extend(diffs);
                result.actual.push(actual);
            }
            result.status = match (result.diffs.is_empty(), first_error) {
                (true, _) => BlockStatus::Pass,
                (false, Some(msg)) => BlockStatus::Error(msg),
                (false, None) => BlockStatus::Fail(result.diffs.clone()),
            };
            result
        })
        .collect()
}

/// Runs every block. Each label gets its own environment, and labels run
/// concurrently; results come back in document order.
pub fn run_blocks(doc_hash: String, blocks: &[DoctestBlock], options: &RunOptions) -> RunReport {
    let start = Instant::now();
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, b) in blocks.iter().enumerate() {
        groups.entry(b.label.as_str()).or_default().push(i);
    }
    let mut slots: Vec<Option<BlockResult>> = vec![None; blocks.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = groups
            .values()
            .map(|idx| {
                let group: Vec<&DoctestBlock> = idx.iter().map(|&i| &blocks[i]).collect();
                let handle = s.spawn(move || run_label(&group, options));
                (idx.clone(), handle)
            })
            .collect();
        for (idx, handle) in handles {
            let results = handle.join().expect("label runner panicked");
            for (i, r) in idx.into_iter().zip(results) {
                slots[i] = Some(r);
            }
        }
    });
    RunReport {
        document_hash: doc_hash,
        results: slots.into_iter().map(|r| r.expect("every block ran")).collect(),
        elapsed: start.elapsed(),
    }
}

/// Extracts and runs the blocks of `doc`.
pub fn check_document(doc: &str, options: &RunOptions) -> Result<RunReport, DoctestError> {
    let blocks = extract_blocks(doc)?;
    Ok(run_blocks(document_hash(doc), &blocks, options))
}

/// Rewrites the expected output of every mismatched entry with the actual
/// output from `report`. All other bytes are kept.
pub fn fix_document(doc: &str, report: &RunReport) -> Result<String, DoctestError> {
    if document_hash(doc) != report.document_hash {
        return Err(DoctestError::StaleReport);
    }
    let blocks = extract_blocks(doc)?;
    if blocks.len() != report.results.len() {
        return Err(DoctestError::StaleReport);
    }
    let mut edits: Vec<(Range<usize>, String)> = Vec::new();
    for (block, result) in blocks.iter().zip(&report.results) {
        if result.actual.len() != block.entries.len() {
            continue;
        }
        for (entry, actual) in block.entries.iter().zip(&result.actual) {
            if &entry.expected != actual {
                let text: String = actual.iter().map(|l| format!("{l}\n")).collect();
                edits.push((entry.output_span.clone(), text));
            }
        }
    }
    let mut out = String::with_capacity(doc.len());
    let mut pos = 0;
    for (span, text) in edits {
        out.push_str(&doc[pos..span.start]);
        // A block whose last output line had no newline before the fence.
        if span.start > 0 && !doc[..span.start].ends_with('\n') {
            out.push('\n');
        }
        out.push_str(&text);
        pos = span.end;
    }
    out.push_str(&doc[pos..]);
    Ok(out)
}
