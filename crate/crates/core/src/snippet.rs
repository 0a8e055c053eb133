//! Incomplete-file sampling: random line sub-sequences of test files, with
//! ground-truth labels restricted from the parent oracle.
//!
//! A snippet is generally an invalid derivation, so it can only be scored
//! against the parent's labels. Tokens straddling the selected line range
//! have no defined token rule inside the snippet and are dropped whole.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::oracle::OracleRecord;
use crate::token::Heta;

/// Snippet line-count distribution: a rounded normal, resampled into
/// `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthParams {
    pub mean: f64,
    pub sd: f64,
    pub min: usize,
    pub max: usize,
}

impl LengthParams {
    pub fn new(mean: f64, sd: f64, min: usize, max: usize) -> Self {
        assert!(min >= 1 && min <= max, "need 1 <= min <= max");
        assert!(sd >= 0.0 && sd.is_finite());
        assert!(mean.is_finite());
        LengthParams { mean, sd, min, max }
    }
}

/// Observed line counts of Java snippets on Q&A sites; the demonstration
/// language is Java-like, so these are the defaults.
pub const JAVA_LENGTHS: LengthParams = LengthParams {
    mean: 17.00,
    sd: 28.75,
    min: 1,
    max: 1117,
};

/// One integer draw: sample the normal, round to nearest, resample while
/// outside `[min, max]`.
pub fn draw_length(params: &LengthParams, rng: &mut impl Rng) -> usize {
    let normal = Normal::new(params.mean, params.sd).expect("validated params");
    for _ in 0..10_000_000u64 {
        let drawn = normal.sample(rng).round();
        if drawn >= params.min as f64 && drawn <= params.max as f64 {
            return drawn as usize;
        }
    }
    panic!("length distribution rejected every draw; check params");
}

/// A line range extracted from a parent record, with labels rebased to the
/// snippet's character 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnippetRecord {
    pub parent: String,
    /// First and last line, 0-based inclusive.
    pub lines: (usize, usize),
    pub chars: String,
    pub hetas: Vec<Heta>,
}

impl SnippetRecord {
    /// Converts to an oracle record with id `parent#first-last#n`.
    pub fn into_record(self, n: usize) -> OracleRecord {
        OracleRecord {
            id: format!("{}#{}-{}#{n}", self.parent, self.lines.0, self.lines.1),
            chars: self.chars,
            hetas: self.hetas,
        }
    }
}

/// Draws `count` snippets from `records`, files and line ranges sampled with
/// replacement. Target lengths clamp to the file's line count; snippets with
/// zero whole tokens are discarded and redrawn.
pub fn sample_snippets(
    records: &[OracleRecord],
    count: usize,
    params: &LengthParams,
    seed: u64,
) -> Vec<SnippetRecord> {
    assert!(!records.is_empty(), "cannot sample from an empty test set");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if let Some(snippet) = draw_one(records, params, &mut rng) {
            out.push(snippet);
        }
    }
    out
}

fn draw_one(
    records: &[OracleRecord],
    params: &LengthParams,
    rng: &mut impl Rng,
) -> Option<SnippetRecord> {
    let file = &records[rng.random_range(0..records.len())];
    let lines = line_spans(&file.chars);
    if lines.is_empty() {
        return None;
    }
    let len = draw_length(params, rng).min(lines.len());
    let first = rng.random_range(0..=lines.len() - len);
    let last = first + len - 1;
    let start = lines[first].0;
    let end = lines[last].1; // exclusive

    let hetas: Vec<Heta> = file
        .hetas
        .iter()
        .filter(|h| h.start >= start && h.end < end)
        .map(|h| Heta {
            start: h.start - start,
            end: h.end - start,
            text: h.text.clone(),
            rule: h.rule,
            class: h.class,
        })
        .collect();
    if hetas.is_empty() {
        return None;
    }

    Some(SnippetRecord {
        parent: file.id.clone(),
        lines: (first, last),
        chars: char_substring(&file.chars, start, end),
        hetas,
    })
}

/// Character spans `(start, end_exclusive)` of each line, newline excluded.
fn line_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0usize;
    let mut pos = 0usize;
    for c in text.chars() {
        if c == '\n' {
            spans.push((start, pos));
            start = pos + 1;
        }
        pos += 1;
    }
    if start < pos {
        spans.push((start, pos));
    }
    spans
}

fn char_substring(text: &str, start: usize, end: usize) -> String {
    text.chars().skip(start).take(end - start).collect()
}
