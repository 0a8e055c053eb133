//! Building, deduplicating, splitting, and persisting highlighting oracles.

mod folds;
mod format;

pub use folds::{read_folds, split_folds, write_folds, FoldSplit};
pub use format::{read_oracle, write_oracle, FormatError};

use std::collections::HashSet;
use std::path::PathBuf;

use crate::minilang::{bf_highlight, generate_program};
use crate::stats::Summary;
use crate::token::Heta;

/// One source file with its reference highlighting: the unit of training
/// and evaluation. Classes are full-coverage; narrower tasks are derived
/// with the task adapter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRecord {
    pub id: String,
    pub chars: String,
    pub hetas: Vec<Heta>,
}

impl OracleRecord {
    /// The token-rule sequence, the dedup key and the model input.
    pub fn rule_seq(&self) -> Vec<u16> {
        self.hetas.iter().map(|h| h.rule.0).collect()
    }

    pub fn char_len(&self) -> usize {
        self.chars.chars().count()
    }
}

/// Where corpus candidates come from.
#[derive(Debug, Clone)]
pub enum CorpusSource {
    /// Grammar-driven generation: candidate `i` uses seed `seed + i`.
    Generator { seed: u64, budget: usize },
    /// Source files from a directory, in lexicographic order.
    Directory(PathBuf),
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("source exhausted: {accepted} valid files of {target} requested ({skipped} skipped)")]
    SourceExhausted {
        accepted: usize,
        target: usize,
        skipped: usize,
    },
    #[error("cannot read source directory: {0}")]
    Io(#[from] std::io::Error),
}

/// Outcome counters of a corpus build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildReport {
    /// Candidates that failed to lex or parse.
    pub skipped: usize,
    /// Candidates dropped as duplicate token-rule sequences.
    pub duplicates: usize,
}

/// Builds `target` unique records by running the reference highlighter over
/// candidates from `source`. Candidates that fail to lex or parse are
/// skipped and counted; duplicate token-rule sequences are dropped before
/// counting toward the target, so the result holds `target` distinct
/// structures.
pub fn build_corpus(
    source: &CorpusSource,
    target: usize,
) -> Result<(Vec<OracleRecord>, BuildReport), BuildError> {
    assert!(target >= 1, "target must be at least 1");
    let mut state = BuildState {
        records: Vec::with_capacity(target),
        seen: HashSet::with_capacity(target),
        report: BuildReport {
            skipped: 0,
            duplicates: 0,
        },
    };

    match source {
        CorpusSource::Generator { seed, budget } => {
            let mut candidate = 0u64;
            while state.records.len() < target {
                let chars = generate_program(seed.wrapping_add(candidate), *budget);
                state.accept(format!("g{candidate:06}"), chars);
                candidate += 1;
            }
        }
        CorpusSource::Directory(dir) => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
                .map(|e| e.map(|e| e.path()))
                .collect::<Result<_, _>>()?;
            paths.sort();
            for path in paths {
                if state.records.len() >= target {
                    break;
                }
                if !path.is_file() {
                    continue;
                }
                let chars = std::fs::read_to_string(&path)?;
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "file".to_string());
                state.accept(id, chars);
            }
            if state.records.len() < target {
                return Err(BuildError::SourceExhausted {
                    accepted: state.records.len(),
                    target,
                    skipped: state.report.skipped,
                });
            }
        }
    }

    Ok((state.records, state.report))
}

struct BuildState {
    records: Vec<OracleRecord>,
    seen: HashSet<Vec<u16>>,
    report: BuildReport,
}

impl BuildState {
    fn accept(&mut self, id: String, chars: String) {
        match bf_highlight(&chars) {
            Ok(hetas) => {
                let key: Vec<u16> = hetas.iter().map(|h| h.rule.0).collect();
                if self.seen.insert(key) {
                    self.records.push(OracleRecord { id, chars, hetas });
                } else {
                    self.report.duplicates += 1;
                }
            }
            Err(_) => {
                self.report.skipped += 1;
            }
        }
    }
}

/// Keeps the first record of each distinct token-rule sequence; order is
/// otherwise preserved. Texts are ignored, so structurally equal files
/// collapse to one.
pub fn dedup(records: Vec<OracleRecord>) -> Vec<OracleRecord> {
    let mut seen: HashSet<Vec<u16>> = HashSet::with_capacity(records.len());
    records
        .into_iter()
        .filter(|r| seen.insert(r.rule_seq()))
        .collect()
}

/// Corpus shape statistics: characters, whitespace characters, lines, and
/// tokens per record.
#[derive(Debug, Clone, Copy)]
pub struct CorpusStats {
    pub chars: Summary,
    pub whitespaces: Summary,
    pub lines: Summary,
    pub tokens: Summary,
}

pub fn corpus_stats(records: &[OracleRecord]) -> CorpusStats {
    let collect = |f: &dyn Fn(&OracleRecord) -> f64| -> Vec<f64> { records.iter().map(f).collect() };
    CorpusStats {
        chars: Summary::from_values(&collect(&|r| r.char_len() as f64)),
        whitespaces: Summary::from_values(&collect(&|r| {
            r.chars.chars().filter(|c| c.is_whitespace()).count() as f64
        })),
        lines: Summary::from_values(&collect(&|r| r.chars.lines().count() as f64)),
        tokens: Summary::from_values(&collect(&|r| r.hetas.len() as f64)),
    }
}
