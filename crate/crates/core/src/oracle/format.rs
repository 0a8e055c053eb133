//! The `oracle-v1` on-disk format.
//!
//! Line 1: `oracle-v1 <frontend-name> <vocab-size>`. Every following line is
//! one JSON object `{"id":…, "chars":…, "toks":[[i_s,i_e,"text",tr,hc],…]}`.
//! Reading re-validates span ordering, span bounds, text lengths, and class
//! codes, so a hand-edited file cannot smuggle in a malformed record.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::class::HighlightClass;
use crate::minilang::{FRONTEND_NAME, VOCAB_SIZE};
use crate::token::{Heta, TokenRuleId};

use super::OracleRecord;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Malformed {
            line,
            message: message.into(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RecordLine {
    id: String,
    chars: String,
    toks: Vec<(usize, usize, String, u16, u8)>,
}

/// Writes `records` to `path` in `oracle-v1` format.
pub fn write_oracle(path: &Path, records: &[OracleRecord]) -> Result<(), FormatError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "oracle-v1 {FRONTEND_NAME} {VOCAB_SIZE}")?;
    for record in records {
        let line = RecordLine {
            id: record.id.clone(),
            chars: record.chars.clone(),
            toks: record
                .hetas
                .iter()
                .map(|h| (h.start, h.end, h.text.clone(), h.rule.0, h.class.code()))
                .collect(),
        };
        serde_json::to_writer(&mut out, &line)
            .map_err(|e| FormatError::at(0, format!("serialization failed: {e}")))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads and validates an `oracle-v1` file.
pub fn read_oracle(path: &Path) -> Result<Vec<OracleRecord>, FormatError> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::at(1, "empty file"))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() != Some(&"oracle-v1") {
        return Err(FormatError::at(1, format!("bad version header {header:?}")));
    }
    if fields.len() != 3 || fields[1] != FRONTEND_NAME {
        return Err(FormatError::at(
            1,
            format!("unsupported front-end in header {header:?}"),
        ));
    }
    let vocab: usize = fields[2]
        .parse()
        .map_err(|_| FormatError::at(1, "vocabulary size is not a number"))?;
    if vocab != VOCAB_SIZE {
        return Err(FormatError::at(
            1,
            format!("vocabulary size {vocab} does not match this front-end ({VOCAB_SIZE})"),
        ));
    }

    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: RecordLine = serde_json::from_str(&line)
            .map_err(|e| FormatError::at(line_no, format!("invalid record JSON: {e}")))?;
        records.push(validate(parsed, line_no)?);
    }
    Ok(records)
}

fn validate(line: RecordLine, line_no: usize) -> Result<OracleRecord, FormatError> {
    let char_len = line.chars.chars().count();
    let mut hetas = Vec::with_capacity(line.toks.len());
    let mut prev_end: Option<usize> = None;

    for (start, end, text, rule, hc) in line.toks {
        if start > end {
            return Err(FormatError::at(line_no, format!("inverted span {start}..{end}")));
        }
        if end >= char_len {
            return Err(FormatError::at(
                line_no,
                format!("span {start}..{end} exceeds text length {char_len}"),
            ));
        }
        if let Some(pe) = prev_end {
            if start <= pe {
                return Err(FormatError::at(
                    line_no,
                    format!("overlapping or unordered span at {start}"),
                ));
            }
        }
        prev_end = Some(end);
        if text.chars().count() != end - start + 1 {
            return Err(FormatError::at(
                line_no,
                format!("token text length does not match span {start}..{end}"),
            ));
        }
        if rule as usize >= VOCAB_SIZE {
            return Err(FormatError::at(line_no, format!("token rule {rule} out of range")));
        }
        let class = HighlightClass::from_code(hc)
            .ok_or_else(|| FormatError::at(line_no, format!("class code {hc} out of range")))?;
        hetas.push(Heta {
            start,
            end,
            text,
            rule: TokenRuleId(rule),
            class,
        });
    }

    Ok(OracleRecord {
        id: line.id,
        chars: line.chars,
        hetas,
    })
}
