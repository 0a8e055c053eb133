//! Model persistence.
//!
//! A text header line carries the format version, front-end name, task,
//! shapes, and seed provenance:
//!
//! ```text
//! glint-model-v1 <frontend> <task> <vocab> <embed> <hidden> <bidi 0|1> <classes> <seed>
//! ```
//!
//! followed by the raw parameter blocks as little-endian f64, row-major, in
//! the same fixed order as [`Model::visit_params`]. The byte count must
//! match the header's shapes exactly; a truncated file never yields a
//! partial model.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Dims, Model};
use crate::minilang::FRONTEND_NAME;
use crate::task::CoverageTask;

const MAGIC: &str = "glint-model-v1";

#[derive(Debug, thiserror::Error)]
pub enum ModelIoError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad model header: {0}")]
    BadHeader(String),
    #[error("weight payload is {found} bytes, header shapes require {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("model head has {classes} classes but task {task} needs {expected}")]
    TaskMismatch {
        task: CoverageTask,
        classes: usize,
        expected: usize,
    },
}

/// A model together with the task and seed it was trained for.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    pub model: Model,
    pub task: CoverageTask,
    pub seed: u64,
}

pub fn save_model(
    path: &Path,
    model: &Model,
    task: CoverageTask,
    seed: u64,
) -> Result<(), ModelIoError> {
    let d = &model.dims;
    let mut out = File::create(path)?;
    writeln!(
        out,
        "{MAGIC} {FRONTEND_NAME} {} {} {} {} {} {} {seed}",
        task.name(),
        d.vocab,
        d.embed,
        d.hidden,
        if d.bidirectional { 1 } else { 0 },
        d.classes,
    )?;
    let mut bytes = Vec::with_capacity(model.param_count() * 8);
    model.visit_params(|block| {
        for v in block {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    });
    out.write_all(&bytes)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<SavedModel, ModelIoError> {
    let mut raw = Vec::new();
    File::open(path)?.read_to_end(&mut raw)?;

    let newline = raw
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| ModelIoError::BadHeader("missing header line".into()))?;
    let header = std::str::from_utf8(&raw[..newline])
        .map_err(|_| ModelIoError::BadHeader("header is not UTF-8".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 9 || fields[0] != MAGIC {
        return Err(ModelIoError::BadHeader(format!("unrecognized header {header:?}")));
    }
    if fields[1] != FRONTEND_NAME {
        return Err(ModelIoError::BadHeader(format!(
            "model was trained for front-end {:?}",
            fields[1]
        )));
    }
    let task = CoverageTask::from_name(fields[2])
        .ok_or_else(|| ModelIoError::BadHeader(format!("unknown task {:?}", fields[2])))?;
    let parse = |s: &str, what: &str| -> Result<usize, ModelIoError> {
        s.parse()
            .map_err(|_| ModelIoError::BadHeader(format!("bad {what}: {s:?}")))
    };
    let dims = Dims {
        vocab: parse(fields[3], "vocab")?,
        embed: parse(fields[4], "embed")?,
        hidden: parse(fields[5], "hidden")?,
        bidirectional: match fields[6] {
            "0" => false,
            "1" => true,
            other => {
                return Err(ModelIoError::BadHeader(format!(
                    "bad bidirectional flag {other:?}"
                )))
            }
        },
        classes: parse(fields[7], "classes")?,
    };
    let seed: u64 = fields[8]
        .parse()
        .map_err(|_| ModelIoError::BadHeader(format!("bad seed {:?}", fields[8])))?;

    if dims.classes != task.class_count() {
        return Err(ModelIoError::TaskMismatch {
            task,
            classes: dims.classes,
            expected: task.class_count(),
        });
    }

    let payload = &raw[newline + 1..];
    let expected = dims.param_count() * 8;
    if payload.len() != expected {
        return Err(ModelIoError::ShapeMismatch {
            expected,
            found: payload.len(),
        });
    }

    let mut values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let mut model = Model::init(dims, 0);
    model.visit_params_mut(|block| {
        for slot in block {
            *slot = values.next().expect("length checked above");
        }
    });

    Ok(SavedModel { model, task, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::VOCAB_SIZE;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn some_model() -> Model {
        Model::init(
            Dims {
                vocab: VOCAB_SIZE,
                embed: 128,
                hidden: 16,
                classes: CoverageTask::T2.class_count(),
                bidirectional: true,
            },
            31,
        )
    }

    #[test]
    fn round_trip_predicts_identically() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.glm");
        let model = some_model();
        save_model(&path, &model, CoverageTask::T2, 31).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded.task, CoverageTask::T2);
        assert_eq!(loaded.seed, 31);
        assert_eq!(loaded.model, model);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let len = rng.random_range(1..40);
            let inputs: Vec<usize> = (0..len).map(|_| rng.random_range(0..VOCAB_SIZE)).collect();
            assert_eq!(
                loaded.model.predict(&inputs).unwrap(),
                model.predict(&inputs).unwrap()
            );
        }
    }

    #[test]
    fn truncated_file_yields_no_partial_model() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.glm");
        let model = some_model();
        save_model(&path, &model, CoverageTask::T2, 31).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 16);
        std::fs::write(&path, bytes).unwrap();
        assert!(matches!(
            load_model(&path),
            Err(ModelIoError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn header_task_must_match_head_width() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.glm");
        let model = some_model(); // 8-class head, T2
        save_model(&path, &model, CoverageTask::T2, 31).unwrap();
        // forge the header to claim T4: the 12-class task cannot own an
        // 8-class head
        let bytes = std::fs::read(&path).unwrap();
        let newline = bytes.iter().position(|&b| b == b'\n').unwrap();
        let header = String::from_utf8(bytes[..newline].to_vec()).unwrap();
        let forged = header.replace(" T2 ", " T4 ");
        let mut out = forged.into_bytes();
        out.push(b'\n');
        out.extend_from_slice(&bytes[newline + 1..]);
        std::fs::write(&path, out).unwrap();
        assert!(matches!(
            load_model(&path),
            Err(ModelIoError::TaskMismatch { .. })
        ));
    }

    #[test]
    fn garbage_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.glm");
        std::fs::write(&path, "not-a-model\n").unwrap();
        assert!(matches!(load_model(&path), Err(ModelIoError::BadHeader(_))));
    }
}
