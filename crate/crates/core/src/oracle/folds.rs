//! Fold assignment: rotating thirds for testing, 90/10 train/validation on
//! the rest. Splits are deterministic per seed and persisted as id lists so
//! every model trains and scores on identical data.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FormatError, OracleRecord};

/// One fold: disjoint test / train / validation id sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSplit {
    pub fold: usize,
    pub test: Vec<String>,
    pub train: Vec<String>,
    pub validation: Vec<String>,
}

/// Shuffles record ids once with `seed`, then assigns shuffled position `j`
/// to test fold `j % n_folds`. Per fold, the remaining ids split into
/// train and validation (one tenth, rounded down).
pub fn split_folds(records: &[OracleRecord], n_folds: usize, seed: u64) -> Vec<FoldSplit> {
    assert!(n_folds >= 1);
    assert!(
        records.len() >= n_folds,
        "need at least one record per fold"
    );
    let mut ids: Vec<&str> = records.iter().map(|r| r.id.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    (0..n_folds)
        .map(|fold| {
            let mut test = Vec::new();
            let mut rest = Vec::new();
            for (j, id) in ids.iter().enumerate() {
                if j % n_folds == fold {
                    test.push(id.to_string());
                } else {
                    rest.push(id.to_string());
                }
            }
            let n_val = rest.len() / 10;
            let split_at = rest.len() - n_val;
            let validation = rest.split_off(split_at);
            FoldSplit {
                fold,
                test,
                train: rest,
                validation,
            }
        })
        .collect()
}

/// Writes `fold<k>.test`, `fold<k>.train`, `fold<k>.val` under `dir`, one
/// record id per line.
pub fn write_folds(dir: &Path, folds: &[FoldSplit]) -> Result<(), FormatError> {
    fs::create_dir_all(dir)?;
    for fold in folds {
        for (suffix, ids) in [
            ("test", &fold.test),
            ("train", &fold.train),
            ("val", &fold.validation),
        ] {
            let path = dir.join(format!("fold{}.{suffix}", fold.fold));
            let mut body = ids.join("\n");
            if !body.is_empty() {
                body.push('\n');
            }
            fs::write(path, body)?;
        }
    }
    Ok(())
}

/// Reads fold files `fold0..foldN` back from `dir`.
pub fn read_folds(dir: &Path, n_folds: usize) -> Result<Vec<FoldSplit>, FormatError> {
    let read_ids = |path: &Path| -> Result<Vec<String>, FormatError> {
        Ok(fs::read_to_string(path)?
            .lines()
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect())
    };
    (0..n_folds)
        .map(|fold| {
            Ok(FoldSplit {
                fold,
                test: read_ids(&dir.join(format!("fold{fold}.test")))?,
                train: read_ids(&dir.join(format!("fold{fold}.train")))?,
                validation: read_ids(&dir.join(format!("fold{fold}.val")))?,
            })
        })
        .collect()
}
