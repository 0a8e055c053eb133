//! CSV outputs: per-file rows plus the summary tables.
//!
//! Accuracy values print with six fixed decimals so identical runs produce
//! byte-identical files. Writers refuse to run inside a timed region.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::timing::{in_timed_region, BenchOutcome};
use crate::stats::Summary;
use crate::task::CoverageTask;

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub id: String,
    pub approach: String,
    pub task: CoverageTask,
    pub accuracy: f64,
}

fn open(path: &Path) -> std::io::Result<BufWriter<File>> {
    debug_assert!(
        !in_timed_region(),
        "CSV writes must stay out of latency measurements"
    );
    Ok(BufWriter::new(File::create(path)?))
}

/// `id,approach,task,accuracy` — one row per evaluated file.
pub fn write_accuracy_csv(path: &Path, rows: &[AccuracyRow]) -> std::io::Result<()> {
    let mut out = open(path)?;
    writeln!(out, "id,approach,task,accuracy")?;
    for r in rows {
        writeln!(out, "{},{},{},{:.6}", r.id, r.approach, r.task, r.accuracy)?;
    }
    out.flush()
}

/// `approach,task,mean,sd,min,median,max` — one row per (approach, task).
pub fn write_accuracy_summary_csv(
    path: &Path,
    rows: &[(String, CoverageTask, Summary)],
) -> std::io::Result<()> {
    let mut out = open(path)?;
    writeln!(out, "approach,task,mean,sd,min,median,max")?;
    for (approach, task, s) in rows {
        writeln!(
            out,
            "{approach},{task},{:.6},{:.6},{:.6},{:.6},{:.6}",
            s.mean, s.sd, s.min, s.median, s.max
        )?;
    }
    out.flush()
}

/// `id,approach,reps,mean_ns,sd_ns,min_ns,median_ns,max_ns` per file,
/// one block of rows per approach.
pub fn write_latency_csv(
    path: &Path,
    outcomes: &[(String, BenchOutcome)],
) -> std::io::Result<()> {
    let mut out = open(path)?;
    writeln!(out, "id,approach,reps,mean_ns,sd_ns,min_ns,median_ns,max_ns")?;
    for (approach, outcome) in outcomes {
        for f in &outcome.per_file {
            let s = &f.stats;
            writeln!(
                out,
                "{},{approach},{},{:.0},{:.0},{:.0},{:.0},{:.0}",
                f.id, s.reps, s.mean_ns, s.sd_ns, s.min_ns, s.median_ns, s.max_ns
            )?;
        }
    }
    out.flush()
}

/// `approach,mean_ns,sd_ns,min_ns,median_ns,max_ns` over per-file medians.
pub fn write_latency_summary_csv(
    path: &Path,
    rows: &[(String, Summary)],
) -> std::io::Result<()> {
    let mut out = open(path)?;
    writeln!(out, "approach,mean_ns,sd_ns,min_ns,median_ns,max_ns")?;
    for (approach, s) in rows {
        writeln!(
            out,
            "{approach},{:.0},{:.0},{:.0},{:.0},{:.0}",
            s.mean, s.sd, s.min, s.median, s.max
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_csv_layout_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("acc.csv");
        let rows = vec![
            AccuracyRow {
                id: "g000001".into(),
                approach: "brnn16".into(),
                task: CoverageTask::T4,
                accuracy: 1.0,
            },
            AccuracyRow {
                id: "g000002".into(),
                approach: "regex".into(),
                task: CoverageTask::T1,
                accuracy: 0.8662,
            },
        ];
        write_accuracy_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "id,approach,task,accuracy\n\
             g000001,brnn16,T4,1.000000\n\
             g000002,regex,T1,0.866200\n"
        );
        // identical rows, identical bytes
        let again = dir.path().join("acc2.csv");
        write_accuracy_csv(&again, &rows).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    }

    #[test]
    fn summary_csv_has_the_table_schema() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.csv");
        let s = Summary::from_values(&[0.5, 1.0, 0.75]);
        write_accuracy_summary_csv(&path, &[("rnn16".into(), CoverageTask::T2, s)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("approach,task,mean,sd,min,median,max"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("rnn16,T2,0.750000,"));
        assert!(row.ends_with(",0.500000,0.750000,1.000000"));
    }
}
