//! Wall-clock latency of the prediction path, on a monotonic clock.
//!
//! Per file: one discarded warmup call, then `reps` timed repetitions of
//! [`Highlighter::predict_only`] — no I/O, no output formatting inside the
//! timed region. The thread-local region flag lets writers and tests assert
//! that nothing else sneaks into a measurement.

use std::cell::Cell;
use std::time::Instant;

use crate::highlighter::Highlighter;
use crate::oracle::OracleRecord;
use crate::stats::Summary;

thread_local! {
    static TIMED_REGION: Cell<bool> = const { Cell::new(false) };
}

/// True while a latency measurement is running on this thread.
pub fn in_timed_region() -> bool {
    TIMED_REGION.with(|f| f.get())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    TIMED_REGION.with(|flag| flag.set(true));
    let start = Instant::now();
    let out = f();
    let nanos = start.elapsed().as_nanos() as u64;
    TIMED_REGION.with(|flag| flag.set(false));
    (out, nanos)
}

/// Latency distribution of one file's repetitions, in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingStats {
    pub reps: usize,
    pub mean_ns: f64,
    pub sd_ns: f64,
    pub min_ns: f64,
    pub median_ns: f64,
    pub max_ns: f64,
}

impl TimingStats {
    fn from_samples(samples: &[f64]) -> TimingStats {
        let s = Summary::from_values(samples);
        TimingStats {
            reps: s.count,
            mean_ns: s.mean,
            sd_ns: s.sd,
            min_ns: s.min,
            median_ns: s.median,
            max_ns: s.max,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileTiming {
    pub id: String,
    pub stats: TimingStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub per_file: Vec<FileTiming>,
    /// Distribution of the per-file median latencies, in nanoseconds.
    pub aggregate: Summary,
}

/// Times `highlighter` on every record, single-threaded. A failing
/// prediction still costs what it costs; the error itself is ignored.
pub fn time_highlighter(
    highlighter: &dyn Highlighter,
    records: &[OracleRecord],
    reps: usize,
) -> BenchOutcome {
    assert!(reps >= 1);
    let mut per_file = Vec::with_capacity(records.len());
    for record in records {
        let _ = highlighter.predict_only(&record.chars); // warmup, discarded
        let mut samples = Vec::with_capacity(reps);
        for _ in 0..reps {
            let (_, nanos) = timed(|| highlighter.predict_only(&record.chars));
            samples.push(nanos as f64);
        }
        per_file.push(FileTiming {
            id: record.id.clone(),
            stats: TimingStats::from_samples(&samples),
        });
    }
    let medians: Vec<f64> = per_file.iter().map(|f| f.stats.median_ns).collect();
    BenchOutcome {
        aggregate: Summary::from_values(&medians),
        per_file,
    }
}
