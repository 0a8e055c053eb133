//! Descriptive statistics shared by corpus reports, accuracy summaries,
//! and the latency harness.

/// Mean, sample standard deviation, min, median, and max of a value set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Summary {
    /// Summarizes `values`; panics on an empty slice.
    pub fn from_values(values: &[f64]) -> Summary {
        assert!(!values.is_empty(), "cannot summarize zero values");
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            var.sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value"));
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Summary {
            count: n,
            mean,
            sd,
            min: sorted[0],
            median,
            max: sorted[n - 1],
        }
    }
}

/// Median of `values` without the rest of the summary.
pub fn median(values: &[f64]) -> f64 {
    Summary::from_values(values).median
}
