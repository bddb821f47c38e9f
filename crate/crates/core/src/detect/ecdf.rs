use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Empirical CDF of one metric over one group of uploaders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdfSummary {
    pub metric: String,
    samples: Vec<f64>,
}

impl EcdfSummary {
    /// Non-finite samples are dropped.
    pub fn new(metric: impl Into<String>, samples: impl IntoIterator<Item = f64>) -> Self {
        let mut samples: Vec<f64> = samples.into_iter().filter(|v| v.is_finite()).collect();
        samples.sort_by(f64::total_cmp);
        EcdfSummary {
            metric: metric.into(),
            samples,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of samples `<= x`; 0 for an empty summary.
    pub fn eval(&self, x: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let k = self.samples.partition_point(|&s| s <= x);
        k as f64 / self.samples.len() as f64
    }

    /// Step points `(x, F(x))` at each distinct sample value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.samples.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &x) in self.samples.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = f,
                _ => out.push((x, f)),
            }
        }
        out
    }

    /// Two-column `x\tF(x)` table with a header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("x\tF(x)\n");
        for (x, f) in self.steps() {
            writeln!(out, "{x}\t{f}").unwrap();
        }
        out
    }
}
