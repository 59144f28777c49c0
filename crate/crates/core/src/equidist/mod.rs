//! Eigenvalue datasets, the weighted counting function, its main-term
//! prediction, synthetic data and the `τ` source.

mod count;
mod dataset;
mod synth;
mod tau;

use thiserror::Error;

use crate::field::FieldError;
use crate::measures::MeasureError;

pub use count::{count, level_index, predict, run_report, Prediction, Report, ReportRow, ReportSummary};
pub use dataset::{parse_prime_intervals, Dataset, DatasetMeta, EigenRecord, Interval};
pub use synth::{sato_tate_table, synthesize, ArchimedeanSampler, InverseCdf, SynthSpec, TABLE_NODES};
pub use tau::{
    mul_sparse, pentagonal_terms, tau_lambda_exact, tau_source, tau_table, verify_hecke_identities, TauPrime,
    TauSource, DELTA_WEIGHT, TAU_LIMIT,
};

#[derive(Debug, Error)]
pub enum EquidistError {
    #[error("unknown prime label {0}")]
    UnknownPrime(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid interval {0}")]
    InvalidInterval(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("zero measure: {0}")]
    ZeroMass(String),
    #[error("covolume must be positive and finite, got {0}")]
    InvalidCovolume(f64),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("N = {requested} exceeds the limit {limit}")]
    Budget { requested: usize, limit: usize },
    #[error("Hecke identity failed: {0}")]
    HeckeIdentity(String),
    #[error("integer overflow at coefficient {0}")]
    Overflow(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Neumaier-compensated running sum. Partial sums merge by adding both
/// components, so the result does not depend on how records are split.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn merge(mut self, other: Neumaier) -> Neumaier {
        self.add(other.sum);
        self.add(other.comp);
        self
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    xs.for_each(|x| acc.add(x));
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs.iter().copied()), 2.0);
        let mut a = Neumaier::default();
        a.add(1e16);
        a.add(1.0);
        let mut b = Neumaier::default();
        b.add(-1e16);
        b.add(1.0);
        assert_eq!(a.merge(b).value(), 2.0);
    }
}
