use super::{Classifier, Dataset, LearnError};
use crate::corpus::Safety;
use serde::{Deserialize, Serialize};

/// Confusion counts with unsafe as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub precision: f64,
    pub recall: f64,
    pub accuracy: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> EvalReport {
        EvalReport {
            tp,
            fp,
            fn_,
            tn,
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
            accuracy: ratio(tp + tn, tp + fp + fn_ + tn),
        }
    }

    /// Builds the report from (predicted, actual) pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Safety, Safety)>) -> EvalReport {
        let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
        for (pred, actual) in pairs {
            match (pred, actual) {
                (Safety::Unsafe, Safety::Unsafe) => tp += 1,
                (Safety::Unsafe, Safety::Safe) => fp += 1,
                (Safety::Safe, Safety::Unsafe) => fn_ += 1,
                (Safety::Safe, Safety::Safe) => tn += 1,
            }
        }
        EvalReport::from_counts(tp, fp, fn_, tn)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn evaluate(model: &dyn Classifier, test: &Dataset) -> Result<EvalReport, LearnError> {
    if test.is_empty() {
        return Err(LearnError::Empty);
    }
    if model.n_features() != test.dim() {
        return Err(LearnError::Dimension {
            expected: model.n_features(),
            found: test.dim(),
        });
    }
    Ok(EvalReport::from_pairs(
        test.rows()
            .iter()
            .zip(test.labels())
            .map(|(x, &y)| (model.predict(x), y)),
    ))
}
