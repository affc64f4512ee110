//! Confusion counts and balanced accuracy.

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("label vectors differ in length ({truth} vs {pred})")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("empty label vector")]
    Empty,
    #[error("label {0} is not binary")]
    NotBinary(u8),
    #[error("undefined balanced accuracy: a class is absent from the ground truth")]
    UndefinedBalancedAccuracy,
}

/// Counts for the positive class `1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    #[inline]
    pub fn record(&mut self, truth: bool, pred: bool) {
        match (truth, pred) {
            (true, true) => self.true_pos += 1,
            (true, false) => self.false_neg += 1,
            (false, true) => self.false_pos += 1,
            (false, false) => self.true_neg += 1,
        }
    }

    pub fn balanced_accuracy(&self) -> Result<f64, MetricsError> {
        balanced_accuracy(self)
    }
}

pub fn confusion(truth: &[u8], pred: &[u8]) -> Result<ConfusionMatrix, MetricsError> {
    if truth.len() != pred.len() {
        return Err(MetricsError::LengthMismatch {
            truth: truth.len(),
            pred: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in truth.iter().zip(pred) {
        for label in [t, p] {
            if label > 1 {
                return Err(MetricsError::NotBinary(label));
            }
        }
        cm.record(t == 1, p == 1);
    }
    Ok(cm)
}

/// ½ (TP / (TP + FN) + TN / (TN + FP)).
pub fn balanced_accuracy(cm: &ConfusionMatrix) -> Result<f64, MetricsError> {
    let positives = cm.true_pos + cm.false_neg;
    let negatives = cm.true_neg + cm.false_pos;
    if positives == 0 || negatives == 0 {
        return Err(MetricsError::UndefinedBalancedAccuracy);
    }
    Ok(0.5 * (cm.true_pos as f64 / positives as f64 + cm.true_neg as f64 / negatives as f64))
}
