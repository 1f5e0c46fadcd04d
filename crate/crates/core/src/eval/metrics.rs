use serde::{Deserialize, Serialize};

use super::EvalError;

/// Per-category TP/FP/FN counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionAccumulator {
    pub tp: Vec<u64>,
    pub fp: Vec<u64>,
    pub fn_: Vec<u64>,
    pub total: u64,
}

impl ConfusionAccumulator {
    pub fn new(categories: usize) -> Self {
        ConfusionAccumulator { tp: vec![0; categories], fp: vec![0; categories], fn_: vec![0; categories], total: 0 }
    }

    pub fn categories(&self) -> usize {
        self.tp.len()
    }

    pub fn add(&mut self, truth: usize, pred: usize) -> Result<(), EvalError> {
        let c = self.categories();
        if truth >= c || pred >= c {
            return Err(EvalError::CategoryOutOfRange { category: truth.max(pred), categories: c });
        }
        if truth == pred {
            self.tp[truth] += 1;
        } else {
            self.fn_[truth] += 1;
            self.fp[pred] += 1;
        }
        self.total += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &ConfusionAccumulator) {
        for (a, b) in self.tp.iter_mut().zip(&other.tp) {
            *a += b;
        }
        for (a, b) in self.fp.iter_mut().zip(&other.fp) {
            *a += b;
        }
        for (a, b) in self.fn_.iter_mut().zip(&other.fn_) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn report(&self) -> ClassificationReport {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let rows: Vec<CategoryRow> = (0..self.categories())
            .map(|c| {
                let precision = ratio(self.tp[c], self.tp[c] + self.fp[c]);
                let recall = ratio(self.tp[c], self.tp[c] + self.fn_[c]);
                let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
                CategoryRow { category: c, precision, recall, f1, support: self.tp[c] + self.fn_[c] }
            })
            .collect();
        let k = rows.len().max(1) as f64;
        let macro_avg = Averages {
            precision: rows.iter().map(|r| r.precision).sum::<f64>() / k,
            recall: rows.iter().map(|r| r.recall).sum::<f64>() / k,
            f1: rows.iter().map(|r| r.f1).sum::<f64>() / k,
        };
        let support: u64 = rows.iter().map(|r| r.support).sum();
        let weighted = |f: fn(&CategoryRow) -> f64| {
            if support == 0 {
                0.0
            } else {
                rows.iter().map(|r| r.support as f64 * f(r)).sum::<f64>() / support as f64
            }
        };
        let weighted_avg = Averages {
            precision: weighted(|r| r.precision),
            recall: weighted(|r| r.recall),
            f1: weighted(|r| r.f1),
        };
        ClassificationReport {
            accuracy: ratio(self.tp.iter().sum(), self.total),
            total: self.total,
            rows,
            macro_avg,
            weighted_avg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryRow {
    pub category: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Rows sorted by category id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub rows: Vec<CategoryRow>,
    pub accuracy: f64,
    pub total: u64,
    pub macro_avg: Averages,
    pub weighted_avg: Averages,
}

pub fn classification_report(
    y_true: &[usize],
    y_pred: &[usize],
    categories: usize,
) -> Result<ClassificationReport, EvalError> {
    if y_true.len() != y_pred.len() {
        return Err(EvalError::LengthMismatch { truth: y_true.len(), pred: y_pred.len() });
    }
    let mut acc = ConfusionAccumulator::new(categories);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        acc.add(t, p)?;
    }
    Ok(acc.report())
}

/// Support-weighted mean F1.
pub fn weighted_f1(report: &ClassificationReport) -> Result<f64, EvalError> {
    weighted_f1_over(report.rows.iter())
}

/// Weighted F1 with one category (typically "other") left out.
pub fn weighted_f1_excluding(report: &ClassificationReport, excluded: usize) -> Result<f64, EvalError> {
    weighted_f1_over(report.rows.iter().filter(|r| r.category != excluded))
}

fn weighted_f1_over<'a>(rows: impl Iterator<Item = &'a CategoryRow>) -> Result<f64, EvalError> {
    let (num, den) = rows.fold((0.0, 0u64), |(n, d), r| (n + r.support as f64 * r.f1, d + r.support));
    if den == 0 {
        return Err(EvalError::EmptyReport);
    }
    Ok(num / den as f64)
}

/// Paper-style aligned text table.
pub fn format_report(report: &ClassificationReport, names: &[String]) -> String {
    let name = |c: usize| names.get(c).cloned().unwrap_or_else(|| c.to_string());
    let width = (0..report.rows.len()).map(|c| name(c).chars().count()).max().unwrap_or(0).max(12);
    let mut out = format!(
        "{:>width$} {:>9} {:>9} {:>9} {:>9}\n\n",
        "",
        "precision",
        "recall",
        "f1-score",
        "support"
    );
    for r in &report.rows {
        out += &format!(
            "{:>width$} {:>9.2} {:>9.2} {:>9.2} {:>9}\n",
            name(r.category),
            r.precision,
            r.recall,
            r.f1,
            r.support
        );
    }
    out += &format!("\n{:>width$} {:>9} {:>9} {:>9.2} {:>9}\n", "accuracy", "", "", report.accuracy, report.total);
    for (label, avg) in [("macro avg", report.macro_avg), ("weighted avg", report.weighted_avg)] {
        out += &format!(
            "{:>width$} {:>9.2} {:>9.2} {:>9.2} {:>9}\n",
            label, avg.precision, avg.recall, avg.f1, report.total
        );
    }
    out
}
