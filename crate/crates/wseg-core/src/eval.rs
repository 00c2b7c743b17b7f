//! Segmentation scoring: match predicted word boxes against ground truth,
//! count over- and under-segmented words, and compute the success rate
//! `(T - (O + U)) * 100 / T`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::raster::Rect;

/// Coverage relation between predictions and truth.
///
/// A prediction covers a truth box when their intersection is at least half
/// of the truth box's area; the comparison is done in integer pixel areas,
/// so an exact half counts as covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchTable {
    /// For every truth box, the indices of predictions covering it.
    pub preds_covering_truth: Vec<Vec<usize>>,
    /// For every prediction, the indices of truth boxes it covers.
    pub truths_covered_by_pred: Vec<Vec<usize>>,
}

/// Build the coverage table between predicted and truth boxes.
pub fn match_boxes(pred: &[Rect], truth: &[Rect]) -> MatchTable {
    let mut preds_covering_truth = vec![Vec::new(); truth.len()];
    let mut truths_covered_by_pred = vec![Vec::new(); pred.len()];
    for (ti, t) in truth.iter().enumerate() {
        for (pi, p) in pred.iter().enumerate() {
            if 2 * t.intersection_area(p) >= t.area() {
                preds_covering_truth[ti].push(pi);
                truths_covered_by_pred[pi].push(ti);
            }
        }
    }
    MatchTable {
        preds_covering_truth,
        truths_covered_by_pred,
    }
}

/// Count over- and under-segmented truth words from a coverage table.
///
/// A truth box covered by two or more predictions was split (counts toward
/// O). A truth box whose single covering prediction also covers another
/// truth box was merged, and one covered by nothing was absorbed or dropped;
/// both count toward U. The categories are disjoint, so O + U never exceeds
/// the number of truth boxes.
pub fn count_errors(table: &MatchTable) -> (usize, usize) {
    let mut over = 0;
    let mut under = 0;
    for covering in &table.preds_covering_truth {
        match covering.len() {
            0 => under += 1,
            1 => {
                if table.truths_covered_by_pred[covering[0]].len() >= 2 {
                    under += 1;
                }
            }
            _ => over += 1,
        }
    }
    (over, under)
}

/// The success rate is undefined for an empty ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroTotal;

impl fmt::Display for ZeroTotal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ground truth contains no words")
    }
}

impl core::error::Error for ZeroTotal {}

/// `(T - (O + U)) * 100 / T` in hundredths of a percent, rounded half-up.
///
/// Integer arithmetic throughout, so the two-decimal value is exact.
pub fn success_rate_hundredths(total: usize, over: usize, under: usize) -> Result<u64, ZeroTotal> {
    if total == 0 {
        return Err(ZeroTotal);
    }
    assert!(over + under <= total, "more errors than truth words");
    let extracted = (total - over - under) as u64;
    let numerator = extracted * 10_000;
    Ok((2 * numerator + total as u64) / (2 * total as u64))
}

/// Success rate as a percentage with two-decimal precision.
pub fn success_rate(total: usize, over: usize, under: usize) -> Result<f64, ZeroTotal> {
    Ok(success_rate_hundredths(total, over, under)? as f64 / 100.0)
}

/// The scoring summary for one page or a whole corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalReport {
    pub total_truth: usize,
    pub extracted: usize,
    pub over_segmented: usize,
    pub under_segmented: usize,
    /// Success rate in hundredths of a percent (9188 = 91.88%).
    pub success_rate_hundredths: u64,
}

impl EvalReport {
    /// Assemble a report from raw counts.
    pub fn from_counts(total: usize, over: usize, under: usize) -> Result<EvalReport, ZeroTotal> {
        Ok(EvalReport {
            total_truth: total,
            extracted: total - over - under,
            over_segmented: over,
            under_segmented: under,
            success_rate_hundredths: success_rate_hundredths(total, over, under)?,
        })
    }

    pub fn success_rate_percent(&self) -> f64 {
        self.success_rate_hundredths as f64 / 100.0
    }

    /// The five-line `key: value` report text.
    pub fn to_report_string(&self) -> String {
        use alloc::format;
        format!("{self}")
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total_truth: {}", self.total_truth)?;
        writeln!(f, "extracted: {}", self.extracted)?;
        writeln!(f, "over_segmented: {}", self.over_segmented)?;
        writeln!(f, "under_segmented: {}", self.under_segmented)?;
        writeln!(
            f,
            "success_rate: {}.{:02}",
            self.success_rate_hundredths / 100,
            self.success_rate_hundredths % 100
        )
    }
}

/// Match, count, and score in one step.
pub fn evaluate(pred: &[Rect], truth: &[Rect]) -> Result<EvalReport, ZeroTotal> {
    let (over, under) = count_errors(&match_boxes(pred, truth));
    EvalReport::from_counts(truth.len(), over, under)
}
