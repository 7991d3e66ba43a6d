//! Finite checks of the inequalities linking ranges, word lengths,
//! complexity and entropy.
//!
//! Every audit returns an [`AuditReport`] carrying the measured sequences,
//! the fitted constants and a [`Verdict`]. On honestly measured data a
//! `Violation` means a bug somewhere upstream; the fabricated inputs in the
//! tests exist to show each detector fires. All logarithms are natural.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::blockcode::{self, BlockCode, RangeProfile, RangeTrend, TableBudget};
use crate::error::{Error, Result};
use crate::grouplab::DistortionProfile;
use crate::par::Exec;
use crate::shiftlang::{ComplexityProfile, ShiftPresentation};
use crate::trend::{self, Trend};

/// Relative tolerance on the fitted log-range constant.
pub const ENTROPY_TOLERANCE: f64 = 0.05;

/// Default floor for the liminf check of `P(n)/n^{d+1}`.
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    /// First failing index with both sides of the inequality there.
    Violation { index: u64, left: f64, right: f64 },
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, Verdict::Violation { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violation { .. } => "violation",
            Verdict::NotApplicable { .. } => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Which inequality, written out as `left <= right`.
    pub inequality: String,
    pub indices: Vec<u64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// Fitted constants; names carry their log base where one applies.
    pub constants: BTreeMap<String, f64>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl AuditReport {
    fn new(inequality: &str) -> Self {
        AuditReport {
            inequality: inequality.to_string(),
            indices: Vec::new(),
            left: Vec::new(),
            right: Vec::new(),
            constants: BTreeMap::new(),
            verdict: Verdict::Consistent,
            notes: Vec::new(),
        }
    }

    fn not_applicable(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::NotApplicable {
            reason: reason.into(),
        };
        self
    }

    /// Sets the verdict from the first index where `left > right + slack`.
    fn compare(mut self, slack: f64) -> Self {
        let bad = (0..self.indices.len()).find(|&i| self.left[i] > self.right[i] + slack);
        self.verdict = match bad {
            Some(i) => Verdict::Violation {
                index: self.indices[i],
                left: self.left[i],
                right: self.right[i],
            },
            None => Verdict::Consistent,
        };
        self
    }
}

/// `r(gᵐ) ≤ ℓ_S(gᵐ)·R_S` with `R_S` the largest generator range.
///
/// Word lengths that are upper bounds rather than exact still give a valid
/// (weaker) check. Both profiles must cover the same powers.
pub fn range_vs_wordlength_audit(
    generator_ranges: &[(String, usize)],
    g_range: &RangeProfile,
    word: &DistortionProfile,
) -> Result<AuditReport> {
    let mut report = AuditReport::new("r(g^m) <= l_S(g^m) * R_S");
    let range_idx: Vec<u64> = (1..=g_range.entries.len() as u64).collect();
    let word_idx: Vec<u64> = word.entries.iter().map(|e| e.n).collect();
    if range_idx != word_idx {
        return Err(Error::Alignment(format!(
            "range profile covers m = 1..={}, word profile covers {} powers",
            range_idx.len(),
            word_idx.len()
        )));
    }
    let r_s = generator_ranges
        .iter()
        .map(|g| g.1)
        .max()
        .ok_or_else(|| Error::InvalidArgument("empty generating set".into()))?;
    report.constants.insert("R_S".into(), r_s as f64);
    let mut bounds = 0;
    for (e, &r) in word.entries.iter().zip(&g_range.entries) {
        if e.length == u64::MAX {
            report.notes.push(format!("m={}: no word length known, skipped", e.n));
            continue;
        }
        if !e.exact {
            bounds += 1;
        }
        report.indices.push(e.n);
        report.left.push(r as f64);
        report.right.push(e.length as f64 * r_s as f64);
    }
    if bounds > 0 {
        report
            .notes
            .push(format!("{bounds} word lengths are upper bounds, not exact"));
    }
    Ok(report.compare(0.0))
}

/// `h_top ≥ 1/(2R)` for an infinite-order φ with `r(φᵐ) ≤ R·log m`.
///
/// `R` is the least constant over `m ≥ 2`. The entropy side is the
/// infimum of `log P(n)/n`, which bounds the entropy from above, so a
/// shortfall here is a shortfall of the true entropy too.
pub fn entropy_bound_audit(range: &RangeProfile, complexity: &ComplexityProfile) -> AuditReport {
    let report = AuditReport::new("1/(2R) <= h_top");
    if let Some(p) = range.finite_order {
        return report.not_applicable(format!("automorphism has finite order {p}"));
    }
    if range.fit.trend != Trend::Logarithmic {
        return report.not_applicable(format!(
            "range profile has no logarithmic fit (trend {:?})",
            range.fit.trend
        ));
    }
    if complexity.values.is_empty() {
        return report.not_applicable("empty complexity profile");
    }
    let points = range.points();
    let r = trend::log_constant(&points, 2);
    if r <= 0.0 {
        return report.not_applicable("range profile is identically zero past m = 1");
    }
    let bound = 1.0 / (2.0 * r);
    let mut report = report;
    report.constants.insert("R (natural log)".into(), r);
    report.constants.insert("1/(2R)".into(), bound);
    report
        .constants
        .insert("h_top upper estimate".into(), complexity.inf_estimate);
    if range.entries.first().is_some_and(|&r1| r1 > 0) {
        report
            .notes
            .push("r(phi) > 0 = R log 1, so the bound holds for m >= 2 only".into());
    }
    report.indices = (1..=complexity.values.len() as u64).collect();
    // left: the bound tolerated by the relative slack on R
    let tolerated = bound * (1.0 - ENTROPY_TOLERANCE);
    report.left = vec![tolerated; complexity.values.len()];
    report.right = complexity.entropy_estimates.clone();
    let mut report = report.compare(0.0);
    if let Verdict::Violation { .. } = report.verdict {
        // report at the infimum, the index that decides it
        report.verdict = Verdict::Violation {
            index: complexity.inf_at as u64,
            left: tolerated,
            right: complexity.inf_estimate,
        };
    }
    report
}

/// `min_{n ≤ N} P(n)/n^{d+1} ≥ ε₀` for φ with `r(φⁿ) = O(n^{1/d})`.
///
/// Applies when the range trend is sublinear and no slower than
/// `n^{1/d}`: `Polynomial(d')` with `d' ≥ d`, or `Logarithmic`. A linear
/// trend never qualifies, even for `d = 1`.
pub fn polynomial_bound_audit(
    range: &RangeProfile,
    complexity: &ComplexityProfile,
    d: u32,
    epsilon: f64,
) -> AuditReport {
    let report = AuditReport::new("epsilon <= P(n)/n^(d+1)");
    if d == 0 {
        return report.not_applicable("d must be positive");
    }
    if let Some(p) = range.finite_order {
        return report.not_applicable(format!("automorphism has finite order {p}"));
    }
    let fits = match range.fit.trend {
        Trend::Polynomial(found) => found >= d,
        Trend::Logarithmic => true,
        Trend::Linear | Trend::Inconclusive => false,
    };
    if !fits {
        return report.not_applicable(format!(
            "range trend {:?} is not O(n^(1/{d})) sublinear",
            range.fit.trend
        ));
    }
    let mut report = report;
    report.constants.insert("d".into(), f64::from(d));
    report.constants.insert("epsilon".into(), epsilon);
    report.indices = (1..=complexity.values.len() as u64).collect();
    report.left = vec![epsilon; complexity.values.len()];
    report.right = complexity
        .values
        .iter()
        .enumerate()
        .map(|(i, &p)| p as f64 / ((i + 1) as f64).powi(d as i32 + 1))
        .collect();
    if let Some((i, &min)) = report
        .right
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
    {
        report.constants.insert("min ratio".into(), min);
        report.constants.insert("argmin n".into(), (i + 1) as f64);
        report.verdict = if min < epsilon {
            Verdict::Violation {
                index: i as u64 + 1,
                left: epsilon,
                right: min,
            }
        } else {
            Verdict::Consistent
        };
    }
    report
}

/// `|j|·m ≤ r(σ^{jm})` over measured ranges `r(σ^{j}), r(σ^{2j}), …`.
pub fn sigma_power_check(j: i64, ranges: &[usize]) -> AuditReport {
    let mut report = AuditReport::new("|j| m <= r(sigma^(j m))");
    report.constants.insert("j".into(), j as f64);
    report.indices = (1..=ranges.len() as u64).collect();
    report.left = report
        .indices
        .iter()
        .map(|&m| (j.unsigned_abs() * m) as f64)
        .collect();
    report.right = ranges.iter().map(|&r| r as f64).collect();
    report.compare(0.0)
}

/// Measures the minimal ranges of `σ^{jm}` for `m = 1..=N` on `x` and
/// runs [`sigma_power_check`]. Finite shifts have no aperiodic point, so
/// the lower bound does not apply there.
pub fn sigma_power_range_audit(
    j: i64,
    x: Arc<ShiftPresentation>,
    max_m: usize,
    budget: TableBudget,
    exec: Exec,
) -> Result<AuditReport> {
    if j == 0 {
        return Err(Error::InvalidArgument("sigma power audit needs j != 0".into()));
    }
    if x.is_finite() {
        return Ok(AuditReport::new("|j| m <= r(sigma^(j m))")
            .not_applicable("shift is finite, so it has no aperiodic point"));
    }
    let code = BlockCode::shift_power(x, j, budget)?;
    let profile = blockcode::range_profile(&code, max_m, budget, exec)?;
    let mut report = sigma_power_check(j, &profile.entries);
    if let Some(t) = profile.truncated {
        report
            .notes
            .push(format!("truncated at m={} by the table budget", t.at));
    }
    if matches!(report.verdict, Verdict::Consistent)
        && report.left.iter().zip(&report.right).all(|(l, r)| l == r)
    {
        report.notes.push("equality at every m".into());
    }
    Ok(report)
}

/// Whether a range profile certifies linear growth.
pub fn is_linear(range: &RangeProfile) -> bool {
    matches!(range.trend, RangeTrend::LinearLowerBounded { .. })
}
