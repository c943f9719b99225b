//! Issue-type × reference-count contingency tables and the Pearson
//! chi-square test of independence.
//!
//! The statistic is the uncorrected Pearson sum Σ (O−E)²/E (no Yates
//! continuity correction) and the p-value comes from the upper tail of the
//! chi-square distribution via the regularized incomplete gamma function,
//! implemented here directly so results do not depend on an external
//! statistics library.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::author::AuthorId;
use crate::corpus::{Corpus, IssueType, PubId};
use crate::pipeline::{author_items, CollectionChain};

/// Expected cell counts below this trigger a warning (not an error).
pub const LOW_EXPECTED_CELL: f64 = 5.0;

/// Reference-count bins, given as ascending lower bounds. The default
/// `[1, 2, 3]` produces the bins {exactly 1, exactly 2, 3 or more}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinSpec {
    starts: Vec<u32>,
}

impl Default for BinSpec {
    fn default() -> Self {
        BinSpec { starts: vec![1, 2, 3] }
    }
}

impl BinSpec {
    pub fn new(starts: Vec<u32>) -> Result<Self, StatsError> {
        if starts.is_empty() || starts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StatsError::InvalidBins);
        }
        Ok(BinSpec { starts })
    }

    /// Index of the bin holding `count`, or `None` below the first bin.
    pub fn bin_of(&self, count: u32) -> Option<usize> {
        self.starts.iter().rposition(|&s| count >= s)
    }

    /// Column labels: closed bins as `lo` or `lo-hi`, the last bin open as
    /// `lo+`.
    pub fn labels(&self) -> Vec<String> {
        let mut labels = Vec::with_capacity(self.starts.len());
        for (i, &lo) in self.starts.iter().enumerate() {
            match self.starts.get(i + 1) {
                Some(&next) if next == lo + 1 => labels.push(lo.to_string()),
                Some(&next) => labels.push(alloc::format!("{lo}-{}", next - 1)),
                None => labels.push(alloc::format!("{lo}+")),
            }
        }
        labels
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }
}

/// Observed counts of row category × column category, with labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub observed: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        observed: Vec<Vec<u64>>,
    ) -> Result<Self, StatsError> {
        if observed.len() != row_labels.len()
            || observed.iter().any(|row| row.len() != col_labels.len())
        {
            return Err(StatsError::ShapeMismatch);
        }
        Ok(ContingencyTable { row_labels, col_labels, observed })
    }

    pub fn rows(&self) -> usize {
        self.observed.len()
    }

    pub fn cols(&self) -> usize {
        self.observed.first().map_or(0, Vec::len)
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.observed.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.cols())
            .map(|c| self.observed.iter().map(|r| r[c]).sum())
            .collect()
    }

    pub fn grand_total(&self) -> u64 {
        self.observed.iter().flatten().sum()
    }
}

/// Pearson test outcome at a fixed significance level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub alpha: f64,
    pub significant: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("table shape does not match its labels")]
    ShapeMismatch,
    #[error("bins must be non-empty and strictly ascending")]
    InvalidBins,
    #[error("table is empty (grand total 0)")]
    EmptyTable,
    #[error("test needs at least 2 rows and 2 columns")]
    DegenerateShape,
    #[error("row `{0}` is all zero, its expected counts are undefined")]
    DegenerateRow(String),
    #[error("column `{0}` is all zero, its expected counts are undefined")]
    DegenerateColumn(String),
    #[error("citing publication `{0}` carries no focal references; collection E cannot contain it")]
    ZeroFocalReferences(PubId),
    #[error("reference count {count} of `{citing}` falls below the first bin")]
    CountBelowBins { citing: PubId, count: u32 },
}

/// Build the issue-type × reference-count-bin table over Collection E: for
/// each citing document, count the distinct focal-author items in its
/// reference list and bin that count. Self and semi-self citers were
/// already removed in steps 6–7.
pub fn build_contingency(
    chain: &CollectionChain,
    corpus: &Corpus,
    focal: &AuthorId,
) -> Result<ContingencyTable, StatsError> {
    build_contingency_binned(chain, corpus, focal, &BinSpec::default())
}

/// [`build_contingency`] with explicit bins.
pub fn build_contingency_binned(
    chain: &CollectionChain,
    corpus: &Corpus,
    focal: &AuthorId,
    bins: &BinSpec,
) -> Result<ContingencyTable, StatsError> {
    let items = author_items(corpus, focal);
    let mut observed = vec![vec![0u64; bins.len()]; 2];
    for citing in &chain.coll_e {
        let record = corpus
            .publication(citing)
            .expect("collection E entries resolve");
        let count = record
            .references
            .iter()
            .filter(|r| items.contains(*r))
            .collect::<BTreeSet<_>>()
            .len() as u32;
        if count == 0 {
            return Err(StatsError::ZeroFocalReferences(citing.clone()));
        }
        let col = bins.bin_of(count).ok_or(StatsError::CountBelowBins {
            citing: citing.clone(),
            count,
        })?;
        let row = match record.issue_type {
            IssueType::Regular => 0,
            IssueType::Special => 1,
        };
        observed[row][col] += 1;
    }
    ContingencyTable::new(
        vec!["regular".into(), "special".into()],
        bins.labels(),
        observed,
    )
}

/// Pearson chi-square test of independence on an r×c table.
///
/// Expected counts are `rowTotal × colTotal / grandTotal`; an all-zero row
/// or column makes them undefined and is rejected, naming the margin. Low
/// expected counts (< 5) produce warnings but still test.
pub fn chi_square(table: &ContingencyTable, alpha: f64) -> Result<ChiSquareResult, StatsError> {
    if table.rows() < 2 || table.cols() < 2 {
        return Err(StatsError::DegenerateShape);
    }
    let grand = table.grand_total();
    if grand == 0 {
        return Err(StatsError::EmptyTable);
    }
    let row_totals = table.row_totals();
    let col_totals = table.col_totals();
    if let Some(r) = row_totals.iter().position(|&t| t == 0) {
        return Err(StatsError::DegenerateRow(table.row_labels[r].clone()));
    }
    if let Some(c) = col_totals.iter().position(|&t| t == 0) {
        return Err(StatsError::DegenerateColumn(table.col_labels[c].clone()));
    }

    let grand = grand as f64;
    let mut statistic = 0.0;
    let mut warnings = Vec::new();
    for (r, row) in table.observed.iter().enumerate() {
        for (c, &obs) in row.iter().enumerate() {
            let expected = row_totals[r] as f64 * col_totals[c] as f64 / grand;
            if expected < LOW_EXPECTED_CELL {
                warnings.push(alloc::format!(
                    "expected count {expected:.2} in cell ({}, {}) is below {LOW_EXPECTED_CELL}",
                    table.row_labels[r], table.col_labels[c],
                ));
            }
            let diff = obs as f64 - expected;
            statistic += diff * diff / expected;
        }
    }

    let df = (table.rows() as u32 - 1) * (table.cols() as u32 - 1);
    let p_value = chi_square_pvalue(statistic, df);
    Ok(ChiSquareResult {
        statistic,
        df,
        p_value,
        alpha,
        significant: p_value <= alpha,
        warnings,
    })
}

/// Upper-tail probability `Q(df/2, x/2)` of the chi-square distribution.
///
/// Computed through the regularized incomplete gamma function with the
/// standard split: series expansion below `a + 1`, continued fraction
/// above, both iterated to a 1e-12 step tolerance. For `df = 2` this
/// reduces to `exp(-x/2)`.
pub fn chi_square_pvalue(statistic: f64, df: u32) -> f64 {
    debug_assert!(df >= 1, "degrees of freedom must be positive");
    if statistic <= 0.0 {
        return 1.0;
    }
    reg_gamma_upper(df as f64 / 2.0, statistic / 2.0)
}

const GAMMA_EPS: f64 = 1e-12;
const GAMMA_MAX_ITER: usize = 700;
const FPMIN: f64 = 1e-300;

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x ≥ 0.
fn reg_gamma_upper(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        (1.0 - lower_series(a, x)).clamp(0.0, 1.0)
    } else {
        upper_continued_fraction(a, x).clamp(0.0, 1.0)
    }
}

/// P(a, x) by series: converges fast for x < a + 1.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..GAMMA_MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if libm::fabs(term) < libm::fabs(sum) * GAMMA_EPS {
            break;
        }
    }
    sum * libm::exp(-x + a * libm::log(x) - ln_gamma(a))
}

/// Q(a, x) by modified Lentz continued fraction: converges fast for
/// x ≥ a + 1.
fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if libm::fabs(d) < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if libm::fabs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if libm::fabs(del - 1.0) < GAMMA_EPS {
            break;
        }
    }
    libm::exp(-x + a * libm::log(x) - ln_gamma(a)) * h
}

/// Natural log of the gamma function for positive arguments (Lanczos, g=7).
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > 0.0);
    let z = x - 1.0;
    let mut sum = 0.999_999_999_999_809_93;
    for (i, &c) in COEFFS.iter().enumerate() {
        sum += c / (z + i as f64 + 1.0);
    }
    let t = z + 7.5;
    0.5 * libm::log(2.0 * core::f64::consts::PI) + (z + 0.5) * libm::log(t) - t + libm::log(sum)
}
