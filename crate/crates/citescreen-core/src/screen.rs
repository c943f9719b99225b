//! Evidence-bearing screening reports for (editor, journal) pairs and for
//! whole journals.
//!
//! A report never accuses: it states which findings triggered, with the
//! numbers and citing documents behind each one, and combines them into a
//! verdict. Patterns are "potentially coercive" at most — single findings
//! only elevate, converging findings flag.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::author::AuthorId;
use crate::corpus::{Corpus, PubId};
use crate::metrics::{
    h_index_series, journal_self_citation_rate, post_appointment_share, HVariant,
};
use crate::pipeline::{author_items, run_pipeline, CollectionChain, PipelineError};
use crate::stats::{build_contingency, chi_square};

/// Thresholds for every finding. Serialized into each report so a reader
/// can always see what the verdict was measured against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScreeningConfig {
    /// A single citing document carrying at least this many focal items is
    /// a citation overdose.
    pub overdose_threshold: u32,
    /// Flag when this share of in-journal citations arrives after the
    /// editorial appointment.
    pub post_appointment_share_flag: f64,
    /// Flag when the journal supplies this share of all received citations.
    pub in_journal_share_flag: f64,
    /// Flag when the final-year h-index drops by at least this much once
    /// the journal's citations are excluded.
    pub h_divergence_flag: u64,
    /// Journal self-citation rate at or above this is elevated.
    pub journal_rate_warn: f64,
    /// Journal self-citation rate above this is flagged.
    pub journal_rate_suspend: f64,
    /// Significance level for the issue-type association test.
    pub alpha: f64,
    /// Share- and association-findings are skipped below this many
    /// qualifying events; tiny samples say nothing either way.
    pub min_in_journal_events: usize,
}

impl Default for ScreeningConfig {
    fn default() -> Self {
        ScreeningConfig {
            overdose_threshold: 6,
            post_appointment_share_flag: 0.95,
            in_journal_share_flag: 0.33,
            h_divergence_flag: 2,
            journal_rate_warn: 0.33,
            journal_rate_suspend: 0.50,
            alpha: 0.05,
            min_in_journal_events: 20,
        }
    }
}

impl ScreeningConfig {
    pub fn validate(&self) -> Result<(), ScreenError> {
        let fractions = [
            ("post_appointment_share_flag", self.post_appointment_share_flag),
            ("in_journal_share_flag", self.in_journal_share_flag),
            ("journal_rate_warn", self.journal_rate_warn),
            ("journal_rate_suspend", self.journal_rate_suspend),
            ("alpha", self.alpha),
        ];
        for (name, value) in fractions {
            if !(value > 0.0 && value <= 1.0) {
                return Err(ScreenError::FractionOutOfRange { name, value });
            }
        }
        if self.journal_rate_warn > self.journal_rate_suspend {
            return Err(ScreenError::WarnAboveSuspend {
                warn: self.journal_rate_warn,
                suspend: self.journal_rate_suspend,
            });
        }
        if self.overdose_threshold < 1 {
            return Err(ScreenError::ZeroOverdoseThreshold);
        }
        Ok(())
    }
}

/// Screening outcome, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Neutral,
    Elevated,
    Flagged,
}

impl Verdict {
    /// Process exit code convention: 0 neutral, 2 elevated, 3 flagged.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Neutral => 0,
            Verdict::Elevated => 2,
            Verdict::Flagged => 3,
        }
    }
}

/// One evaluated flag with its numeric evidence and the citing documents
/// involved. A skipped finding never triggers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub flag: String,
    pub triggered: bool,
    pub skipped: bool,
    pub values: BTreeMap<String, f64>,
    pub citing_pubs: Vec<PubId>,
    pub note: Option<String>,
}

impl Finding {
    fn evaluated(flag: &str, triggered: bool) -> Self {
        Finding {
            flag: flag.into(),
            triggered,
            skipped: false,
            values: BTreeMap::new(),
            citing_pubs: Vec::new(),
            note: None,
        }
    }

    fn skipped(flag: &str, note: String) -> Self {
        Finding {
            flag: flag.into(),
            triggered: false,
            skipped: true,
            values: BTreeMap::new(),
            citing_pubs: Vec::new(),
            note: Some(note),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.into(), value);
        self
    }
}

/// What a report screens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Subject {
    Editor { author: AuthorId, journal_id: String },
    Journal { journal_id: String, window: Option<(i32, i32)> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreeningReport {
    pub subject: Subject,
    pub config: ScreeningConfig,
    pub findings: Vec<Finding>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScreenError {
    #[error("config: `{name}` = {value} outside (0, 1]")]
    FractionOutOfRange { name: &'static str, value: f64 },
    #[error("config: journal_rate_warn {warn} above journal_rate_suspend {suspend}")]
    WarnAboveSuspend { warn: f64, suspend: f64 },
    #[error("config: overdose_threshold must be at least 1")]
    ZeroOverdoseThreshold,
    #[error("journal `{0}` has no publications in the corpus")]
    UnknownJournal(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Citing documents in Collection E whose reference lists carry at least
/// `threshold` distinct focal-author items.
pub fn detect_overdose(
    chain: &CollectionChain,
    corpus: &Corpus,
    focal: &AuthorId,
    threshold: u32,
) -> Vec<PubId> {
    let items = author_items(corpus, focal);
    chain
        .coll_e
        .iter()
        .filter(|citing| {
            let record = corpus
                .publication(citing)
                .expect("collection E entries resolve");
            let count = record
                .references
                .iter()
                .filter(|r| items.contains(*r))
                .collect::<alloc::collections::BTreeSet<_>>()
                .len() as u32;
            count >= threshold
        })
        .cloned()
        .collect()
}

fn combine(findings: &[Finding]) -> Verdict {
    match findings.iter().filter(|f| f.triggered).count() {
        0 => Verdict::Neutral,
        1 => Verdict::Elevated,
        _ => Verdict::Flagged,
    }
}

/// Screen an (editor, journal) pair: run the collection chain and evaluate
/// the five editor findings. Requires a tenure on record.
pub fn screen_editor(
    corpus: &Corpus,
    focal: &AuthorId,
    journal_id: &str,
    config: &ScreeningConfig,
) -> Result<ScreeningReport, ScreenError> {
    config.validate()?;
    let chain = run_pipeline(corpus, focal, journal_id)?;
    let mut findings = Vec::with_capacity(5);

    // (a) share of in-journal citations arriving after the appointment
    findings.push(if chain.coll_a_in_journal < config.min_in_journal_events {
        Finding::skipped(
            "post_appointment_share",
            alloc::format!(
                "{} in-journal citation events, below the minimum of {}",
                chain.coll_a_in_journal, config.min_in_journal_events
            ),
        )
    } else {
        let share = post_appointment_share(&chain).unwrap_or(0.0);
        Finding::evaluated(
            "post_appointment_share",
            share >= config.post_appointment_share_flag,
        )
        .with("share", share)
        .with("collection_b", chain.coll_b.len() as f64)
        .with("in_journal_collection_a", chain.coll_a_in_journal as f64)
    });

    // (b) how much of the author's total citation record the journal supplies
    findings.push(if chain.coll_a.is_empty() {
        Finding::skipped("in_journal_share", "no citations received".into())
    } else {
        let share = chain.coll_a_in_journal as f64 / chain.coll_a.len() as f64;
        Finding::evaluated("in_journal_share", share >= config.in_journal_share_flag)
            .with("share", share)
            .with("in_journal_collection_a", chain.coll_a_in_journal as f64)
            .with("collection_a", chain.coll_a.len() as f64)
    });

    // (c) final-year h-index drop once the journal's citations are excluded
    findings.push(match corpus.year_span() {
        None => Finding::skipped("h_index_divergence", "corpus is empty".into()),
        Some((from, to)) => {
            let all = h_index_series(corpus, focal, from..=to, &HVariant::All);
            let excluding = h_index_series(
                corpus,
                focal,
                from..=to,
                &HVariant::ExcludingJournal(journal_id.into()),
            );
            let h_all = all.final_value().unwrap_or(0);
            let h_excluding = excluding.final_value().unwrap_or(0);
            let divergence = h_all.saturating_sub(h_excluding);
            Finding::evaluated("h_index_divergence", divergence >= config.h_divergence_flag)
                .with("h_all", h_all as f64)
                .with("h_excluding_journal", h_excluding as f64)
                .with("divergence", divergence as f64)
        }
    });

    // (d) association between issue type and focal-reference counts
    findings.push(if chain.coll_e.len() < config.min_in_journal_events {
        Finding::skipped(
            "issue_type_association",
            alloc::format!(
                "{} citing documents in collection E, below the minimum of {}",
                chain.coll_e.len(), config.min_in_journal_events
            ),
        )
    } else {
        match build_contingency(&chain, corpus, focal).and_then(|t| chi_square(&t, config.alpha)) {
            Ok(result) => Finding::evaluated("issue_type_association", result.significant)
                .with("statistic", result.statistic)
                .with("df", result.df as f64)
                .with("p_value", result.p_value),
            Err(err) => Finding::skipped(
                "issue_type_association",
                alloc::format!("test not applicable: {err}"),
            ),
        }
    });

    // (e) citation overdoses
    let overdose = detect_overdose(&chain, corpus, focal, config.overdose_threshold);
    let mut finding = Finding::evaluated("citation_overdose", !overdose.is_empty())
        .with("count", overdose.len() as f64)
        .with("threshold", config.overdose_threshold as f64);
    finding.citing_pubs = overdose;
    findings.push(finding);

    let verdict = combine(&findings);
    Ok(ScreeningReport {
        subject: Subject::Editor {
            author: focal.clone(),
            journal_id: journal_id.into(),
        },
        config: config.clone(),
        findings,
        verdict,
    })
}

/// Screen a journal's self-citation rate inside an optional year window.
pub fn screen_journal(
    corpus: &Corpus,
    journal_id: &str,
    window: Option<(i32, i32)>,
    config: &ScreeningConfig,
) -> Result<ScreeningReport, ScreenError> {
    config.validate()?;
    if !corpus.has_journal(journal_id) {
        return Err(ScreenError::UnknownJournal(journal_id.into()));
    }
    let rate = journal_self_citation_rate(corpus, journal_id, window.map(|(a, b)| a..=b));
    let findings = match rate {
        None => alloc::vec![
            Finding::skipped(
                "self_citation_rate_warn",
                "journal received no citations in the window".into(),
            ),
            Finding::skipped(
                "self_citation_rate_suspend",
                "journal received no citations in the window".into(),
            ),
        ],
        Some(rate) => alloc::vec![
            Finding::evaluated("self_citation_rate_warn", rate >= config.journal_rate_warn)
                .with("rate", rate)
                .with("threshold", config.journal_rate_warn),
            Finding::evaluated(
                "self_citation_rate_suspend",
                rate > config.journal_rate_suspend,
            )
            .with("rate", rate)
            .with("threshold", config.journal_rate_suspend),
        ],
    };
    let verdict = combine(&findings);
    Ok(ScreeningReport {
        subject: Subject::Journal {
            journal_id: journal_id.into(),
            window,
        },
        config: config.clone(),
        findings,
        verdict,
    })
}
