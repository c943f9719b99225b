//! h-index values, time-resolved h-index series with journal-exclusion
//! variants, per-year citation series split by venue, and journal
//! self-citation rates.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::author::AuthorId;
use crate::corpus::Corpus;
use crate::pipeline::{collection_a, CitationEvent, CollectionChain};

/// Largest `h` such that at least `h` of the counts are ≥ `h`.
pub fn h_index(citation_counts: &[u64]) -> u64 {
    let mut sorted = citation_counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|(rank, &count)| count >= *rank as u64 + 1)
        .count() as u64
}

/// Which citations an h-index series counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "journal_id", rename_all = "snake_case")]
pub enum HVariant {
    /// Citations from anywhere.
    All,
    /// Citations from anywhere except the named journal.
    ExcludingJournal(String),
}

impl HVariant {
    fn keeps(&self, event: &CitationEvent) -> bool {
        match self {
            HVariant::All => true,
            HVariant::ExcludingJournal(journal) => event.citing_journal != *journal,
        }
    }
}

/// Year-indexed h-index values. Non-decreasing in year, since citations
/// only accumulate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HIndexSeries {
    pub focal: AuthorId,
    pub variant: HVariant,
    pub values: BTreeMap<i32, u64>,
}

impl HIndexSeries {
    /// Value at the last year of the series.
    pub fn final_value(&self) -> Option<u64> {
        self.values.values().next_back().copied()
    }
}

/// h-index per year: for year `y`, counts citations whose citing document
/// is dated in year `y` or earlier (months are ignored at this
/// granularity). The excluding variant discards events from the named
/// journal.
pub fn h_index_series(
    corpus: &Corpus,
    focal: &AuthorId,
    years: RangeInclusive<i32>,
    variant: &HVariant,
) -> HIndexSeries {
    // Per cited item, the (sorted) years of its qualifying citations.
    let mut citation_years: BTreeMap<crate::corpus::PubId, Vec<i32>> = BTreeMap::new();
    for event in collection_a(corpus, focal) {
        if variant.keeps(&event) {
            citation_years
                .entry(event.cited.clone())
                .or_default()
                .push(event.citing_date.year());
        }
    }
    for years in citation_years.values_mut() {
        years.sort_unstable();
    }

    let mut values = BTreeMap::new();
    for year in years {
        let counts: Vec<u64> = citation_years
            .values()
            .map(|ys| ys.partition_point(|&y| y <= year) as u64)
            .collect();
        values.insert(year, h_index(&counts));
    }
    HIndexSeries {
        focal: focal.clone(),
        variant: variant.clone(),
        values,
    }
}

/// Per-year citation counts split into in-journal and out-of-journal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitationSeries {
    pub focal: AuthorId,
    pub journal_id: String,
    /// year → (in_journal, out_journal) event counts.
    pub values: BTreeMap<i32, (u64, u64)>,
}

impl CitationSeries {
    pub fn total_in_journal(&self) -> u64 {
        self.values.values().map(|(i, _)| i).sum()
    }

    pub fn total(&self) -> u64 {
        self.values.values().map(|(i, o)| i + o).sum()
    }
}

/// Collection A events bucketed per year and split by whether the citing
/// document appeared in `journal_id`. Every year of the range is present,
/// zero-filled.
pub fn citation_series(
    corpus: &Corpus,
    focal: &AuthorId,
    journal_id: &str,
    years: RangeInclusive<i32>,
) -> CitationSeries {
    let mut values: BTreeMap<i32, (u64, u64)> = years.clone().map(|y| (y, (0, 0))).collect();
    for event in collection_a(corpus, focal) {
        let year = event.citing_date.year();
        if let Some((in_j, out_j)) = values.get_mut(&year) {
            if event.citing_journal == journal_id {
                *in_j += 1;
            } else {
                *out_j += 1;
            }
        }
    }
    CitationSeries {
        focal: focal.clone(),
        journal_id: journal_id.into(),
        values,
    }
}

/// Share of the journal's received citations that come from the journal
/// itself. The citing document must be dated inside `window` (cited items
/// may be any age); `None` windows mean all years.
///
/// Returns `None` when the journal received no qualifying citations at all:
/// "no data" is deliberately distinct from a rate of zero.
pub fn journal_self_citation_rate(
    corpus: &Corpus,
    journal_id: &str,
    window: Option<RangeInclusive<i32>>,
) -> Option<f64> {
    let mut received = 0u64;
    let mut internal = 0u64;
    for publication in corpus.publications() {
        if publication.journal_id != journal_id {
            continue;
        }
        for citing in corpus.citers_of(&publication.pub_id) {
            let citer = corpus.publication(citing).expect("reverse index entry resolves");
            if window
                .as_ref()
                .is_some_and(|w| !w.contains(&citer.pub_date.year()))
            {
                continue;
            }
            received += 1;
            if citer.journal_id == journal_id {
                internal += 1;
            }
        }
    }
    (received > 0).then(|| internal as f64 / received as f64)
}

/// |Collection B| over the in-journal part of Collection A: the share of
/// in-journal citations arriving after the editorial appointment. `None`
/// when there are no in-journal citations to take a share of.
pub fn post_appointment_share(chain: &CollectionChain) -> Option<f64> {
    (chain.coll_a_in_journal > 0)
        .then(|| chain.coll_b.len() as f64 / chain.coll_a_in_journal as f64)
}
