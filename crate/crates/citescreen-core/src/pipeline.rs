//! The step 1–7 collection chain for a focal author.
//!
//! Starting from everything the focal author published, the chain narrows
//! to the citations most indicative of editorially induced referencing:
//!
//! 1. items found — all publications of the focal author
//! 2. author main list (AML) — items cited at least once
//! 3. Collection A — every (citing, cited) citation event
//! 4. Collection B — A restricted to the focal journal, dated inside the
//!    editorial tenure (start month inclusive)
//! 5. Collection C — B's distinct citing documents
//! 6. Collection D — C without self-citations
//! 7. Collection E — D without semi-self-citations
//!
//! Sizes are monotone: |A| ≥ |B| ≥ |C| ≥ |D| ≥ |E|.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::author::AuthorId;
use crate::corpus::{Corpus, EditorTenure, IssueType, PubId, YearMonth};

/// How a citing document relates to the focal author.
///
/// A document (co-)authored by the focal author is a self-citation no
/// matter who else signed it; semi-self means some author of the citing
/// document co-authored one of the specific cited works with the focal
/// author.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Independent,
    SelfCitation,
    SemiSelfCitation,
}

/// One (citing, cited) pair from Collection A, with the citing document's
/// venue, date, and relation to the focal author.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitationEvent {
    pub citing: PubId,
    pub cited: PubId,
    pub citing_date: YearMonth,
    pub citing_journal: String,
    pub citing_issue_type: IssueType,
    pub classification: Classification,
}

/// Full result of [`run_pipeline`]: per-step sets and the counts used in
/// reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionChain {
    pub focal: AuthorId,
    pub journal_id: String,
    pub tenure_start: YearMonth,
    pub items_found: usize,
    pub items_in_journal: usize,
    pub aml: BTreeSet<PubId>,
    pub coll_a: Vec<CitationEvent>,
    pub coll_a_in_journal: usize,
    pub coll_b: Vec<CitationEvent>,
    pub coll_c: BTreeSet<PubId>,
    pub coll_d: BTreeSet<PubId>,
    pub coll_e: BTreeSet<PubId>,
}

/// Count summary of a chain, one value per report row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCounts {
    pub items_found: usize,
    pub items_in_journal: usize,
    pub aml: usize,
    pub collection_a: usize,
    pub collection_a_in_journal: usize,
    pub collection_b: usize,
    pub collection_c: usize,
    pub collection_d: usize,
    pub collection_e: usize,
}

impl CollectionChain {
    pub fn counts(&self) -> ChainCounts {
        ChainCounts {
            items_found: self.items_found,
            items_in_journal: self.items_in_journal,
            aml: self.aml.len(),
            collection_a: self.coll_a.len(),
            collection_a_in_journal: self.coll_a_in_journal,
            collection_b: self.coll_b.len(),
            collection_c: self.coll_c.len(),
            collection_d: self.coll_d.len(),
            collection_e: self.coll_e.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("no editorial tenure on record for `{author}` at `{journal_id}`")]
    MissingTenure { author: AuthorId, journal_id: String },
    #[error("citing publication `{0}` is not in the corpus")]
    UnresolvableRecord(PubId),
}

/// Step 1: all publications (co-)authored by `focal`. Unknown authors give
/// the empty set.
pub fn author_items(corpus: &Corpus, focal: &AuthorId) -> BTreeSet<PubId> {
    corpus.publications_of(focal).cloned().unwrap_or_default()
}

/// Step 2: the author main list — items from step 1 cited at least once
/// within the corpus.
pub fn author_main_list(corpus: &Corpus, focal: &AuthorId) -> BTreeSet<PubId> {
    author_items(corpus, focal)
        .into_iter()
        .filter(|item| !corpus.citers_of(item).is_empty())
        .collect()
}

/// The focal-author works a given citing document references.
pub fn cited_set_of(corpus: &Corpus, focal: &AuthorId, citing: &PubId) -> BTreeSet<PubId> {
    let items = author_items(corpus, focal);
    match corpus.publication(citing) {
        Some(record) => record
            .references
            .iter()
            .filter(|r| items.contains(*r))
            .cloned()
            .collect(),
        None => BTreeSet::new(),
    }
}

/// Classify one citing document against the focal author, given the set of
/// focal works it references.
pub fn classify_citation(
    corpus: &Corpus,
    focal: &AuthorId,
    citing: &PubId,
    cited_set: &BTreeSet<PubId>,
) -> Result<Classification, PipelineError> {
    let record = corpus
        .publication(citing)
        .ok_or_else(|| PipelineError::UnresolvableRecord(citing.clone()))?;
    if record.authors.contains(focal) {
        return Ok(Classification::SelfCitation);
    }
    let semi = record.authors.iter().any(|author| {
        cited_set.iter().any(|cited| {
            corpus
                .publication(cited)
                .is_some_and(|c| c.authors.contains(author))
        })
    });
    if semi {
        Ok(Classification::SemiSelfCitation)
    } else {
        Ok(Classification::Independent)
    }
}

/// Step 3: every citation event received by the focal author's items, in
/// (citing, cited) order, each stamped with its classification.
pub fn collection_a(corpus: &Corpus, focal: &AuthorId) -> Vec<CitationEvent> {
    let items = author_items(corpus, focal);

    // Group cited items per citing document first: classification depends on
    // the full set of focal works a citing document references.
    let mut per_citing: BTreeMap<&PubId, BTreeSet<PubId>> = BTreeMap::new();
    for item in &items {
        for citing in corpus.citers_of(item) {
            per_citing.entry(citing).or_default().insert(item.clone());
        }
    }

    let mut events = Vec::new();
    for (citing, cited_set) in per_citing {
        // Citers come from the reverse index, so the record always resolves.
        let record = corpus
            .publication(citing)
            .expect("reverse index entry resolves");
        let classification =
            classify_citation(corpus, focal, citing, &cited_set).expect("record resolved");
        for cited in cited_set {
            events.push(CitationEvent {
                citing: citing.clone(),
                cited,
                citing_date: record.pub_date,
                citing_journal: record.journal_id.clone(),
                citing_issue_type: record.issue_type,
                classification,
            });
        }
    }
    events
}

/// Step 4: events whose citing document appeared in the tenure journal
/// during the appointment (start month inclusive; end month, when present,
/// inclusive as well).
pub fn collection_b(coll_a: &[CitationEvent], tenure: &EditorTenure) -> Vec<CitationEvent> {
    coll_a
        .iter()
        .filter(|e| e.citing_journal == tenure.journal_id && tenure.covers(e.citing_date))
        .cloned()
        .collect()
}

/// Step 5: distinct citing documents. A document citing several focal works
/// counts once.
pub fn collection_c(coll_b: &[CitationEvent]) -> BTreeSet<PubId> {
    coll_b.iter().map(|e| e.citing.clone()).collect()
}

/// Step 6: drop citing documents classified as self-citations.
pub fn collection_d(
    coll_c: &BTreeSet<PubId>,
    corpus: &Corpus,
    focal: &AuthorId,
) -> Result<BTreeSet<PubId>, PipelineError> {
    retain_unless_classified(coll_c, corpus, focal, Classification::SelfCitation)
}

/// Step 7: further drop semi-self-citations.
pub fn collection_e(
    coll_d: &BTreeSet<PubId>,
    corpus: &Corpus,
    focal: &AuthorId,
) -> Result<BTreeSet<PubId>, PipelineError> {
    retain_unless_classified(coll_d, corpus, focal, Classification::SemiSelfCitation)
}

fn retain_unless_classified(
    citing_set: &BTreeSet<PubId>,
    corpus: &Corpus,
    focal: &AuthorId,
    removed: Classification,
) -> Result<BTreeSet<PubId>, PipelineError> {
    let mut kept = BTreeSet::new();
    for citing in citing_set {
        let cited_set = cited_set_of(corpus, focal, citing);
        if classify_citation(corpus, focal, citing, &cited_set)? != removed {
            kept.insert(citing.clone());
        }
    }
    Ok(kept)
}

/// Run the full chain for a focal author, looking the tenure up in the
/// corpus. Missing tenure for the (author, journal) pair is a
/// configuration error.
pub fn run_pipeline(
    corpus: &Corpus,
    focal: &AuthorId,
    journal_id: &str,
) -> Result<CollectionChain, PipelineError> {
    let tenure = corpus
        .tenure_for(focal, journal_id)
        .ok_or_else(|| PipelineError::MissingTenure {
            author: focal.clone(),
            journal_id: journal_id.into(),
        })?
        .clone();
    run_pipeline_with_tenure(corpus, focal, &tenure)
}

/// Run the full chain with an explicitly supplied tenure.
pub fn run_pipeline_with_tenure(
    corpus: &Corpus,
    focal: &AuthorId,
    tenure: &EditorTenure,
) -> Result<CollectionChain, PipelineError> {
    let journal_id = tenure.journal_id.as_str();
    let items = author_items(corpus, focal);
    let items_in_journal = items
        .iter()
        .filter(|id| {
            corpus
                .publication(id)
                .is_some_and(|p| p.journal_id == journal_id)
        })
        .count();
    let aml = author_main_list(corpus, focal);
    let coll_a = collection_a(corpus, focal);
    let coll_a_in_journal = coll_a
        .iter()
        .filter(|e| e.citing_journal == journal_id)
        .count();
    let coll_b = collection_b(&coll_a, tenure);
    let coll_c = collection_c(&coll_b);
    let coll_d = collection_d(&coll_c, corpus, focal)?;
    let coll_e = collection_e(&coll_d, corpus, focal)?;

    Ok(CollectionChain {
        focal: focal.clone(),
        journal_id: journal_id.into(),
        tenure_start: tenure.start,
        items_found: items.len(),
        items_in_journal,
        aml,
        coll_a,
        coll_a_in_journal,
        coll_b,
        coll_c,
        coll_d,
        coll_e,
    })
}
