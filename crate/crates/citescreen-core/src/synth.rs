//! Deterministic synthetic corpora with a controllable baseline citation
//! process and injectable coercion, logged as ground truth so detector
//! output can be scored oracle-style.
//!
//! All randomness flows through [`SynthRng`], a thin wrapper over the
//! ChaCha12 stream cipher with every derivation rule fixed here (not
//! platform defaults), so the same seed and config reproduce a corpus
//! byte-for-byte anywhere:
//!
//! - stream: `rand_chacha::ChaCha12Rng` seeded via `seed_from_u64`
//!   (SplitMix64 expansion of the 64-bit seed, per `rand_core`)
//! - `below(n)`: rejection sampling on `next_u64` over the largest
//!   multiple of `n` (no modulo bias)
//! - `f64()`: `(next_u64 >> 11) * 2^-53`, uniform in `[0, 1)`
//! - `poisson(λ)`: Knuth's product-of-uniforms method
//!
//! Injected citations are designed to survive the whole collection chain:
//! papers (co-)authored by the editor are never injected, and targets are
//! restricted to editor works whose author sets are disjoint from the
//! citing paper's, so every injected citer classifies as independent.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::author::{normalize_author, AliasMap, AuthorId};
use crate::corpus::{
    Corpus, EditorTenure, IssueType, PubId, PublicationRecord, YearMonth, VALID_YEARS,
};
use crate::pipeline::CollectionChain;

/// Coercion behavior to inject, pivoting on an editorial appointment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoercionConfig {
    /// Canonical key of the coercing editor (an `authorN` name).
    pub editor: String,
    pub journal_id: String,
    pub tenure_start: YearMonth,
    /// Chance that an eligible in-journal paper receives injected
    /// references.
    pub insertion_probability: f64,
    /// How many editor works each injection adds.
    pub items_per_insertion: u32,
    /// Multiplier on the insertion probability for special issues, capped
    /// at probability 1.
    pub special_issue_boost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_authors: u32,
    pub n_journals: u32,
    pub n_years: u32,
    pub papers_per_year: u32,
    /// Poisson mean of baseline references per paper.
    pub baseline_refs_mean: u32,
    /// First publication year of the corpus.
    pub base_year: i32,
    /// Chance that a paper lands in a special issue.
    pub special_issue_rate: f64,
    /// Weight baseline reference targets by citations already received
    /// instead of uniformly.
    pub preferential: bool,
    pub coercion: Option<CoercionConfig>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 1,
            n_authors: 50,
            n_journals: 5,
            n_years: 10,
            papers_per_year: 100,
            baseline_refs_mean: 4,
            base_year: 1996,
            special_issue_rate: 0.2,
            preferential: false,
            coercion: None,
        }
    }
}

/// Generator bookkeeping: exactly which citation events were injected.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// (citing, cited) pairs added by the coercion process.
    pub injected: Vec<(PubId, PubId)>,
    /// Injected event counts keyed by citing-paper year.
    pub injected_per_year: BTreeMap<i32, usize>,
    /// Citing papers whose final reference lists reach the default
    /// overdose threshold of editor items.
    pub expected_overdose: Vec<PubId>,
}

/// Precision/recall of Collection E against the injection log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryReport {
    pub relevant: usize,
    pub detected: usize,
    pub true_positives: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("config: need at least one author and one journal")]
    NoPopulation,
    #[error("config: years {first}..={last} leave the supported {min}..={max} window")]
    YearsOutOfRange { first: i32, last: i32, min: i32, max: i32 },
    #[error("config: `{name}` = {value} outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("config: special_issue_boost {0} below 1")]
    BoostBelowOne(f64),
    #[error("config: items_per_insertion must be at least 1")]
    ZeroItemsPerInsertion,
    #[error("config: coercion editor `{0}` is not a generated author")]
    UnknownEditor(String),
    #[error("config: coercion journal `{0}` is not a generated journal")]
    UnknownJournal(String),
    #[error("`{citing}`: {needed} items to insert but only {available} eligible prior editor works")]
    InsufficientPriorWorks { citing: PubId, available: usize, needed: u32 },
}

/// Seeded random stream with fixed derivation rules (see module docs).
struct SynthRng(rand_chacha::ChaCha12Rng);

impl SynthRng {
    fn new(seed: u64) -> Self {
        SynthRng(rand_chacha::ChaCha12Rng::seed_from_u64(seed))
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..n` by rejection (`n` > 0).
    fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn bernoulli(&mut self, p: f64) -> bool {
        self.f64() < p
    }

    /// Knuth's method; fine for the small means used here.
    fn poisson(&mut self, mean: f64) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        let limit = libm::exp(-mean);
        let mut product = self.f64();
        let mut count = 0;
        while product > limit {
            count += 1;
            product *= self.f64();
        }
        count
    }

    /// `k` distinct values from `0..n`, in draw order.
    fn distinct_below(&mut self, n: u64, k: usize) -> Vec<u64> {
        debug_assert!(k as u64 <= n);
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let v = self.below(n);
            if seen.insert(v) {
                out.push(v);
            }
        }
        out
    }
}

fn validate(config: &SynthConfig) -> Result<(), SynthError> {
    if config.n_authors == 0 || config.n_journals == 0 {
        return Err(SynthError::NoPopulation);
    }
    let last = config.base_year + config.n_years.saturating_sub(1) as i32;
    if config.n_years > 0 && !(VALID_YEARS.contains(&config.base_year) && VALID_YEARS.contains(&last)) {
        return Err(SynthError::YearsOutOfRange {
            first: config.base_year,
            last,
            min: *VALID_YEARS.start(),
            max: *VALID_YEARS.end(),
        });
    }
    if !(0.0..=1.0).contains(&config.special_issue_rate) {
        return Err(SynthError::ProbabilityOutOfRange {
            name: "special_issue_rate",
            value: config.special_issue_rate,
        });
    }
    if let Some(coercion) = &config.coercion {
        if !(0.0..=1.0).contains(&coercion.insertion_probability) {
            return Err(SynthError::ProbabilityOutOfRange {
                name: "insertion_probability",
                value: coercion.insertion_probability,
            });
        }
        if coercion.special_issue_boost < 1.0 {
            return Err(SynthError::BoostBelowOne(coercion.special_issue_boost));
        }
        if coercion.items_per_insertion == 0 {
            return Err(SynthError::ZeroItemsPerInsertion);
        }
    }
    Ok(())
}

/// Generated author key `authorN` (1-based).
pub fn author_name(index: u32) -> AuthorId {
    normalize_author(&alloc::format!("author{index}"), &AliasMap::new())
        .expect("generated names are valid")
}

/// Generated journal id `jN` (1-based).
pub fn journal_name(index: u32) -> String {
    alloc::format!("j{index}")
}

fn paper_id(seq: usize) -> PubId {
    PubId::new(alloc::format!("p{seq:07}"))
}

/// Generate a corpus from the config. The result always passes
/// [`Corpus::validate`] cleanly; rerunning with the same config is
/// bit-identical.
pub fn generate(config: &SynthConfig) -> Result<(Corpus, GroundTruth), SynthError> {
    validate(config)?;
    let mut rng = SynthRng::new(config.seed);

    let authors: Vec<AuthorId> = (1..=config.n_authors).map(author_name).collect();
    let journals: Vec<String> = (1..=config.n_journals).map(journal_name).collect();

    let coercion = config.coercion.as_ref();
    let editor: Option<AuthorId> = match coercion {
        Some(c) => {
            let editor = normalize_author(&c.editor, &AliasMap::new())
                .map_err(|_| SynthError::UnknownEditor(c.editor.clone()))?;
            if !authors.contains(&editor) {
                return Err(SynthError::UnknownEditor(c.editor.clone()));
            }
            if !journals.contains(&c.journal_id) {
                return Err(SynthError::UnknownJournal(c.journal_id.clone()));
            }
            Some(editor)
        }
        None => None,
    };

    // Organic pass. Months rise with position inside a year, so generation
    // order equals date order.
    let mut records: Vec<PublicationRecord> = Vec::new();
    // For preferential weighting: one entry per citation received so far.
    let mut endpoints: Vec<usize> = Vec::new();
    for year_offset in 0..config.n_years {
        let year = config.base_year + year_offset as i32;
        for index_in_year in 0..config.papers_per_year {
            let seq = records.len() + 1;
            let month = 1 + (index_in_year as u64 * 12 / config.papers_per_year.max(1) as u64) as u8;
            let date = YearMonth::new(year, month).expect("month in range");
            let journal = journals[rng.below(journals.len() as u64) as usize].clone();
            let special = rng.bernoulli(config.special_issue_rate);
            let n_authors = 1 + rng.below(3.min(config.n_authors as u64)) as usize;
            let paper_authors: Vec<AuthorId> = rng
                .distinct_below(authors.len() as u64, n_authors)
                .into_iter()
                .map(|i| authors[i as usize].clone())
                .collect();

            let available = records.len();
            let n_refs = (rng.poisson(config.baseline_refs_mean as f64) as usize).min(available);
            let mut targets: BTreeSet<usize> = BTreeSet::new();
            while targets.len() < n_refs {
                let pick = if config.preferential && !endpoints.is_empty() {
                    let total = available as u64 + endpoints.len() as u64;
                    let roll = rng.below(total);
                    if roll < available as u64 {
                        roll as usize
                    } else {
                        endpoints[(roll - available as u64) as usize]
                    }
                } else {
                    rng.below(available as u64) as usize
                };
                targets.insert(pick);
            }
            let references: Vec<PubId> =
                targets.iter().map(|&i| records[i].pub_id.clone()).collect();
            endpoints.extend(targets.iter().copied());

            records.push(PublicationRecord {
                pub_id: paper_id(seq),
                title: alloc::format!("Synthetic record {seq}"),
                authors: paper_authors,
                journal_id: journal.clone(),
                issue_id: alloc::format!(
                    "{journal}:{year}:{}",
                    if special { "special" } else { "regular" }
                ),
                issue_type: if special { IssueType::Special } else { IssueType::Regular },
                pub_date: date,
                references,
            });
        }
    }

    // Injection pass.
    let mut truth = GroundTruth::default();
    let mut tenures = Vec::new();
    if let (Some(coercion), Some(editor)) = (coercion, editor.as_ref()) {
        tenures.push(EditorTenure {
            author: editor.clone(),
            journal_id: coercion.journal_id.clone(),
            role: "editor".into(),
            start: coercion.tenure_start,
            end: None,
        });

        let editor_works: Vec<usize> = records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.authors.contains(editor))
            .map(|(i, _)| i)
            .collect();

        for citing_index in 0..records.len() {
            let citing = &records[citing_index];
            if citing.journal_id != coercion.journal_id
                || citing.pub_date < coercion.tenure_start
                || citing.authors.contains(editor)
            {
                continue;
            }
            // An organic reference to an editor work sharing one of this
            // paper's authors already makes the citer non-independent;
            // injecting there would not survive steps 6-7.
            let confounded = editor_works.iter().any(|&w| {
                citing.references.contains(&records[w].pub_id)
                    && shares_author(&records[w], citing)
            });
            if confounded {
                continue;
            }
            let probability = if citing.issue_type == IssueType::Special {
                (coercion.insertion_probability * coercion.special_issue_boost).min(1.0)
            } else {
                coercion.insertion_probability
            };
            if !rng.bernoulli(probability) {
                continue;
            }
            let eligible: Vec<usize> = editor_works
                .iter()
                .copied()
                .filter(|&w| {
                    records[w].pub_date < citing.pub_date
                        && !shares_author(&records[w], citing)
                        && !citing.references.contains(&records[w].pub_id)
                })
                .collect();
            let needed = coercion.items_per_insertion;
            if eligible.len() < needed as usize {
                return Err(SynthError::InsufficientPriorWorks {
                    citing: citing.pub_id.clone(),
                    available: eligible.len(),
                    needed,
                });
            }
            let picks = rng.distinct_below(eligible.len() as u64, needed as usize);
            let citing_id = citing.pub_id.clone();
            let citing_year = citing.pub_date.year();
            for pick in picks {
                let target = records[eligible[pick as usize]].pub_id.clone();
                records[citing_index].references.push(target.clone());
                truth.injected.push((citing_id.clone(), target));
                *truth.injected_per_year.entry(citing_year).or_default() += 1;
            }
        }

        // Overdose expectation over the final reference lists.
        let editor_ids: BTreeSet<&PubId> =
            editor_works.iter().map(|&w| &records[w].pub_id).collect();
        for record in &records {
            let count = record
                .references
                .iter()
                .filter(|r| editor_ids.contains(r))
                .collect::<BTreeSet<_>>()
                .len() as u32;
            if count >= crate::screen::ScreeningConfig::default().overdose_threshold {
                truth.expected_overdose.push(record.pub_id.clone());
            }
        }
    }

    let corpus = Corpus::build(records, AliasMap::new(), tenures)
        .expect("generated ids are unique and tenures well-formed");
    Ok((corpus, truth))
}

fn shares_author(a: &PublicationRecord, b: &PublicationRecord) -> bool {
    a.authors.iter().any(|author| b.authors.contains(author))
}

/// Score Collection E against the injection log: how many injected citing
/// papers the chain kept (recall) and how much of what it kept was
/// injected (precision). Undefined ratios (empty denominators) are `None`.
pub fn verify_recovery(
    _corpus: &Corpus,
    truth: &GroundTruth,
    chain: &CollectionChain,
) -> RecoveryReport {
    let relevant: BTreeSet<&PubId> = truth.injected.iter().map(|(citing, _)| citing).collect();
    let detected = &chain.coll_e;
    let true_positives = detected.iter().filter(|d| relevant.contains(d)).count();
    RecoveryReport {
        relevant: relevant.len(),
        detected: detected.len(),
        true_positives,
        precision: (!detected.is_empty())
            .then(|| true_positives as f64 / detected.len() as f64),
        recall: (!relevant.is_empty())
            .then(|| true_positives as f64 / relevant.len() as f64),
    }
}
