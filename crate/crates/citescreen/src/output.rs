//! Result rendering: JSON report schemas, per-step CSV tables, series
//! files, and human-readable screening text.
//!
//! JSON shapes here are consumed by downstream tooling and pinned by golden
//! tests; change them deliberately.

use serde::Serialize;

use citescreen_core::corpus::{Corpus, PubId, Violation};
use citescreen_core::metrics::{CitationSeries, HIndexSeries};
use citescreen_core::pipeline::{ChainCounts, CollectionChain};
use citescreen_core::screen::{ScreeningReport, Subject, Verdict};
use citescreen_core::stats::ChiSquareResult;

/// One pipeline chain as emitted by the `pipeline` subcommand.
#[derive(Debug, Serialize)]
pub struct ChainJson<'a> {
    pub focal: &'a str,
    pub journal_id: &'a str,
    pub tenure_start: String,
    pub counts: ChainCounts,
    pub collection_c: &'a std::collections::BTreeSet<PubId>,
    pub collection_d: &'a std::collections::BTreeSet<PubId>,
    pub collection_e: &'a std::collections::BTreeSet<PubId>,
}

impl<'a> ChainJson<'a> {
    pub fn new(chain: &'a CollectionChain) -> Self {
        ChainJson {
            focal: chain.focal.as_str(),
            journal_id: &chain.journal_id,
            tenure_start: chain.tenure_start.to_string(),
            counts: chain.counts(),
            collection_c: &chain.coll_c,
            collection_d: &chain.coll_d,
            collection_e: &chain.coll_e,
        }
    }
}

pub fn chains_to_json(chains: &[CollectionChain]) -> String {
    let body: Vec<ChainJson> = chains.iter().map(ChainJson::new).collect();
    let wrapper = serde_json::json!({ "chains": body });
    serde_json::to_string_pretty(&wrapper).expect("chains serialize")
}

/// Step-per-row CSV, one column per author.
pub fn chains_to_csv(chains: &[CollectionChain]) -> String {
    let mut out = String::from("step");
    for chain in chains {
        out.push(',');
        out.push_str(chain.focal.as_str());
    }
    out.push('\n');
    let rows: [(&str, fn(&ChainCounts) -> usize); 9] = [
        ("items_found", |c| c.items_found),
        ("items_in_journal", |c| c.items_in_journal),
        ("aml", |c| c.aml),
        ("collection_a", |c| c.collection_a),
        ("collection_a_in_journal", |c| c.collection_a_in_journal),
        ("collection_b", |c| c.collection_b),
        ("collection_c", |c| c.collection_c),
        ("collection_d", |c| c.collection_d),
        ("collection_e", |c| c.collection_e),
    ];
    let counts: Vec<ChainCounts> = chains.iter().map(CollectionChain::counts).collect();
    for (label, get) in rows {
        out.push_str(label);
        for count in &counts {
            out.push_str(&format!(",{}", get(count)));
        }
        out.push('\n');
    }
    out
}

/// `year,all,excluding` rows over the shared year range.
pub fn hindex_to_csv(all: &HIndexSeries, excluding: &HIndexSeries) -> String {
    let mut out = String::from("year,all,excluding\n");
    for (year, h_all) in &all.values {
        let h_excl = excluding.values.get(year).copied().unwrap_or(0);
        out.push_str(&format!("{year},{h_all},{h_excl}\n"));
    }
    out
}

/// `year,in_journal,out_journal` rows, the stacked plot-data layout.
pub fn citation_series_to_csv(series: &CitationSeries) -> String {
    let mut out = String::from("year,in_journal,out_journal\n");
    for (year, (in_journal, out_journal)) in &series.values {
        out.push_str(&format!("{year},{in_journal},{out_journal}\n"));
    }
    out
}

/// The `chisq` wire shape: exactly these five fields.
#[derive(Debug, Serialize)]
pub struct ChiSquareJson<'a> {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub significant: bool,
    pub warnings: &'a [String],
}

pub fn chi_square_to_json(result: &ChiSquareResult) -> String {
    let body = ChiSquareJson {
        statistic: result.statistic,
        df: result.df,
        p_value: result.p_value,
        significant: result.significant,
        warnings: &result.warnings,
    };
    serde_json::to_string_pretty(&body).expect("result serializes")
}

pub fn report_to_json(report: &ScreeningReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Human-readable screening report. The wording stays descriptive:
/// triggered findings mark patterns worth review, not conclusions.
pub fn report_to_text(report: &ScreeningReport) -> String {
    let mut out = String::new();
    match &report.subject {
        Subject::Editor { author, journal_id } => {
            out.push_str(&format!("screening report: editor `{author}` at `{journal_id}`\n"));
        }
        Subject::Journal { journal_id, window } => {
            out.push_str(&format!("screening report: journal `{journal_id}`"));
            if let Some((from, to)) = window {
                out.push_str(&format!(", citing years {from}-{to}"));
            }
            out.push('\n');
        }
    }
    for finding in &report.findings {
        let state = if finding.skipped {
            "skipped"
        } else if finding.triggered {
            "TRIGGERED"
        } else {
            "clear"
        };
        out.push_str(&format!("  [{state:>9}] {}", finding.flag));
        if !finding.values.is_empty() {
            let values: Vec<String> = finding
                .values
                .iter()
                .map(|(k, v)| format!("{k}={v:.4}"))
                .collect();
            out.push_str(&format!(" ({})", values.join(", ")));
        }
        if let Some(note) = &finding.note {
            out.push_str(&format!(" — {note}"));
        }
        out.push('\n');
        if !finding.citing_pubs.is_empty() {
            let ids: Vec<&str> = finding.citing_pubs.iter().map(PubId::as_str).collect();
            out.push_str(&format!("              citing: {}\n", ids.join(", ")));
        }
    }
    let verdict = match report.verdict {
        Verdict::Neutral => "neutral — no patterns of concern",
        Verdict::Elevated => "elevated — one pattern warrants a closer look",
        Verdict::Flagged => {
            "flagged — converging patterns consistent with potentially coercive citation behavior"
        }
    };
    out.push_str(&format!("verdict: {verdict}\n"));
    out
}

/// `ingest` summary of a loaded corpus.
#[derive(Debug, Serialize)]
pub struct IngestSummary {
    pub publications: usize,
    pub authors: usize,
    pub journals: usize,
    pub aliases: usize,
    pub tenures: usize,
    pub dangling_references: usize,
    pub violations: Vec<Violation>,
}

impl IngestSummary {
    pub fn new(corpus: &Corpus) -> Self {
        let authors: std::collections::BTreeSet<_> = corpus
            .publications()
            .flat_map(|p| p.authors.iter())
            .collect();
        let journals: std::collections::BTreeSet<_> =
            corpus.publications().map(|p| p.journal_id.as_str()).collect();
        IngestSummary {
            publications: corpus.len(),
            authors: authors.len(),
            journals: journals.len(),
            aliases: corpus.aliases().len(),
            tenures: corpus.tenures().len(),
            dangling_references: corpus.dangling_references().len(),
            violations: corpus.validate().violations,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "publications: {}\nauthors: {}\njournals: {}\naliases: {}\ntenures: {}\ndangling references: {}\nviolations: {}\n",
            self.publications,
            self.authors,
            self.journals,
            self.aliases,
            self.tenures,
            self.dangling_references,
            self.violations.len(),
        );
        for violation in &self.violations {
            out.push_str(&format!("  - {violation}\n"));
        }
        out
    }
}
