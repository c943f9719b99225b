//! Immutable bibliographic corpus with citation and co-authorship indices.
//!
//! A corpus is built once from validated records and never mutated, so
//! analyses over it are safe to run concurrently. Reference targets that do
//! not resolve to a loaded record are kept in a dangling set rather than
//! dropped: silently losing them would corrupt collection counts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::author::{AliasMap, AuthorId};

/// Publication identifier, unique within a corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PubId(String);

impl PubId {
    pub fn new(id: impl Into<String>) -> Self {
        PubId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PubId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PubId {
    fn from(s: &str) -> Self {
        PubId(s.into())
    }
}

/// Calendar year and month. Sources that record only a year default to
/// January; day-level precision is never used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u8,
}

impl YearMonth {
    /// Earlier than any representable date; useful as an open lower bound.
    pub const MIN: YearMonth = YearMonth { year: i32::MIN, month: 1 };

    pub fn new(year: i32, month: u8) -> Result<Self, DateError> {
        if !(1..=12).contains(&month) {
            return Err(DateError::MonthOutOfRange(month));
        }
        Ok(YearMonth { year, month })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DateError {
    #[error("month {0} outside 1..=12")]
    MonthOutOfRange(u8),
    #[error("malformed year-month `{0}`, expected YYYY-MM")]
    Malformed(String),
}

impl FromStr for YearMonth {
    type Err = DateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (y, m) = s
            .rsplit_once('-')
            .ok_or_else(|| DateError::Malformed(s.into()))?;
        let year: i32 = y.parse().map_err(|_| DateError::Malformed(s.into()))?;
        let month: u8 = m.parse().map_err(|_| DateError::Malformed(s.into()))?;
        YearMonth::new(year, month)
    }
}

impl Serialize for YearMonth {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearMonth {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = <alloc::borrow::Cow<'de, str>>::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IssueType {
    Regular,
    Special,
}

impl fmt::Display for IssueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IssueType::Regular => f.write_str("regular"),
            IssueType::Special => f.write_str("special"),
        }
    }
}

/// One published item as loaded from an interchange file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub pub_id: PubId,
    pub title: String,
    pub authors: Vec<AuthorId>,
    pub journal_id: String,
    pub issue_id: String,
    pub issue_type: IssueType,
    pub pub_date: YearMonth,
    pub references: Vec<PubId>,
}

/// An (author, journal, role, interval) editorial appointment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditorTenure {
    pub author: AuthorId,
    pub journal_id: String,
    pub role: String,
    pub start: YearMonth,
    pub end: Option<YearMonth>,
}

impl EditorTenure {
    /// Whether a citing publication dated `date` falls inside the
    /// appointment. Both the start and (when present) end month count.
    pub fn covers(&self, date: YearMonth) -> bool {
        date >= self.start && self.end.is_none_or(|end| date <= end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("duplicate pub_id `{0}`")]
    DuplicatePubId(PubId),
    #[error("tenure of `{author}` at `{journal_id}` ends {end} before it starts {start}")]
    TenureEndsBeforeStart {
        author: AuthorId,
        journal_id: String,
        start: YearMonth,
        end: YearMonth,
    },
}

/// Publication dates are expected inside this window; anything outside is
/// reported as a validation violation.
pub const VALID_YEARS: core::ops::RangeInclusive<i32> = 1900..=2100;

/// One invariant violation found by [`Corpus::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateAuthor { pub_id: PubId, author: AuthorId },
    EmptyAuthorList { pub_id: PubId },
    DateOutOfRange { pub_id: PubId, year: i32 },
    SelfReference { pub_id: PubId },
    DanglingReference { citing: PubId, target: PubId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateAuthor { pub_id, author } => {
                write!(f, "{pub_id}: duplicate author `{author}`")
            }
            Violation::EmptyAuthorList { pub_id } => write!(f, "{pub_id}: empty author list"),
            Violation::DateOutOfRange { pub_id, year } => {
                write!(f, "{pub_id}: year {year} outside {}..={}", VALID_YEARS.start(), VALID_YEARS.end())
            }
            Violation::SelfReference { pub_id } => write!(f, "{pub_id}: references itself"),
            Violation::DanglingReference { citing, target } => {
                write!(f, "{citing}: reference `{target}` does not resolve")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Immutable corpus: publications plus the derived citation and
/// co-authorship indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    publications: BTreeMap<PubId, PublicationRecord>,
    aliases: AliasMap,
    tenures: Vec<EditorTenure>,
    /// cited → citing, the transpose of the references relation restricted
    /// to resolvable targets. Values are sorted and duplicate-free.
    reverse: BTreeMap<PubId, Vec<PubId>>,
    author_pubs: BTreeMap<AuthorId, BTreeSet<PubId>>,
    coauthors: BTreeMap<AuthorId, BTreeSet<(AuthorId, PubId)>>,
    dangling: BTreeSet<(PubId, PubId)>,
}

impl Corpus {
    /// Build the corpus and its indices from validated records.
    ///
    /// Structural defects (duplicate `pub_id`, inverted tenure intervals)
    /// are errors; record-level invariant breaches are kept as data and
    /// surface through [`Corpus::validate`].
    pub fn build(
        records: Vec<PublicationRecord>,
        aliases: AliasMap,
        tenures: Vec<EditorTenure>,
    ) -> Result<Self, CorpusError> {
        for t in &tenures {
            if let Some(end) = t.end {
                if end < t.start {
                    return Err(CorpusError::TenureEndsBeforeStart {
                        author: t.author.clone(),
                        journal_id: t.journal_id.clone(),
                        start: t.start,
                        end,
                    });
                }
            }
        }

        let mut publications = BTreeMap::new();
        for record in records {
            let id = record.pub_id.clone();
            if publications.insert(id.clone(), record).is_some() {
                return Err(CorpusError::DuplicatePubId(id));
            }
        }

        let mut reverse: BTreeMap<PubId, Vec<PubId>> = BTreeMap::new();
        let mut author_pubs: BTreeMap<AuthorId, BTreeSet<PubId>> = BTreeMap::new();
        let mut coauthors: BTreeMap<AuthorId, BTreeSet<(AuthorId, PubId)>> = BTreeMap::new();
        let mut dangling = BTreeSet::new();

        for (id, record) in &publications {
            for target in record.references.iter().collect::<BTreeSet<_>>() {
                if publications.contains_key(target) {
                    reverse.entry(target.clone()).or_default().push(id.clone());
                } else {
                    dangling.insert((id.clone(), target.clone()));
                }
            }
            for author in &record.authors {
                author_pubs.entry(author.clone()).or_default().insert(id.clone());
                for other in &record.authors {
                    if other != author {
                        coauthors
                            .entry(author.clone())
                            .or_default()
                            .insert((other.clone(), id.clone()));
                    }
                }
            }
        }
        // BTreeMap iteration inserted citers in sorted order already.
        debug_assert!(reverse.values().all(|v| v.is_sorted()));

        Ok(Corpus {
            publications,
            aliases,
            tenures,
            reverse,
            author_pubs,
            coauthors,
            dangling,
        })
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    pub fn publication(&self, id: &PubId) -> Option<&PublicationRecord> {
        self.publications.get(id)
    }

    /// All records in `pub_id` order.
    pub fn publications(&self) -> impl Iterator<Item = &PublicationRecord> {
        self.publications.values()
    }

    /// Publications citing `id` (sorted, duplicate-free).
    pub fn citers_of(&self, id: &PubId) -> &[PubId] {
        self.reverse.get(id).map_or(&[], Vec::as_slice)
    }

    /// Publications (co-)authored by `author`.
    pub fn publications_of(&self, author: &AuthorId) -> Option<&BTreeSet<PubId>> {
        self.author_pubs.get(author)
    }

    /// (co-author, shared publication) pairs for `author`.
    pub fn coauthors_of(&self, author: &AuthorId) -> Option<&BTreeSet<(AuthorId, PubId)>> {
        self.coauthors.get(author)
    }

    pub fn aliases(&self) -> &AliasMap {
        &self.aliases
    }

    pub fn tenures(&self) -> &[EditorTenure] {
        &self.tenures
    }

    pub fn tenure_for(&self, author: &AuthorId, journal_id: &str) -> Option<&EditorTenure> {
        self.tenures
            .iter()
            .find(|t| t.author == *author && t.journal_id == journal_id)
    }

    /// (citing, unresolved target) pairs.
    pub fn dangling_references(&self) -> &BTreeSet<(PubId, PubId)> {
        &self.dangling
    }

    pub fn has_journal(&self, journal_id: &str) -> bool {
        self.publications.values().any(|p| p.journal_id == journal_id)
    }

    /// Publication-year span of the corpus, when non-empty.
    pub fn year_span(&self) -> Option<(i32, i32)> {
        let mut years = self.publications.values().map(|p| p.pub_date.year());
        let first = years.next()?;
        let (min, max) = years.fold((first, first), |(lo, hi), y| (lo.min(y), hi.max(y)));
        Some((min, max))
    }

    /// Report every record-level invariant breach without mutating anything.
    /// An empty report means all invariants hold.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (id, record) in &self.publications {
            if record.authors.is_empty() {
                violations.push(Violation::EmptyAuthorList { pub_id: id.clone() });
            }
            let mut seen = BTreeSet::new();
            for author in &record.authors {
                if !seen.insert(author) {
                    violations.push(Violation::DuplicateAuthor {
                        pub_id: id.clone(),
                        author: author.clone(),
                    });
                }
            }
            if !VALID_YEARS.contains(&record.pub_date.year()) {
                violations.push(Violation::DateOutOfRange {
                    pub_id: id.clone(),
                    year: record.pub_date.year(),
                });
            }
            if record.references.contains(id) {
                violations.push(Violation::SelfReference { pub_id: id.clone() });
            }
        }
        for (citing, target) in &self.dangling {
            violations.push(Violation::DanglingReference {
                citing: citing.clone(),
                target: target.clone(),
            });
        }
        ValidationReport { violations }
    }
}
