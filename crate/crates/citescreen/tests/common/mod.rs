//! Hand-built corpora with known chain counts, shared by the CLI and
//! acceptance tests.

#![allow(dead_code)]

use std::path::Path;

use citescreen_core::author::{normalize_author, AliasMap, AuthorId};
use citescreen_core::corpus::{
    Corpus, EditorTenure, IssueType, PubId, PublicationRecord, YearMonth,
};

pub fn author(name: &str) -> AuthorId {
    normalize_author(name, &AliasMap::new()).unwrap()
}

pub fn ym(year: i32, month: u8) -> YearMonth {
    YearMonth::new(year, month).unwrap()
}

pub fn record(
    id: &str,
    authors: &[&str],
    journal: &str,
    date: YearMonth,
    issue_type: IssueType,
    refs: &[String],
) -> PublicationRecord {
    PublicationRecord {
        pub_id: PubId::new(id),
        title: format!("Title of {id}"),
        authors: authors.iter().map(|a| author(a)).collect(),
        journal_id: journal.into(),
        issue_id: format!("{journal}:{}:{issue_type}", date.year()),
        issue_type,
        pub_date: date,
        references: refs.iter().map(PubId::new).collect(),
    }
}

pub fn tenure(name: &str, journal: &str, start: YearMonth) -> EditorTenure {
    EditorTenure {
        author: author(name),
        journal_id: journal.into(),
        role: "editor".into(),
        start,
        end: None,
    }
}

/// Cycles through the focal author's cited items (`w01`..`w34`), handing
/// out runs of distinct ids.
struct ItemCycle {
    next: usize,
}

impl ItemCycle {
    fn new() -> Self {
        ItemCycle { next: 0 }
    }

    fn take(&mut self, k: usize) -> Vec<String> {
        assert!(k <= 34);
        let ids = (0..k)
            .map(|offset| format!("w{:02}", 1 + (self.next + offset) % 34))
            .collect();
        self.next = (self.next + k) % 34;
        ids
    }
}

/// A corpus reproducing the reference chain shape end to end for editor
/// `author1` at journal `j1` (appointed 2013-01):
///
/// - 46 items, 10 of them in `j1`
/// - AML 34 (items `w01`..`w34` cited, `w35`..`w46` not)
/// - Collection A = 303 + `prior_in_journal` events, 123 + `prior_in_journal`
///   of them in `j1`
/// - Collection B = 123, C = 69, D = 67, E = 65
/// - Collection E splits Regular 28/1/1, Special 12/13/10 over the
///   {1, 2, 3+} reference-count bins
///
/// With the default `prior_in_journal = 7` this gives A = 310 with 130
/// in-journal and a post-appointment share of 123/130.
pub fn author1_fixture(prior_in_journal: usize) -> (Vec<PublicationRecord>, Vec<EditorTenure>) {
    let mut records = Vec::new();

    // 44 focal items here; the two self-citing papers below bring the item
    // count to 46 and the in-journal items to 8 + 2 = 10 (three of them
    // before the appointment). w01/w02 are co-authored; their co-authors
    // later produce the two semi-self citers.
    for i in 1..=44usize {
        let id = format!("w{i:02}");
        let (journal, date) = if i <= 8 {
            let date = if i <= 3 { ym(2009 + i as i32, 6) } else { ym(2012 + (i as i32 - 3) % 3 + 1, 3) };
            ("j1", date)
        } else {
            ("jx", ym(2005 + (i as i32 % 8), 2))
        };
        let authors: &[&str] = match i {
            1 => &["author1", "helper.a"],
            2 => &["author1", "helper.b"],
            _ => &["author1"],
        };
        records.push(record(&id, authors, journal, date, IssueType::Regular, &[]));
    }

    let mut cycle = ItemCycle::new();
    let post_date = |seq: usize| ym(2013 + (seq % 3) as i32, 1 + (seq % 12) as u8);

    // Collection E, regular issues: 28 papers citing one item, one citing
    // two, one citing three.
    for (index, n_items) in (1..=28).map(|_| 1).chain([2, 3]).enumerate() {
        let id = format!("cr{:02}", index + 1);
        let date = if index == 0 { ym(2013, 1) } else { post_date(index) };
        let refs = cycle.take(n_items);
        records.push(record(
            &id,
            &[&format!("indep.{id}")],
            "j1",
            date,
            IssueType::Regular,
            &refs,
        ));
    }

    // Collection E, special issues: 12x1, 13x2, 5x3, 2x4, 2x5, 1x6.
    let special_counts: Vec<usize> = std::iter::repeat_n(1, 12)
        .chain(std::iter::repeat_n(2, 13))
        .chain(std::iter::repeat_n(3, 5))
        .chain(std::iter::repeat_n(4, 2))
        .chain(std::iter::repeat_n(5, 2))
        .chain([6])
        .collect();
    for (index, &n_items) in special_counts.iter().enumerate() {
        let id = format!("cs{:02}", index + 1);
        let refs = cycle.take(n_items);
        records.push(record(
            &id,
            &[&format!("indep.{id}")],
            "j1",
            post_date(index + 30),
            IssueType::Special,
            &refs,
        ));
    }

    // The four citers removed in steps 6-7: two self, two semi-self,
    // carrying 13 events between them.
    let w = |i: usize| format!("w{i:02}");
    records.push(record(
        "xs1",
        &["author1", "indep.q"],
        "j1",
        ym(2014, 2),
        IssueType::Regular,
        &[w(7), w(8), w(9), w(10)],
    ));
    records.push(record(
        "xs2",
        &["author1"],
        "j1",
        ym(2014, 9),
        IssueType::Special,
        &[w(11), w(12), w(13)],
    ));
    records.push(record(
        "xm1",
        &["helper.a"],
        "j1",
        ym(2015, 3),
        IssueType::Regular,
        &[w(1), w(3), w(4)],
    ));
    records.push(record(
        "xm2",
        &["helper.b"],
        "j1",
        ym(2015, 10),
        IssueType::Special,
        &[w(2), w(5), w(6)],
    ));

    // In-journal citations before the appointment.
    for i in 0..prior_in_journal {
        let id = format!("pt{}", i + 1);
        let refs = cycle.take(1);
        records.push(record(
            &id,
            &[&format!("indep.{id}")],
            "j1",
            ym(2010 + (i % 3) as i32, 1 + (i % 12) as u8),
            IssueType::Regular,
            &refs,
        ));
    }

    // Citations from everywhere else; 180 singles cycling through all 34
    // AML items guarantees every one is cited.
    for i in 0..180 {
        let id = format!("ox{:03}", i + 1);
        let refs = cycle.take(1);
        records.push(record(
            &id,
            &[&format!("indep.{id}")],
            "jx",
            ym(2006 + (i % 10) as i32, 1 + (i % 12) as u8),
            IssueType::Regular,
            &refs,
        ));
    }

    let tenures = vec![tenure("author1", "j1", ym(2013, 1))];
    (records, tenures)
}

/// A control-shaped corpus: editor `author5` at `j1`, 345 received
/// citations of which only 7 are in-journal (2 before the appointment),
/// and no h-index dependence on `j1`.
pub fn control_fixture() -> (Vec<PublicationRecord>, Vec<EditorTenure>) {
    let mut records = Vec::new();
    for i in 1..=20usize {
        records.push(record(
            &format!("m{i:02}"),
            &["author5"],
            "jx",
            ym(2005, 3),
            IssueType::Regular,
            &[],
        ));
    }
    // 300 external citations: 30 per item for m01..m10.
    for i in 0..300usize {
        let target = format!("m{:02}", 1 + i % 10);
        records.push(record(
            &format!("oc{:03}", i + 1),
            &[&format!("u.oc{i}")],
            "jx",
            ym(2006 + (i % 10) as i32, 1 + (i % 12) as u8),
            IssueType::Regular,
            &[target],
        ));
    }
    // 38 more external citations over m11..m20.
    for i in 0..38usize {
        let target = format!("m{:02}", 11 + i % 10);
        records.push(record(
            &format!("od{:02}", i + 1),
            &[&format!("u.od{i}")],
            "jx",
            ym(2008 + (i % 8) as i32, 1 + (i % 12) as u8),
            IssueType::Regular,
            &[target],
        ));
    }
    // 7 in-journal citations: 2 before 2013, 5 after.
    for i in 0..7usize {
        let date = if i < 2 { ym(2011 + i as i32, 4) } else { ym(2013 + ((i - 2) % 3) as i32, 5) };
        let target = format!("m{:02}", 1 + i);
        records.push(record(
            &format!("jc{}", i + 1),
            &[&format!("u.jc{i}")],
            "j1",
            date,
            IssueType::Regular,
            &[target],
        ));
    }
    let tenures = vec![tenure("author5", "j1", ym(2013, 1))];
    (records, tenures)
}

/// Final-year h-index 10 overall but 8 once `j1` citations are excluded:
/// eight items carry ten external citations each by 2012, two more items
/// gather ten `j1` citations each across 2013-2015.
pub fn divergence_fixture() -> (Vec<PublicationRecord>, Vec<EditorTenure>) {
    let mut records = Vec::new();
    for i in 1..=10usize {
        records.push(record(
            &format!("q{i:02}"),
            &["authord"],
            "jx",
            ym(2005, 1),
            IssueType::Regular,
            &[],
        ));
    }
    // q01..q08: one external citation per year 2006-2012, plus three more
    // in 2012.
    for i in 1..=8usize {
        for (j, year) in (2006..=2012).chain([2012, 2012, 2012]).enumerate() {
            records.push(record(
                &format!("dx{i:02}{j:02}"),
                &[&format!("u.dx{i}{j}")],
                "jx",
                ym(year, 1 + (j % 12) as u8),
                IssueType::Regular,
                &[format!("q{i:02}")],
            ));
        }
    }
    // q09, q10: ten j1 citations each, 3 in 2013, 6 in 2014, 1 in 2015.
    for i in 9..=10usize {
        let years = std::iter::repeat_n(2013, 3)
            .chain(std::iter::repeat_n(2014, 6))
            .chain([2015]);
        for (j, year) in years.enumerate() {
            records.push(record(
                &format!("dj{i:02}{j:02}"),
                &[&format!("u.dj{i}{j}")],
                "j1",
                ym(year, 1 + (j % 12) as u8),
                IssueType::Special,
                &[format!("q{i:02}")],
            ));
        }
    }
    let tenures = vec![tenure("authord", "j1", ym(2013, 1))];
    (records, tenures)
}

pub fn build(records: Vec<PublicationRecord>, tenures: Vec<EditorTenure>) -> Corpus {
    Corpus::build(records, AliasMap::new(), tenures).unwrap()
}

/// Write a corpus as `corpus.jsonl` + `tenures.csv` + `aliases.csv` under
/// `dir`, for driving the CLI.
pub fn write_corpus_files(dir: &Path, corpus: &Corpus) {
    std::fs::create_dir_all(dir).unwrap();
    std::fs::write(
        dir.join("corpus.jsonl"),
        citescreen::records::corpus_to_jsonl(corpus),
    )
    .unwrap();
    std::fs::write(
        dir.join("tenures.csv"),
        citescreen::tables::tenures_to_csv(corpus.tenures()),
    )
    .unwrap();
    std::fs::write(
        dir.join("aliases.csv"),
        citescreen::tables::aliases_to_csv(corpus.aliases()),
    )
    .unwrap();
}
