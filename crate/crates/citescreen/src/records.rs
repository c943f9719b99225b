//! Corpus interchange formats: JSONL (one publication object per line) and
//! an equivalent CSV with `;`-packed list cells.
//!
//! Loading streams line by line, so million-record exports never need
//! whole-file buffering. Malformed records fail with their line number;
//! semantic defects (duplicate authors, out-of-range dates, dangling
//! references) load fine and surface through `Corpus::validate`.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use citescreen_core::author::{normalize_author, AliasMap};
use citescreen_core::corpus::{
    Corpus, CorpusError, IssueType, PubId, PublicationRecord, YearMonth,
};

use crate::tables::{load_aliases, load_tenures};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Record {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

impl LoadError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        LoadError::Io { path: path.display().to_string(), source }
    }

    pub(crate) fn record(path: &str, line: usize, message: impl Into<String>) -> Self {
        LoadError::Record { path: path.into(), line, message: message.into() }
    }
}

/// Wire shape of one JSONL line / CSV row, field names fixed.
#[derive(Debug, Serialize, Deserialize)]
struct RawRecord {
    pub_id: String,
    title: String,
    authors: Vec<String>,
    journal_id: String,
    issue_id: String,
    issue_type: IssueType,
    year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    month: Option<u8>,
    references: Vec<String>,
}

impl RawRecord {
    fn into_record(
        self,
        aliases: &AliasMap,
        path: &str,
        line: usize,
    ) -> Result<PublicationRecord, LoadError> {
        let pub_date = YearMonth::new(self.year, self.month.unwrap_or(1))
            .map_err(|e| LoadError::record(path, line, format!("field `month`: {e}")))?;
        let mut authors = Vec::with_capacity(self.authors.len());
        for raw in &self.authors {
            authors.push(normalize_author(raw, aliases).map_err(|e| {
                LoadError::record(path, line, format!("field `authors`: {e}"))
            })?);
        }
        Ok(PublicationRecord {
            pub_id: PubId::new(self.pub_id),
            title: self.title,
            authors,
            journal_id: self.journal_id,
            issue_id: self.issue_id,
            issue_type: self.issue_type,
            pub_date,
            references: self.references.into_iter().map(PubId::new).collect(),
        })
    }

    fn from_record(record: &PublicationRecord) -> Self {
        RawRecord {
            pub_id: record.pub_id.as_str().into(),
            title: record.title.clone(),
            authors: record.authors.iter().map(|a| a.as_str().into()).collect(),
            journal_id: record.journal_id.clone(),
            issue_id: record.issue_id.clone(),
            issue_type: record.issue_type,
            year: record.pub_date.year(),
            month: Some(record.pub_date.month()),
            references: record.references.iter().map(|r| r.as_str().into()).collect(),
        }
    }
}

/// Parse JSONL text into records. Blank lines are allowed and skipped.
pub fn parse_jsonl(
    text: &str,
    source_name: &str,
    aliases: &AliasMap,
) -> Result<Vec<PublicationRecord>, LoadError> {
    let mut records = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let number = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(line)
            .map_err(|e| LoadError::record(source_name, number, e.to_string()))?;
        records.push(raw.into_record(aliases, source_name, number)?);
    }
    Ok(records)
}

fn read_jsonl(path: &Path, aliases: &AliasMap) -> Result<Vec<PublicationRecord>, LoadError> {
    let file = File::open(path).map_err(|e| LoadError::io(path, e))?;
    let reader = BufReader::new(file);
    let name = path.display().to_string();
    let mut records = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let number = index + 1;
        let line = line.map_err(|e| LoadError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&line)
            .map_err(|e| LoadError::record(&name, number, e.to_string()))?;
        records.push(raw.into_record(aliases, &name, number)?);
    }
    Ok(records)
}

/// CSV row twin of [`RawRecord`]: `authors` and `references` are
/// `;`-separated inside their cells.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    pub_id: String,
    title: String,
    authors: String,
    journal_id: String,
    issue_id: String,
    issue_type: String,
    year: i32,
    month: Option<u8>,
    references: String,
}

fn split_list(cell: &str) -> Vec<String> {
    cell.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

impl CsvRow {
    fn into_raw(self, path: &str, line: usize) -> Result<RawRecord, LoadError> {
        let issue_type = match self.issue_type.as_str() {
            "regular" => IssueType::Regular,
            "special" => IssueType::Special,
            other => {
                return Err(LoadError::record(
                    path,
                    line,
                    format!("field `issue_type`: unknown token `{other}`"),
                ))
            }
        };
        Ok(RawRecord {
            pub_id: self.pub_id,
            title: self.title,
            authors: split_list(&self.authors),
            journal_id: self.journal_id,
            issue_id: self.issue_id,
            issue_type,
            year: self.year,
            month: self.month,
            references: split_list(&self.references),
        })
    }
}

fn read_csv_records<R: Read>(
    reader: R,
    name: &str,
    aliases: &AliasMap,
) -> Result<Vec<PublicationRecord>, LoadError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut records = Vec::new();
    for row in csv_reader.deserialize::<CsvRow>() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            LoadError::record(name, line, e.to_string())
        })?;
        let line = records.len() + 2; // header is line 1
        records.push(row.into_raw(name, line)?.into_record(aliases, name, line)?);
    }
    Ok(records)
}

/// Load a corpus file with no companion alias/tenure tables.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, LoadError> {
    load_corpus_with(path, format, None, None)
}

/// Load a corpus file plus optional `aliases.csv` and `tenures.csv`
/// companions. Loading is deterministic: the same bytes always produce an
/// equal corpus.
pub fn load_corpus_with(
    path: &Path,
    format: CorpusFormat,
    aliases_path: Option<&Path>,
    tenures_path: Option<&Path>,
) -> Result<Corpus, LoadError> {
    let aliases = match aliases_path {
        Some(p) => load_aliases(p)?,
        None => AliasMap::new(),
    };
    let records = match format {
        CorpusFormat::Jsonl => read_jsonl(path, &aliases)?,
        CorpusFormat::Csv => {
            let file = File::open(path).map_err(|e| LoadError::io(path, e))?;
            read_csv_records(BufReader::new(file), &path.display().to_string(), &aliases)?
        }
    };
    let tenures = match tenures_path {
        Some(p) => load_tenures(p, &aliases)?,
        None => Vec::new(),
    };
    Ok(Corpus::build(records, aliases, tenures)?)
}

/// Serialize every publication as one JSON object per line, in `pub_id`
/// order. `month` is always emitted.
pub fn corpus_to_jsonl(corpus: &Corpus) -> String {
    let mut out = String::new();
    for record in corpus.publications() {
        let raw = RawRecord::from_record(record);
        out.push_str(&serde_json::to_string(&raw).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Serialize publications as CSV rows, in `pub_id` order.
pub fn corpus_to_csv(corpus: &Corpus) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in corpus.publications() {
        let raw = RawRecord::from_record(record);
        writer
            .serialize(CsvRow {
                pub_id: raw.pub_id,
                title: raw.title,
                authors: raw.authors.join(";"),
                journal_id: raw.journal_id,
                issue_id: raw.issue_id,
                issue_type: raw.issue_type.to_string(),
                year: raw.year,
                month: raw.month,
                references: raw.references.join(";"),
            })
            .expect("row serializes");
    }
    String::from_utf8(writer.into_inner().expect("csv flushes")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_RECORDS: &str = concat!(
        r#"{"pub_id":"a","title":"A","authors":["Alpha, A."],"journal_id":"j1","issue_id":"j1:2010","issue_type":"regular","year":2010,"references":[]}"#,
        "\n",
        r#"{"pub_id":"b","title":"B","authors":["Beta, B."],"journal_id":"j1","issue_id":"j1:2011","issue_type":"special","year":2011,"month":6,"references":["a"]}"#,
        "\n",
    );

    #[test]
    fn empty_input_is_an_empty_corpus() {
        let records = parse_jsonl("", "test", &AliasMap::new()).unwrap();
        let corpus = Corpus::build(records, AliasMap::new(), Vec::new()).unwrap();
        assert!(corpus.is_empty());
        assert!(corpus.dangling_references().is_empty());
    }

    #[test]
    fn two_records_build_the_reverse_index() {
        let records = parse_jsonl(TWO_RECORDS, "test", &AliasMap::new()).unwrap();
        let corpus = Corpus::build(records, AliasMap::new(), Vec::new()).unwrap();
        assert_eq!(corpus.citers_of(&PubId::new("a")), &[PubId::new("b")]);
    }

    #[test]
    fn month_defaults_to_january() {
        let records = parse_jsonl(TWO_RECORDS, "test", &AliasMap::new()).unwrap();
        assert_eq!(records[0].pub_date, YearMonth::new(2010, 1).unwrap());
        assert_eq!(records[1].pub_date, YearMonth::new(2011, 6).unwrap());
    }

    #[test]
    fn unknown_issue_type_fails_with_line_number() {
        let bad = r#"{"pub_id":"a","title":"A","authors":["X"],"journal_id":"j","issue_id":"i","issue_type":"weird","year":2010,"references":[]}"#;
        let text = format!("{TWO_RECORDS}{bad}\n");
        let err = parse_jsonl(&text, "test", &AliasMap::new()).unwrap_err();
        let message = err.to_string();
        assert!(message.starts_with("test:3:"), "{message}");
        assert!(message.contains("unknown variant"), "{message}");
    }

    #[test]
    fn missing_field_names_the_field() {
        let bad = r#"{"pub_id":"a","title":"A","authors":["X"],"issue_id":"i","issue_type":"regular","year":2010,"references":[]}"#;
        let err = parse_jsonl(bad, "test", &AliasMap::new()).unwrap_err();
        assert!(err.to_string().contains("journal_id"), "{err}");
    }

    #[test]
    fn bad_month_is_a_hard_error() {
        let bad = r#"{"pub_id":"a","title":"A","authors":["X"],"journal_id":"j","issue_id":"i","issue_type":"regular","year":2010,"month":13,"references":[]}"#;
        let err = parse_jsonl(bad, "test", &AliasMap::new()).unwrap_err();
        assert!(err.to_string().contains("month"), "{err}");
    }

    #[test]
    fn duplicate_pub_id_is_an_error() {
        let text = format!("{TWO_RECORDS}{}", TWO_RECORDS.lines().next().unwrap());
        let records = parse_jsonl(&text, "test", &AliasMap::new()).unwrap();
        assert!(matches!(
            Corpus::build(records, AliasMap::new(), Vec::new()),
            Err(CorpusError::DuplicatePubId(_))
        ));
    }

    #[test]
    fn aliases_map_raw_author_spellings() {
        let mut aliases = AliasMap::new();
        aliases.insert(
            "Alpha, A.".into(),
            normalize_author("alphason, a.b.", &AliasMap::new()).unwrap(),
        );
        let records = parse_jsonl(TWO_RECORDS, "test", &aliases).unwrap();
        assert_eq!(records[0].authors[0].as_str(), "alphason, a.b.");
    }

    #[test]
    fn jsonl_round_trips_field_for_field() {
        let records = parse_jsonl(TWO_RECORDS, "test", &AliasMap::new()).unwrap();
        let corpus = Corpus::build(records, AliasMap::new(), Vec::new()).unwrap();
        let serialized = corpus_to_jsonl(&corpus);
        let reloaded = parse_jsonl(&serialized, "round", corpus.aliases()).unwrap();
        let reloaded = Corpus::build(reloaded, corpus.aliases().clone(), Vec::new()).unwrap();
        assert_eq!(corpus, reloaded);
    }

    #[test]
    fn csv_round_trips_field_for_field() {
        let records = parse_jsonl(TWO_RECORDS, "test", &AliasMap::new()).unwrap();
        let corpus = Corpus::build(records, AliasMap::new(), Vec::new()).unwrap();
        let csv_text = corpus_to_csv(&corpus);
        let reloaded =
            read_csv_records(csv_text.as_bytes(), "round", &AliasMap::new()).unwrap();
        let reloaded = Corpus::build(reloaded, AliasMap::new(), Vec::new()).unwrap();
        assert_eq!(corpus, reloaded);
    }

    #[test]
    fn csv_rejects_unknown_issue_type() {
        let text = "pub_id,title,authors,journal_id,issue_id,issue_type,year,month,references\n\
                    a,A,X,j,i,odd,2010,,\n";
        let err = read_csv_records(text.as_bytes(), "test", &AliasMap::new()).unwrap_err();
        assert!(err.to_string().contains("issue_type"), "{err}");
    }
}
