//! Companion tables: `aliases.csv` (raw_name → canonical_key) and
//! `tenures.csv` (editorial appointments).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use citescreen_core::author::{normalize_author, AliasMap};
use citescreen_core::corpus::{EditorTenure, YearMonth};

use crate::records::LoadError;

#[derive(Debug, Serialize, Deserialize)]
struct AliasRow {
    raw_name: String,
    canonical_key: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct TenureRow {
    author_key: String,
    journal_id: String,
    role: String,
    start_year: i32,
    start_month: Option<u8>,
    end_year: Option<i32>,
    end_month: Option<u8>,
}

fn open(path: &Path) -> Result<File, LoadError> {
    File::open(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn load_aliases(path: &Path) -> Result<AliasMap, LoadError> {
    parse_aliases(open(path)?, &path.display().to_string())
}

pub(crate) fn parse_aliases<R: Read>(reader: R, name: &str) -> Result<AliasMap, LoadError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut aliases = BTreeMap::new();
    for (index, row) in csv_reader.deserialize::<AliasRow>().enumerate() {
        let line = index + 2; // header is line 1
        let row = row.map_err(|e| LoadError::record(name, line, e.to_string()))?;
        // The key column may arrive in any spelling; canonicalize it so the
        // map always targets stable ids.
        let id = normalize_author(&row.canonical_key, &AliasMap::new())
            .map_err(|e| LoadError::record(name, line, format!("field `canonical_key`: {e}")))?;
        aliases.insert(row.raw_name, id);
    }
    Ok(aliases)
}

pub fn aliases_to_csv(aliases: &AliasMap) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for (raw_name, id) in aliases {
        writer
            .serialize(AliasRow {
                raw_name: raw_name.clone(),
                canonical_key: id.as_str().into(),
            })
            .expect("row serializes");
    }
    finish(writer)
}

pub fn load_tenures(path: &Path, aliases: &AliasMap) -> Result<Vec<EditorTenure>, LoadError> {
    parse_tenures(open(path)?, &path.display().to_string(), aliases)
}

pub(crate) fn parse_tenures<R: Read>(
    reader: R,
    name: &str,
    aliases: &AliasMap,
) -> Result<Vec<EditorTenure>, LoadError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut tenures = Vec::new();
    for (index, row) in csv_reader.deserialize::<TenureRow>().enumerate() {
        let line = index + 2;
        let row = row.map_err(|e| LoadError::record(name, line, e.to_string()))?;
        let author = normalize_author(&row.author_key, aliases)
            .map_err(|e| LoadError::record(name, line, format!("field `author_key`: {e}")))?;
        let start = YearMonth::new(row.start_year, row.start_month.unwrap_or(1))
            .map_err(|e| LoadError::record(name, line, format!("field `start_month`: {e}")))?;
        let end = match row.end_year {
            Some(year) => Some(
                YearMonth::new(year, row.end_month.unwrap_or(1))
                    .map_err(|e| LoadError::record(name, line, format!("field `end_month`: {e}")))?,
            ),
            None => None,
        };
        tenures.push(EditorTenure {
            author,
            journal_id: row.journal_id,
            role: row.role,
            start,
            end,
        });
    }
    Ok(tenures)
}

pub fn tenures_to_csv(tenures: &[EditorTenure]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for tenure in tenures {
        writer
            .serialize(TenureRow {
                author_key: tenure.author.as_str().into(),
                journal_id: tenure.journal_id.clone(),
                role: tenure.role.clone(),
                start_year: tenure.start.year(),
                start_month: Some(tenure.start.month()),
                end_year: tenure.end.map(|e| e.year()),
                end_month: tenure.end.map(|e| e.month()),
            })
            .expect("row serializes");
    }
    finish(writer)
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("csv flushes")).expect("utf-8")
}
