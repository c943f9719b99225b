//! Author identity: canonical keys and rule-based name normalization.
//!
//! Identity is exact-match on a canonical key (`surname, initials`,
//! lowercased, diacritics folded) plus an explicit alias table. There is no
//! fuzzy disambiguation; spellings the rule cannot reconcile belong in the
//! alias table.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::{char::is_combining_mark, UnicodeNormalization};

/// Canonical author key. Stable under re-normalization:
/// `normalize_author(id.as_str(), ..) == id`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorId(String);

impl AuthorId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for AuthorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Raw name spelling → canonical key. Consulted before the normalization rule.
pub type AliasMap = BTreeMap<String, AuthorId>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NameError {
    #[error("empty or whitespace-only author name")]
    Empty,
    #[error("author name `{0}` has no alphanumeric content")]
    NoContent(String),
}

/// Resolve a raw author-name spelling to its canonical key.
///
/// The alias map wins on an exact (trimmed) match; otherwise the key is
/// derived as lowercase, diacritics-folded `surname, initials`. Names
/// without a comma treat the last whitespace-separated token as the surname.
pub fn normalize_author(raw_name: &str, aliases: &AliasMap) -> Result<AuthorId, NameError> {
    let trimmed = raw_name.trim();
    if trimmed.is_empty() {
        return Err(NameError::Empty);
    }
    if let Some(id) = aliases.get(trimmed) {
        return Ok(id.clone());
    }
    canonical_key(trimmed)
}

fn canonical_key(name: &str) -> Result<AuthorId, NameError> {
    let folded = fold(name);
    let (surname_part, given_part) = match folded.split_once(',') {
        // A comma marks the surname only when the given side yields
        // initials; otherwise the comma was noise (`"berg,"`) and the
        // surname side is re-split like a comma-less name.
        Some((s, g)) if !extract_initials(g).is_empty() => (s, g),
        Some((s, _)) => split_without_comma(s),
        None => split_without_comma(&folded),
    };

    let surname: String = {
        let joined = surname_part.split_whitespace().collect::<Vec<_>>().join(" ");
        // Periods stay put: a bare-initials key like `a.` must survive
        // re-normalization as a surname unchanged.
        joined
            .trim_matches(|c: char| !(c.is_alphanumeric() || c == '.'))
            .into()
    };
    let initials = extract_initials(given_part);

    let key = match (surname.is_empty(), initials.is_empty()) {
        (false, false) => alloc::format!("{surname}, {initials}"),
        (false, true) => surname,
        (true, false) => initials,
        (true, true) => return Err(NameError::NoContent(name.into())),
    };
    if !key.chars().any(char::is_alphanumeric) {
        return Err(NameError::NoContent(name.into()));
    }
    Ok(AuthorId(key))
}

/// No comma: the last whitespace token is the surname, the rest are given
/// names.
fn split_without_comma(s: &str) -> (&str, &str) {
    let t = s.trim();
    match t.rfind(' ') {
        Some(i) => (&t[i + 1..], &t[..i]),
        None => (t, ""),
    }
}

/// First character of each alphanumeric token, each followed by a period.
fn extract_initials(given: &str) -> String {
    given
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .flat_map(|t| t.chars().next().into_iter().chain(core::iter::once('.')))
        .collect()
}

/// NFKD-decompose, drop combining marks, lowercase, and keep only characters
/// meaningful to a name key (alphanumerics plus ` - ' . ,`).
fn fold(s: &str) -> String {
    s.nfkd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        .filter(|c| c.is_alphanumeric() || matches!(c, ' ' | '-' | '\'' | '.' | ','))
        .collect()
}
