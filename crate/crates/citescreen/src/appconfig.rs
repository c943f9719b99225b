//! Optional defaults file, pointed at by `CITESCREEN_CONFIG`. Explicit
//! command-line flags always win over anything set here.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use citescreen_core::screen::ScreeningConfig;

pub const CONFIG_ENV_VAR: &str = "CITESCREEN_CONFIG";

/// TOML shape:
///
/// ```toml
/// corpus = "corpus.jsonl"
/// aliases = "aliases.csv"
/// tenures = "tenures.csv"
/// out_dir = "reports"
/// format = "json"
///
/// [screening]
/// overdose_threshold = 6
/// alpha = 0.05
/// ```
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub corpus: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub tenures: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
    pub screening: ScreeningConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Malformed {
        path: String,
        #[source]
        source: Box<toml::de::Error>,
    },
}

pub fn parse_app_config(text: &str, path: &Path) -> Result<AppConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Malformed {
        path: path.display().to_string(),
        source: Box::new(e),
    })
}

/// Load the file named by `CITESCREEN_CONFIG`, or defaults when the
/// variable is unset. A set-but-broken pointer is an error: the user asked
/// for that file.
pub fn load_app_config() -> Result<AppConfig, ConfigError> {
    match std::env::var_os(CONFIG_ENV_VAR) {
        None => Ok(AppConfig::default()),
        Some(path) => {
            let path = PathBuf::from(path);
            let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::Unreadable {
                path: path.display().to_string(),
                source: e,
            })?;
            parse_app_config(&text, &path)
        }
    }
}
