//! Command-line front end. Diagnostics go to stderr, data to stdout or
//! `--out-dir` files, so reports stay pipeable.
//!
//! Exit codes: 0 success (or a neutral screening), 1 usage or data error,
//! 2 elevated screening, 3 flagged screening.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{ArgAction, Args, Parser, Subcommand};

use citescreen_core::author::normalize_author;
use citescreen_core::corpus::Corpus;
use citescreen_core::metrics::{citation_series, h_index_series, HVariant};
use citescreen_core::pipeline::{run_pipeline, CollectionChain};
use citescreen_core::screen::{screen_editor, screen_journal, ScreeningConfig};
use citescreen_core::stats::{chi_square, ContingencyTable};
use citescreen_core::synth::{generate, SynthConfig};

use crate::appconfig::{load_app_config, AppConfig};
use crate::output;
use crate::records::{corpus_to_jsonl, load_corpus_with, CorpusFormat};
use crate::tables::tenures_to_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "citescreen",
    version,
    about = "Screen citation records for potentially coercive editor-citation patterns"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Corpus records file (JSONL, one publication per line)
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,

    /// Corpus file format
    #[arg(long, global = true, value_enum)]
    corpus_format: Option<CorpusFormat>,

    /// aliases.csv companion (raw_name,canonical_key)
    #[arg(long, global = true)]
    aliases: Option<PathBuf>,

    /// tenures.csv companion (editorial appointments)
    #[arg(long, global = true)]
    tenures: Option<PathBuf>,

    /// Write outputs into this directory instead of stdout
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Output format where a choice exists
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Overwrite existing files under --out-dir
    #[arg(long, global = true)]
    force: bool,

    /// Chatter on stderr (repeatable)
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Args)]
struct ScreeningArgs {
    /// Focal items in one reference list that count as an overdose
    #[arg(long)]
    overdose_threshold: Option<u32>,
    /// Post-appointment share of in-journal citations that flags
    #[arg(long)]
    post_share_flag: Option<f64>,
    /// In-journal share of all received citations that flags
    #[arg(long)]
    in_journal_share_flag: Option<f64>,
    /// Final-year h-index drop (all minus excluding-journal) that flags
    #[arg(long)]
    h_divergence_flag: Option<u64>,
    /// Journal self-citation rate that elevates
    #[arg(long)]
    rate_warn: Option<f64>,
    /// Journal self-citation rate that flags
    #[arg(long)]
    rate_suspend: Option<f64>,
    /// Significance level for the issue-type association test
    #[arg(long)]
    alpha: Option<f64>,
    /// Minimum event count below which share/association findings skip
    #[arg(long)]
    min_in_journal_events: Option<usize>,
}

impl ScreeningArgs {
    fn apply(&self, mut config: ScreeningConfig) -> ScreeningConfig {
        if let Some(v) = self.overdose_threshold {
            config.overdose_threshold = v;
        }
        if let Some(v) = self.post_share_flag {
            config.post_appointment_share_flag = v;
        }
        if let Some(v) = self.in_journal_share_flag {
            config.in_journal_share_flag = v;
        }
        if let Some(v) = self.h_divergence_flag {
            config.h_divergence_flag = v;
        }
        if let Some(v) = self.rate_warn {
            config.journal_rate_warn = v;
        }
        if let Some(v) = self.rate_suspend {
            config.journal_rate_suspend = v;
        }
        if let Some(v) = self.alpha {
            config.alpha = v;
        }
        if let Some(v) = self.min_in_journal_events {
            config.min_in_journal_events = v;
        }
        config
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load, validate, and summarize a corpus
    Ingest,

    /// Run the step 1-7 collection chain for one or more authors
    Pipeline {
        /// Focal author (raw name or canonical key; repeatable)
        #[arg(long, required = true)]
        author: Vec<String>,
        /// Journal of the editorial appointment
        #[arg(long)]
        journal: String,
    },

    /// Year-resolved h-index, with and without the journal's citations
    Hindex {
        #[arg(long)]
        author: String,
        /// Journal excluded in the second series
        #[arg(long)]
        journal: String,
        /// First year (default: first publication year)
        #[arg(long)]
        from: Option<i32>,
        /// Last year (default: last publication year)
        #[arg(long)]
        to: Option<i32>,
    },

    /// Per-year citation counts split by venue (stacked plot data)
    Series {
        #[arg(long)]
        author: String,
        #[arg(long)]
        journal: String,
        #[arg(long)]
        from: Option<i32>,
        #[arg(long)]
        to: Option<i32>,
    },

    /// Pearson chi-square test of independence on an inline table
    Chisq {
        /// Row-major observed counts, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        cells: Vec<u64>,
        /// Number of rows
        #[arg(long)]
        rows: usize,
        /// Significance level (default from config, else 0.05)
        #[arg(long)]
        alpha: Option<f64>,
    },

    /// Screen an (editor, journal) pair; exit code carries the verdict
    Screen {
        #[arg(long)]
        author: String,
        #[arg(long)]
        journal: String,
        #[command(flatten)]
        screening: ScreeningArgs,
    },

    /// Screen a journal's self-citation rate; exit code carries the verdict
    ScreenJournal {
        #[arg(long)]
        journal: String,
        /// First citing year of the window (default: all years)
        #[arg(long)]
        from: Option<i32>,
        /// Last citing year of the window
        #[arg(long)]
        to: Option<i32>,
        #[command(flatten)]
        screening: ScreeningArgs,
    },

    /// Generate a synthetic corpus with recorded ground truth
    Synth {
        /// Generator seed (overrides the config file)
        #[arg(long)]
        seed: Option<u64>,
        /// Generator config file (JSON shape of SynthConfig)
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Parse and execute `argv`, returning the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprint!("{err}");
                    1
                }
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

struct Session {
    global: GlobalArgs,
    config: AppConfig,
}

impl Session {
    fn format(&self) -> anyhow::Result<OutputFormat> {
        if let Some(format) = self.global.format {
            return Ok(format);
        }
        match self.config.format.as_deref() {
            None => Ok(OutputFormat::Json),
            Some("json") => Ok(OutputFormat::Json),
            Some("csv") => Ok(OutputFormat::Csv),
            Some("text") => Ok(OutputFormat::Text),
            Some(other) => bail!("config: unknown output format `{other}`"),
        }
    }

    fn out_dir(&self) -> Option<&Path> {
        self.global
            .out_dir
            .as_deref()
            .or(self.config.out_dir.as_deref())
    }

    fn screening(&self, overrides: &ScreeningArgs) -> ScreeningConfig {
        overrides.apply(self.config.screening.clone())
    }

    fn chatter(&self, message: &str) {
        if self.global.verbose > 0 {
            eprintln!("{message}");
        }
    }

    fn load_corpus(&self) -> anyhow::Result<Corpus> {
        let path = self
            .global
            .corpus
            .as_deref()
            .or(self.config.corpus.as_deref())
            .ok_or_else(|| anyhow!("no corpus file given (use --corpus or {})", crate::appconfig::CONFIG_ENV_VAR))?;
        let format = self.global.corpus_format.unwrap_or(CorpusFormat::Jsonl);
        let aliases = self
            .global
            .aliases
            .as_deref()
            .or(self.config.aliases.as_deref());
        let tenures = self
            .global
            .tenures
            .as_deref()
            .or(self.config.tenures.as_deref());
        let corpus = load_corpus_with(path, format, aliases, tenures)?;
        self.chatter(&format!(
            "loaded {} publications from {}",
            corpus.len(),
            path.display()
        ));
        Ok(corpus)
    }

    /// Data goes to stdout, or to `name` under --out-dir. Existing files
    /// are only replaced with --force.
    fn emit(&self, name: &str, content: &str) -> anyhow::Result<()> {
        match self.out_dir() {
            None => {
                print!("{content}");
                std::io::stdout().flush()?;
            }
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(name);
                if path.exists() && !self.global.force {
                    bail!("{} exists, pass --force to overwrite", path.display());
                }
                std::fs::write(&path, content)
                    .with_context(|| format!("writing {}", path.display()))?;
                self.chatter(&format!("wrote {}", path.display()));
            }
        }
        Ok(())
    }

    fn resolve_author(
        &self,
        corpus: &Corpus,
        raw: &str,
    ) -> anyhow::Result<citescreen_core::author::AuthorId> {
        Ok(normalize_author(raw, corpus.aliases())?)
    }

    fn year_range(
        &self,
        corpus: &Corpus,
        from: Option<i32>,
        to: Option<i32>,
    ) -> anyhow::Result<std::ops::RangeInclusive<i32>> {
        let span = corpus.year_span();
        let from = from
            .or(span.map(|(lo, _)| lo))
            .ok_or_else(|| anyhow!("empty corpus: specify --from"))?;
        let to = to
            .or(span.map(|(_, hi)| hi))
            .ok_or_else(|| anyhow!("empty corpus: specify --to"))?;
        if from > to {
            bail!("--from {from} is after --to {to}");
        }
        Ok(from..=to)
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let config = load_app_config()?;
    let session = Session { global: cli.global, config };

    match cli.command {
        Command::Ingest => {
            let corpus = session.load_corpus()?;
            let summary = output::IngestSummary::new(&corpus);
            let rendered = match session.format()? {
                OutputFormat::Json => serde_json::to_string_pretty(&summary)? + "\n",
                OutputFormat::Text | OutputFormat::Csv => summary.to_text(),
            };
            session.emit(
                match session.format()? {
                    OutputFormat::Json => "ingest.json",
                    _ => "ingest.txt",
                },
                &rendered,
            )?;
            Ok(0)
        }

        Command::Pipeline { author, journal } => {
            let corpus = session.load_corpus()?;
            let mut chains: Vec<CollectionChain> = Vec::with_capacity(author.len());
            for raw in &author {
                let focal = session.resolve_author(&corpus, raw)?;
                chains.push(run_pipeline(&corpus, &focal, &journal)?);
            }
            match session.format()? {
                OutputFormat::Json => {
                    session.emit("pipeline.json", &output::chains_to_json(&chains))?
                }
                OutputFormat::Csv | OutputFormat::Text => {
                    session.emit("pipeline.csv", &output::chains_to_csv(&chains))?
                }
            }
            Ok(0)
        }

        Command::Hindex { author, journal, from, to } => {
            let corpus = session.load_corpus()?;
            let focal = session.resolve_author(&corpus, &author)?;
            let years = session.year_range(&corpus, from, to)?;
            let all = h_index_series(&corpus, &focal, years.clone(), &HVariant::All);
            let excluding = h_index_series(
                &corpus,
                &focal,
                years,
                &HVariant::ExcludingJournal(journal.clone()),
            );
            match session.format()? {
                OutputFormat::Json => {
                    let body = serde_json::json!({ "all": all, "excluding": excluding });
                    session.emit("hindex.json", &(serde_json::to_string_pretty(&body)? + "\n"))?;
                }
                OutputFormat::Csv | OutputFormat::Text => {
                    session.emit("hindex.csv", &output::hindex_to_csv(&all, &excluding))?;
                }
            }
            Ok(0)
        }

        Command::Series { author, journal, from, to } => {
            let corpus = session.load_corpus()?;
            let focal = session.resolve_author(&corpus, &author)?;
            let years = session.year_range(&corpus, from, to)?;
            let series = citation_series(&corpus, &focal, &journal, years);
            match session.format()? {
                OutputFormat::Json => {
                    session.emit("series.json", &(serde_json::to_string_pretty(&series)? + "\n"))?;
                }
                OutputFormat::Csv | OutputFormat::Text => {
                    session.emit("series.csv", &output::citation_series_to_csv(&series))?;
                }
            }
            Ok(0)
        }

        Command::Chisq { cells, rows, alpha } => {
            if rows < 2 || cells.is_empty() || cells.len() % rows != 0 {
                bail!(
                    "--cells must hold a full row-major table for --rows {rows} (got {} cells)",
                    cells.len()
                );
            }
            let cols = cells.len() / rows;
            let observed: Vec<Vec<u64>> = cells.chunks(cols).map(<[u64]>::to_vec).collect();
            let table = ContingencyTable::new(
                (1..=rows).map(|r| format!("row{r}")).collect(),
                (1..=cols).map(|c| format!("col{c}")).collect(),
                observed,
            )?;
            let alpha = alpha.unwrap_or(session.config.screening.alpha);
            let result = chi_square(&table, alpha)?;
            session.emit("chisq.json", &(output::chi_square_to_json(&result) + "\n"))?;
            Ok(0)
        }

        Command::Screen { author, journal, screening } => {
            let corpus = session.load_corpus()?;
            let focal = session.resolve_author(&corpus, &author)?;
            let config = session.screening(&screening);
            let report = screen_editor(&corpus, &focal, &journal, &config)?;
            let (name, rendered) = match session.format()? {
                OutputFormat::Json => ("screen.json", output::report_to_json(&report) + "\n"),
                OutputFormat::Text | OutputFormat::Csv => {
                    ("screen.txt", output::report_to_text(&report))
                }
            };
            session.emit(name, &rendered)?;
            Ok(report.verdict.exit_code())
        }

        Command::ScreenJournal { journal, from, to, screening } => {
            let corpus = session.load_corpus()?;
            let window = match (from, to) {
                (None, None) => None,
                (from, to) => {
                    let range = session.year_range(&corpus, from, to)?;
                    Some((*range.start(), *range.end()))
                }
            };
            let config = session.screening(&screening);
            let report = screen_journal(&corpus, &journal, window, &config)?;
            let (name, rendered) = match session.format()? {
                OutputFormat::Json => {
                    ("screen-journal.json", output::report_to_json(&report) + "\n")
                }
                OutputFormat::Text | OutputFormat::Csv => {
                    ("screen-journal.txt", output::report_to_text(&report))
                }
            };
            session.emit(name, &rendered)?;
            Ok(report.verdict.exit_code())
        }

        Command::Synth { seed, config: config_path } => {
            let mut synth_config = match &config_path {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<SynthConfig>(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                None => SynthConfig::default(),
            };
            if let Some(seed) = seed {
                synth_config.seed = seed;
            }
            if session.out_dir().is_none() {
                bail!("synth writes corpus.jsonl, tenures.csv, and truth.json: pass --out-dir");
            }
            let (corpus, truth) = generate(&synth_config)?;
            session.chatter(&format!(
                "generated {} publications, {} injected citations",
                corpus.len(),
                truth.injected.len()
            ));
            session.emit("corpus.jsonl", &corpus_to_jsonl(&corpus))?;
            session.emit("tenures.csv", &tenures_to_csv(corpus.tenures()))?;
            session.emit("truth.json", &(serde_json::to_string_pretty(&truth)? + "\n"))?;
            Ok(0)
        }
    }
}
