//! Core analyses for screening citation records for potentially coercive
//! editor-citation patterns.
//!
//! The crate is `no_std` (with `alloc`): everything here is a pure function
//! over an immutable in-memory [`corpus::Corpus`], which keeps results
//! deterministic and lets callers parallelize per-author work freely. File
//! formats, IO, and the command-line front end live in the companion
//! `citescreen` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod author;
pub mod corpus;
pub mod metrics;
pub mod pipeline;
pub mod screen;
pub mod stats;
pub mod synth;

pub use author::{normalize_author, AliasMap, AuthorId, NameError};
pub use corpus::{
    Corpus, CorpusError, EditorTenure, IssueType, PubId, PublicationRecord, ValidationReport,
    Violation, YearMonth,
};
pub use pipeline::{run_pipeline, Classification, CitationEvent, CollectionChain, PipelineError};
pub use screen::{screen_editor, screen_journal, ScreeningConfig, ScreeningReport, Verdict};
pub use stats::{chi_square, chi_square_pvalue, ChiSquareResult, ContingencyTable, StatsError};
pub use synth::{generate, verify_recovery, GroundTruth, SynthConfig, SynthError};
