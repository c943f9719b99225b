//! IO, file formats, and the command-line front end for the citation
//! screening toolkit. The analyses themselves live in `citescreen-core`;
//! this crate moves bytes in and out of them.

pub mod appconfig;
pub mod cli;
pub mod output;
pub mod records;
pub mod tables;
