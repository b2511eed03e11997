//! Instance, corpus and report files.

pub mod corpus;
pub mod instance;
pub mod report;

pub use corpus::{read_corpus, write_corpus, CorpusError, CorpusRecord};
pub use instance::{derive_dropoff_windows, load_instance, parse_instance, render_instance, Format, Instance, ParseError};
pub use report::{ReportRow, ResultRow, REPORT_HEADER};
