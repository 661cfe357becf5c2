//! Survey harness for rank-2 Drinfeld modules over F_q(T).
//!
//! [`survey`] computes a [`records::RecordFile`] of per-prime invariants in
//! parallel, [`report`] turns one into density, exponent and splitting
//! tables, and [`cli`] wraps both in the `drinfeld` command.

pub mod cli;
pub mod config;
pub mod error;
pub mod records;
pub mod report;
pub mod survey;

pub use config::SurveyConfig;
pub use error::{Result, SurveyError};
pub use records::{Entry, RecordFile};
