//! Threefold Post correspondence systems and their four solitaire games.
//!
//! A system is a list of dominoes with a top, middle and bottom word. The
//! threefold game asks for a nonempty list of dominoes whose three rows
//! spell the same word; the three pair games ask the same of two rows. This
//! crate checks candidate lists, searches for matches under explicit
//! resource bounds, issues certificates when no match can exist, and runs
//! sweeps that record how often at least one of the four games is decided.

pub mod analyzer;
pub mod error;
pub mod filters;
pub mod format;
pub mod generator;
pub mod model;
pub mod records;
pub mod search;
pub mod service;

pub use analyzer::{analyze, sweep, AnalysisReport, GameReport, GameStatus, SweepSummary, Via};
pub use error::{Error, Result};
pub use filters::{filter_pair, filter_triple, Certificate};
pub use format::{parse_instance, serialize_instance, ParseError};
pub use generator::{canonicalize, enumerate, plant_match, random_instance, EnumParams};
pub use model::{Alphabet, Domino, Game, MatchSeq, PairSystem, Row, TriSystem, Violation, Word};
pub use search::{search_pair, search_triple, Bound, SearchBounds, SearchOutcome};
