use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index out of range: {index} is not in [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index sequence must be nonempty")]
    EmptyIndexSequence,
    #[error("game {0} is not a pair game")]
    NotAPairGame(crate::model::Game),
    #[error("invalid system: {}", join_violations(.0))]
    InvalidSystem(Vec<Violation>),
    #[error("cannot cut a word of length {word_len} into {pieces} nonempty pieces")]
    InvalidCut { pieces: usize, word_len: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
