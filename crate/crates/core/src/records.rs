//! Line-delimited JSON records. Field names and value formats here are the
//! stable schema documented in `docs/records.md`; every record carries a
//! `record` discriminator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analyzer::{AnalysisReport, GameReport, GameStatus, SweepItem, SweepSummary, Tally};
use crate::filters::Certificate;
use crate::format::domino_strings;
use crate::model::{Game, TriSystem};
use crate::search::{Bound, SearchBounds, SearchOutcome, SearchStats};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Instance(InstanceRecord),
    Error(ErrorRecord),
    Summary(SummaryRecord),
    Verify(VerifyRecord),
    Solve(SolveRecord),
}

impl Record {
    /// One JSON line without the trailing newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusRecord {
    /// `yes`, `no` or `unknown`.
    pub status: String,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none", default)]
    pub match_seq: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<SearchStats>,
}

impl From<&GameStatus> for StatusRecord {
    fn from(s: &GameStatus) -> Self {
        let mut r = StatusRecord {
            status: s.label().into(),
            match_seq: None,
            certificate: None,
            bound: None,
            stats: None,
        };
        match s {
            GameStatus::DecidedYes(m) => r.match_seq = Some(m.indices().to_vec()),
            GameStatus::DecidedNo(c) => r.certificate = Some(c.clone()),
            GameStatus::Unknown(e) => {
                r.bound = Some(e.bound);
                r.stats = Some(e.stats);
            }
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub game: Game,
    #[serde(flatten)]
    pub status: StatusRecord,
    /// `filter`, `projection_filter:<game>`, `search` or `closure:<game>`.
    pub via: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub superseded: Option<Box<GameRecord>>,
}

impl From<&GameReport> for GameRecord {
    fn from(r: &GameReport) -> Self {
        GameRecord {
            game: r.game,
            status: (&r.status).into(),
            via: r.via.label(),
            superseded: r.superseded.as_ref().map(|(status, via)| {
                Box::new(GameRecord {
                    game: r.game,
                    status: status.into(),
                    via: via.label(),
                    superseded: None,
                })
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub seq: usize,
    pub alphabet: String,
    pub dominoes: Vec<[String; 3]>,
    pub games: Vec<GameRecord>,
    pub conjecture_witnessed: bool,
    pub states_used: usize,
}

impl InstanceRecord {
    pub fn new(seq: usize, system: &TriSystem, report: &AnalysisReport) -> Self {
        InstanceRecord {
            seq,
            alphabet: system.alphabet().to_string(),
            dominoes: domino_strings(system),
            games: report.games.iter().map(GameRecord::from).collect(),
            conjecture_witnessed: report.conjecture_witnessed,
            states_used: report.states_used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub seq: usize,
    pub alphabet: String,
    pub dominoes: Vec<[String; 3]>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub schema: u32,
    pub source: String,
    pub bounds: SearchBounds,
    pub instances: usize,
    pub errors: usize,
    pub witnessed: usize,
    pub witnessed_fraction: f64,
    pub per_game: BTreeMap<Game, Tally>,
    pub certificates: BTreeMap<String, usize>,
    pub states_used: usize,
}

impl SummaryRecord {
    pub fn new(source: impl Into<String>, bounds: SearchBounds, s: &SweepSummary) -> Self {
        SummaryRecord {
            schema: SCHEMA_VERSION,
            source: source.into(),
            bounds,
            instances: s.instances,
            errors: s.errors,
            witnessed: s.witnessed,
            witnessed_fraction: s.witnessed_fraction,
            per_game: s.per_game.clone(),
            certificates: s.certificates.clone(),
            states_used: s.states_used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rows {
    pub top: String,
    pub middle: String,
    pub bottom: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub game: Game,
    pub indices: Vec<usize>,
    pub result: bool,
    pub words: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub game: Game,
    pub bounds: SearchBounds,
    #[serde(flatten)]
    pub status: StatusRecord,
}

impl SolveRecord {
    pub fn new(game: Game, bounds: SearchBounds, outcome: &SearchOutcome) -> Self {
        SolveRecord {
            game,
            bounds,
            status: (&GameStatus::from(outcome.clone())).into(),
        }
    }
}

/// The record a sweep writes for one item.
pub fn sweep_record(item: &SweepItem) -> Record {
    match &item.outcome {
        Ok(report) => Record::Instance(InstanceRecord::new(item.seq, &item.system, report)),
        Err(e) => Record::Error(ErrorRecord {
            seq: item.seq,
            alphabet: item.system.alphabet().to_string(),
            dominoes: domino_strings(&item.system),
            error: e.to_string(),
        }),
    }
}
