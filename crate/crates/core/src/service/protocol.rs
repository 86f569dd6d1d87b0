//! Session wire protocol, version 1: one JSON object per line in each
//! direction. See `docs/protocol.md`.

use serde::{Deserialize, Serialize};

use super::session::{SessionError, SessionStore, SessionView};
use crate::format::{domino_strings, parse_instance};
use crate::model::Game;

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Op {
    /// `instance` uses the plain-text instance format.
    Create {
        instance: String,
    },
    Play {
        session: String,
        index: usize,
    },
    Undo {
        session: String,
    },
    View {
        session: String,
    },
    Hint {
        session: String,
        game: Game,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Request {
    #[serde(default)]
    pub v: Option<u32>,
    #[serde(flatten)]
    pub op: Op,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Response {
    pub v: u32,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominoes: Option<Vec<[String; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub view: Option<SessionView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub game: Option<Game>,
    /// Present on hint responses; `null` when no winning continuation was
    /// found within the hint bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<Option<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

impl Response {
    fn ok(op: &'static str, session: String) -> Self {
        Response {
            v: PROTOCOL_VERSION,
            ok: true,
            op: Some(op),
            session: Some(session),
            alphabet: None,
            dominoes: None,
            view: None,
            game: None,
            hint: None,
            error: None,
        }
    }

    fn error(kind: &str, message: impl Into<String>) -> Self {
        Response {
            v: PROTOCOL_VERSION,
            ok: false,
            op: None,
            session: None,
            alphabet: None,
            dominoes: None,
            view: None,
            game: None,
            hint: None,
            error: Some(ErrorBody {
                kind: kind.into(),
                message: message.into(),
            }),
        }
    }

    fn with_view(mut self, view: SessionView) -> Self {
        self.view = Some(view);
        self
    }
}

impl From<SessionError> for Response {
    fn from(e: SessionError) -> Self {
        Response::error(e.kind(), e.to_string())
    }
}

pub fn handle(store: &SessionStore, request: Request) -> Response {
    if let Some(v) = request.v {
        if v != PROTOCOL_VERSION {
            return Response::error(
                "unsupported_version",
                format!("protocol version {v} is not supported"),
            );
        }
    }
    let result = match request.op {
        Op::Create { instance } => {
            let system = match parse_instance(&instance) {
                Ok(s) => s,
                Err(e) => return Response::error("invalid_instance", e.to_string()),
            };
            store.create(system.clone()).map(|(id, view)| {
                let mut r = Response::ok("create", id).with_view(view);
                r.alphabet = Some(system.alphabet().to_string());
                r.dominoes = Some(domino_strings(&system));
                r
            })
        }
        Op::Play { session, index } => store
            .play(&session, index)
            .map(|v| Response::ok("play", session).with_view(v)),
        Op::Undo { session } => store
            .undo(&session)
            .map(|v| Response::ok("undo", session).with_view(v)),
        Op::View { session } => store
            .view(&session)
            .map(|v| Response::ok("view", session).with_view(v)),
        Op::Hint { session, game } => store.hint(&session, game).map(|h| {
            let mut r = Response::ok("hint", session);
            r.game = Some(game);
            r.hint = Some(h);
            r
        }),
    };
    result.unwrap_or_else(Response::from)
}

/// Handles one request line and returns one response line (no newline).
pub fn handle_line(store: &SessionStore, line: &str) -> String {
    let response = match serde_json::from_str::<Request>(line) {
        Ok(req) => handle(store, req),
        Err(e) => Response::error("bad_request", e.to_string()),
    };
    serde_json::to_string(&response).expect("responses always serialize")
}
