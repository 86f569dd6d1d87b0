//! Plain-text instance documents.
//!
//! ```text
//! # comment
//! alphabet: ab
//! dominoes:
//! ab | a | ab
//! abb | babb | ab
//! ```
//!
//! Whitespace around tokens is ignored, as are blank lines and everything
//! after a `#`.

use std::fmt;

use crate::model::{is_letter_char, Alphabet, Domino, TriSystem, Violation, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: usize,
        message: String,
    },
    /// Structurally fine but breaks a system invariant. `line` is absent for
    /// whole-document problems such as a missing domino list.
    Invalid(Vec<(Option<usize>, Violation)>),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, message } => write!(f, "{message}, line {line}"),
            ParseError::Invalid(list) => {
                let parts: Vec<String> = list
                    .iter()
                    .map(|(line, v)| match line {
                        Some(l) => format!("{}, line {l}", v.summary()),
                        None => v.summary().to_string(),
                    })
                    .collect();
                f.write_str(&parts.join("; "))
            }
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse_instance(text: &str) -> Result<TriSystem, ParseError> {
    let mut alphabet: Option<(usize, Vec<u8>)> = None;
    let mut in_dominoes = false;
    let mut dominoes = Vec::new();
    let mut domino_lines = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| ParseError::Syntax {
            line: line_no,
            message: message.into(),
        };

        if alphabet.is_none() {
            let rest = line
                .strip_prefix("alphabet")
                .and_then(|r| r.trim_start().strip_prefix(':'))
                .ok_or_else(|| syntax("expected `alphabet: <letters>`"))?;
            let letters: Vec<u8> = rest.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
            alphabet = Some((line_no, letters));
            continue;
        }
        if !in_dominoes {
            if line.strip_prefix("dominoes").map(str::trim_start) != Some(":") {
                return Err(syntax("expected `dominoes:`"));
            }
            in_dominoes = true;
            continue;
        }

        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(syntax("expected `top | middle | bottom`"));
        }
        for f in &fields {
            if f.bytes().any(|b| b.is_ascii_whitespace()) {
                return Err(syntax("whitespace inside a word"));
            }
            if let Some(bad) = f.bytes().find(|&b| !is_letter_char(b)) {
                return Err(syntax(&format!(
                    "unexpected character {:?} in a word",
                    bad as char
                )));
            }
        }
        dominoes.push(Domino::new(fields[0], fields[1], fields[2]));
        domino_lines.push(line_no);
    }

    let Some((alphabet_line, letters)) = alphabet else {
        return Err(ParseError::Syntax {
            line: 1,
            message: "missing `alphabet:` line".into(),
        });
    };
    if !in_dominoes {
        return Err(ParseError::Syntax {
            line: alphabet_line,
            message: "missing `dominoes:` line".into(),
        });
    }

    let system = TriSystem::new_unchecked(Alphabet::new_unchecked(letters), dominoes);
    system.validate().map_err(|violations| {
        ParseError::Invalid(
            violations
                .into_iter()
                .map(|v| {
                    let line = match (&v, v.domino()) {
                        (_, Some(d)) => Some(domino_lines[d - 1]),
                        (Violation::NoDominoes, None) => None,
                        _ => Some(alphabet_line),
                    };
                    (line, v)
                })
                .collect(),
        )
    })?;
    Ok(system)
}

pub fn serialize_instance(system: &TriSystem) -> String {
    let mut out = format!("alphabet: {}\ndominoes:\n", system.alphabet());
    for d in system.dominoes() {
        out.push_str(&format!("{} | {} | {}\n", d.top, d.middle, d.bottom));
    }
    out
}

/// Dominoes as `[top, middle, bottom]` string triples.
pub fn domino_strings(system: &TriSystem) -> Vec<[String; 3]> {
    system
        .dominoes()
        .iter()
        .map(|d| {
            [
                d.top.to_string(),
                d.middle.to_string(),
                d.bottom.to_string(),
            ]
        })
        .collect()
}

/// Inverse of [`domino_strings`].
pub fn system_from_strings(alphabet: &str, dominoes: &[[String; 3]]) -> TriSystem {
    TriSystem::new_unchecked(
        Alphabet::new_unchecked(alphabet),
        dominoes
            .iter()
            .map(|[t, m, b]| Domino {
                top: Word::from(t.as_str()),
                middle: Word::from(m.as_str()),
                bottom: Word::from(b.as_str()),
            })
            .collect(),
    )
}
