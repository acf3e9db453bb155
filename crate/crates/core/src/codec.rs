//! Text form of twisted virtual Gauss codes, and the JSON trace format.
//!
//! ```text
//! diagram := event ((','|WS)+ event)*
//! event   := ('O'|'U') INT SIGN? | 'V' INT | 'T' INT?
//! SIGN    := '+' | '-'
//! INT     := [1-9][0-9]*
//! ```
//!
//! Tokens are case-sensitive; WS is space, tab or newline. Separators at
//! the start or end of the input are ignored, so the empty string (or a
//! blank line) is the unknot.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facing::Facing;
use crate::model::{validate, CrossingSign, Diagram, Event, ModelError, Strand};
use crate::scheduler::{DanceRule, Schedule};

/// Byte range into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub byte_start: usize,
    pub byte_end: usize,
}

impl SourceSpan {
    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.byte_start..self.byte_end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("input is not valid UTF-8 (at byte {valid_up_to})")]
    Utf8 { valid_up_to: usize },
    #[error("unrecognised token {token:?} at bytes {}..{}", span.byte_start, span.byte_end)]
    Lex { token: String, span: SourceSpan },
    #[error("{error} at bytes {}..{}", span.byte_start, span.byte_end)]
    Invalid { error: ModelError, span: SourceSpan },
}

impl ParseError {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            ParseError::Utf8 { .. } => None,
            ParseError::Lex { span, .. } | ParseError::Invalid { span, .. } => Some(*span),
        }
    }
}

fn is_separator(c: char) -> bool {
    matches!(c, ',' | ' ' | '\t' | '\n')
}

fn tokens(text: &str) -> impl Iterator<Item = (&str, SourceSpan)> {
    let mut rest = text.char_indices().peekable();
    std::iter::from_fn(move || {
        while rest.next_if(|&(_, c)| is_separator(c)).is_some() {}
        let (start, _) = *rest.peek()?;
        let mut end = start;
        while let Some((i, c)) = rest.next_if(|&(_, c)| !is_separator(c)) {
            end = i + c.len_utf8();
        }
        let span = SourceSpan {
            byte_start: start,
            byte_end: end,
        };
        Some((span.slice(text), span))
    })
}

fn parse_int(digits: &str) -> Option<u32> {
    let first = digits.bytes().next()?;
    if !(b'1'..=b'9').contains(&first) || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// `bar_ordinal` is the 1-based position of this token among all bar
/// tokens, used as the id when the bar carries none.
fn lex_event(token: &str, bar_ordinal: u32) -> Option<Event> {
    let (head, body) = token.split_at(
        token
            .find(|c: char| !c.is_ascii_uppercase())
            .unwrap_or(token.len()),
    );
    match head {
        "O" | "U" => {
            let (digits, sign) = match body.as_bytes().last() {
                Some(b'+') => (&body[..body.len() - 1], CrossingSign::Positive),
                Some(b'-') => (&body[..body.len() - 1], CrossingSign::Negative),
                _ => (body, CrossingSign::Positive),
            };
            let crossing = parse_int(digits)?;
            let strand = if head == "O" {
                Strand::Over
            } else {
                Strand::Under
            };
            Some(Event::Classical {
                crossing,
                strand,
                sign,
            })
        }
        "V" => parse_int(body).map(|crossing| Event::Virtual { crossing }),
        "T" if body.is_empty() => Some(Event::TwistBar { bar: bar_ordinal }),
        "T" => parse_int(body).map(|bar| Event::TwistBar { bar }),
        _ => None,
    }
}

pub fn parse(text: &str) -> Result<Diagram, ParseError> {
    let mut events = Vec::new();
    let mut spans = Vec::new();
    let mut bars = 0u32;
    for (token, span) in tokens(text) {
        if token.starts_with('T') {
            bars = bars.saturating_add(1);
        }
        let event = lex_event(token, bars).ok_or_else(|| ParseError::Lex {
            token: token.to_string(),
            span,
        })?;
        events.push(event);
        spans.push(span);
    }
    validate(events).map_err(|error| ParseError::Invalid {
        span: spans[error.event_index()],
        error,
    })
}

pub fn parse_bytes(bytes: &[u8]) -> Result<Diagram, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::Utf8 {
        valid_up_to: e.valid_up_to(),
    })?;
    parse(text)
}

/// Canonical form: one space between tokens, explicit signs.
pub fn serialize(diagram: &Diagram) -> String {
    diagram
        .events()
        .iter()
        .map(Event::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<TracePlan>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: usize,
    pub dancer: usize,
    pub event_index: usize,
    pub event: String,
    pub facing: Facing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePlan {
    pub points: Vec<usize>,
    pub k: usize,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facings: Option<Vec<Facing>>,
}

impl From<&Schedule> for Trace {
    fn from(schedule: &Schedule) -> Self {
        Trace {
            steps: schedule
                .steps
                .iter()
                .enumerate()
                .map(|(t, s)| TraceStep {
                    t,
                    dancer: s.dancer,
                    event_index: s.event_index,
                    event: s.event.to_string(),
                    facing: s.facing,
                })
                .collect(),
            feasible: schedule.feasible,
            plan: schedule.plan.as_ref().map(|p| TracePlan {
                points: p.points.iter().map(|g| g.0).collect(),
                k: p.k,
                rule: p.rule.name().to_string(),
                facings: match &p.rule {
                    DanceRule::Forward => None,
                    DanceRule::Matching(f) => Some(f.facings().to_vec()),
                },
            }),
        }
    }
}

pub fn trace_to_json(schedule: &Schedule) -> String {
    serde_json::to_string(&Trace::from(schedule)).expect("trace serializes")
}
