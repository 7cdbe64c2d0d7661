//! Line-oriented instance format.
//!
//! ```text
//! # comment
//! n C H
//! p h k s_min s_max      (n lines)
//! ```
//!
//! All fields are integers separated by whitespace; `#` starts a comment
//! that runs to the end of the line. Blank lines are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{ActivitySpec, Instance, Time};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: field `{field}`: invalid integer `{value}`")]
    BadInteger {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: field `{field}`: {reason}")]
    Invalid {
        line: usize,
        field: &'static str,
        reason: String,
    },
    #[error("missing header line `n C H`")]
    MissingHeader,
    #[error("expected {expected} activity lines, found {found}")]
    ActivityCount { expected: usize, found: usize },
}

const HEADER_FIELDS: [&str; 3] = ["n", "C", "H"];
const ACTIVITY_FIELDS: [&str; 5] = ["p", "h", "k", "s_min", "s_max"];

fn parse_fields<const N: usize>(
    line_no: usize,
    content: &str,
    names: [&'static str; N],
) -> Result<[i64; N], ParseError> {
    let tokens: Vec<&str> = content.split_whitespace().collect();
    if tokens.len() != N {
        return Err(ParseError::FieldCount {
            line: line_no,
            expected: N,
            found: tokens.len(),
        });
    }
    let mut out = [0i64; N];
    for (i, tok) in tokens.iter().enumerate() {
        out[i] = tok.parse().map_err(|_| ParseError::BadInteger {
            line: line_no,
            field: names[i],
            value: tok.to_string(),
        })?;
    }
    Ok(out)
}

fn invalid(line: usize, field: &'static str, reason: impl Into<String>) -> ParseError {
    ParseError::Invalid {
        line,
        field,
        reason: reason.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let [n, capacity, horizon] = parse_fields(header_line, header, HEADER_FIELDS)?;
    if n < 0 {
        return Err(invalid(header_line, "n", "must be >= 0"));
    }
    if capacity < 1 {
        return Err(invalid(header_line, "C", "must be >= 1"));
    }
    let n = n as usize;

    let mut activities = Vec::with_capacity(n);
    for (line_no, content) in lines {
        if activities.len() == n {
            return Err(ParseError::ActivityCount {
                expected: n,
                found: n + 1,
            });
        }
        let [p, h, k, lo, hi] = parse_fields(line_no, content, ACTIVITY_FIELDS)?;
        if p < 1 {
            return Err(invalid(line_no, "p", "must be >= 1"));
        }
        if h < 1 {
            return Err(invalid(line_no, "h", "must be >= 1"));
        }
        if k < 0 {
            return Err(invalid(line_no, "k", "must be >= 0"));
        }
        if lo < 0 {
            return Err(invalid(line_no, "s_min", "must be >= 0"));
        }
        if lo > hi {
            return Err(invalid(line_no, "s_max", "must be >= s_min"));
        }
        if hi + p + k > horizon {
            return Err(invalid(line_no, "s_max", format!("s_max + p + k exceeds horizon {horizon}")));
        }
        activities.push((ActivitySpec::new(p, h, k), lo as Time, hi as Time));
    }
    if activities.len() != n {
        return Err(ParseError::ActivityCount {
            expected: n,
            found: activities.len(),
        });
    }
    Ok(Instance::new(capacity, activities, Some(horizon)))
}

pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", instance.len(), instance.capacity, instance.horizon).unwrap();
    for a in instance.ids() {
        let spec = instance.spec(a);
        writeln!(
            out,
            "{} {} {} {} {}",
            spec.duration,
            spec.height,
            spec.slack,
            instance.bounds.s_min(a),
            instance.bounds.s_max(a)
        )
        .unwrap();
    }
    out
}
