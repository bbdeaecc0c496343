//! Event CSV: the on-disk form of simulated runs.
//!
//! One row per beam event, fifteen fixed columns. Floats are written with
//! seventeen significant digits, so a parsed file reproduces the original
//! values bit for bit; the per-event RNG transcript is a debugging aid and
//! is not persisted.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::analysis::Deflection;
use crate::sim::EventRecord;
use crate::vec3::Vec3;

/// Column layout, in file order.
pub const COLUMNS: [&str; 15] = [
    "event_id",
    "accepted",
    "lr",
    "t_f1_s",
    "t_f2_s",
    "f1_x_m",
    "f1_y_m",
    "f1_z_m",
    "f2_x_m",
    "f2_y_m",
    "f2_z_m",
    "causal_separate",
    "bloch_x",
    "bloch_y",
    "bloch_z",
];

#[derive(Debug, Error)]
pub enum EventFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("event file is empty; expected a header row")]
    MissingHeader,
    #[error("unexpected header '{found}'")]
    HeaderMismatch { found: String },
    #[error("line {line}: expected {expected} columns, found {found}")]
    WrongColumnCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: column {column}: value '{value}' is malformed, expected {expected}")]
    BadField { line: usize, column: &'static str, value: String, expected: &'static str },
}

pub fn header() -> String {
    COLUMNS.join(",")
}

fn fmt_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "event fields are finite by construction");
    format!("{x:.16e}")
}

/// Writes the header plus one row per event.
pub fn write_events<W: Write>(w: &mut W, events: &[EventRecord]) -> io::Result<()> {
    writeln!(w, "{}", header())?;
    for e in events {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            e.event_id,
            e.accepted,
            e.lr.label(),
            fmt_f64(e.t_f1_s),
            fmt_f64(e.t_f2_s),
            fmt_f64(e.f1_hit_m.x),
            fmt_f64(e.f1_hit_m.y),
            fmt_f64(e.f1_hit_m.z),
            fmt_f64(e.f2_hit_m.x),
            fmt_f64(e.f2_hit_m.y),
            fmt_f64(e.f2_hit_m.z),
            e.causal_separate,
            fmt_f64(e.teleported_bloch.x),
            fmt_f64(e.teleported_bloch.y),
            fmt_f64(e.teleported_bloch.z),
        )?;
    }
    Ok(())
}

pub fn write_events_file<P: AsRef<Path>>(path: P, events: &[EventRecord]) -> io::Result<()> {
    let mut buf = Vec::new();
    write_events(&mut buf, events)?;
    fs::write(path, buf)
}

fn parse_field_u64(line: usize, column: &'static str, value: &str) -> Result<u64, EventFileError> {
    value.parse::<u64>().map_err(|_| EventFileError::BadField {
        line,
        column,
        value: value.to_string(),
        expected: "a non-negative integer",
    })
}

fn parse_field_f64(line: usize, column: &'static str, value: &str) -> Result<f64, EventFileError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(EventFileError::BadField {
            line,
            column,
            value: value.to_string(),
            expected: "a finite number",
        }),
    }
}

fn parse_field_bool(
    line: usize,
    column: &'static str,
    value: &str,
) -> Result<bool, EventFileError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(EventFileError::BadField {
            line,
            column,
            value: value.to_string(),
            expected: "true or false",
        }),
    }
}

/// Parses event-file text back into records. The RNG transcript is not part
/// of the file format, so parsed records carry an empty one.
pub fn parse_events(text: &str) -> Result<Vec<EventRecord>, EventFileError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (_, head) = lines.next().ok_or(EventFileError::MissingHeader)?;
    if head != header() {
        return Err(EventFileError::HeaderMismatch { found: head.to_string() });
    }
    let mut events = Vec::new();
    for (line, raw) in lines {
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != COLUMNS.len() {
            return Err(EventFileError::WrongColumnCount {
                line,
                expected: COLUMNS.len(),
                found: fields.len(),
            });
        }
        let lr = Deflection::from_label(fields[2]).ok_or_else(|| EventFileError::BadField {
            line,
            column: "lr",
            value: fields[2].to_string(),
            expected: "left, right, or none",
        })?;
        events.push(EventRecord {
            event_id: parse_field_u64(line, "event_id", fields[0])?,
            accepted: parse_field_bool(line, "accepted", fields[1])?,
            lr,
            t_f1_s: parse_field_f64(line, "t_f1_s", fields[3])?,
            t_f2_s: parse_field_f64(line, "t_f2_s", fields[4])?,
            f1_hit_m: Vec3::new(
                parse_field_f64(line, "f1_x_m", fields[5])?,
                parse_field_f64(line, "f1_y_m", fields[6])?,
                parse_field_f64(line, "f1_z_m", fields[7])?,
            ),
            f2_hit_m: Vec3::new(
                parse_field_f64(line, "f2_x_m", fields[8])?,
                parse_field_f64(line, "f2_y_m", fields[9])?,
                parse_field_f64(line, "f2_z_m", fields[10])?,
            ),
            causal_separate: parse_field_bool(line, "causal_separate", fields[11])?,
            teleported_bloch: Vec3::new(
                parse_field_f64(line, "bloch_x", fields[12])?,
                parse_field_f64(line, "bloch_y", fields[13])?,
                parse_field_f64(line, "bloch_z", fields[14])?,
            ),
            rng_draws: Vec::new(),
        });
    }
    Ok(events)
}

pub fn read_events_file<P: AsRef<Path>>(path: P) -> Result<Vec<EventRecord>, EventFileError> {
    parse_events(&fs::read_to_string(path)?)
}
