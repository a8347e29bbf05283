//! Table assembly and serialization.
//!
//! Every command produces a [`Table`]: a column header, homogeneous rows of
//! [`Cell`]s, and optional free-form notes.  The CSV form opens with a
//! `#`-prefixed metadata block (tool version, the full [`RunConfig`] as
//! JSON, the seed, a generation timestamp, then any notes) followed by an
//! RFC 4180 body.  The JSON form is a single object carrying the same
//! information and no timestamp.
//!
//! Apart from the `# generated:` line, identical configs produce
//! byte-identical output regardless of worker count.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::config::RunConfig;

/// One value in an output row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    UInt(u64),
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    /// Rendered as an empty CSV field / JSON `null`; used for columns that
    /// do not apply to a particular row.
    Empty,
}

impl Cell {
    fn to_field(&self) -> String {
        match self {
            Cell::UInt(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(v) => v.clone(),
            Cell::Bool(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::UInt(v) => serde_json::Value::from(*v),
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Value::from(round_sig(*v)),
            Cell::Text(v) => serde_json::Value::from(v.as_str()),
            Cell::Bool(v) => serde_json::Value::from(*v),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// Column names plus rows; the unit every emitter consumes.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra metadata lines (each becomes `# note: ...` in CSV and an
    /// entry of `notes` in JSON).  Must be deterministic.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "ragged output row");
        self.rows.push(row);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

/// Round to ten significant digits, the precision every emitted float
/// carries.  Going through the scientific text form and back yields the
/// shortest decimal that still parses to the rounded value, so `0.49`
/// prints as `0.49` rather than `4.900000000e-1`.
pub fn round_sig(value: f64) -> f64 {
    if !value.is_finite() {
        return value;
    }
    format!("{value:.9e}")
        .parse()
        .expect("rounded float parses")
}

/// Format a float at ten significant digits using the shortest
/// representation that round-trips.
pub fn format_float(value: f64) -> String {
    if value.is_nan() {
        return "NaN".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{}", round_sig(value))
}

fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Version reported in output metadata; taken from the crate itself.
pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Write the metadata block and the CSV body.
///
/// Layout:
/// ```text
/// # choicewalk <version>
/// # config: <RunConfig as one-line JSON>
/// # seed: <seed>
/// # generated: <unix seconds>
/// # note: <one line per table note, if any>
/// col_a,col_b,...
/// <rows>
/// ```
pub fn emit_csv(table: &Table, config: &RunConfig, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "# choicewalk {}", tool_version())?;
    writeln!(out, "# config: {}", config.to_json())?;
    writeln!(out, "# seed: {}", config.seed)?;
    writeln!(out, "# generated: {}", unix_timestamp())?;
    for note in &table.notes {
        writeln!(out, "# note: {note}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|cell| cell.to_field()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Write the same information as a single JSON object:
/// `{"tool", "version", "config", "seed", "notes", "columns", "rows"}`.
/// JSON output carries no timestamp and is therefore fully deterministic.
pub fn emit_json(table: &Table, config: &RunConfig, out: &mut dyn Write) -> std::io::Result<()> {
    let rows: Vec<Vec<serde_json::Value>> = table
        .rows
        .iter()
        .map(|row| row.iter().map(|cell| cell.to_json()).collect())
        .collect();
    let document = serde_json::json!({
        "tool": "choicewalk",
        "version": tool_version(),
        "config": config,
        "seed": config.seed,
        "notes": table.notes,
        "columns": table.columns,
        "rows": rows,
    });
    serde_json::to_writer_pretty(&mut *out, &document)?;
    writeln!(out)?;
    Ok(())
}

/// Extract the `# config:` line from emitted CSV text and parse it back.
pub fn config_from_csv(text: &str) -> Option<RunConfig> {
    let line = text.lines().find_map(|l| l.strip_prefix("# config: "))?;
    RunConfig::from_json(line).ok()
}

/// The portion of emitted CSV that must be byte-identical across reruns:
/// everything except the `# generated:` timestamp line.
pub fn reproducible_body(text: &str) -> String {
    text.lines()
        .filter(|line| !line.starts_with("# generated:"))
        .collect::<Vec<_>>()
        .join("\n")
}
