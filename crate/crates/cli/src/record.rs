//! Run records and their serialization. Every record embeds the resolved
//! configuration, and all floating-point output uses 17 significant digits
//! so files round-trip and deterministic runs compare byte for byte.

use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};
use std::io::{self, Write};

/// One table cell; numeric cells are formatted identically in CSV and JSON.
#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

/// Output of one run: resolved config echo, a result table, and metadata.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub config: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, Cell)>,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        RunRecord {
            config: vec![("command".to_string(), command.to_string())],
            columns: Vec::new(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn config_entry(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn meta(&mut self, key: &str, value: Cell) {
        self.metadata.push((key.to_string(), value));
    }
}

/// 17 significant digits; enough to reconstruct the exact double.
fn format_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_cell(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => format_num(*x),
        Cell::Int(n) => n.to_string(),
        Cell::Text(s) => csv_escape(s),
        Cell::Flag(b) => b.to_string(),
    }
}

pub fn emit_csv(record: &RunRecord, w: &mut dyn Write) -> io::Result<()> {
    for (k, v) in &record.config {
        writeln!(w, "# {k}={v}")?;
    }
    for (k, v) in &record.metadata {
        writeln!(w, "# {k}={}", csv_cell(v))?;
    }
    writeln!(w, "{}", record.columns.join(","))?;
    for row in &record.rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) => s.serialize_f64(*x),
            Cell::Int(n) => s.serialize_u64(*n),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Flag(b) => s.serialize_bool(*b),
        }
    }
}

struct PairMap<'a, V>(&'a [(String, V)]);

impl<V: Serialize> Serialize for PairMap<'_, V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Row<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.1.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Rows<'a>(&'a RunRecord);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&Row(&self.0.columns, row))?;
        }
        seq.end()
    }
}

impl Serialize for RunRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("config", &PairMap(&self.config))?;
        map.serialize_entry("results", &Rows(self))?;
        map.serialize_entry("metadata", &PairMap(&self.metadata))?;
        map.end()
    }
}

/// JSON formatter that writes doubles with full precision instead of the
/// shortest representation.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: Write + ?Sized>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }
}

pub fn emit_json(record: &RunRecord, w: &mut dyn Write) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *w, SciFormatter);
    record
        .serialize(&mut ser)
        .map_err(|e| io::Error::new(io::ErrorKind::Other, e))?;
    writeln!(w)
}
