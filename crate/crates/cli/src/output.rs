//! Rendering of tabular results as aligned text, CSV or JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// One field of a row. High-precision numbers travel as strings so that no
/// digits are lost in JSON.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Int(u64),
    Bool(bool),
    Null,
}

impl Cell {
    fn display(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => "-".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Null => String::new(),
            other => other.display(),
        }
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(u64::from(i))
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Text(t) => s.serialize_str(t),
            Cell::Int(i) => s.serialize_u64(*i),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Null => s.serialize_unit(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

struct JsonRow<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct JsonRows<'a>(&'a Table);

impl Serialize for JsonRows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&JsonRow(&self.0.columns, row))?;
        }
        seq.end()
    }
}

struct JsonSection<'a>(&'a Table);

impl Serialize for JsonSection<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("table", &self.0.name)?;
        map.serialize_entry("rows", &JsonRows(self.0))?;
        map.end()
    }
}

fn write_text(out: &mut impl Write, table: &Table, titled: bool) -> io::Result<()> {
    if titled {
        writeln!(out, "{}", table.name)?;
    }
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(Cell::display).collect())
        .collect();
    let widths: Vec<usize> = (0..table.columns.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([table.columns[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields
            .iter()
            .zip(&widths)
            .map(|(f, &w)| format!("{f:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(table.columns.clone()))?;
    for row in &cells {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn write_csv(out: &mut impl Write, table: &Table) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(Cell::csv))?;
    }
    writer.flush()
}

/// Write one or more tables. A single table is written bare; several are
/// separated by their names.
pub fn emit(out: &mut impl Write, format: Format, tables: &[Table]) -> io::Result<()> {
    let many = tables.len() > 1;
    match format {
        Format::Table => {
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write_text(out, t, many)?;
            }
        }
        Format::Csv => {
            for (i, t) in tables.iter().enumerate() {
                if many {
                    if i > 0 {
                        writeln!(out)?;
                    }
                    writeln!(out, "# {}", t.name)?;
                }
                write_csv(out, t)?;
            }
        }
        Format::Json => {
            let text = if many {
                let sections: Vec<JsonSection> = tables.iter().map(JsonSection).collect();
                serde_json::to_string_pretty(&sections)
            } else {
                serde_json::to_string_pretty(&JsonRows(&tables[0]))
            };
            writeln!(out, "{}", text.map_err(io::Error::other)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["n", "value", "note"]);
        t.push(vec![10u64.into(), "1.5e-3".into(), Cell::Null]);
        t.push(vec![100u64.into(), "-2.25".into(), "a,b".into()]);
        t
    }

    fn render(format: Format, tables: &[Table]) -> String {
        let mut buf = Vec::new();
        emit(&mut buf, format, tables).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_quotes_and_blanks() {
        let text = render(Format::Csv, &[sample()]);
        assert_eq!(text, "n,value,note\n10,1.5e-3,\n100,-2.25,\"a,b\"\n");
    }

    #[test]
    fn json_keeps_column_order() {
        let text = render(Format::Json, &[sample()]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v[0]["n"], 10);
        assert_eq!(v[1]["value"], "-2.25");
        assert!(v[0]["note"].is_null());
        assert!(text.find("\"n\"").unwrap() < text.find("\"value\"").unwrap());
    }

    #[test]
    fn text_is_aligned() {
        let text = render(Format::Table, &[sample()]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n    value   note");
        assert_eq!(lines[1], "10   1.5e-3  -");
    }
}
