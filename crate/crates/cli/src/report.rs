//! One report model, three renderers: aligned text tables, CSV, and JSON.

use depsub_core::{Money, Rate};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Money(Money),
    Rate(Rate),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn table_text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Money(m) => m.to_grouped(),
            Cell::Rate(r) => r.to_percent(),
            Cell::Bool(b) => if *b { "yes" } else { "no" }.to_owned(),
            Cell::Empty => "-".to_owned(),
        }
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Money(m) => m.to_plain(),
            Cell::Rate(r) => r.to_plain(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => Value::from(*n),
            Cell::Money(m) => Value::String(m.to_plain()),
            Cell::Rate(r) => Value::String(r.to_plain()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }

    fn right_aligned(&self) -> bool {
        matches!(self, Cell::Int(_) | Cell::Money(_) | Cell::Rate(_))
    }
}

impl From<Money> for Cell {
    fn from(m: Money) -> Self {
        Cell::Money(m)
    }
}

impl From<Rate> for Cell {
    fn from(r: Rate) -> Self {
        Cell::Rate(r)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Int(i64::from(n))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Section {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        assert_eq!(cells.len(), self.columns.len(), "row width in section {}", self.name);
        self.rows.push(cells);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: Section) -> &mut Self {
        self.sections.push(section);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for section in &self.sections {
            out.push_str(&format!("\n[{}]\n", section.name));
            let texts: Vec<Vec<String>> = section
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::table_text).collect())
                .collect();
            let widths: Vec<usize> = section
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    texts
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([c.chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let right: Vec<bool> = (0..section.columns.len())
                .map(|i| section.rows.iter().any(|r| r[i].right_aligned()))
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if right[i] {
                            format!("{c:>w$}", w = widths[i])
                        } else {
                            format!("{c:<w$}", w = widths[i])
                        }
                    })
                    .collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            out.push_str(&line(&section.columns));
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&format!("{}\n", rule.join("  ")));
            for row in &texts {
                out.push_str(&line(row));
            }
        }
        out
    }

    /// Sections as CSV blocks, each introduced by a `# name` line and
    /// separated by a blank line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, section) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("# {}\n", section.name));
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(&section.columns).expect("in-memory csv");
            for row in &section.rows {
                writer
                    .write_record(row.iter().map(Cell::csv_text))
                    .expect("in-memory csv");
            }
            let bytes = writer.into_inner().expect("in-memory csv");
            out.push_str(std::str::from_utf8(&bytes).expect("csv of utf-8 cells"));
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let sections = self
            .sections
            .iter()
            .map(|s| {
                let rows = s
                    .rows
                    .iter()
                    .map(|r| {
                        let object: Map<String, Value> = s
                            .columns
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::json_value))
                            .collect();
                        Value::Object(object)
                    })
                    .collect();
                let mut object = Map::new();
                object.insert("name".into(), Value::String(s.name.clone()));
                object.insert("rows".into(), Value::Array(rows));
                Value::Object(object)
            })
            .collect();
        let mut root = Map::new();
        root.insert("title".into(), Value::String(self.title.clone()));
        root.insert("sections".into(), Value::Array(sections));
        Value::Object(root)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_json_value()).expect("json of plain values");
        text.push('\n');
        text
    }
}
