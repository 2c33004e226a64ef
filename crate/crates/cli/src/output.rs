use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command's result in all three renderings.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
    /// False when a verification inside the report failed.
    pub pass: bool,
}

impl Report {
    pub fn new(json: Value, text: String) -> Self {
        Report { json, header: Vec::new(), rows: Vec::new(), text, pass: true }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Text => self.text.clone().into_bytes(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serialises");
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                w.into_inner().expect("in-memory flush")
            }
        }
    }

    pub fn write_to(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        out.write_all(&self.render(format))
    }
}

/// Left-aligned columns separated by two spaces.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.push_str(&" ".repeat(w - cell.chars().count() + 2));
            }
        }
        let mut s = s.trim_end().to_string();
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders() {
        let r = Report::new(json!({"a": 1}), "one\n".into()).table(&["p", "v"], vec![vec!["0".into(), "x,y".into()]]);
        assert_eq!(r.render(Format::Text), b"one\n");
        assert_eq!(String::from_utf8(r.render(Format::Csv)).unwrap(), "p,v\n0,\"x,y\"\n");
        assert_eq!(String::from_utf8(r.render(Format::Json)).unwrap(), "{\n  \"a\": 1\n}\n");
    }

    #[test]
    fn aligned_table() {
        let t = text_table(&["p", "fix"], &[vec!["10".into(), "3".into()]]);
        assert_eq!(t, "p   fix\n10  3\n");
    }
}
