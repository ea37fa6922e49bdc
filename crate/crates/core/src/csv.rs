//! CSV tables backed by the `csv` crate. Cells stay text; typing happens
//! during normalization.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h.trim() == name)
    }
}

fn convert(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::UnequalLengths { pos, expected_len, len } => {
            let line = pos.map(|p| p.line() as usize).or(line).unwrap_or(0);
            Error::data_at(line, format!("ragged row at line {line}: {len} cells, header has {expected_len}"))
        }
        csv::ErrorKind::Utf8 { pos, .. } => {
            let line = pos.map(|p| p.line() as usize).or(line).unwrap_or(0);
            Error::data_at(line, format!("invalid UTF-8 at line {line}"))
        }
        other => Error::format(format!("CSV error: {other:?}")),
    }
}

/// Line of a quote that is never closed. Every `"` toggles the quoted state,
/// which also treats a doubled `""` escape correctly.
fn unclosed_quote(text: &str) -> Option<usize> {
    let (mut line, mut open) = (1, None);
    for c in text.chars() {
        match c {
            '"' => open = if open.is_some() { None } else { Some(line) },
            '\n' => line += 1,
            _ => {}
        }
    }
    open
}

pub fn parse_csv(text: &str) -> Result<RawTable> {
    if let Some(line) = unclosed_quote(text) {
        return Err(Error::data_at(line, format!("unterminated quote starting at line {line}")));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().map_err(convert)?.iter().map(String::from).collect();
    if header.is_empty() {
        return Err(Error::format("CSV input has no header line"));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec.map_err(convert)?.iter().map(String::from).collect());
    }
    Ok(RawTable { header, rows })
}

/// Serializes with LF line ends; `parse_csv(&write_csv(t)) == t`.
pub fn write_csv(table: &RawTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in std::iter::once(&table.header).chain(&table.rows) {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("input was UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_table() {
        let t = parse_csv("a,b\n1,2").unwrap();
        assert_eq!(t.header, ["a", "b"]);
        assert_eq!(t.rows, vec![vec!["1", "2"]]);
    }

    #[test]
    fn quoted_comma_is_kept() {
        let t = parse_csv("id,s,p,name,sex,age\n2,1,1,\"Cumings, Mrs. John Bradley\",female,38\n").unwrap();
        assert_eq!(t.rows[0][2], "1");
        assert_eq!(t.rows[0][3], "Cumings, Mrs. John Bradley");
    }

    #[test]
    fn doubled_quotes_and_crlf() {
        let t = parse_csv("a,b\r\n\"say \"\"hi\"\"\",\r\n").unwrap();
        assert_eq!(t.rows, vec![vec!["say \"hi\"", ""]]);
    }

    #[test]
    fn unterminated_quote() {
        let err = parse_csv("a,b\n1,2\n\"1,2\n").unwrap_err();
        assert!(err.to_string().contains("unterminated quote starting at line 3"), "{err}");
    }

    #[test]
    fn bom_is_stripped() {
        let t = parse_csv("\u{feff}a,b\n1,2\n").unwrap();
        assert_eq!(t.header, ["a", "b"]);
    }

    #[test]
    fn ragged_row_names_line() {
        let err = parse_csv("a,b\n1,2\n1").unwrap_err();
        assert!(err.to_string().contains("ragged row at line 3"), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn line_numbers_count_embedded_newlines() {
        let err = parse_csv("a,b\n\"x\ny\",1\n1\n").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
    }

    #[test]
    fn lone_empty_cell_round_trips() {
        let t = RawTable { header: vec!["a".into()], rows: vec![vec![String::new()], vec!["x".into()]] };
        assert_eq!(parse_csv(&write_csv(&t)).unwrap(), t);
    }

    #[test]
    fn empty_input_has_no_header() {
        assert!(parse_csv("").is_err());
    }
}
