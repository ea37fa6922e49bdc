//! ARFF reader and writer for nominal and numeric attributes.
//!
//! The writer output is stable: `parse_arff(&write_arff(d))` reproduces `d`
//! (the target attribute is not part of the format and comes back unset).

use crate::dataset::{AttributeKind, AttributeSpec, CellValue, Dataset};
use crate::error::{Error, Result};

const SPECIAL: &[char] = &['{', '}', ',', '%', '\'', '"', '\\'];

/// Quotes a name or value when it would not survive unquoted tokenization.
pub fn quote(s: &str) -> String {
    let needs = s.is_empty() || s == "?" || s.chars().any(|c| c.is_whitespace() || SPECIAL.contains(&c));
    if !needs {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out.push('\'');
    out
}

pub fn write_arff(d: &Dataset) -> String {
    let mut out = format!("@relation {}\n\n", quote(&d.relation));
    for attr in d.attributes() {
        let ty = match &attr.kind {
            AttributeKind::Nominal(values) => {
                let quoted: Vec<String> = values.iter().map(|v| quote(v)).collect();
                format!("{{{}}}", quoted.join(","))
            }
            AttributeKind::Numeric => "numeric".to_string(),
        };
        out.push_str(&format!("@attribute {} {ty}\n", quote(&attr.name)));
    }
    out.push_str("\n@data\n");
    for row in d.instances() {
        let cells: Vec<String> = row
            .iter()
            .zip(d.attributes())
            .map(|(cell, attr)| match *cell {
                CellValue::Missing => "?".to_string(),
                CellValue::Nominal(i) => quote(&attr.values().expect("nominal attribute")[i]),
                CellValue::Numeric(x) => format!("{x}"),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, PartialEq)]
struct Token {
    text: String,
    quoted: bool,
}

/// Reads one possibly-quoted token starting at byte `pos`; stops at any of
/// `stops` (or whitespace, when `stop_ws`). Returns the token and the next position.
fn read_token(s: &str, pos: usize, stops: &[char], stop_ws: bool, line: usize) -> Result<(Token, usize)> {
    let rest = &s[pos..];
    let skipped = rest.len() - rest.trim_start().len();
    let start = pos + skipped;
    let mut it = s[start..].char_indices().peekable();
    match it.peek() {
        Some(&(_, q)) if q == '\'' || q == '"' => {
            it.next();
            let mut text = String::new();
            while let Some((i, c)) = it.next() {
                if c == q {
                    return Ok((Token { text, quoted: true }, start + i + c.len_utf8()));
                }
                if c == '\\' {
                    let (_, e) = it.next().ok_or_else(|| Error::format(format!("line {line}: dangling escape")))?;
                    text.push(match e {
                        'n' => '\n',
                        'r' => '\r',
                        't' => '\t',
                        other => other,
                    });
                } else {
                    text.push(c);
                }
            }
            Err(Error::format(format!("line {line}: unterminated quote")))
        }
        _ => {
            let end = s[start..]
                .char_indices()
                .find(|&(_, c)| stops.contains(&c) || (stop_ws && c.is_whitespace()))
                .map_or(s.len(), |(i, _)| start + i);
            Ok((Token { text: s[start..end].trim_end().to_string(), quoted: false }, end))
        }
    }
}

/// Splits a comma-separated list of possibly-quoted items.
fn split_list(s: &str, line: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut pos = 0;
    loop {
        let (tok, next) = read_token(s, pos, &[','], false, line)?;
        out.push(tok);
        let rest = s[next..].trim_start();
        if rest.is_empty() {
            return Ok(out);
        }
        if !rest.starts_with(',') {
            return Err(Error::format(format!("line {line}: unexpected text '{rest}' after value")));
        }
        pos = s.len() - rest.len() + 1;
    }
}

fn keyword(line: &str) -> Option<(String, &str)> {
    let body = line.strip_prefix('@')?;
    let end = body.find(char::is_whitespace).unwrap_or(body.len());
    Some((body[..end].to_ascii_lowercase(), &body[end..]))
}

fn parse_attribute(rest: &str, line: usize) -> Result<AttributeSpec> {
    let (name, next) = read_token(rest, 0, &['{'], true, line)?;
    if name.text.is_empty() && !name.quoted {
        return Err(Error::format(format!("line {line}: @attribute without a name")));
    }
    let ty = rest[next..].trim();
    if let Some(inner) = ty.strip_prefix('{') {
        let inner =
            inner.strip_suffix('}').ok_or_else(|| Error::format(format!("line {line}: unclosed value list")))?;
        let values = split_list(inner, line)?.into_iter().map(|t| t.text);
        return AttributeSpec::nominal(name.text, values).map_err(|e| Error::format(format!("line {line}: {e}")));
    }
    match ty.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => Ok(AttributeSpec::numeric(name.text)),
        other => Err(Error::format(format!(
            "line {line}: unsupported attribute type '{other}' for {} (only nominal and numeric)",
            name.text
        ))),
    }
}

fn parse_row(text: &str, line: usize, attrs: &[AttributeSpec]) -> Result<Vec<CellValue>> {
    if text.starts_with('{') {
        return Err(Error::format(format!("line {line}: sparse rows are not supported")));
    }
    let tokens = split_list(text, line)?;
    if tokens.len() != attrs.len() {
        return Err(Error::data_at(
            line,
            format!("line {line}: row has {} values, expected {}", tokens.len(), attrs.len()),
        ));
    }
    tokens
        .into_iter()
        .zip(attrs)
        .map(|(tok, attr)| {
            if !tok.quoted && tok.text == "?" {
                return Ok(CellValue::Missing);
            }
            match &attr.kind {
                AttributeKind::Nominal(_) => attr.index_of(&tok.text).map(CellValue::Nominal).ok_or_else(|| {
                    Error::data_at(
                        line,
                        format!("line {line}: undeclared value '{}' for attribute {}", tok.text, attr.name),
                    )
                }),
                AttributeKind::Numeric => tok.text.trim().parse::<f64>().map(CellValue::Numeric).map_err(|_| {
                    Error::data_at(
                        line,
                        format!("line {line}: '{}' is not a number (attribute {})", tok.text, attr.name),
                    )
                }),
            }
        })
        .collect()
}

pub fn parse_arff(text: &str) -> Result<Dataset> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut relation: Option<String> = None;
    let mut attrs = Vec::new();
    let mut data: Option<Dataset> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some(d) = data.as_mut() {
            let row = parse_row(trimmed, line, d.attributes())?;
            d.push(row)?;
            continue;
        }
        let (kw, rest) = keyword(trimmed)
            .ok_or_else(|| Error::format(format!("line {line}: expected @relation, @attribute or @data")))?;
        match kw.as_str() {
            "relation" => {
                let (tok, _) = read_token(rest, 0, &[], false, line)?;
                relation = Some(tok.text);
            }
            "attribute" => attrs.push(parse_attribute(rest, line)?),
            "data" => {
                let name =
                    relation.take().ok_or_else(|| Error::format(format!("line {line}: @data before @relation")))?;
                data = Some(Dataset::new(name, std::mem::take(&mut attrs)));
            }
            other => return Err(Error::format(format!("line {line}: unknown keyword @{other}"))),
        }
    }
    data.ok_or_else(|| Error::format("missing @data section"))
}
