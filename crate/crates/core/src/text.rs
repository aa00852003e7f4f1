//! Small text helpers shared by the loaders.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ParseError(pub String);

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        ParseError(msg.into())
    }
}

/// Lowercased alphanumeric tokens of `s`.
pub fn tokenize(s: &str) -> Vec<String> {
    s.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// Escapes tab, newline, space, `%` and `=` so a string fits in one field.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' => out.push_str("%25"),
            '\t' => out.push_str("%09"),
            '\n' => out.push_str("%0A"),
            '\r' => out.push_str("%0D"),
            ' ' => out.push_str("%20"),
            '=' => out.push_str("%3D"),
            _ => out.push(c),
        }
    }
    if out.is_empty() {
        out.push_str("%00");
    }
    out
}

pub fn unescape(s: &str) -> Result<String, ParseError> {
    if s == "%00" {
        return Ok(String::new());
    }
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = s.get(i + 1..i + 3).ok_or_else(|| ParseError::new(format!("bad escape in {s:?}")))?;
            let b = u8::from_str_radix(hex, 16).map_err(|_| ParseError::new(format!("bad escape in {s:?}")))?;
            out.push(b);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).map_err(|e| ParseError::new(e.to_string()))
}

/// Parses a whitespace-separated list of numbers.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, ParseError> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| ParseError::new(format!("bad number {t:?}"))))
        .collect()
}

pub fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, ParseError> {
    s.trim().parse().map_err(|_| ParseError::new(format!("bad {what}: {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer_lowercases_and_splits() {
        assert_eq!(tokenize("Graph-Mining, XML2 parsing"), ["graph", "mining", "xml2", "parsing"]);
        assert!(tokenize(" ,; ").is_empty());
    }

    #[test]
    fn escape_round_trips() {
        for s in ["", "a b\tc=d%e\n", "plain", "ünï cödé"] {
            let e = escape(s);
            assert!(!e.contains(['\t', ' ', '\n', '=']));
            assert_eq!(unescape(&e).unwrap(), s);
        }
    }
}
