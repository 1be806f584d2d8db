//! The matrix file format: a line holding `n`, then `n` lines of `n`
//! whitespace-separated entries from `{-1, 0, 1}`. Blank trailing lines are
//! ignored; anything else after the last row is an error.

use std::fmt;
use std::path::Path;

use detsquare::ensemble::SignedTernaryMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    /// 1-based character column; 0 when the whole line is at fault.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.column == 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (idx, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, idx)),
            (true, Some((c, s))) => {
                out.push((c, &line[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c, &line[s..]));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<SignedTernaryMatrix, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (first, header) = lines.next().ok_or_else(|| err(1, 0, "empty file, expected the dimension n"))?;
    let n = match tokens(header).as_slice() {
        [(col, tok)] => match tok.parse::<usize>() {
            Ok(0) => return Err(err(first, *col, "dimension must be at least 1")),
            Ok(n) => n,
            Err(_) => return Err(err(first, *col, format!("expected the dimension n, found `{tok}`"))),
        },
        [] => return Err(err(first, 0, "expected the dimension n, found an empty line")),
        [_, (col, tok), ..] => return Err(err(first, *col, format!("unexpected `{tok}` after the dimension"))),
    };
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut last = first;
    for (no, line) in lines.by_ref() {
        last = no;
        let toks = tokens(line);
        if rows.len() == n {
            if let Some((col, tok)) = toks.first() {
                return Err(err(no, *col, format!("unexpected `{tok}` after the {n} matrix rows")));
            }
            continue;
        }
        if toks.len() != n {
            let column = toks.get(n).map_or(0, |t| t.0);
            return Err(err(no, column, format!("expected {n} entries, found {}", toks.len())));
        }
        let mut row = Vec::with_capacity(n);
        for (col, tok) in toks {
            match tok {
                "-1" => row.push(-1),
                "0" | "-0" | "+0" => row.push(0),
                "1" | "+1" => row.push(1),
                _ => return Err(err(no, col, format!("expected an entry in {{-1, 0, 1}}, found `{tok}`"))),
            }
        }
        rows.push(row);
    }
    if rows.len() < n {
        return Err(err(
            last + 1,
            0,
            format!("file ended after {} of {n} rows", rows.len()),
        ));
    }
    Ok(SignedTernaryMatrix::from_rows(&rows).expect("entries validated above"))
}

#[derive(Debug)]
pub enum ReadError {
    Io(std::io::Error),
    Parse(ParseError),
}

impl fmt::Display for ReadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadError::Io(e) => e.fmt(f),
            ReadError::Parse(e) => e.fmt(f),
        }
    }
}

pub fn read_matrix_file(path: &Path) -> Result<SignedTernaryMatrix, ReadError> {
    let text = std::fs::read_to_string(path).map_err(ReadError::Io)?;
    parse_matrix(&text).map_err(ReadError::Parse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let m = parse_matrix("2\n1 1\n1 -1\n").unwrap();
        assert_eq!(m.row(1), &[1, -1]);
        let m = parse_matrix("1\n0").unwrap();
        assert_eq!(m.n(), 1);
        assert!(parse_matrix("  3 \n 1 0 0\n0\t1 0\n0 0 1\n\n\n").is_ok());
    }

    #[test]
    fn reports_positions() {
        let e = parse_matrix("2\n1 2\n0 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.to_string().contains("found `2`"));

        let e = parse_matrix("2\n1 0\n0\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 0));

        let e = parse_matrix("2\n1 0 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));

        let e = parse_matrix("2\n1 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("1 of 2 rows"));

        let e = parse_matrix("x\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));

        let e = parse_matrix("1\n1\n1\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));

        assert_eq!(parse_matrix("").unwrap_err().line, 1);
        assert_eq!(parse_matrix("0\n").unwrap_err().column, 1);
    }
}
