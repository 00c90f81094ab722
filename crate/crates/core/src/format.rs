//! Pattern text format.
//!
//! ```text
//! 3
//! z u v
//! v z u
//! u v z
//! ```
//!
//! The first non-blank line is the order `n`; then `n` lines of `n`
//! whitespace-separated tokens. Blank lines and lines starting with `#` are
//! ignored. Written patterns use the tokens `x0`, `x1`, ... in first-occurrence
//! order.

use crate::error::{Error, Result};
use crate::pattern::{Pattern, MAX_ORDER};

/// Parses a pattern, reporting 1-based line and column positions on error.
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::malformed(1, 1, "empty input, expected the order"))?;
    let header_col = column_of_first_token(header);
    let mut header_tokens = header.split_whitespace();
    let order_token = header_tokens.next().unwrap_or_default();
    let order: usize = order_token.parse().map_err(|_| {
        Error::malformed(header_line, header_col, format!("expected an order, found {order_token:?}"))
    })?;
    if let Some(extra) = header_tokens.next() {
        return Err(Error::malformed(
            header_line,
            header.find(extra).map_or(1, |c| c + 1),
            "unexpected token after the order",
        ));
    }
    if order == 0 || order > MAX_ORDER {
        return Err(Error::malformed(
            header_line,
            header_col,
            format!("order {order} outside 1..={MAX_ORDER}"),
        ));
    }

    let mut cells: Vec<&str> = Vec::with_capacity(order * order);
    let mut last_line = header_line;
    for row in 0..order {
        let (line_no, line) = lines.next().ok_or_else(|| {
            Error::malformed(
                last_line + 1,
                1,
                format!("expected {order} rows, found {row}"),
            )
        })?;
        last_line = line_no;
        let tokens: Vec<(usize, &str)> = tokens_with_columns(line);
        if tokens.len() != order {
            let column = if tokens.len() > order {
                tokens[order].0
            } else {
                line.len() + 1
            };
            return Err(Error::malformed(
                line_no,
                column,
                format!("row {} has {} entries, expected {order}", row + 1, tokens.len()),
            ));
        }
        cells.extend(tokens.into_iter().map(|(_, t)| t));
    }
    if let Some((line_no, line)) = lines.next() {
        return Err(Error::malformed(
            line_no,
            column_of_first_token(line),
            "unexpected content after the last row",
        ));
    }
    Pattern::from_cells(order, &cells)
}

/// Canonical serialization (same as `Display`).
pub fn write_pattern(pattern: &Pattern) -> String {
    pattern.to_string()
}

fn column_of_first_token(line: &str) -> usize {
    line.find(|c: char| !c.is_whitespace()).map_or(1, |c| c + 1)
}

fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_circulant() {
        let p = parse_pattern("3\nz u v\nv z u\nu v z\n").unwrap();
        assert_eq!(p.cells(), &[0, 1, 2, 2, 0, 1, 1, 2, 0]);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let p = parse_pattern("# a pattern\n\n2\n a  b\n\nb a\n").unwrap();
        assert_eq!(p.cells(), &[0, 1, 1, 0]);
    }

    #[test]
    fn round_trip_is_identity() {
        let p = parse_pattern("3\nfoo bar foo\nbar bar q\nq q foo\n").unwrap();
        let text = write_pattern(&p);
        assert_eq!(parse_pattern(&text).unwrap(), p);
        assert!(text.starts_with("3\nx0 x1 x0\n"));
    }

    #[test]
    fn diagnostics_point_at_the_problem() {
        match parse_pattern("two\na b\n") {
            Err(Error::Malformed { line: 1, column: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_pattern("2\na b\nc\n") {
            Err(Error::Malformed { line: 3, column: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_pattern("2\na b c\nc d\n") {
            Err(Error::Malformed { line: 2, column: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_pattern("2\na b\n") {
            Err(Error::Malformed { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_pattern("1\na\nb\n") {
            Err(Error::Malformed { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_pattern("").is_err());
        assert!(parse_pattern("0\n").is_err());
        assert!(parse_pattern("40\n").is_err());
    }
}
