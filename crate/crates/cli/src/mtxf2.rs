//! The `mtxf2` text format: a `rows cols` header, then one line per row with
//! the 1-based columns holding a one. A blank line is a zero row.

use std::fmt::Write as _;
use std::path::Path;

use qwr_core::BinMatrix;

use crate::error::CliError;

/// Parses `mtxf2` text. `source` names the input in error messages.
pub fn parse_matrix(text: &str, source: &str) -> Result<BinMatrix, CliError> {
    let err = |line: usize, msg: String| CliError::Parse { input: source.to_owned(), line, msg };
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [rows, cols] = dims.as_slice() else {
        return Err(err(1, format!("header must be `rows cols`, found {header:?}")));
    };
    let parse_dim = |s: &str| s.parse::<usize>().map_err(|_| err(1, format!("bad dimension {s:?}")));
    let (rows, cols) = (parse_dim(rows)?, parse_dim(cols)?);
    let mut supports = Vec::with_capacity(rows);
    for r in 0..rows {
        let (no, line) = lines.next().ok_or_else(|| err(r + 2, format!("expected {rows} rows, found {r}")))?;
        let mut support = Vec::new();
        for tok in line.split_whitespace() {
            let c: usize = tok.parse().map_err(|_| err(no, format!("bad column index {tok:?}")))?;
            if c == 0 || c > cols {
                return Err(err(no, format!("column {c} outside 1..={cols}")));
            }
            if support.contains(&(c - 1)) {
                return Err(err(no, format!("column {c} listed twice")));
            }
            support.push(c - 1);
        }
        support.sort_unstable();
        supports.push(support);
    }
    if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(no, format!("unexpected content after {rows} rows")));
    }
    Ok(BinMatrix::from_supports(cols, &supports))
}

pub fn parse_matrix_file(path: &Path) -> Result<BinMatrix, CliError> {
    let text = read_text(path)?;
    parse_matrix(&text, &path.display().to_string())
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

/// Canonical `mtxf2` text: ascending indices, one trailing newline.
#[must_use]
pub fn write_matrix(m: &BinMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row_support(r).iter().map(|c| (c + 1).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_rows() {
        let m = parse_matrix("2 3\n1 2\n2 3\n", "t").unwrap();
        assert_eq!(m, BinMatrix::from_dense(&[[1u8, 1, 0], [0, 1, 1]]));
    }

    #[test]
    fn blank_row_is_zero() {
        let m = parse_matrix("1 3\n\n", "t").unwrap();
        assert_eq!(m, BinMatrix::zeros(1, 3));
    }

    #[test]
    fn out_of_range_reports_line() {
        let e = parse_matrix("2 3\n1 4\n", "t").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
        assert!(matches!(parse_matrix("2 3\n1 2\n", "t").unwrap_err(), CliError::Parse { line: 3, .. }));
        assert!(matches!(parse_matrix("1 3\nx\n", "t").unwrap_err(), CliError::Parse { line: 2, .. }));
        assert!(matches!(parse_matrix("1 3\n0\n", "t").unwrap_err(), CliError::Parse { line: 2, .. }));
        assert!(matches!(parse_matrix("1 3\n1 1\n", "t").unwrap_err(), CliError::Parse { line: 2, .. }));
        assert!(matches!(parse_matrix("1 3\n1\n2\n", "t").unwrap_err(), CliError::Parse { line: 3, .. }));
        assert!(matches!(parse_matrix("3\n", "t").unwrap_err(), CliError::Parse { line: 1, .. }));
        assert!(matches!(parse_matrix("", "t").unwrap_err(), CliError::Parse { line: 1, .. }));
    }

    #[test]
    fn crlf_and_trailing_blanks() {
        let m = parse_matrix("1 2\r\n2 1\r\n\r\n\n", "t").unwrap();
        assert_eq!(m, BinMatrix::from_dense(&[[1u8, 1]]));
    }

    proptest! {
        #[test]
        fn round_trip(rows in 0usize..6, cols in 1usize..10, bits in proptest::collection::vec(any::<bool>(), 60)) {
            let dense: Vec<Vec<u8>> = (0..rows).map(|r| (0..cols).map(|c| u8::from(bits[r * 10 + c])).collect()).collect();
            let m = BinMatrix::from_dense_with_cols(cols, &dense);
            let text = write_matrix(&m);
            prop_assert_eq!(parse_matrix(&text, "t").unwrap(), m);
        }
    }
}
