use std::fs::File;
use std::io::Read;
use std::path::Path;

use csv::{ReaderBuilder, Trim};

use super::IoError;
use crate::model::CountTable;

fn parse_error(line: u64, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

/// Parses a counts CSV: row 1 holds the `Y=1` counts, row 2 the `Y=0`
/// counts. A first row containing any non-integer field is taken as a header
/// and must have as many columns as the data rows. Lines starting with `#`
/// and blank lines are ignored.
pub fn parse_counts<R: Read>(input: R) -> Result<CountTable, IoError> {
    let mut reader =
        ReaderBuilder::new().has_headers(false).comment(Some(b'#')).flexible(true).trim(Trim::All).from_reader(input);

    let mut header: Option<(u64, usize)> = None;
    let mut rows: Vec<(u64, Vec<u64>)> = Vec::with_capacity(2);
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<Option<u64>> = record.iter().map(|f| f.parse::<u64>().ok()).collect();
        if parsed.iter().any(Option::is_none) {
            if header.is_none() && rows.is_empty() {
                header = Some((line, record.len()));
                continue;
            }
            let (col, field) =
                record.iter().enumerate().find(|(_, f)| f.parse::<u64>().is_err()).expect("some field failed to parse");
            return Err(parse_error(
                line,
                format!("column {}: expected a nonnegative integer count, got {field:?}", col + 1),
            ));
        }
        if rows.len() == 2 {
            return Err(parse_error(line, "expected exactly two data rows (Y=1 then Y=0)"));
        }
        rows.push((line, parsed.into_iter().map(Option::unwrap).collect()));
    }

    if rows.len() != 2 {
        return Err(IoError::Format(format!("expected two data rows (Y=1 then Y=0), found {}", rows.len())));
    }
    let (line1, n1) = rows.remove(0);
    let (line0, n0) = rows.remove(0);
    if n1.len() < 2 {
        return Err(parse_error(line1, format!("need at least 2 columns, got {}", n1.len())));
    }
    if n0.len() != n1.len() {
        return Err(parse_error(line0, format!("expected {} columns, got {}", n1.len(), n0.len())));
    }
    if let Some((line, cols)) = header {
        if cols != n1.len() {
            return Err(parse_error(line, format!("header has {cols} columns but data rows have {}", n1.len())));
        }
    }
    Ok(CountTable::new(n1, n0)?)
}

pub fn read_counts(path: &Path) -> Result<CountTable, IoError> {
    parse_counts(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<CountTable, IoError> {
        parse_counts(s.as_bytes())
    }

    fn line_of(e: IoError) -> u64 {
        match e {
            IoError::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn plain_rows() {
        let t = parse("3,1\n1,3\n").unwrap();
        assert_eq!(t.n1(), &[3, 1]);
        assert_eq!(t.n0(), &[1, 3]);
        assert_eq!(t.n(), 8);
    }

    #[test]
    fn header_comments_and_whitespace() {
        let t = parse("# made by hand\na1, a2, a3\n\n 5, 0, 2 \n# second class\n1,1,1\n").unwrap();
        assert_eq!(t.n1(), &[5, 0, 2]);
        assert_eq!(t.n0(), &[1, 1, 1]);
    }

    #[test]
    fn header_width_mismatch() {
        let e = parse("a1,a2,a3\n3,1\n1,3\n").unwrap_err();
        assert_eq!(line_of(e), 1);
    }

    #[test]
    fn row_width_mismatch() {
        let e = parse("3,1\n1,3,4\n").unwrap_err();
        assert_eq!(line_of(e), 2);
    }

    #[test]
    fn bad_field_reports_line() {
        let e = parse("# c\n3,1\n1,-3\n").unwrap_err();
        assert_eq!(line_of(e), 3);
        let e = parse("3,1\n1,x\n").unwrap_err();
        assert!(e.to_string().contains("column 2"));
    }

    #[test]
    fn wrong_row_count() {
        assert!(matches!(parse("3,1\n"), Err(IoError::Format(_))));
        assert_eq!(line_of(parse("3,1\n1,3\n2,2\n").unwrap_err()), 3);
        assert!(parse("").is_err());
    }

    #[test]
    fn single_column_rejected() {
        assert!(parse("3\n1\n").is_err());
    }
}
