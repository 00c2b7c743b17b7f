//! The "WSGT 1" ground-truth sidecar: a versioned text file listing word
//! bounding boxes, one `x y w h` quadruple per line, LF line endings.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;
use wseg_core::{BoxList, Rect};

#[derive(Debug, Error)]
pub enum TruthError {
    #[error("bad magic line; expected \"WSGT 1\"")]
    BadMagic,
    #[error("bad box on line {0}")]
    BadLine(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

const MAGIC: &str = "WSGT 1";

/// Parse sidecar text. Boxes are returned in file order; empty lines are
/// skipped; boxes must have w >= 1 and h >= 1.
pub fn parse_truth(text: &str) -> Result<BoxList, TruthError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end() == MAGIC => {}
        _ => return Err(TruthError::BadMagic),
    }
    let mut boxes = BoxList::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let line_no = i + 1; // 1-based
        let mut fields = line.split_ascii_whitespace();
        let mut next = || -> Result<u32, TruthError> {
            fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or(TruthError::BadLine(line_no))
        };
        let (x, y, w, h) = (next()?, next()?, next()?, next()?);
        if fields.next().is_some() || w == 0 || h == 0 {
            return Err(TruthError::BadLine(line_no));
        }
        boxes.push(Rect::new(x, y, w, h));
    }
    Ok(boxes)
}

pub fn format_truth(boxes: &[Rect]) -> String {
    let mut out = String::from("WSGT 1\n");
    for b in boxes {
        out.push_str(&format!("{} {} {} {}\n", b.x, b.y, b.w, b.h));
    }
    out
}

pub fn read_truth(path: &Path) -> Result<BoxList, TruthError> {
    parse_truth(&fs::read_to_string(path)?)
}

pub fn write_truth(boxes: &[Rect], path: &Path) -> Result<(), TruthError> {
    fs::write(path, format_truth(boxes))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_box() {
        assert_eq!(
            parse_truth("WSGT 1\n0 0 10 5\n").unwrap(),
            vec![Rect::new(0, 0, 10, 5)]
        );
    }

    #[test]
    fn parse_empty_list() {
        assert_eq!(parse_truth("WSGT 1\n").unwrap(), vec![]);
    }

    #[test]
    fn rejects_wrong_version() {
        assert!(matches!(parse_truth("WSGT 2\n0 0 1 1\n"), Err(TruthError::BadMagic)));
        assert!(matches!(parse_truth(""), Err(TruthError::BadMagic)));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_truth("WSGT 1\n1 2 3\n"), Err(TruthError::BadLine(2))));
        assert!(matches!(parse_truth("WSGT 1\n1 2 3 4 5\n"), Err(TruthError::BadLine(2))));
        assert!(matches!(parse_truth("WSGT 1\n1 2 0 4\n"), Err(TruthError::BadLine(2))));
        assert!(matches!(parse_truth("WSGT 1\n\n1 2 3 x\n"), Err(TruthError::BadLine(3))));
    }

    #[test]
    fn format_parse_roundtrip() {
        let boxes = vec![Rect::new(0, 0, 10, 5), Rect::new(3, 99, 1, 1)];
        assert_eq!(parse_truth(&format_truth(&boxes)).unwrap(), boxes);
    }
}
