//! Group file format.
//!
//! ```text
//! cayley 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! or
//!
//! ```text
//! perm 4
//! (1 2 3 4)
//! (1 3)
//! ```
//!
//! Blank lines and `#` comments are skipped; anything else after the
//! expected content is an error.

use super::perm::parse_cycles;
use super::{FiniteGroup, GroupError, DEFAULT_ORDER_CAP};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> GroupError {
    GroupError::Parse { line, msg: msg.into() }
}

pub fn parse_group_file(text: &str) -> Result<FiniteGroup, GroupError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty group file"))?;
    let mut head = header.split_whitespace();
    let kind = head.next().unwrap_or("");
    let size: usize = head
        .next()
        .ok_or_else(|| parse_err(hline, "missing size"))?
        .parse()
        .map_err(|_| parse_err(hline, "size is not a number"))?;
    if head.next().is_some() {
        return Err(parse_err(hline, "trailing tokens in header"));
    }
    match kind {
        "cayley" => {
            if size == 0 {
                return Err(parse_err(hline, "order must be positive"));
            }
            let mut rows = Vec::with_capacity(size);
            for _ in 0..size {
                let (ln, row) = lines.next().ok_or_else(|| parse_err(hline, "too few table rows"))?;
                let row: Vec<usize> = row
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| parse_err(ln, format!("bad entry {t:?}"))))
                    .collect::<Result<_, _>>()?;
                if row.len() != size {
                    return Err(parse_err(ln, format!("expected {size} entries, got {}", row.len())));
                }
                rows.push(row);
            }
            if let Some((ln, _)) = lines.next() {
                return Err(parse_err(ln, "trailing content after table"));
            }
            FiniteGroup::from_cayley_table(&rows)
        }
        "perm" => {
            if size == 0 {
                return Err(parse_err(hline, "degree must be positive"));
            }
            let gens = lines
                .map(|(ln, l)| parse_cycles(size, l).map_err(|e| parse_err(ln, e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            FiniteGroup::from_permutation_list(size, &gens, DEFAULT_ORDER_CAP)
        }
        other => Err(parse_err(hline, format!("unknown group kind {other:?}"))),
    }
}
