//! Line-oriented algebra text format.
//!
//! ```text
//! name S_(4,435)
//! order 4
//! add:
//! 1 1 1 1
//! 1 2 3 4
//! 1 3 3 1
//! 1 4 1 4
//! mul:
//! 1 2 1 1
//! 2 2 2 2
//! 1 2 1 3
//! 1 2 3 4
//! ```
//!
//! Entries are 1-based. `#` starts a comment. [`print_algebra`] emits the
//! canonical layout, and parsing that output returns the same algebra.

use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::FiniteAiSemiring;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Add,
    Mul,
}

/// Parses one algebra. Tables are checked for shape, not for the axioms.
pub fn parse_algebra(text: &str) -> Result<FiniteAiSemiring> {
    let mut name = None;
    let mut order: Option<usize> = None;
    let mut section = Section::Header;
    let mut add: Vec<Vec<usize>> = Vec::new();
    let mut mul: Vec<Vec<usize>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("name") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let label = rest.trim();
                if label.is_empty() {
                    return Err(Error::parse(lineno, 1, "`name` needs a label"));
                }
                name = Some(label.to_string());
                continue;
            }
        }
        if let Some(rest) = line.strip_prefix("order") {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, 7, "`order` needs a positive integer"))?;
            if n == 0 {
                return Err(Error::parse(lineno, 7, "order must be positive"));
            }
            order = Some(n);
            continue;
        }
        match line {
            "add:" => {
                section = Section::Add;
                continue;
            }
            "mul:" => {
                section = Section::Mul;
                continue;
            }
            _ => {}
        }
        let target = match section {
            Section::Header => {
                return Err(Error::parse(lineno, 1, format!("unexpected line `{line}`")))
            }
            Section::Add => &mut add,
            Section::Mul => &mut mul,
        };
        let n = order.ok_or_else(|| Error::parse(lineno, 1, "table rows before `order`"))?;
        let mut row = Vec::with_capacity(n);
        for tok in line.split_whitespace() {
            let col = raw.find(tok).map_or(1, |c| c + 1);
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(lineno, col, format!("`{tok}` is not an integer")))?;
            if v == 0 || v > n {
                return Err(Error::parse(lineno, col, format!("entry {v} is outside 1..{n}")));
            }
            row.push(v - 1);
        }
        if row.len() != n {
            return Err(Error::parse(
                lineno,
                1,
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
        if target.len() == n {
            return Err(Error::parse(lineno, 1, format!("table already has {n} rows")));
        }
        target.push(row);
    }

    let n = order.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `order` line"))?;
    for (label, rows) in [("add", &add), ("mul", &mul)] {
        if rows.len() != n {
            return Err(Error::parse(
                last_line.max(1),
                1,
                format!("{label} table has {} rows, expected {n}", rows.len()),
            ));
        }
    }
    let mut a = FiniteAiSemiring::from_rows(&add, &mul)?;
    a.set_name(name);
    Ok(a)
}

pub fn read_algebra(path: &Path) -> Result<FiniteAiSemiring> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_algebra(&text)
}

/// Canonical text form.
pub fn print_algebra(a: &FiniteAiSemiring) -> String {
    let mut out = String::new();
    if let Some(name) = a.name() {
        let _ = writeln!(out, "name {name}");
    }
    let _ = writeln!(out, "order {}", a.order());
    for (label, table) in [("add:", a.add_table()), ("mul:", a.mul_table())] {
        out.push_str(label);
        out.push('\n');
        for row in table.chunks(a.order()) {
            let cells: Vec<String> = row.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}
