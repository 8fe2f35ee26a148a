//! Text matrix files.
//!
//! ```text
//! SQGT-CODE v1
//! q=7 Q=7 m=9 n=24 l=1 u=2 e=0
//! eta=0,2,4,6,8,10,12,14
//! 2 0 0 0 ...
//! ```
//!
//! `l`, `u` and `e` are optional when reading.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{CodeMatrix, CodeParams};

const MAGIC: &str = "SQGT-CODE v1";

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ParseError { line, column, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, column: usize) -> Result<T> {
    tok.parse().map_err(|_| perr(line, column, format!("expected an integer, found `{tok}`")))
}

pub fn format_matrix(c: &CodeMatrix, p: &CodeParams) -> String {
    let mut out = String::new();
    let eta: Vec<String> = p.eta.iter().map(u64::to_string).collect();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "q={} Q={} m={} n={} l={} u={} e={}", p.q, p.levels(), c.rows(), c.cols(), p.l, p.u, p.e).unwrap();
    writeln!(out, "eta={}", eta.join(",")).unwrap();
    for row in c.to_rows() {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<(CodeMatrix, CodeParams)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let (ln, magic) = lines.next().ok_or_else(|| perr(1, 1, "empty file"))?;
    if magic.trim() != MAGIC {
        return Err(perr(ln, 1, format!("expected `{MAGIC}`")));
    }
    let (ln, header) = lines.next().ok_or_else(|| perr(2, 1, "missing size line"))?;
    let mut fields: [Option<u64>; 7] = [None; 7];
    let names = ["q", "Q", "m", "n", "l", "u", "e"];
    let mut col = 1;
    for tok in header.split_whitespace() {
        let column = header[col - 1..].find(tok).map_or(col, |o| o + col);
        let (key, val) = tok.split_once('=').ok_or_else(|| perr(ln, column, format!("expected key=value, found `{tok}`")))?;
        let slot = names.iter().position(|&n| n == key).ok_or_else(|| perr(ln, column, format!("unknown key `{key}`")))?;
        fields[slot] = Some(parse_num(val, ln, column + key.len() + 1)?);
        col = column + tok.len();
    }
    let need = |i: usize| fields[i].ok_or_else(|| perr(ln, 1, format!("missing `{}`", names[i])));
    let (q, levels, m, n) = (need(0)?, need(1)? as usize, need(2)? as usize, need(3)? as usize);
    let (ln, eta_line) = lines.next().ok_or_else(|| perr(3, 1, "missing eta line"))?;
    let list = eta_line.strip_prefix("eta=").ok_or_else(|| perr(ln, 1, "expected `eta=`"))?;
    let mut eta = Vec::new();
    let mut column = 5;
    for tok in list.split(',') {
        eta.push(parse_num::<u64>(tok.trim(), ln, column)?);
        column += tok.len() + 1;
    }
    if eta.len() != levels + 1 {
        return Err(perr(ln, 5, format!("expected {} thresholds, found {}", levels + 1, eta.len())));
    }
    let mut rows = Vec::with_capacity(m);
    for r in 0..m {
        let (ln, line) = lines.next().ok_or_else(|| perr(4 + r, 1, format!("missing row {} of {m}", r + 1)))?;
        let mut row = Vec::with_capacity(n);
        let mut offset = 0;
        for tok in line.split_whitespace() {
            let at = line[offset..].find(tok).map_or(offset, |o| o + offset);
            row.push(parse_num::<u32>(tok, ln, at + 1)?);
            offset = at + tok.len();
        }
        if row.len() != n {
            return Err(perr(ln, 1, format!("row {} has {} entries, expected {n}", r + 1, row.len())));
        }
        rows.push(row);
    }
    if let Some((ln, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(perr(ln, 1, format!("unexpected trailing content `{extra}`")));
    }
    let sentinel = *eta.last().unwrap_or(&0);
    let default_u = if q > 1 { (sentinel.saturating_sub(1) / (q - 1)).clamp(1, n as u64) } else { 1 };
    let l = fields[4].unwrap_or(1) as usize;
    let u = fields[5].unwrap_or(default_u) as usize;
    let e = fields[6].unwrap_or(0) as usize;
    let c = CodeMatrix::from_rows(q, &rows)?;
    let p = CodeParams::new(q, eta, l, u, e)?;
    Ok((c, p))
}

pub fn read_matrix(path: &Path) -> Result<(CodeMatrix, CodeParams)> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, c: &CodeMatrix, p: &CodeParams) -> Result<()> {
    std::fs::write(path, format_matrix(c, p))?;
    Ok(())
}
