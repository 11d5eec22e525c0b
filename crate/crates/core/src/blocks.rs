//! The text input format: `[frame]`, `[window]` and `[matrix]` blocks of
//! `key = value` lines. `#` starts a comment.
//!
//! ```text
//! [frame]
//! p = 3
//! e = 1
//! a = 2
//! N = 6
//! E = u + p
//!
//! [window]
//! d = 1
//! c = 0
//! row = 1 + u
//! ```
//!
//! Frame keys `r`, `D` and `L` default to `0`, `0` and `2`; a window's `a`
//! defaults to the frame's. Matrix rows are comma-separated polynomials in
//! `t1..tr`, `u` and `p`.

use std::sync::Arc;

use thiserror::Error;

use crate::frame::{Frame, FrameSpec};
use crate::matrix::Matrix;
use crate::poly::IntPoly;
use crate::series::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct BlockError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> BlockError {
    BlockError { line, column, message: message.into() }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindowBlock {
    pub level: Option<usize>,
    pub d: usize,
    pub c: usize,
    pub rows: Vec<Vec<IntPoly>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub frame: Option<FrameSpec>,
    pub windows: Vec<WindowBlock>,
    pub matrix: Option<Vec<Vec<IntPoly>>>,
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
    value_col: usize,
}

#[derive(Default)]
struct RawBlock<'a> {
    kind: &'a str,
    header_line: usize,
    lines: Vec<Line<'a>>,
}

fn split_blocks(src: &str) -> Result<Vec<RawBlock<'_>>, BlockError> {
    let mut blocks: Vec<RawBlock> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let no = i + 1;
        let text = raw.split('#').next().unwrap_or("");
        let trimmed = text.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = text.len() - text.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let kind = rest
                .strip_suffix(']')
                .ok_or_else(|| err(no, indent + trimmed.len(), "expected ']'"))?
                .trim();
            if !matches!(kind, "frame" | "window" | "matrix") {
                return Err(err(no, indent + 2, format!("unknown block '{}'", kind)));
            }
            blocks.push(RawBlock { kind, header_line: no, lines: Vec::new() });
            continue;
        }
        let Some(block) = blocks.last_mut() else {
            return Err(err(no, indent + 1, "expected a block header such as [frame]"));
        };
        let eq = text.find('=').ok_or_else(|| err(no, indent + 1, "expected 'key = value'"))?;
        let key = text[..eq].trim();
        let value_raw = &text[eq + 1..];
        let value = value_raw.trim();
        let value_col = eq + 2 + (value_raw.len() - value_raw.trim_start().len());
        if key.is_empty() {
            return Err(err(no, indent + 1, "missing key"));
        }
        block.lines.push(Line { no, key, value, value_col });
    }
    Ok(blocks)
}

fn parse_num<T: std::str::FromStr>(l: &Line) -> Result<T, BlockError> {
    l.value.parse().map_err(|_| err(l.no, l.value_col, format!("'{}' is not a valid value for {}", l.value, l.key)))
}

fn parse_row(l: &Line, r: usize, p: u64) -> Result<Vec<IntPoly>, BlockError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in l.value.split(',') {
        let lead = part.len() - part.trim_start().len();
        let poly = IntPoly::parse(part.trim(), r, Some(p))
            .map_err(|e| err(l.no, l.value_col + offset + lead + e.column - 1, e.message))?;
        out.push(poly);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn parse_frame(b: &RawBlock) -> Result<FrameSpec, BlockError> {
    let get = |k: &str| b.lines.iter().find(|l| l.key == k);
    for l in &b.lines {
        if !matches!(l.key, "p" | "r" | "e" | "a" | "N" | "D" | "L" | "E") {
            return Err(err(l.no, 1, format!("unknown frame key '{}'", l.key)));
        }
    }
    let need = |k: &str| get(k).ok_or_else(|| err(b.header_line, 1, format!("frame block is missing '{}'", k)));
    let p: u64 = parse_num(need("p")?)?;
    let r: usize = get("r").map(parse_num).transpose()?.unwrap_or(0);
    let e: usize = parse_num(need("e")?)?;
    let a: usize = parse_num(need("a")?)?;
    let prec: u32 = parse_num(need("N")?)?;
    let tdeg: usize = get("D").map(parse_num).transpose()?.unwrap_or(0);
    let witt_len: usize = get("L").map(parse_num).transpose()?.unwrap_or(2);
    let el = need("E")?;
    let e_poly = IntPoly::parse(el.value, r, Some(p)).map_err(|x| err(el.no, el.value_col + x.column - 1, x.message))?;
    Ok(FrameSpec { p, r, e, a, prec, tdeg, witt_len, max_level: None, e_poly })
}

fn parse_matrix_rows(b: &RawBlock, r: usize, p: u64) -> Result<Vec<Vec<IntPoly>>, BlockError> {
    let mut rows = Vec::new();
    for l in b.lines.iter().filter(|l| l.key == "row") {
        let row = parse_row(l, r, p)?;
        if let Some(first) = rows.first().map(|x: &Vec<IntPoly>| x.len()) {
            if row.len() != first {
                return Err(err(l.no, l.value_col, format!("row has {} entries, expected {}", row.len(), first)));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(err(b.header_line, 1, format!("{} block has no rows", b.kind)));
    }
    Ok(rows)
}

pub fn parse_job(src: &str) -> Result<JobSpec, BlockError> {
    let blocks = split_blocks(src)?;
    let mut frame = None;
    let mut windows = Vec::new();
    let mut matrix = None;
    // frame first, so that rows can substitute p
    for b in blocks.iter().filter(|b| b.kind == "frame") {
        if frame.is_some() {
            return Err(err(b.header_line, 1, "more than one [frame] block"));
        }
        frame = Some(parse_frame(b)?);
    }
    for b in blocks.iter().filter(|b| b.kind != "frame") {
        let f = frame.as_ref().ok_or_else(|| err(b.header_line, 1, "a [frame] block is required"))?;
        match b.kind {
            "window" => {
                let mut level = None;
                let mut d = None;
                let mut c = None;
                for l in &b.lines {
                    match l.key {
                        "a" => level = Some(parse_num(l)?),
                        "d" => d = Some(parse_num(l)?),
                        "c" => c = Some(parse_num(l)?),
                        "row" => {}
                        k => return Err(err(l.no, 1, format!("unknown window key '{}'", k))),
                    }
                }
                let d = d.ok_or_else(|| err(b.header_line, 1, "window block is missing 'd'"))?;
                let c = c.ok_or_else(|| err(b.header_line, 1, "window block is missing 'c'"))?;
                let rows = parse_matrix_rows(b, f.r, f.p)?;
                if rows.len() != d + c || rows[0].len() != d + c {
                    return Err(err(b.header_line, 1, format!("window matrix must be {}x{}", d + c, d + c)));
                }
                windows.push(WindowBlock { level, d, c, rows });
            }
            _ => {
                if matrix.is_some() {
                    return Err(err(b.header_line, 1, "more than one [matrix] block"));
                }
                if let Some(l) = b.lines.iter().find(|l| l.key != "row") {
                    return Err(err(l.no, 1, format!("unknown matrix key '{}'", l.key)));
                }
                matrix = Some(parse_matrix_rows(b, f.r, f.p)?);
            }
        }
    }
    Ok(JobSpec { frame, windows, matrix })
}

/// Matrix of polynomials as elements of `ring`.
pub fn to_matrix(ring: &Ring, rows: &[Vec<IntPoly>]) -> Matrix {
    Matrix::from_rows(ring, rows.iter().map(|r| r.iter().map(|x| ring.from_poly(x)).collect()).collect())
}

impl WindowBlock {
    pub fn level_or(&self, frame: &Arc<Frame>) -> usize {
        self.level.unwrap_or(frame.a())
    }
}
