//! Text formats: `.gfm` matrices and edge-list graphs.
//!
//! ```text
//! gfm q=4 rows=2 cols=3 modulus=7
//! labels a b c
//! 1 0 2
//! 0 1 3
//! ```
//!
//! ```text
//! graph n=3 m=3
//! 0 1
//! 1 2
//! 0 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Graph vertices are
//! numbered from 0.

use std::fmt::Write as _;

use thiserror::Error;

use crate::generators::Graph;
use crate::gf::FieldSpec;
use crate::gfmatrix::GFMatrix;
use crate::matroid::RepMatroid;

/// A parse failure at a 1-based line and column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in l.char_indices().chain(std::iter::once((l.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &l[s..pos],
                            column: l[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            Line { number: i + 1, tokens }
        })
        .collect()
}

/// Reads `key=value` pairs after a header keyword.
fn header<'a>(
    line: &'a Line<'a>,
    keyword: &str,
    required: &[&str],
    optional: &[&str],
) -> Result<Vec<(&'a str, u64, usize)>, ParseError> {
    let first = line
        .tokens
        .first()
        .filter(|t| t.text == keyword)
        .ok_or_else(|| err(line.number, 1, format!("expected header starting with `{keyword}`")))?;
    let mut out: Vec<(&str, u64, usize)> = Vec::new();
    for t in &line.tokens[1..] {
        let (k, v) = t
            .text
            .split_once('=')
            .ok_or_else(|| err(line.number, t.column, format!("expected key=value, found `{}`", t.text)))?;
        if !required.contains(&k) && !optional.contains(&k) {
            return Err(err(line.number, t.column, format!("unknown header key `{k}`")));
        }
        if out.iter().any(|(seen, _, _)| *seen == k) {
            return Err(err(line.number, t.column, format!("duplicate header key `{k}`")));
        }
        let v: u64 = v
            .parse()
            .map_err(|_| err(line.number, t.column + k.len() + 1, format!("`{v}` is not a non-negative integer")))?;
        out.push((k, v, t.column));
    }
    for k in required {
        if !out.iter().any(|(seen, _, _)| seen == k) {
            return Err(err(line.number, first.column, format!("header is missing `{k}=`")));
        }
    }
    Ok(out)
}

fn value(pairs: &[(&str, u64, usize)], key: &str) -> Option<(u64, usize)> {
    pairs.iter().find(|(k, _, _)| *k == key).map(|&(_, v, c)| (v, c))
}

/// Parses a `.gfm` matrix. Without `modulus=` the bundled modulus for `q`
/// is used; without a `labels` line the labels are `c0`, `c1`, ...
pub fn parse_gfm(text: &str) -> Result<RepMatroid, ParseError> {
    let lines = lines(text);
    let head = lines.first().ok_or_else(|| err(1, 1, "empty input"))?;
    let pairs = header(head, "gfm", &["q", "rows", "cols"], &["modulus"])?;
    let (q, q_col) = value(&pairs, "q").expect("required");
    let (rows, _) = value(&pairs, "rows").expect("required");
    let (cols, _) = value(&pairs, "cols").expect("required");
    let modulus = value(&pairs, "modulus");
    let q32 = u32::try_from(q).map_err(|_| err(head.number, q_col, format!("q={q} is too large")))?;
    let code = match modulus {
        Some((m, c)) => Some(u32::try_from(m).map_err(|_| err(head.number, c, "modulus code is too large"))?),
        None => None,
    };
    let field = FieldSpec::of_order_with_code(q32, code).map_err(|e| {
        let column = modulus.map_or(q_col, |(_, c)| c);
        err(head.number, column, e.to_string())
    })?;
    let (rows, cols) = (rows as usize, cols as usize);

    let mut body = &lines[1..];
    let labels: Vec<String> = match body.first() {
        Some(l) if l.tokens[0].text == "labels" => {
            if l.tokens.len() - 1 != cols {
                return Err(err(
                    l.number,
                    1,
                    format!("expected {cols} labels, found {}", l.tokens.len() - 1),
                ));
            }
            let names: Vec<String> = l.tokens[1..].iter().map(|t| t.text.to_string()).collect();
            for (i, t) in l.tokens[1..].iter().enumerate() {
                if names[..i].contains(&names[i]) {
                    return Err(err(l.number, t.column, format!("duplicate label `{}`", t.text)));
                }
            }
            body = &body[1..];
            names
        }
        _ => (0..cols).map(|i| format!("c{i}")).collect(),
    };
    if body.len() != rows {
        let (line, column) = body.get(rows).map_or((lines.last().map_or(1, |l| l.number), 1), |l| (l.number, 1));
        return Err(err(line, column, format!("expected {rows} matrix rows, found {}", body.len())));
    }
    let mut codes = Vec::with_capacity(rows * cols);
    for l in body {
        if l.tokens.len() != cols {
            let column = l.tokens.get(cols).map_or(1, |t| t.column);
            return Err(err(
                l.number,
                column,
                format!("expected {cols} entries, found {}", l.tokens.len()),
            ));
        }
        for t in &l.tokens {
            let v: u32 = t
                .text
                .parse()
                .map_err(|_| err(l.number, t.column, format!("`{}` is not an integer", t.text)))?;
            if v >= q32 {
                return Err(err(l.number, t.column, format!("entry {v} is not in [0, {q32})")));
            }
            codes.push(v);
        }
    }
    let matrix = GFMatrix::from_codes(&field, rows, cols, &codes).map_err(|e| err(1, 1, e.to_string()))?;
    RepMatroid::new(matrix, labels).map_err(|e| err(1, 1, e.to_string()))
}

/// Writes a matroid in `.gfm` form. The modulus is written only when it is
/// not the bundled default.
pub fn write_gfm(m: &RepMatroid) -> String {
    let a = m.matrix();
    let f = a.field();
    let mut out = format!("gfm q={} rows={} cols={}", f.order(), a.rows(), a.cols());
    if !f.has_default_modulus() {
        let _ = write!(out, " modulus={}", f.modulus_code());
    }
    out.push('\n');
    if a.cols() > 0 {
        out.push_str("labels");
        for l in m.labels() {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
    }
    for row in a.to_codes() {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses an edge-list graph.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let lines = lines(text);
    let head = lines.first().ok_or_else(|| err(1, 1, "empty input"))?;
    let pairs = header(head, "graph", &["n", "m"], &[])?;
    let (n, _) = value(&pairs, "n").expect("required");
    let (m, _) = value(&pairs, "m").expect("required");
    let body = &lines[1..];
    if body.len() as u64 != m {
        let line = body.get(m as usize).map_or(head.number, |l| l.number);
        return Err(err(line, 1, format!("expected {m} edges, found {}", body.len())));
    }
    let mut edges = Vec::with_capacity(body.len());
    for l in body {
        if l.tokens.len() != 2 {
            return Err(err(l.number, 1, "expected an edge `u v`"));
        }
        let mut ends = [0usize; 2];
        for (slot, t) in ends.iter_mut().zip(&l.tokens) {
            let v: u64 = t
                .text
                .parse()
                .map_err(|_| err(l.number, t.column, format!("`{}` is not a vertex number", t.text)))?;
            if v >= n {
                return Err(err(l.number, t.column, format!("vertex {v} is not in [0, {n})")));
            }
            *slot = v as usize;
        }
        edges.push((ends[0], ends[1]));
    }
    Graph::new(n as usize, edges).map_err(|e| err(head.number, 1, e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph n={} m={}\n", g.vertex_count(), g.edges().len());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
