//! Edge-list ingestion and output.
//!
//! Two input formats cover the usual public graph repositories:
//!
//! * `snap-txt`: whitespace-separated integer pairs, one edge per line,
//!   `#` or `%` comment lines. The vertex set is inferred from the ids seen.
//! * `mtx` (MatrixMarket coordinate): a `%%MatrixMarket` header, `%`
//!   comments, a `rows cols nnz` size line, then 1-based pairs. The size
//!   line fixes the vertex count, so isolated vertices are representable.
//!
//! Both ingestion paths collapse duplicate edges, drop self-loops, and
//! remap external ids to contiguous internal ids in ascending order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFormat {
    SnapTxt,
    Mtx,
}

impl FromStr for EdgeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "snap" | "snap-txt" | "txt" => Ok(EdgeFormat::SnapTxt),
            "mtx" | "matrixmarket" => Ok(EdgeFormat::Mtx),
            other => Err(Error::Domain(format!(
                "unknown edge-list format {other:?} (expected snap or mtx)"
            ))),
        }
    }
}

impl fmt::Display for EdgeFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeFormat::SnapTxt => write!(f, "snap"),
            EdgeFormat::Mtx => write!(f, "mtx"),
        }
    }
}

/// Guess the format from a file name; `.mtx` means MatrixMarket,
/// everything else is treated as snap-txt.
pub fn format_for_path(path: &str) -> EdgeFormat {
    if path.to_ascii_lowercase().ends_with(".mtx") {
        EdgeFormat::Mtx
    } else {
        EdgeFormat::SnapTxt
    }
}

/// Parses UTF-8 edge-list text into a graph. Fails on malformed lines
/// (reporting the 1-based line number) and on inputs with no edges.
pub fn parse_edge_list(text: &str, format: EdgeFormat) -> Result<Graph> {
    let g = match format {
        EdgeFormat::SnapTxt => parse_snap(text)?,
        EdgeFormat::Mtx => parse_mtx(text)?,
    };
    if g.m() == 0 {
        return Err(Error::EmptyEdgeList);
    }
    Ok(g)
}

fn parse_int(tok: &str, line: usize) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, got {tok:?}"),
    })
}

fn parse_snap(text: &str) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let a = parse_int(toks.next().unwrap(), line)?;
        let b = match toks.next() {
            Some(t) => parse_int(t, line)?,
            None => {
                return Err(Error::Parse {
                    line,
                    msg: "expected two vertex ids".into(),
                })
            }
        };
        if toks.next().is_some() {
            return Err(Error::Parse {
                line,
                msg: "expected exactly two fields per edge line".into(),
            });
        }
        pairs.push((a, b));
    }
    Ok(Graph::from_edge_pairs(&pairs))
}

fn parse_mtx(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (header_line, header) = loop {
        match lines.next() {
            Some((i, l)) if l.trim().is_empty() => {
                // a blank line before the header is tolerated
                let _ = i;
            }
            Some((i, l)) => break (i + 1, l.trim().to_string()),
            None => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "empty file".into(),
                })
            }
        }
    };
    let lower = header.to_ascii_lowercase();
    if !lower.starts_with("%%matrixmarket") || !lower.contains("coordinate") {
        return Err(Error::Parse {
            line: header_line,
            msg: "expected a MatrixMarket coordinate header".into(),
        });
    }

    let mut size: Option<(u64, u64, u64)> = None;
    let mut pairs = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if size.is_none() {
            if toks.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: "size line must be `rows cols nnz`".into(),
                });
            }
            let rows = parse_int(toks[0], line)?;
            let cols = parse_int(toks[1], line)?;
            let nnz = parse_int(toks[2], line)?;
            if rows != cols {
                return Err(Error::Parse {
                    line,
                    msg: format!("adjacency matrix must be square, got {rows}x{cols}"),
                });
            }
            // internal vertex ids are u32
            if rows > u32::MAX as u64 {
                return Err(Error::Parse {
                    line,
                    msg: format!("declared order {rows} exceeds the supported maximum"),
                });
            }
            size = Some((rows, cols, nnz));
            continue;
        }
        if toks.len() < 2 {
            return Err(Error::Parse {
                line,
                msg: "entry line needs two vertex ids".into(),
            });
        }
        // value column (weight) is ignored if present
        let a = parse_int(toks[0], line)?;
        let b = parse_int(toks[1], line)?;
        let n = size.unwrap().0;
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::Parse {
                line,
                msg: format!("vertex id out of 1..={n}"),
            });
        }
        pairs.push((a - 1, b - 1));
    }
    let (n, _, _) = size.ok_or(Error::Parse {
        line: header_line,
        msg: "missing size line".into(),
    })?;
    Graph::from_edge_pairs_with_n(n as usize, &pairs)
}

/// Writes a graph as snap-txt with a `#` metadata header. Vertices are
/// written under their external labels, so the output lines up with the
/// original input ids.
pub fn write_snap(g: &Graph, source: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("# n={} m={}\n", g.n(), g.m()));
    out.push_str(&format!("# source={source}\n"));
    for &(u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", g.label(u), g.label(v)));
    }
    out
}
