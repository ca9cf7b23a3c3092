//! Text formats for digraphs, graphs, tournaments and matrices.
//!
//! - Digraph: header `digraph <n>`, one `u v` line per edge.
//! - Graph: header `graph <n>`, one `u v` line per edge.
//! - Tournament: compact literal `t:<n>:<hex>`, where bit `k` of the hex
//!   value covers the `k`-th pair `(i, j)`, `i < j`, in lexicographic
//!   order; a one means `i -> j`.
//! - Matrix: header `m <nrows> <ncols>`, one 0/1 row per line.

use crate::digraph::{Digraph, Tournament, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::graph::Graph;
use crate::pairs::pair_count;

fn parse_header(line: &str, keyword: &str) -> Result<usize> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header starting with {keyword:?}"),
        });
    }
    let n: usize = parts
        .next()
        .ok_or(Error::Parse {
            line: 1,
            msg: "missing vertex count".into(),
        })?
        .parse()
        .map_err(|_| Error::Parse {
            line: 1,
            msg: "vertex count is not a number".into(),
        })?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line: 1,
            msg: "trailing tokens after header".into(),
        });
    }
    if n > MAX_VERTICES {
        return Err(Error::Parse {
            line: 1,
            msg: format!("at most {MAX_VERTICES} vertices supported"),
        });
    }
    Ok(n)
}

fn parse_edge_lines(text: &str, n: usize) -> Result<Vec<(usize, usize, usize)>> {
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut endpoint = |name: &str| -> Result<usize> {
            let v: usize = parts
                .next()
                .ok_or(Error::Parse {
                    line: line_no,
                    msg: format!("missing {name} endpoint"),
                })?
                .parse()
                .map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("{name} endpoint is not a number"),
                })?;
            if v >= n {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("vertex {v} out of range (n = {n})"),
                });
            }
            Ok(v)
        };
        let u = endpoint("first")?;
        let v = endpoint("second")?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing tokens after edge".into(),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("loop at vertex {u}"),
            });
        }
        edges.push((u, v, line_no));
    }
    Ok(edges)
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let first = text.lines().next().unwrap_or("");
    let n = parse_header(first, "digraph")?;
    let mut d = Digraph::empty(n);
    for (u, v, line_no) in parse_edge_lines(text, n)? {
        if d.has_edge(u, v) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate edge {u} {v}"),
            });
        }
        if d.has_edge(v, u) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("orientation conflict: {v} {u} already present"),
            });
        }
        d.add_edge_unchecked(u, v);
    }
    Ok(d)
}

pub fn print_digraph(d: &Digraph) -> String {
    let mut out = format!("digraph {}\n", d.n());
    for (u, v) in d.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let first = text.lines().next().unwrap_or("");
    let n = parse_header(first, "graph")?;
    let mut g = Graph::empty(n);
    for (u, v, line_no) in parse_edge_lines(text, n)? {
        if g.has_edge(u, v) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate edge {u} {v}"),
            });
        }
        g.add_edge_unchecked(u, v);
    }
    Ok(g)
}

pub fn print_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses the compact tournament literal `t:<n>:<hex>`.
pub fn parse_tournament_code(s: &str) -> Result<Tournament> {
    let err = |msg: &str| Error::Parse {
        line: 1,
        msg: msg.into(),
    };
    let rest = s.trim().strip_prefix("t:").ok_or_else(|| err("expected t:<n>:<hex>"))?;
    let (n_str, hex) = rest.split_once(':').ok_or_else(|| err("expected t:<n>:<hex>"))?;
    let n: usize = n_str.parse().map_err(|_| err("vertex count is not a number"))?;
    if pair_count(n) > 64 {
        return Err(err("compact codes cover at most 11 vertices"));
    }
    let code = u64::from_str_radix(hex, 16).map_err(|_| err("invalid hex code"))?;
    if pair_count(n) < 64 && code >> pair_count(n) != 0 {
        return Err(err("code has bits beyond the pair count"));
    }
    Tournament::from_code(n, code)
}

pub fn print_tournament_code(t: &Tournament) -> String {
    format!("t:{}:{:x}", t.n(), t.code())
}

pub fn parse_matrix(text: &str) -> Result<Gf2Matrix> {
    let first = text.lines().next().unwrap_or("");
    let mut parts = first.split_whitespace();
    if parts.next() != Some("m") {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header m <nrows> <ncols>".into(),
        });
    }
    let mut dim = |name: &str| -> Result<usize> {
        let v: usize = parts
            .next()
            .ok_or(Error::Parse {
                line: 1,
                msg: format!("missing {name}"),
            })?
            .parse()
            .map_err(|_| Error::Parse {
                line: 1,
                msg: format!("{name} is not a number"),
            })?;
        if v > 64 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("{name} exceeds 64"),
            });
        }
        Ok(v)
    };
    let nrows = dim("nrows")?;
    let ncols = dim("ncols")?;
    let mut rows = Vec::with_capacity(nrows);
    for (idx, line) in text.lines().enumerate().skip(1) {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if rows.len() == nrows {
            return Err(Error::Parse {
                line: line_no,
                msg: "more rows than declared".into(),
            });
        }
        if line.len() != ncols {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("row has {} entries, expected {ncols}", line.len()),
            });
        }
        let mut row = 0u64;
        for (j, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => row |= 1 << j,
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("invalid character {ch:?}"),
                    })
                }
            }
        }
        rows.push(row);
    }
    if rows.len() != nrows {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {nrows} rows, found {}", rows.len()),
        });
    }
    Ok(Gf2Matrix::from_rows(ncols, rows))
}

pub fn print_matrix(m: &Gf2Matrix) -> String {
    let mut out = format!("m {} {}\n", m.nrows(), m.ncols());
    for row in m.row_strings() {
        out.push_str(&row);
        out.push('\n');
    }
    out
}
