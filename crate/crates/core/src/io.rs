//! graph6, edge-list, and coloring text formats.

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn looks_like_graph6(text: &str) -> bool {
    let line = text.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    !line.is_empty() && !line.contains(char::is_whitespace) && line.bytes().all(|b| (63..=126).contains(&b))
}

/// Parses a graph in either format, choosing by content.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if looks_like_graph6(text) {
        parse_graph6(text.trim())
    } else {
        parse_edge_list(text)
    }
}

pub fn parse_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(perr(1, "graph6 byte out of range"));
    }
    let (n, rest) = match bytes {
        [] => return Err(perr(1, "empty graph6 string")),
        [126, 126, r @ ..] => {
            if r.len() < 6 {
                return Err(perr(1, "truncated graph6 size"));
            }
            let n = r[..6].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &r[6..])
        }
        [126, r @ ..] => {
            if r.len() < 3 {
                return Err(perr(1, "truncated graph6 size"));
            }
            let n = r[..3].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &r[3..])
        }
        [b, r @ ..] => ((*b - 63) as usize, r),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(perr(1, format!("graph6 body has {} bytes, expected {}", rest.len(), nbits.div_ceil(6))));
    }
    let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258048 {
        out.push(126);
        for sh in [12, 6, 0] {
            out.push(((n >> sh) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for sh in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> sh) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ascii")
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn two_ints(line: usize, l: &str) -> Result<(usize, usize)> {
    let mut it = l.split_whitespace();
    let a = it.next().ok_or_else(|| perr(line, "expected two integers"))?;
    let b = it.next().ok_or_else(|| perr(line, "expected two integers"))?;
    if it.next().is_some() {
        return Err(perr(line, "trailing tokens"));
    }
    let a = a.parse().map_err(|_| perr(line, format!("bad integer {a:?}")))?;
    let b = b.parse().map_err(|_| perr(line, format!("bad integer {b:?}")))?;
    Ok((a, b))
}

/// `n m` header followed by `m` lines `u v` (0-based).
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let (n, m) = two_ints(hl, header)?;
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines {
        let (u, v) = two_ints(ln, l)?;
        if u >= n || v >= n {
            return Err(perr(ln, format!("vertex out of range in edge ({u},{v})")));
        }
        if u == v {
            return Err(perr(ln, format!("self-loop at {u}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(perr(hl, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// `v c` lines; unlisted vertices get color 0.
pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring> {
    let mut labels = vec![0usize; n];
    let mut seen = vec![false; n];
    for (ln, l) in data_lines(text) {
        let (v, c) = two_ints(ln, l)?;
        if v >= n {
            return Err(perr(ln, format!("vertex {v} out of range")));
        }
        if seen[v] {
            return Err(perr(ln, format!("vertex {v} colored twice")));
        }
        seen[v] = true;
        labels[v] = c;
    }
    Ok(Coloring::from_labels(&labels))
}

pub fn write_coloring(c: &Coloring) -> String {
    (0..c.n()).map(|v| format!("{v} {}\n", c.color(v))).collect()
}
